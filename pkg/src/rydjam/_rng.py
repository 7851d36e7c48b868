"""Reproducible per-trial random streams.

Every simulated trial owns independent streams derived from
``(master_seed, trial_index)`` through numpy's splittable ``SeedSequence``
construction, so results never depend on execution order or worker count.
Each trial gets two roles: a *realization* stream (population sizes,
positions, graph edges) and a *dynamics* stream (activation order, blocking
draws, event clocks).  Keeping the roles separate lets either side batch its
draws without perturbing the other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

REALIZATION = 0
DYNAMICS = 1


@dataclass(frozen=True)
class RngSpec:
    """Addresses the random stream of one trial.

    The stream is a pure function of ``(master_seed, trial_index)``; repeated
    construction yields bit-identical draws.
    """

    master_seed: int
    trial_index: int = 0

    def __post_init__(self):
        if self.trial_index < 0:
            raise ValueError("trial_index must be >= 0")

    def for_trial(self, trial_index: int) -> "RngSpec":
        return RngSpec(self.master_seed, trial_index)

    def bit_generator(self, role: int = DYNAMICS) -> np.random.PCG64:
        seq = np.random.SeedSequence(
            self.master_seed, spawn_key=(self.trial_index, role)
        )
        return np.random.PCG64(seq)

    def generator(self, role: int = DYNAMICS) -> np.random.Generator:
        return np.random.Generator(self.bit_generator(role))

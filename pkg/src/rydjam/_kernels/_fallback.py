"""Pure-Python jamming kernels.

Reference implementations of the hot inner loops.  The compiled backend in
``_core.pyx`` follows the same draw protocol through numpy's C distribution
functions, so for a given bit generator both backends produce bit-identical
results; the equivalence is asserted in the test suite.

Draw protocol per trial (dynamics stream):

* recursion step: one ``binomial(u - 1, p)`` per excitation;
* timed step: one ``standard_exponential()`` (holding time), then the
  binomial;
* sequential activation: one ``integers(0, u)`` per excitation (timed:
  preceded by the exponential);

and on the realization stream, edge sampling consumes ``geometric(p)`` skip
lengths over the flattened upper triangle of the vertex-pair matrix.
"""

from __future__ import annotations

import math

import numpy as np


def _check_p(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p = {p!r} outside [0, 1]")


def recursion_jam(bit_generator, n, p, record_trajectory=False):
    """Run the unaffected-count recursion to jamming.

    Returns ``(x_inf, trajectory)`` with ``trajectory`` the int64 array
    ``U_0 .. U_tau`` when requested, else None.
    """
    _check_p(p)
    gen = np.random.Generator(bit_generator)
    traj = np.empty(n + 1, dtype=np.int64) if record_trajectory else None
    u = int(n)
    x = 0
    if record_trajectory:
        traj[0] = u
    while u > 0:
        u = u - 1 - int(gen.binomial(u - 1, p))
        x += 1
        if record_trajectory:
            traj[x] = u
    return x, (traj[: x + 1].copy() if record_trajectory else None)


def recursion_jam_timed(bit_generator, n, p, rate):
    """Recursion with exponential clocks: each unaffected particle excites
    at ``rate``, so holding times are Exp(rate * u).

    Returns ``(times, unaffected)``: arrays of length tau + 1 starting at
    ``(0.0, n)``.
    """
    _check_p(p)
    if rate <= 0:
        raise ValueError("rate must be > 0")
    gen = np.random.Generator(bit_generator)
    times = np.empty(n + 1, dtype=np.float64)
    unaff = np.empty(n + 1, dtype=np.int64)
    times[0] = 0.0
    unaff[0] = n
    u = int(n)
    x = 0
    t = 0.0
    while u > 0:
        t += float(gen.standard_exponential()) / (rate * u)
        u = u - 1 - int(gen.binomial(u - 1, p))
        x += 1
        times[x] = t
        unaff[x] = u
    return times[: x + 1].copy(), unaff[: x + 1].copy()


def er_adjacency(bit_generator, n, p):
    """Sample a G(n, p) graph as a symmetric CSR adjacency structure.

    Edges are drawn by geometric skips over the n(n-1)/2 vertex pairs in
    row-major upper-triangle order.  Returns ``(indptr, indices)`` with every
    row sorted ascending.
    """
    _check_p(p)
    n = int(n)
    m_pairs = n * (n - 1) // 2
    if n < 2 or p == 0.0:
        return np.zeros(n + 1, dtype=np.int64), np.empty(0, dtype=np.int64)
    if p == 1.0:
        indptr = np.arange(n + 1, dtype=np.int64) * (n - 1)
        cols = np.arange(n, dtype=np.int64)
        indices = np.empty(n * (n - 1), dtype=np.int64)
        for i in range(n):
            indices[indptr[i] : indptr[i] + i] = cols[:i]
            indices[indptr[i] + i : indptr[i + 1]] = cols[i + 1 :]
        return indptr, indices
    gen = np.random.Generator(bit_generator)
    mean_edges = m_pairs * p
    chunk = int(mean_edges + 6.0 * math.sqrt(mean_edges) + 16.0)
    pieces = []
    pos = -1
    while True:
        skips = gen.geometric(p, size=chunk)
        linear = pos + np.cumsum(skips)
        over = np.nonzero(linear >= m_pairs)[0]
        if over.size:
            pieces.append(linear[: over[0]])
            break
        pieces.append(linear)
        pos = int(linear[-1])
        chunk = max(chunk // 4, 1024)
    k = np.concatenate(pieces)
    rows_of = np.arange(n, dtype=np.int64)
    offsets = rows_of * (n - 1) - rows_of * (rows_of - 1) // 2
    i = np.searchsorted(offsets, k, side="right") - 1
    j = k - offsets[i] + i + 1
    rows = np.concatenate([i, j])
    cols = np.concatenate([j, i])
    order = np.lexsort((cols, rows))
    indices = cols[order]
    counts = np.bincount(rows, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, indices


def build_adjacency(positions, box, radius, periodic):
    """Geometric adjacency: pairs at (boundary-aware) distance <= radius.

    Pure-Python backend uses chunked O(n^2) distances; the compiled backend
    uses a uniform-grid cell list.  Output is identical: CSR with sorted rows.
    """
    positions = np.ascontiguousarray(positions, dtype=np.float64)
    n, dim = positions.shape
    r2 = radius * radius
    indptr = np.zeros(n + 1, dtype=np.int64)
    if n == 0:
        return indptr, np.empty(0, dtype=np.int64)
    chunks = []
    step = max(1, 4_000_000 // n)
    for s in range(0, n, step):
        e = min(n, s + step)
        d2 = np.zeros((e - s, n))
        for a in range(dim):
            dx = np.abs(positions[s:e, a, None] - positions[None, :, a])
            if periodic:
                length = box[a]
                dx = np.where(dx > 0.5 * length, length - dx, dx)
            d2 += dx * dx
        mask = d2 <= r2
        mask[np.arange(e - s), np.arange(s, e)] = False
        indptr[s + 1 : e + 1] = mask.sum(axis=1)
        chunks.append(np.nonzero(mask)[1].astype(np.int64))
    np.cumsum(indptr[1:], out=indptr[1:])
    return indptr, np.concatenate(chunks)


def rsa_jam(bit_generator, indptr, indices, record_trajectory=False):
    """Random sequential activation with neighbor blocking on a fixed graph.

    Repeatedly excites a uniformly random unaffected vertex and blocks its
    unaffected neighbors until none remain.  Returns
    ``(x_inf, excited, trajectory)`` where ``excited`` is a boolean mask and
    ``trajectory`` (optional) is the unaffected-count path ``U_0 .. U_tau``.
    """
    gen = np.random.Generator(bit_generator)
    n = len(indptr) - 1
    pool = np.arange(n, dtype=np.int64)
    slot = np.arange(n, dtype=np.int64)
    excited = np.zeros(n, dtype=bool)
    traj = np.empty(n + 1, dtype=np.int64) if record_trajectory else None
    if record_trajectory:
        traj[0] = n
    u = n
    x = 0
    while u > 0:
        k = int(gen.integers(0, u))
        v = int(pool[k])
        u -= 1
        last = pool[u]
        pool[k] = last
        slot[last] = k
        slot[v] = -1
        excited[v] = True
        x += 1
        for nb in indices[indptr[v] : indptr[v + 1]]:
            s = slot[nb]
            if s >= 0:
                u -= 1
                last = pool[u]
                pool[s] = last
                slot[last] = s
                slot[nb] = -1
        if record_trajectory:
            traj[x] = u
    return x, excited, (traj[: x + 1].copy() if record_trajectory else None)


def rsa_jam_timed(bit_generator, indptr, indices, rate):
    """Timed variant of ``rsa_jam`` with Exp(rate * u) holding times.

    Returns ``(times, unaffected, excited)``.
    """
    if rate <= 0:
        raise ValueError("rate must be > 0")
    gen = np.random.Generator(bit_generator)
    n = len(indptr) - 1
    pool = np.arange(n, dtype=np.int64)
    slot = np.arange(n, dtype=np.int64)
    excited = np.zeros(n, dtype=bool)
    times = np.empty(n + 1, dtype=np.float64)
    unaff = np.empty(n + 1, dtype=np.int64)
    times[0] = 0.0
    unaff[0] = n
    u = n
    x = 0
    t = 0.0
    while u > 0:
        t += float(gen.standard_exponential()) / (rate * u)
        k = int(gen.integers(0, u))
        v = int(pool[k])
        u -= 1
        last = pool[u]
        pool[k] = last
        slot[last] = k
        slot[v] = -1
        excited[v] = True
        x += 1
        for nb in indices[indptr[v] : indptr[v + 1]]:
            s = slot[nb]
            if s >= 0:
                u -= 1
                last = pool[u]
                pool[s] = last
                slot[last] = s
                slot[nb] = -1
        times[x] = t
        unaff[x] = u
    return times[: x + 1].copy(), unaff[: x + 1].copy(), excited

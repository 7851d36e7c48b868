"""Kernel backend selection.

Imports the compiled Cython core when available, otherwise the pure-Python
fallback.  Both expose the same functions and, for a given bit generator,
produce bit-identical results.  Set ``RYDJAM_PURE_PYTHON=1`` to force the
fallback (used by the benchmark and the equivalence tests).
"""

import os

from . import _fallback

_force_python = os.environ.get("RYDJAM_PURE_PYTHON", "").strip() not in ("", "0")

if _force_python:
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _core as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

recursion_jam = _impl.recursion_jam
recursion_jam_timed = _impl.recursion_jam_timed
er_adjacency = _impl.er_adjacency
build_adjacency = _impl.build_adjacency
rsa_jam = _impl.rsa_jam
rsa_jam_timed = _impl.rsa_jam_timed


def available_backends():
    """Names of importable backends ("compiled" first when present)."""
    names = []
    try:
        from . import _core  # noqa: F401

        names.append("compiled")
    except ImportError:
        pass
    names.append("python")
    return names


def get_backend(name):
    """Return the kernel module for an explicit backend name."""
    if name == "python":
        return _fallback
    if name == "compiled":
        from . import _core

        return _core
    raise ValueError(f"unknown backend {name!r}")

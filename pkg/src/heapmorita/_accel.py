"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy versions in ``_fallback`` take over. Set ``HEAPMORITA_PURE=1`` to force
the fallback.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _fallback

if os.environ.get("HEAPMORITA_PURE", "") not in ("", "0"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "numpy"
_backends = {"numpy": _fallback}
if _compiled is not None:
    _backends["cython"] = _compiled


def available_backends() -> list[str]:
    return sorted(_backends)


def _module(backend: str | None):
    name = backend or BACKEND
    try:
        return _backends[name]
    except KeyError:
        raise ValueError(f"backend {name!r} is not available") from None


def _split(n: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, n))
    bounds = np.linspace(0, n, parts + 1).astype(int)
    return [(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]


def _first(fn, n: int, threads: int) -> int:
    # flat indices are monotone in the leading coordinate, so the least
    # non-negative slab result is the global lexicographic minimum
    slabs = _split(n, threads)
    if len(slabs) == 1:
        return fn(*slabs[0])
    with ThreadPoolExecutor(max_workers=len(slabs)) as pool:
        hits = [r for r in pool.map(lambda s: fn(*s), slabs) if r >= 0]
    return min(hits) if hits else -1


def assoc_first(mul: np.ndarray, threads: int = 1, backend: str | None = None) -> int:
    mod = _module(backend)
    mul = np.ascontiguousarray(mul, dtype=np.int64)
    return _first(lambda lo, hi: mod.assoc_first(mul, lo, hi), mul.shape[0], threads)


def heap_first(ter: np.ndarray, axiom: str, threads: int = 1, backend: str | None = None) -> int:
    mod = _module(backend)
    ter = np.ascontiguousarray(ter, dtype=np.int64)
    return _first(lambda lo, hi: mod.heap_first(ter, axiom, lo, hi), ter.shape[0], threads)


heap_violations = _fallback.heap_violations
assoc_violations = _fallback.assoc_violations

"""Numpy versions of the compiled scans in ``_kernels.pyx``.

Same contract: scan the leading coordinate range ``[lo, hi)`` in lexicographic
order and return the flat index of the first failing tuple, or -1.
"""
from __future__ import annotations

import numpy as np

HEAP_ARITY = {"A1": 1, "A2": 5, "A3": 3, "A4": 3}

# elements per vectorised block; keeps peak memory near 100 MB
_BLOCK = 1 << 21


def heap_violations(ter: np.ndarray, axiom: str, tuples: np.ndarray) -> np.ndarray:
    """Boolean mask of the rows of ``tuples`` that violate ``axiom``."""
    t = ter
    cols = [tuples[:, i] for i in range(tuples.shape[1])]
    if axiom == "A1":
        (x,) = cols
        return t[x, x, x] != x
    if axiom == "A2":
        x1, x2, x3, x4, x5 = cols
        lhs = t[t[x1, x2, x3], x4, x5]
        mid = t[x1, t[x4, x3, x2], x5]
        rhs = t[x1, x2, t[x3, x4, x5]]
        return (lhs != mid) | (mid != rhs)
    if axiom == "A3":
        x, y, z = cols
        return t[x, x, t[y, y, z]] != t[y, y, t[x, x, z]]
    if axiom == "A4":
        x, y, z = cols
        return t[t[z, x, x], y, y] != t[t[z, y, y], x, x]
    raise ValueError(f"unknown heap axiom {axiom!r}")


def assoc_violations(mul: np.ndarray, tuples: np.ndarray) -> np.ndarray:
    a, b, c = tuples[:, 0], tuples[:, 1], tuples[:, 2]
    return mul[mul[a, b], c] != mul[a, mul[b, c]]


def _first_true(mask: np.ndarray) -> int:
    flat = mask.ravel()
    i = int(np.argmax(flat))
    return i if flat[i] else -1


def assoc_first(mul: np.ndarray, lo: int, hi: int) -> int:
    n = mul.shape[0]
    for a in range(lo, hi):
        ab = mul[a]  # (n,)
        lhs = mul[ab]  # lhs[b, c] = (a b) c
        rhs = mul[a][mul]  # rhs[b, c] = a (b c)
        i = _first_true(lhs != rhs)
        if i >= 0:
            return a * n * n + i
    return -1


def _a2_slab(t: np.ndarray, x1: int, x2s: np.ndarray) -> np.ndarray:
    n = t.shape[0]
    ar = np.arange(n)
    inner = t[x1][x2s]  # [x2, x3]
    lhs = t[inner[:, :, None, None], ar[None, None, :, None], ar[None, None, None, :]]
    rev = t[ar[None, None, :], ar[None, :, None], x2s[:, None, None]]  # [x2, x3, x4]
    mid = t[x1][rev[..., None], ar[None, None, None, :]]
    rhs = t[x1][x2s[:, None, None, None], t[None, :, :, :]]
    return (lhs != mid) | (mid != rhs)


def heap_first(ter: np.ndarray, axiom: str, lo: int, hi: int) -> int:
    t = ter
    n = t.shape[0]
    if axiom == "A1":
        xs = np.arange(lo, hi)
        i = _first_true(t[xs, xs, xs] != xs)
        return lo + i if i >= 0 else -1
    if axiom == "A2":
        step = max(1, _BLOCK // max(1, n ** 3))
        for x1 in range(lo, hi):
            for start in range(0, n, step):
                x2s = np.arange(start, min(n, start + step))
                i = _first_true(_a2_slab(t, x1, x2s))
                if i >= 0:
                    return x1 * n ** 4 + start * n ** 3 + i
        return -1
    if axiom in ("A3", "A4"):
        ar = np.arange(n)
        y = ar[:, None]
        z = ar[None, :]
        for x in range(lo, hi):
            if axiom == "A3":
                bad = t[x, x][t[y, y, z]] != t[y, y, t[x, x][z]]
            else:
                bad = t[t[z, x, x], y, y] != t[t[z, y, y], x, x]
            i = _first_true(bad)
            if i >= 0:
                return x * n * n + i
        return -1
    raise ValueError(f"unknown heap axiom {axiom!r}")

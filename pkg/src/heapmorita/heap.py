"""Generalized heaps: finite sets with a ternary operation ``{xyz}``.

A heap is stored as an ``n x n x n`` table ``ter[x, y, z] = {xyz}``. The
model to keep in mind is an atlas of partial bijections with
``{xyz} = x y^-1 z``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _accel
from .finsemi import (
    InverseSemigroup,
    PartialBijection,
    SizeLimitError,
    as_table,
    compose_pb,
    invert_pb,
)
from .report import InternalInconsistencyError, MalformedTableError, ValidationReport, first_witness

EXHAUSTIVE_THRESHOLD = 40
DEFAULT_SAMPLES = 10**6
MAX_ELEMENTS = 5000

HEAP_LAWS = {
    "A1": "{xxx} = x",
    "A2": "{{x1 x2 x3} x4 x5} = {x1 {x4 x3 x2} x5} = {x1 x2 {x3 x4 x5}}",
    "A3": "{xx{yyz}} = {yy{xxz}}",
    "A4": "{{zxx}yy} = {{zyy}xx}",
}


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GeneralizedHeap:
    ter: np.ndarray

    def __post_init__(self):
        ter = as_table(self.ter, ndim=3, name="ternary table")
        n = ter.shape[0]
        if n < 1 or ter.shape != (n, n, n):
            raise MalformedTableError(f"ternary table must be n x n x n with n >= 1, got {ter.shape}")
        object.__setattr__(self, "ter", ter)

    @property
    def n(self) -> int:
        return self.ter.shape[0]

    def __len__(self) -> int:
        return self.n

    def __call__(self, x: int, y: int, z: int) -> int:
        return int(self.ter[x, y, z])

    def equals(self, other: "GeneralizedHeap") -> bool:
        return np.array_equal(self.ter, other.ter)


def validate_heap(
    X: GeneralizedHeap | np.ndarray,
    mode: str = "exhaustive",
    samples: int = DEFAULT_SAMPLES,
    seed: int | None = None,
    threshold: int = EXHAUSTIVE_THRESHOLD,
    threads: int = 1,
    backend: str | None = None,
) -> ValidationReport:
    """Check the four heap axioms.

    Heaps with at most ``threshold`` elements are always scanned exhaustively.
    Above that, ``mode="sampled"`` draws ``samples`` uniform tuples per axiom
    from a generator seeded with ``seed``; an axiom whose whole tuple space is
    no larger than ``samples`` is still scanned in full. Witnesses are the
    lexicographically least failing tuple among those examined.
    """
    if not isinstance(X, GeneralizedHeap):
        X = GeneralizedHeap(X)
    if mode not in ("exhaustive", "sampled"):
        raise ConfigurationError(f"unknown mode {mode!r}")
    n = X.n
    sampled = mode == "sampled" and n > threshold
    if sampled and seed is None:
        raise ConfigurationError("sampled mode needs a seed")
    rng = np.random.default_rng(seed) if sampled else None
    report = ValidationReport("heap")
    for axiom, arity in _accel._fallback.HEAP_ARITY.items():
        space = n**arity
        if sampled and space > samples:
            tuples = rng.integers(0, n, size=(samples, arity))
            bad = _accel.heap_violations(X.ter, axiom, tuples)
            witness = None
            if bad.any():
                failing = tuples[bad]
                witness = tuple(min(map(tuple, failing.tolist())))
            report.add(
                axiom, witness, samples, space,
                mode=f"sampled(samples={samples}, seed={seed})", law=HEAP_LAWS[axiom],
            )
        else:
            flat = _accel.heap_first(X.ter, axiom, threads=threads, backend=backend)
            witness = None if flat < 0 else tuple(int(v) for v in np.unravel_index(flat, (n,) * arity))
            report.add(axiom, witness, space if flat < 0 else flat + 1, space, law=HEAP_LAWS[axiom])
    return report


def gh_of(S: InverseSemigroup) -> GeneralizedHeap:
    """Heap on the elements of ``S`` with ``{xyz} = x y^-1 z``."""
    m = S.mul
    return GeneralizedHeap(m[m[:, S.inv][:, :, None], np.arange(S.n)[None, None, :]])


def _pb_ternary(x: PartialBijection, y: PartialBijection, z: PartialBijection) -> PartialBijection:
    return compose_pb(x, compose_pb(invert_pb(y), z))


def atlas_closure(
    maps: Sequence[PartialBijection], max_elements: int = MAX_ELEMENTS
) -> tuple[GeneralizedHeap, list[PartialBijection]]:
    """Close a set of partial bijections under ``(x, y, z) -> x y^-1 z``.

    Returns the heap over the closure with its elements in canonical order
    (see :meth:`PartialBijection.sort_key`); ``elements[i]`` is heap element ``i``.
    """
    if not maps:
        raise ValueError("atlas must contain at least one map")
    src, dst = maps[0].src_size, maps[0].dst_size
    for f in maps:
        if (f.src_size, f.dst_size) != (src, dst):
            raise ValueError(f"map {f} does not go from {src} to {dst} points")
    elems = list(dict.fromkeys(maps))
    seen = set(elems)
    done = 0
    # each round adds every triple that involves at least one element new in the previous round
    while done < len(elems):
        new = []
        cur = len(elems)
        for i in range(cur):
            for j in range(cur):
                for k in range(done if i < done and j < done else 0, cur):
                    f = _pb_ternary(elems[i], elems[j], elems[k])
                    if f not in seen:
                        seen.add(f)
                        new.append(f)
                        if len(seen) > max_elements:
                            raise SizeLimitError(f"atlas closure exceeds the cap of {max_elements} elements")
        done = cur
        elems.extend(new)
    ordered = sorted(elems, key=PartialBijection.sort_key)
    return GeneralizedHeap(heap_table_of_maps(ordered)), ordered


def heap_table_of_maps(elements: Sequence[PartialBijection]) -> np.ndarray:
    """Ternary table of a set of maps already closed under ``x y^-1 z``."""
    index = {f: i for i, f in enumerate(elements)}
    n = len(elements)
    ter = np.empty((n, n, n), dtype=np.int64)
    for j, y in enumerate(elements):
        yi = invert_pb(y)
        for k, z in enumerate(elements):
            yz = compose_pb(yi, z)
            for i, x in enumerate(elements):
                try:
                    ter[i, j, k] = index[compose_pb(x, yz)]
                except KeyError:
                    raise ValueError("maps are not closed under x y^-1 z") from None
    return ter


# ---------------------------------------------------------------------------
# derived bands and the quotient semilattices


@dataclass(frozen=True, eq=False)
class BandStructure:
    """``circ[x, y] = {xxy}`` (right normal band) and ``bullet[x, y] = {xyy}`` (left normal band)."""

    heap: GeneralizedHeap
    circ: np.ndarray
    bullet: np.ndarray

    @property
    def n(self) -> int:
        return self.heap.n


def band_report(B: BandStructure) -> ValidationReport:
    n = B.n
    c, b = B.circ, B.bullet
    xs = np.arange(n)
    x = xs[:, None, None]
    y = xs[None, :, None]
    z = xs[None, None, :]
    report = ValidationReport("bands")
    for name, t in (("circ", c), ("bullet", b)):
        w, k = first_witness(t[xs, xs] != xs)
        report.add(f"{name}-idempotent", w, k, n, law="x.x = x")
        w, k = first_witness(t[t[x, y], z] != t[x, t[y, z]])
        report.add(f"{name}-associative", w, k, n**3, law="(x.y).z = x.(y.z)")
    w, k = first_witness(c[c[x, y], z] != c[c[y, x], z])
    report.add("circ-right-normal", w, k, n**3, law="x o y o z = y o x o z")
    w, k = first_witness(b[b[x, y], z] != b[b[x, z], y])
    report.add("bullet-left-normal", w, k, n**3, law="x * y * z = x * z * y")
    w, k = first_witness(b[c[x, y], z] != c[x, b[y, z]])
    report.add("mixed-associative", w, k, n**3, law="(x o y) * z = x o (y * z)")
    return report


def derive_bands(X: GeneralizedHeap, check: bool = True) -> BandStructure:
    xs = np.arange(X.n)
    circ = X.ter[xs[:, None], xs[:, None], xs[None, :]].copy()
    bullet = X.ter[xs[:, None], xs[None, :], xs[None, :]].copy()
    circ.setflags(write=False)
    bullet.setflags(write=False)
    B = BandStructure(X, circ, bullet)
    if check:
        band_report(B).raise_on_failure()
    return B


class DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            # the smaller index stays root, so roots are least members
            if rj < ri:
                ri, rj = rj, ri
            self.parent[rj] = ri

    def labels(self) -> np.ndarray:
        """Class label per element; classes numbered by least member."""
        roots = [self.find(i) for i in range(len(self.parent))]
        order = {r: k for k, r in enumerate(sorted(set(roots)))}
        return np.array([order[r] for r in roots], dtype=np.int64)


def classes_from_relation(rel: np.ndarray) -> np.ndarray:
    """Close a boolean relation into classes and confirm it was already an equivalence."""
    n = rel.shape[0]
    ds = DisjointSet(n)
    for i, j in np.argwhere(rel):
        ds.union(int(i), int(j))
    labels = ds.labels()
    closed = labels[:, None] == labels[None, :]
    bad = np.argwhere(closed != rel)
    if len(bad):
        i, j = (int(v) for v in bad[0])
        raise InternalInconsistencyError(
            f"relation is not an equivalence: its closure adds ({i}, {j})"
        )
    return labels


@dataclass(frozen=True, eq=False)
class QuotientMap:
    """Quotient of a band by mutual absorption; the classes form a semilattice under ``meet``."""

    class_of: np.ndarray
    classes: tuple[tuple[int, ...], ...]
    meet: np.ndarray

    @property
    def size(self) -> int:
        return len(self.classes)

    def leq(self) -> np.ndarray:
        """Semilattice order ``a <= b`` iff ``meet(a, b) = a``."""
        k = np.arange(self.size)
        return self.meet == k[:, None]


def _quotient(op: np.ndarray, rel: np.ndarray, name: str) -> QuotientMap:
    labels = classes_from_relation(rel)
    k = int(labels.max()) + 1
    classes = tuple(tuple(int(v) for v in np.flatnonzero(labels == c)) for c in range(k))
    reps = np.array([c[0] for c in classes], dtype=np.int64)
    meet = labels[op[reps[:, None], reps[None, :]]]
    # well defined: the class of x.y depends only on the classes of x and y
    w, cnt = first_witness(labels[op] != meet[labels[:, None], labels[None, :]])
    if w is not None:
        raise InternalInconsistencyError(f"{name}: meet is not well defined at {w}")
    ks = np.arange(k)
    checks = {
        "idempotent": meet[ks, ks] != ks,
        "commutative": meet != meet.T,
        "associative": meet[meet[:, :, None], ks[None, None, :]] != meet[ks[:, None, None], meet[None, :, :]],
    }
    for law, mask in checks.items():
        w, _ = first_witness(mask)
        if w is not None:
            raise InternalInconsistencyError(f"{name}: meet is not {law} at {w}")
    meet.setflags(write=False)
    labels.setflags(write=False)
    return QuotientMap(labels, classes, meet)


def p_quotient(B: BandStructure) -> QuotientMap:
    """``p(x) = p(y)`` iff ``x = y o x`` and ``y = x o y``; meet induced by ``o``."""
    c = B.circ
    xs = np.arange(B.n)
    rel = (c[xs[None, :], xs[:, None]] == xs[:, None]) & (c[xs[:, None], xs[None, :]] == xs[None, :])
    return _quotient(c, rel, "p")


def q_quotient(B: BandStructure) -> QuotientMap:
    """``q(x) = q(y)`` iff ``x = x * y`` and ``y = y * x``; meet induced by ``*``."""
    b = B.bullet
    xs = np.arange(B.n)
    rel = (b == xs[:, None]) & (b.T == xs[None, :])
    return _quotient(b, rel, "q")


def l_triviality_check(B: BandStructure) -> ValidationReport:
    """Mutual left absorption in ``o`` and mutual right absorption in ``*`` force equality."""
    c, b = B.circ, B.bullet
    xs = np.arange(B.n)
    neq = xs[:, None] != xs[None, :]
    report = ValidationReport("absorption")
    # x = x o y and y = y o x
    w, k = first_witness((c == xs[:, None]) & (c.T == xs[None, :]) & neq)
    report.add("circ-left-absorption", w, k, B.n**2, law="x = x o y and y = y o x imply x = y")
    # x = y * x and y = x * y
    w, k = first_witness((b.T == xs[:, None]) & (b == xs[None, :]) & neq)
    report.add("bullet-right-absorption", w, k, B.n**2, law="x = y * x and y = x * y imply x = y")
    return report

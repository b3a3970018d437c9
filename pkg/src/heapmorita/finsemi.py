"""Finite semigroups as Cayley tables, inverse semigroups, and partial bijections.

Elements are the integers ``0..n-1`` and every table is a row-major numpy
array, so ``mul[a, b]`` is the product ``a*b``. Partial bijections compose
right to left: ``compose_pb(f, g)`` applies ``g`` first.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _accel
from .report import MalformedTableError, ValidationReport, first_witness

SIM_LIMIT = 5


class NotInverseError(ValueError):
    """The semigroup is not inverse; ``witness`` names the offending elements."""

    def __init__(self, message: str, witness: tuple[int, ...]):
        super().__init__(message)
        self.witness = witness


class SizeLimitError(ValueError):
    pass


class CompositionError(ValueError):
    pass


def as_table(rows, n: int | None = None, ndim: int = 2, name: str = "table") -> np.ndarray:
    """Coerce ``rows`` to a read-only int64 array with entries in ``0..n-1``."""
    arr = np.array(rows, dtype=np.int64)
    if arr.ndim != ndim:
        raise MalformedTableError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if n is None:
        n = arr.shape[0]
    bad = np.argwhere((arr < 0) | (arr >= n))
    if len(bad):
        pos = tuple(int(v) for v in bad[0])
        raise MalformedTableError(
            f"{name} entry {arr[pos]} at {pos} is outside 0..{n - 1}",
            row=pos[0],
            col=pos[1] if len(pos) > 1 else None,
        )
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FiniteSemigroup:
    """Cayley table on ``0..n-1``; associativity is checked on construction."""

    mul: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        mul = as_table(self.mul, name="multiplication table")
        if mul.shape[0] < 1 or mul.shape[0] != mul.shape[1]:
            raise MalformedTableError(f"multiplication table must be square and nonempty, got {mul.shape}")
        object.__setattr__(self, "mul", mul)
        if self.check:
            report = check_associative(mul)
            if not report.passed:
                w = report["associativity"].witness
                raise MalformedTableError(f"table is not associative at {w}")

    @property
    def n(self) -> int:
        return self.mul.shape[0]

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True, eq=False)
class InverseSemigroup:
    base: FiniteSemigroup
    inv: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "inv", as_table(self.inv, self.base.n, ndim=1, name="inverse map"))
        if self.inv.shape[0] != self.base.n:
            raise MalformedTableError("inverse map has the wrong length")

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def mul(self) -> np.ndarray:
        return self.base.mul

    def __len__(self) -> int:
        return self.n

    def equals(self, other: "InverseSemigroup") -> bool:
        return np.array_equal(self.mul, other.mul) and np.array_equal(self.inv, other.inv)


def check_associative(mul, threads: int = 1, backend: str | None = None) -> ValidationReport:
    """Exhaustive associativity scan; the witness is the least failing triple."""
    mul = as_table(mul, name="multiplication table")
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1]:
        raise MalformedTableError(f"multiplication table must be square, got {mul.shape}")
    n = mul.shape[0]
    report = ValidationReport("semigroup")
    flat = _accel.assoc_first(mul, threads=threads, backend=backend)
    witness = None if flat < 0 else tuple(int(v) for v in np.unravel_index(flat, (n, n, n)))
    report.add("associativity", witness, n**3 if flat < 0 else flat + 1, n**3, law="(ab)c = a(bc)")
    return report


def generalized_inverses(S: FiniteSemigroup, x: int) -> list[int]:
    m = S.mul
    xs = np.arange(S.n)
    ok = (m[m[x, xs], x] == x) & (m[m[xs, x], xs] == xs)
    return [int(v) for v in np.flatnonzero(ok)]


def recognize_inverse(S: FiniteSemigroup) -> InverseSemigroup:
    """Return ``S`` with its inverse map, or raise :class:`NotInverseError`."""
    m = S.mul
    n = S.n
    xs = np.arange(n)
    # ok[x, y]: y is a generalized inverse of x
    ok = (m[m[xs[:, None], xs[None, :]], xs[:, None]] == xs[:, None]) & (
        m[m[xs[None, :], xs[:, None]], xs[None, :]] == xs[None, :]
    )
    counts = ok.sum(axis=1)
    for x in range(n):
        if counts[x] != 1:
            cands = [int(v) for v in np.flatnonzero(ok[x])]
            raise NotInverseError(f"element {x} has {counts[x]} generalized inverses {cands}", (x, *cands))
    inv = np.argmax(ok, axis=1)
    e = idempotent_array(m)
    ee = m[np.ix_(e, e)]
    bad = np.argwhere(ee != ee.T)
    if len(bad):
        i, j = bad[0]
        raise NotInverseError(f"idempotents {e[i]} and {e[j]} do not commute", (int(e[i]), int(e[j])))
    return InverseSemigroup(S, inv)


def inverse_semigroup(rows) -> InverseSemigroup:
    return recognize_inverse(FiniteSemigroup(rows))


def idempotent_array(mul: np.ndarray) -> np.ndarray:
    xs = np.arange(mul.shape[0])
    return np.flatnonzero(mul[xs, xs] == xs)


def idempotents(S) -> list[int]:
    return [int(v) for v in idempotent_array(S.mul)]


def natural_order_leq(S, a: int, b: int) -> bool:
    """``a <= b`` in the natural partial order: ``a = e*b`` for an idempotent ``e``."""
    return bool(np.any(S.mul[idempotent_array(S.mul), b] == a))


def natural_order_table(S) -> np.ndarray:
    """``leq[a, b]`` for all pairs; same criterion as :func:`natural_order_leq`."""
    n = S.n
    leq = np.zeros((n, n), dtype=bool)
    for e in idempotent_array(S.mul):
        leq[S.mul[e], np.arange(n)] = True
    return leq


def check_inverse_laws(S: InverseSemigroup) -> ValidationReport:
    m, inv = S.mul, S.inv
    xs = np.arange(S.n)
    report = ValidationReport("inverse semigroup")
    w, c = first_witness((m[m[xs, inv], xs] != xs) | (m[m[inv, xs], inv] != inv))
    report.add("regularity", w, c, S.n, law="x x' x = x and x' x x' = x'")
    w, c = first_witness(inv[inv] != xs)
    report.add("involution", w, c, S.n, law="(x')' = x")
    e = idempotent_array(m)
    is_e = np.zeros(S.n, dtype=bool)
    is_e[e] = True
    ee = m[xs[:, None], xs[None, :]] != m[xs[None, :], xs[:, None]]
    w, c = first_witness(ee & is_e[:, None] & is_e[None, :])
    report.add("idempotents-commute", w, c, S.n**2, law="ef = fe for idempotents e, f")
    return report


# ---------------------------------------------------------------------------
# small named semigroups


def semilattice_chain(n: int) -> InverseSemigroup:
    """Chain ``0 < 1 < ... < n-1`` under min."""
    xs = np.arange(n)
    return InverseSemigroup(FiniteSemigroup(np.minimum.outer(xs, xs)), xs)


def cyclic_group(n: int) -> InverseSemigroup:
    xs = np.arange(n)
    return InverseSemigroup(FiniteSemigroup(np.add.outer(xs, xs) % n), (-xs) % n)


def subsemigroup(S: InverseSemigroup, elements: Sequence[int]) -> tuple[InverseSemigroup, list[int]]:
    """Restrict ``S`` to ``elements`` (sorted); they must be closed under product and inverse."""
    elems = sorted(set(int(e) for e in elements))
    index = {e: i for i, e in enumerate(elems)}
    try:
        mul = [[index[int(S.mul[a, b])] for b in elems] for a in elems]
        inv = [index[int(S.inv[a])] for a in elems]
    except KeyError as exc:
        raise ValueError(f"element {exc.args[0]} escapes the subset") from None
    return InverseSemigroup(FiniteSemigroup(mul), inv), elems


# ---------------------------------------------------------------------------
# partial bijections


@dataclass(frozen=True)
class PartialBijection:
    """Injective partial map from ``0..src_size-1`` to ``0..dst_size-1``."""

    src_size: int
    dst_size: int
    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        pairs = tuple(sorted((int(s), int(t)) for s, t in self.pairs))
        srcs = [s for s, _ in pairs]
        dsts = [t for _, t in pairs]
        if len(set(srcs)) != len(srcs):
            raise ValueError(f"source point repeated in {pairs}")
        if len(set(dsts)) != len(dsts):
            raise ValueError(f"target point repeated in {pairs}")
        if any(not 0 <= s < self.src_size for s in srcs) or any(not 0 <= t < self.dst_size for t in dsts):
            raise ValueError(f"pair out of range for sizes {self.src_size}->{self.dst_size}: {pairs}")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_dict(cls, src_size: int, dst_size: int, mapping: dict[int, int]) -> "PartialBijection":
        return cls(src_size, dst_size, tuple(mapping.items()))

    def __call__(self, point: int) -> int | None:
        for s, t in self.pairs:
            if s == point:
                return t
        return None

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self.pairs)

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(t for _, t in self.pairs)

    def sort_key(self) -> tuple:
        """Canonical order: domain bitmask (colex on subsets), then image tuple."""
        return (sum(1 << s for s in self.domain), self.image)

    def __str__(self) -> str:
        body = " ".join(f"{s}:{t}" for s, t in self.pairs)
        return f"map {body}".rstrip()


def identity_pb(k: int, points: Iterable[int] | None = None) -> PartialBijection:
    pts = range(k) if points is None else points
    return PartialBijection(k, k, tuple((p, p) for p in pts))


def compose_pb(f: PartialBijection, g: PartialBijection) -> PartialBijection:
    """``t -> f(g(t))`` wherever both steps are defined."""
    if f.src_size != g.dst_size:
        raise CompositionError(
            f"cannot compose: f expects a {f.src_size}-point source, g lands in {g.dst_size} points"
        )
    fmap = dict(f.pairs)
    return PartialBijection(
        g.src_size, f.dst_size, tuple((s, fmap[t]) for s, t in g.pairs if t in fmap)
    )


def invert_pb(f: PartialBijection) -> PartialBijection:
    return PartialBijection(f.dst_size, f.src_size, tuple((t, s) for s, t in f.pairs))


def partial_injections(src_size: int, dst_size: int) -> list[PartialBijection]:
    """All partial injections ``src -> dst`` in canonical order."""
    out = []
    for mask in range(1 << src_size):
        dom = [i for i in range(src_size) if mask >> i & 1]
        for img in itertools.permutations(range(dst_size), len(dom)):
            out.append(PartialBijection(src_size, dst_size, tuple(zip(dom, img))))
    return out


def inverse_semigroup_of_maps(
    maps: Sequence[PartialBijection], max_elements: int = 5000
) -> tuple[InverseSemigroup, list[PartialBijection]]:
    """Inverse semigroup generated by ``maps`` (all on one k-point set), canonically ordered."""
    if not maps:
        raise ValueError("need at least one map")
    k = maps[0].src_size
    if any(f.src_size != k or f.dst_size != k for f in maps):
        raise CompositionError("all maps must act on the same k-point set")
    elems = set(maps) | {invert_pb(f) for f in maps}
    frontier = list(elems)
    while frontier:
        new = []
        current = list(elems)
        for f in frontier:
            for g in current:
                for h in (compose_pb(f, g), compose_pb(g, f)):
                    if h not in elems:
                        elems.add(h)
                        new.append(h)
                        current.append(h)
            if len(elems) > max_elements:
                raise SizeLimitError(f"generated semigroup exceeds {max_elements} elements")
        frontier = new
    ordered = sorted(elems, key=PartialBijection.sort_key)
    index = {f: i for i, f in enumerate(ordered)}
    mul = [[index[compose_pb(f, g)] for g in ordered] for f in ordered]
    inv = [index[invert_pb(f)] for f in ordered]
    return InverseSemigroup(FiniteSemigroup(mul), inv), ordered


def symmetric_inverse_monoid(k: int, limit: int = SIM_LIMIT) -> tuple[InverseSemigroup, list[PartialBijection]]:
    """All partial bijections of a k-point set under composition.

    Element ``i`` of the result is ``elements[i]``; the order is canonical
    (domain subset as a bitmask, then image tuple lexicographically).
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > limit:
        raise SizeLimitError(f"I_{k} exceeds the enumeration limit k <= {limit}")
    elems = partial_injections(k, k)
    index = {f: i for i, f in enumerate(elems)}
    mul = [[index[compose_pb(f, g)] for g in elems] for f in elems]
    inv = [index[invert_pb(f)] for f in elems]
    # composition of partial bijections is associative by construction
    return InverseSemigroup(FiniteSemigroup(mul, check=k <= 4), inv), elems


def brandt_b2() -> tuple[InverseSemigroup, list[PartialBijection]]:
    """Five-element Brandt semigroup: the empty map and the four single-point maps in I_2."""
    I2, elems = symmetric_inverse_monoid(2)
    pick = [i for i, f in enumerate(elems) if len(f.pairs) <= 1]
    S, kept = subsemigroup(I2, pick)
    return S, [elems[i] for i in kept]


# ---------------------------------------------------------------------------
# isomorphism


@dataclass(frozen=True)
class IsoWitness:
    """Result of :func:`iso_search`.

    ``mapping[a]`` is the image of element ``a`` when an isomorphism was found.
    Otherwise ``invariant`` names what distinguished the inputs and ``values``
    holds that invariant for each side.
    """

    mapping: tuple[int, ...] | None
    invariant: str | None = None
    values: tuple = ()

    def __bool__(self) -> bool:
        return self.mapping is not None

    def to_dict(self) -> dict:
        return {
            "isomorphic": self.mapping is not None,
            "mapping": list(self.mapping) if self.mapping is not None else None,
            "invariant": self.invariant,
            "values": [v if isinstance(v, (int, str)) else str(v) for v in self.values],
        }


def homomorphism_witness(A, B, mapping: Sequence[int]) -> tuple[int, int] | None:
    """First pair ``(a, b)`` with ``phi(ab) != phi(a)phi(b)``, or None."""
    phi = np.asarray(mapping, dtype=np.int64)
    bad = np.argwhere(phi[A.mul] != B.mul[np.ix_(phi, phi)])
    return None if len(bad) == 0 else (int(bad[0][0]), int(bad[0][1]))


def _fingerprints(S: InverseSemigroup) -> list[tuple]:
    m, inv = S.mul, S.inv
    n = S.n
    is_e = np.zeros(n, dtype=bool)
    is_e[idempotent_array(m)] = True
    leq = natural_order_table(S)
    fps = []
    for x in range(n):
        seen = []
        y = x
        while y not in seen:
            seen.append(y)
            y = int(m[y, x])
        fps.append(
            (
                bool(is_e[x]),
                len(seen),
                seen.index(y),
                int(m[x, inv[x]]) == int(m[inv[x], x]),
                int(leq[:, x].sum()),
                int(leq[x, :].sum()),
                int(leq[:, m[x, inv[x]]].sum()),
                int(leq[:, m[inv[x], x]].sum()),
                int((m[x] == x).sum()),
                int((m[:, x] == x).sum()),
            )
        )
    return fps


def iso_search(A: InverseSemigroup, B: InverseSemigroup) -> IsoWitness:
    """Find an isomorphism ``A -> B`` by backtracking, or report an invariant that differs."""
    if A.n != B.n:
        return IsoWitness(None, "size", (A.n, B.n))
    ea, eb = len(idempotent_array(A.mul)), len(idempotent_array(B.mul))
    if ea != eb:
        return IsoWitness(None, "idempotent count", (ea, eb))
    fa, fb = _fingerprints(A), _fingerprints(B)
    if sorted(fa) != sorted(fb):
        return IsoWitness(None, "element fingerprints", (sorted(set(fa) - set(fb)), sorted(set(fb) - set(fa))))

    n = A.n
    by_fp: dict[tuple, list[int]] = {}
    for b, fp in enumerate(fb):
        by_fp.setdefault(fp, []).append(b)
    # rarest fingerprint classes first; products then pin down the rest quickly
    order = sorted(range(n), key=lambda a: (len(by_fp[fa[a]]), a))
    ma, mb = A.mul, B.mul
    ia, ib = A.inv, B.inv

    def extend(mapping: dict[int, int], used: set[int], a: int, b: int):
        mapping = dict(mapping)
        used = set(used)
        stack = [(a, b)]
        while stack:
            a, b = stack.pop()
            if a in mapping:
                if mapping[a] != b:
                    return None
                continue
            if b in used or fa[a] != fb[b]:
                return None
            known = list(mapping.items())
            mapping[a] = b
            used.add(b)
            stack.append((int(ia[a]), int(ib[b])))
            stack.append((int(ma[a, a]), int(mb[b, b])))
            for c, d in known:
                stack.append((int(ma[a, c]), int(mb[b, d])))
                stack.append((int(ma[c, a]), int(mb[d, b])))
        return mapping, used

    def search(mapping, used):
        if len(mapping) == n:
            return mapping
        a = next(x for x in order if x not in mapping)
        for b in by_fp[fa[a]]:
            if b in used:
                continue
            ext = extend(mapping, used, a, b)
            if ext is not None:
                found = search(*ext)
                if found is not None:
                    return found
        return None

    found = search({}, set())
    if found is None:
        return IsoWitness(None, "exhaustive search", ("no homomorphic bijection",))
    mapping = tuple(found[a] for a in range(n))
    if homomorphism_witness(A, B, mapping) is not None or sorted(mapping) != list(range(n)):
        raise AssertionError("isomorphism search returned a non-isomorphism")
    return IsoWitness(mapping)

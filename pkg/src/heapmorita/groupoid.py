"""From a heap to two inverse semigroups.

Pairs ``(x, y)`` of heap elements are read as formal quotients. On the right
side, pairs with ``p(x) = p(y)`` stand for ``x^-1 y``; on the left side, pairs
with ``q(x) = q(y)`` stand for ``x y^-1``. Each side is partitioned into
classes, and the classes multiply by a pseudoproduct evaluated on
representatives. The result is an inverse semigroup whose idempotents are the
classes of ``(x, x)``.

A class is represented by its lexicographically least pair, and classes are
numbered in the order of those representatives.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .finsemi import (
    FiniteSemigroup,
    InverseSemigroup,
    NotInverseError,
    natural_order_table,
    recognize_inverse,
)
from .heap import (
    BandStructure,
    GeneralizedHeap,
    QuotientMap,
    classes_from_relation,
    derive_bands,
    p_quotient,
    q_quotient,
)
from .report import (
    InternalInconsistencyError,
    MalformedTableError,
    ValidationReport,
    first_witness,
    first_witness_sliced,
)

LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True, eq=False)
class PregroupoidView:
    """A heap restricted to triples ``(x, y, z)`` with ``q(x) = q(y)`` and ``p(y) = p(z)``."""

    heap: GeneralizedHeap
    bands: BandStructure
    p: QuotientMap
    q: QuotientMap

    @property
    def n(self) -> int:
        return self.heap.n

    def defined(self, x: int, y: int, z: int) -> bool:
        return self.q.class_of[x] == self.q.class_of[y] and self.p.class_of[y] == self.p.class_of[z]

    def defined_mask(self) -> np.ndarray:
        p, q = self.p.class_of, self.q.class_of
        return (q[:, None, None] == q[None, :, None]) & (p[None, :, None] == p[None, None, :])


def pregroupoid_view(X: GeneralizedHeap, bands: BandStructure | None = None) -> PregroupoidView:
    B = bands if bands is not None else derive_bands(X)
    return PregroupoidView(X, B, p_quotient(B), q_quotient(B))


def check_pregroupoid(V: PregroupoidView) -> ValidationReport:
    t = V.heap.ter
    p, q = V.p.class_of, V.q.class_of
    n = V.n
    xs = np.arange(n)
    report = ValidationReport("pregroupoid")

    d = V.defined_mask()
    x, y, z = xs[:, None, None], xs[None, :, None], xs[None, None, :]
    w, k = first_witness(d & ((p[t] != p[x]) | (q[t] != q[z])))
    report.add("PG1", w, k, n**3, law="p({xyz}) = p(x), q({xyz}) = q(z) on defined triples")

    x2, z2 = xs[:, None], xs[None, :]
    w, k = first_witness((p[x2] == p[z2]) & (t[x2, x2, z2] != z2))
    report.add("PG2-left", w, k, n**2, law="{xxz} = z when defined")
    w, k = first_witness((q[x2] == q[z2]) & (t[x2, z2, z2] != x2))
    report.add("PG2-right", w, k, n**2, law="{yxx} = y when defined")

    def pg3_left(v):
        # (v, y, x, z): q(v) = q(y) = q(x), p(x) = p(z)
        yy, xx, zz = xs[:, None, None], xs[None, :, None], xs[None, None, :]
        ok = (q[v] == q[yy]) & (q[yy] == q[xx]) & (p[xx] == p[zz])
        return ok & (t[v][yy, t[yy, xx, zz]] != t[v][xx, zz])

    w, k = first_witness_sliced(pg3_left, n, 4)
    report.add("PG3-left", w, k, n**4, law="{vy{yxz}} = {vxz} when defined")

    def pg3_right(yv):
        # (y, x, z, w): q(y) = q(x), p(x) = p(z) = p(w)
        xx, zz, ww = xs[:, None, None], xs[None, :, None], xs[None, None, :]
        ok = (q[yv] == q[xx]) & (p[xx] == p[zz]) & (p[zz] == p[ww])
        return ok & (t[t[yv][xx, zz], zz, ww] != t[yv][xx, ww])

    w, k = first_witness_sliced(pg3_right, n, 4)
    report.add("PG3-right", w, k, n**4, law="{{yxz}zw} = {yxw} when defined")
    return report


# ---------------------------------------------------------------------------
# the quotient groupoids


@dataclass(frozen=True, eq=False)
class QuotientGroupoidSemigroup:
    """``X^-1 X`` (``side="right"``) or ``X X^-1`` (``side="left"``) with its pseudoproduct.

    ``pairs`` lists the admissible pairs in lexicographic order, ``pair_class``
    maps an ``(x, y)`` to its class (``-1`` when not admissible) and ``reps``
    holds the least pair of each class. ``order_leq[a, b]`` is the induced order
    on classes.
    """

    side: str
    view: PregroupoidView
    pairs: np.ndarray
    pair_class: np.ndarray
    reps: np.ndarray
    semigroup: InverseSemigroup
    order_leq: np.ndarray

    @property
    def size(self) -> int:
        return len(self.reps)

    @property
    def heap(self) -> GeneralizedHeap:
        return self.view.heap

    def cls(self, x: int, y: int) -> int:
        c = int(self.pair_class[x, y])
        if c < 0:
            raise KeyError(f"({x}, {y}) is not an admissible pair")
        return c

    def members(self, c: int) -> np.ndarray:
        return self.pairs[self.pair_class[self.pairs[:, 0], self.pairs[:, 1]] == c]

    def identity_of(self, x: int) -> int:
        """Class of ``(x, x)``; an idempotent."""
        return int(self.pair_class[x, x])

    def base_quotient(self) -> QuotientMap:
        """Semilattice the idempotents are identified with: ``F`` on the right, ``E`` on the left."""
        return self.view.q if self.side == RIGHT else self.view.p


def _admissible(V: PregroupoidView, side: str) -> np.ndarray:
    key = V.p.class_of if side == RIGHT else V.q.class_of
    return key[:, None] == key[None, :]


def _equiv(V: PregroupoidView, side: str, x, y, u, v):
    """Class criterion between pairs ``(x, y)`` and ``(u, v)`` (broadcasting)."""
    t = V.heap.ter
    if side == RIGHT:
        q = V.q.class_of
        return (q[x] == q[u]) & (q[y] == q[v]) & (y == t[x, u, v])
    p = V.p.class_of
    return (p[x] == p[u]) & (p[y] == p[v]) & (x == t[u, v, y])


def _pseudoproduct(V: PregroupoidView, side: str, x, y, u, v):
    """Pair representing ``[x,y] (x) [u,v]`` (broadcasting)."""
    t = V.heap.ter
    if side == RIGHT:
        # x^-1 y (x) u^-1 v = {{yuu} y x}^-1 {yuv}
        return t[t[y, u, u], y, x], t[y, u, v]
    # x y^-1 (x) u v^-1 = {xyu} {vu{yyu}}^-1
    return t[x, y, u], t[v, u, t[y, y, u]]


def _leq(V: PregroupoidView, side: str, x, y, u, v):
    """Order on pairs: ``[x,y] <= [u,v]`` (broadcasting)."""
    t = V.heap.ter
    if side == RIGHT:
        # x = x * u and y = {xuv}
        return (x == V.bands.bullet[x, u]) & (y == t[x, u, v])
    # y = v o y and x = {uvy}
    return (y == V.bands.circ[v, y]) & (x == t[u, v, y])


def _partial_product(V: PregroupoidView, side: str, x, y, u, v):
    """Groupoid product where defined: returns ``(defined, a, b)``."""
    t = V.heap.ter
    if side == RIGHT:
        q = V.q.class_of
        return q[y] == q[u], x, t[y, u, v]
    p = V.p.class_of
    return p[y] == p[u], t[x, y, u], v


def _classes(V: PregroupoidView, side: str, pairs: np.ndarray) -> np.ndarray:
    """Class label per admissible pair, numbered by least member pair."""
    x, y = pairs[:, 0], pairs[:, 1]
    key_map = V.q.class_of if side == RIGHT else V.p.class_of
    keys = key_map[x] * (int(key_map.max()) + 1) + key_map[y]
    root = np.empty(len(pairs), dtype=np.int64)
    # only pairs with equal key pairs can be related, so close each bucket separately
    for key in np.unique(keys):
        idx = np.flatnonzero(keys == key)
        bx, by = x[idx], y[idx]
        rel = _equiv(V, side, bx[:, None], by[:, None], bx[None, :], by[None, :])
        try:
            local = classes_from_relation(rel)
        except InternalInconsistencyError as exc:
            raise InternalInconsistencyError(f"{side} pair relation: {exc}") from None
        firsts = np.array([idx[np.argmax(local == c)] for c in range(int(local.max()) + 1)])
        root[idx] = firsts[local]
    order = {r: k for k, r in enumerate(sorted(set(root.tolist())))}
    return np.array([order[r] for r in root.tolist()], dtype=np.int64)


def _random_members(labels: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """One uniformly chosen member index per class."""
    perm = np.argsort(labels, kind="stable")
    counts = np.bincount(labels, minlength=k)
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    pick = starts + (rng.random(k) * counts).astype(np.int64)
    return perm[pick]


def _build(X: GeneralizedHeap, side: str, view: PregroupoidView | None, seed: int, rounds: int):
    V = view if view is not None else pregroupoid_view(X)
    n = V.n
    pairs = np.argwhere(_admissible(V, side)).astype(np.int64)
    labels = _classes(V, side, pairs)
    k = int(labels.max()) + 1
    pair_class = np.full((n, n), -1, dtype=np.int64)
    pair_class[pairs[:, 0], pairs[:, 1]] = labels
    first = np.array([np.argmax(labels == c) for c in range(k)])
    reps = pairs[first]

    def table_for(r):
        a, b = _pseudoproduct(V, side, r[:, 0][:, None], r[:, 1][:, None], r[:, 0][None, :], r[:, 1][None, :])
        return pair_class[a, b], (a, b)

    table, (a, b) = table_for(reps)
    bad = np.argwhere(table < 0)
    if len(bad):
        i, j = bad[0]
        raise InternalInconsistencyError(
            f"{side} pseudoproduct of classes {i}, {j} gives the non-admissible pair "
            f"({a[i, j]}, {b[i, j]})"
        )

    def leq_for(r):
        return _leq(V, side, r[:, 0][:, None], r[:, 1][:, None], r[:, 0][None, :], r[:, 1][None, :])

    order_leq = leq_for(reps)

    rng = np.random.default_rng(seed)
    for rnd in range(rounds):
        alt = pairs[_random_members(labels, k, rng)]
        alt_table, _ = table_for(alt)
        diff = np.argwhere(alt_table != table)
        if len(diff):
            i, j = diff[0]
            raise InternalInconsistencyError(
                f"{side} pseudoproduct depends on representatives: classes ({i}, {j}) "
                f"via {tuple(alt[i])}, {tuple(alt[j])} in round {rnd}"
            )
        diff = np.argwhere(leq_for(alt) != order_leq)
        if len(diff):
            i, j = diff[0]
            raise InternalInconsistencyError(f"{side} order depends on representatives at classes ({i}, {j})")

    try:
        S = recognize_inverse(FiniteSemigroup(table))
    except MalformedTableError as exc:
        raise InternalInconsistencyError(f"{side} pseudoproduct: {exc}") from None
    except NotInverseError as exc:
        raise InternalInconsistencyError(f"{side} quotient is not inverse: {exc}") from None

    # the inverse of [x, y] is [y, x]
    swapped = pair_class[pairs[:, 1], pairs[:, 0]]
    bad = np.flatnonzero(S.inv[labels] != swapped)
    if len(bad):
        x, y = pairs[bad[0]]
        raise InternalInconsistencyError(f"{side} inverse of class of ({x}, {y}) is not the class of ({y}, {x})")

    for arr in (pairs, pair_class, reps, order_leq):
        arr.setflags(write=False)
    return QuotientGroupoidSemigroup(side, V, pairs, pair_class, reps, S, order_leq)


def build_right(
    X: GeneralizedHeap, view: PregroupoidView | None = None, seed: int = 0, rounds: int = 100
) -> QuotientGroupoidSemigroup:
    """``X^-1 X``: pairs with ``p(x) = p(y)``, identified when ``q(x) = q(u)``, ``q(y) = q(v)``, ``y = {xuv}``.

    The product table is computed on least representatives and then recomputed
    for ``rounds`` seeded random choices of representatives; any difference
    raises :class:`InternalInconsistencyError`.
    """
    return _build(X, RIGHT, view, seed, rounds)


def build_left(
    X: GeneralizedHeap, view: PregroupoidView | None = None, seed: int = 0, rounds: int = 100
) -> QuotientGroupoidSemigroup:
    """``X X^-1``: pairs with ``q(x) = q(y)``, identified when ``p(x) = p(u)``, ``p(y) = p(v)``, ``x = {uvy}``."""
    return _build(X, LEFT, view, seed, rounds)


def check_groupoid(G: QuotientGroupoidSemigroup) -> ValidationReport:
    """Consistency of the order, identities, groupoid product and pseudoproduct."""
    V, side = G.view, G.side
    S = G.semigroup
    k = G.size
    n = V.n
    leq = G.order_leq
    pc = G.pair_class
    pairs = G.pairs
    K = len(pairs)
    report = ValidationReport(f"{side} groupoid")

    ks = np.arange(k)
    a, b, c = ks[:, None, None], ks[None, :, None], ks[None, None, :]
    w, cnt = first_witness(~leq[ks, ks])
    report.add("order-reflexive", w, cnt, k)
    w, cnt = first_witness(leq & leq.T & (ks[:, None] != ks[None, :]))
    report.add("order-antisymmetric", w, cnt, k**2)
    w, cnt = first_witness(leq[a, b] & leq[b, c] & ~leq[a, c])
    report.add("order-transitive", w, cnt, k**3)

    # the order on pairs is constant on classes
    px, py = pairs[:, 0], pairs[:, 1]
    lab = pc[px, py]
    full = _leq(V, side, px[:, None], py[:, None], px[None, :], py[None, :])
    w, cnt = first_witness(full != leq[lab[:, None], lab[None, :]])
    if w is not None:
        w = (*pairs[w[0]], *pairs[w[1]])
    report.add("order-on-representatives", w, cnt, K**2)

    w, cnt = first_witness(leq != natural_order_table(S))
    report.add("order-is-natural-order", w, cnt, k**2, law="induced order = natural order of the semigroup")

    # idempotents are exactly the classes of (x, x)
    xs = np.arange(n)
    ident = pc[xs, xs]
    is_e = S.mul[ks, ks] == ks
    from_pairs = np.zeros(k, dtype=bool)
    from_pairs[ident] = True
    w, cnt = first_witness(is_e != from_pairs)
    report.add("idempotents-are-identities", w, cnt, k)

    # identities <-> base semilattice, as ordered sets
    base = G.base_quotient()
    blab = base.class_of
    same_id = ident[:, None] == ident[None, :]
    same_base = blab[:, None] == blab[None, :]
    w, cnt = first_witness(same_id != same_base)
    report.add("identities-biject-semilattice", w, cnt, n**2)
    bleq = base.leq()
    w, cnt = first_witness(leq[ident[:, None], ident[None, :]] != bleq[blab[:, None], blab[None, :]])
    report.add("identities-order-isomorphic", w, cnt, n**2)

    # groupoid product agrees with the pseudoproduct wherever it is defined
    dfd, pa, pb = _partial_product(V, side, px[:, None], py[:, None], px[None, :], py[None, :])
    got = pc[pa, pb]
    prod = S.mul[lab[:, None], lab[None, :]]
    w, cnt = first_witness(dfd & (got != prod))
    if w is not None:
        w = (*pairs[w[0]], *pairs[w[1]])
    report.add("groupoid-product", w, cnt, K**2, law="defined products agree with the pseudoproduct")

    # corestriction (right) / restriction (left) and its uniqueness
    bullet, circ, t = V.bands.bullet, V.bands.circ, V.heap.ter
    end_id = pc[G.reps[:, 0], G.reps[:, 0]] if side == RIGHT else pc[G.reps[:, 1], G.reps[:, 1]]
    if side == RIGHT:
        below_count = (bullet[xs[None, :], xs[:, None]] == xs[None, :]).sum(axis=1)
        total = int(below_count[px].sum())
    else:
        below_count = (circ[xs[:, None], xs[None, :]] == xs[None, :]).sum(axis=1)
        total = int(below_count[py].sum())
    witness, checked = None, 0
    for i in range(K):
        x, y = int(px[i]), int(py[i])
        if side == RIGHT:
            zs = np.flatnonzero(bullet[xs, x] == xs)  # z^-1 z <= x^-1 x
            ra, rb = zs, t[zs, x, y]
        else:
            zs = np.flatnonzero(circ[y, xs] == xs)  # z z^-1 <= y y^-1
            ra, rb = t[x, y, zs], zs
        target = lab[i]
        cand = pc[ra, rb]
        below = leq[:, target]
        for j, z in enumerate(zs):
            checked += 1
            cz = pc[z, z]
            ok = cand[j] >= 0 and leq[cand[j], target]
            if ok:
                unique = np.flatnonzero(below & (end_id == cz))
                ok = len(unique) == 1 and unique[0] == cand[j]
            if not ok:
                witness = (x, y, int(z))
                break
        if witness is not None:
            break
    name = "corestriction" if side == RIGHT else "restriction"
    report.add(name, witness, checked, total, law="unique element below with the given end identity")
    return report

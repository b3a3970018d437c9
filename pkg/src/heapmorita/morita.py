"""Equivalence bimodules and their correspondence with generalized heaps.

An equivalence bimodule joins two inverse semigroups ``S`` (acting on the
left) and ``T`` (acting on the right) through a set ``X`` with two brackets:
``br_s`` into ``S`` and ``br_t`` into ``T``. Going one way,
``{xyz} = <x,y> z`` turns a bimodule into a heap. Going the other way,
:func:`assemble_bimodule` rebuilds ``S = X X^-1`` and ``T = X^-1 X`` from a
heap.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .finsemi import InverseSemigroup, IsoWitness, as_table, check_inverse_laws, homomorphism_witness
from .groupoid import (
    LEFT,
    RIGHT,
    QuotientGroupoidSemigroup,
    build_left,
    build_right,
    pregroupoid_view,
)
from .heap import GeneralizedHeap, derive_bands, validate_heap
from .report import InternalInconsistencyError, MalformedTableError, ValidationReport, first_witness, first_witness_sliced

MC_LAWS = {
    "MC1": "<sx, y> = s<x, y>",
    "MC2": "<y, x> = <x, y>^-1",
    "MC3": "<x, x> x = x",
    "MC4": "[x, yt] = [x, y] t",
    "MC5": "[x, y] = [y, x]^-1",
    "MC6": "x [x, x] = x",
    "MC7": "<x, y> z = x [y, z]",
}


@dataclass(frozen=True, eq=False)
class EquivalenceBimodule:
    """``act_left[s, x] = s.x``, ``act_right[x, t] = x.t``, ``br_s[x, y] = <x,y>``, ``br_t[x, y] = [x,y]``."""

    S: InverseSemigroup
    T: InverseSemigroup
    act_left: np.ndarray
    act_right: np.ndarray
    br_s: np.ndarray
    br_t: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.br_s).shape[0] if np.ndim(self.br_s) == 2 else 0
        if m < 1:
            raise MalformedTableError("bimodule carrier must be nonempty")
        shapes = {
            "act_left": ((self.S.n, m), m),
            "act_right": ((m, self.T.n), m),
            "br_s": ((m, m), self.S.n),
            "br_t": ((m, m), self.T.n),
        }
        for name, (shape, bound) in shapes.items():
            arr = as_table(getattr(self, name), bound, name=name)
            if arr.shape != shape:
                raise MalformedTableError(f"{name} has shape {arr.shape}, expected {shape}")
            object.__setattr__(self, name, arr)

    @property
    def m(self) -> int:
        return self.br_s.shape[0]


def eb_of(S: InverseSemigroup) -> EquivalenceBimodule:
    """``S`` acting on itself by multiplication, with ``<x,y> = x y^-1`` and ``[x,y] = x^-1 y``."""
    m, inv = S.mul, S.inv
    return EquivalenceBimodule(S, S, m, m, m[:, inv], m[inv, :])


def validate_bimodule(B: EquivalenceBimodule) -> ValidationReport:
    """Exhaustively check the module laws, unitarity, surjectivity and the seven bracket axioms."""
    S, T = B.S, B.T
    L, R, bs, bt = B.act_left, B.act_right, B.br_s, B.br_t
    ms, mt = S.mul, T.mul
    ns, nt, m = S.n, T.n, B.m
    sv, tv, xv = np.arange(ns), np.arange(nt), np.arange(m)
    report = ValidationReport("bimodule")
    report.extend(check_inverse_laws(S), "S:")
    report.extend(check_inverse_laws(T), "T:")

    # (s s') x = s (s' x) over (s, s', x)
    w, k = first_witness(L[ms[:, :, None], xv[None, None, :]] != L[sv[:, None, None], L[None, :, :]])
    report.add("left-action", w, k, ns * ns * m, law="(st)x = s(tx)")
    # x (t t') = (x t) t' over (x, t, t')
    w, k = first_witness(R[xv[:, None, None], mt[None, :, :]] != R[R[:, :, None], tv[None, None, :]])
    report.add("right-action", w, k, m * nt * nt, law="x(tu) = (xt)u")
    # (s x) t = s (x t) over (s, x, t)
    w, k = first_witness(R[L[:, :, None], tv[None, None, :]] != L[sv[:, None, None], R[None, :, :]])
    report.add("compatibility", w, k, ns * m * nt, law="(sx)t = s(xt)")

    hit = np.zeros(m, dtype=bool)
    hit[L.ravel()] = True
    w, k = first_witness(~hit)
    report.add("left-unitary", w, k, m, law="SX = X")
    hit = np.zeros(m, dtype=bool)
    hit[R.ravel()] = True
    w, k = first_witness(~hit)
    report.add("right-unitary", w, k, m, law="XT = X")
    hit = np.zeros(ns, dtype=bool)
    hit[bs.ravel()] = True
    w, k = first_witness(~hit)
    report.add("br_s-surjective", w, k, ns)
    hit = np.zeros(nt, dtype=bool)
    hit[bt.ravel()] = True
    w, k = first_witness(~hit)
    report.add("br_t-surjective", w, k, nt)

    # MC1 over (s, x, y)
    w, k = first_witness(bs[L[:, :, None], xv[None, None, :]] != ms[sv[:, None, None], bs[None, :, :]])
    report.add("MC1", w, k, ns * m * m, law=MC_LAWS["MC1"])
    w, k = first_witness(bs.T != S.inv[bs])
    report.add("MC2", w, k, m * m, law=MC_LAWS["MC2"])
    w, k = first_witness(L[bs[xv, xv], xv] != xv)
    report.add("MC3", w, k, m, law=MC_LAWS["MC3"])
    # MC4 over (x, y, t)
    w, k = first_witness(bt[xv[:, None, None], R[None, :, :]] != mt[bt[:, :, None], tv[None, None, :]])
    report.add("MC4", w, k, m * m * nt, law=MC_LAWS["MC4"])
    w, k = first_witness(bt != T.inv[bt.T])
    report.add("MC5", w, k, m * m, law=MC_LAWS["MC5"])
    w, k = first_witness(R[xv, bt[xv, xv]] != xv)
    report.add("MC6", w, k, m, law=MC_LAWS["MC6"])
    # MC7 over (x, y, z)
    w, k = first_witness(L[bs[:, :, None], xv[None, None, :]] != R[xv[:, None, None], bt[None, :, :]])
    report.add("MC7", w, k, m**3, law=MC_LAWS["MC7"])
    return report


def check_bracket_orders(B: EquivalenceBimodule) -> ValidationReport:
    """Diagonal brackets are idempotent and the two orders they induce on ``X`` agree.

    ``x <=_S y`` iff ``x = <x,x> y`` and ``x <=_T y`` iff ``x = y [x,x]``; both must
    be partial orders and equal as sets of pairs.
    """
    S, T = B.S, B.T
    xv = np.arange(B.m)
    m = B.m
    report = ValidationReport("bracket orders")
    ds, dt = B.br_s[xv, xv], B.br_t[xv, xv]
    w, k = first_witness(S.mul[ds, ds] != ds)
    report.add("br_s-diagonal-idempotent", w, k, m)
    w, k = first_witness(T.mul[dt, dt] != dt)
    report.add("br_t-diagonal-idempotent", w, k, m)

    leq_s = B.act_left[ds[:, None], xv[None, :]] == xv[:, None]
    leq_t = B.act_right[xv[None, :], dt[:, None]] == xv[:, None]
    a, b, c = xv[:, None, None], xv[None, :, None], xv[None, None, :]
    neq = xv[:, None] != xv[None, :]
    for name, leq in (("S", leq_s), ("T", leq_t)):
        w, k = first_witness(~leq[xv, xv])
        report.add(f"order-{name}-reflexive", w, k, m)
        w, k = first_witness(leq & leq.T & neq)
        report.add(f"order-{name}-antisymmetric", w, k, m * m)
        w, k = first_witness(leq[a, b] & leq[b, c] & ~leq[a, c])
        report.add(f"order-{name}-transitive", w, k, m**3)
    w, k = first_witness(leq_s != leq_t)
    report.add("orders-coincide", w, k, m * m)
    return report


def bracket_order(B: EquivalenceBimodule) -> np.ndarray:
    xv = np.arange(B.m)
    return B.act_left[B.br_s[xv, xv][:, None], xv[None, :]] == xv[:, None]


def check_bracket_identities(B: EquivalenceBimodule) -> ValidationReport:
    """Identities that follow from the axioms, relating ``[,]`` to products and actions."""
    S, T = B.S, B.T
    L, R, bs, bt = B.act_left, B.act_right, B.br_s, B.br_t
    m, ns, nt = B.m, S.n, T.n
    xv, sv, tv = np.arange(m), np.arange(ns), np.arange(nt)
    report = ValidationReport("bracket identities")

    def product_rule(x):
        # [x,y][z,w] = [x, <y,z> w] over (x, y, z, w)
        y, z, w_ = xv[:, None, None], xv[None, :, None], xv[None, None, :]
        return T.mul[bt[x, y], bt[z, w_]] != bt[x, L[bs[y, z], w_]]

    w, k = first_witness_sliced(product_rule, m, 4)
    report.add("bracket-product", w, k, m**4, law="[x,y][z,w] = [x, <y,z>w]")
    # [x t, y] = t^-1 [x, y] over (x, t, y)
    x, t, y = xv[:, None, None], tv[None, :, None], xv[None, None, :]
    w, k = first_witness(bt[R[x, t], y] != T.mul[T.inv[t], bt[x, y]])
    report.add("bracket-right-action", w, k, m * nt * m, law="[xt, y] = t^-1 [x,y]")
    # [s x, y] = [x, s^-1 y] over (s, x, y)
    s, x, y = sv[:, None, None], xv[None, :, None], xv[None, None, :]
    w, k = first_witness(bt[L[s, x], y] != bt[x, L[S.inv[s], y]])
    report.add("bracket-left-action-first", w, k, ns * m * m, law="[sx, y] = [x, s^-1 y]")
    # [x, s y] = [s^-1 x, y] over (s, x, y)
    w, k = first_witness(bt[x, L[s, y]] != bt[L[S.inv[s], x], y])
    report.add("bracket-left-action-second", w, k, ns * m * m, law="[x, sy] = [s^-1 x, y]")
    return report


def heap_of_bimodule(B: EquivalenceBimodule, check: bool = True) -> GeneralizedHeap:
    """``{xyz} = <x,y> z``."""
    X = GeneralizedHeap(B.act_left[B.br_s[:, :, None], np.arange(B.m)[None, None, :]])
    if check:
        validate_heap(X).raise_on_failure("bimodule produced a table that is not a heap")
    return X


@dataclass(frozen=True, eq=False)
class Construction:
    """Everything built from one heap: both quotient semigroups and the bimodule joining them."""

    heap: GeneralizedHeap
    left: QuotientGroupoidSemigroup
    right: QuotientGroupoidSemigroup
    bimodule: EquivalenceBimodule


def construct(X: GeneralizedHeap, seed: int = 0, rounds: int = 100) -> Construction:
    V = pregroupoid_view(X, derive_bands(X))
    left = build_left(X, view=V, seed=seed, rounds=rounds)
    right = build_right(X, view=V, seed=seed, rounds=rounds)
    return Construction(X, left, right, _assemble(X, left, right))


def _assemble(X: GeneralizedHeap, left: QuotientGroupoidSemigroup, right: QuotientGroupoidSemigroup):
    t = X.ter
    n = X.n
    xv = np.arange(n)
    bands = left.view.bands
    # x y^-1 . z = {xyz}; z . x^-1 y = {zxy}
    lr, rr = left.reps, right.reps
    act_left = t[lr[:, 0][:, None], lr[:, 1][:, None], xv[None, :]]
    act_right = t[xv[:, None], rr[:, 0][None, :], rr[:, 1][None, :]]

    # actions are constant on classes
    for G, name in ((left, "left action"), (right, "right action")):
        px, py = G.pairs[:, 0], G.pairs[:, 1]
        lab = G.pair_class[px, py]
        if G.side == LEFT:
            mask = t[px[:, None], py[:, None], xv[None, :]] != act_left[lab[:, None], xv[None, :]]
        else:
            mask = t[xv[None, :], px[:, None], py[:, None]] != act_right[xv[None, :], lab[:, None]]
        w, _ = first_witness(mask)
        if w is not None:
            raise InternalInconsistencyError(
                f"{name} depends on the representative: pair ({px[w[0]]}, {py[w[0]]}), element {w[1]}"
            )

    # <x,y> = {xyy}{yxx}^-1 and [x,y] = {yyx}^-1{xxy}
    bullet, circ = bands.bullet, bands.circ
    br_s = left.pair_class[bullet, bullet.T]
    br_t = right.pair_class[circ.T, circ]
    for name, br in (("<,>", br_s), ("[,]", br_t)):
        bad = np.argwhere(br < 0)
        if len(bad):
            raise InternalInconsistencyError(f"bracket {name} of {tuple(bad[0])} is not an admissible pair")
    return EquivalenceBimodule(left.semigroup, right.semigroup, act_left, act_right, br_s, br_t)


def assemble_bimodule(X: GeneralizedHeap, seed: int = 0, rounds: int = 100) -> EquivalenceBimodule:
    """The equivalence bimodule ``(X X^-1, X^-1 X, X)`` of a heap.

    Left action ``x y^-1 . z = {xyz}``, right action ``z . x^-1 y = {zxy}``,
    ``<x,y> = {xyy}{yxx}^-1`` and ``[x,y] = {yyx}^-1{xxy}``.
    """
    return construct(X, seed=seed, rounds=rounds).bimodule


def roundtrip_heap(X: GeneralizedHeap, seed: int = 0, rounds: int = 100) -> ValidationReport:
    """Heap -> bimodule -> heap must reproduce the ternary table exactly."""
    B = assemble_bimodule(X, seed=seed, rounds=rounds)
    Y = heap_of_bimodule(B, check=False)
    report = ValidationReport("heap round trip")
    w, k = first_witness(Y.ter != X.ter)
    report.add("table-equal", w, k, X.n**3, law="{{xyy}{yxx}z} = {xyz}")
    return report


@dataclass
class BimoduleRoundTrip:
    report: ValidationReport
    alpha: IsoWitness
    beta: IsoWitness
    construction: Construction | None = None

    @property
    def passed(self) -> bool:
        return self.report.passed


def _class_map(G: QuotientGroupoidSemigroup, bracket: np.ndarray, name: str, report: ValidationReport):
    """Send each class of ``G`` to the bracket of its pairs; record well-definedness."""
    px, py = G.pairs[:, 0], G.pairs[:, 1]
    lab = G.pair_class[px, py]
    image = bracket[G.reps[:, 0], G.reps[:, 1]]
    w, k = first_witness(bracket[px, py] != image[lab])
    if w is not None:
        w = (int(px[w[0]]), int(py[w[0]]))
    report.add(f"{name}-well-defined", w, k, len(px))
    return image


def roundtrip_bimodule(B: EquivalenceBimodule, seed: int = 0, rounds: int = 100) -> BimoduleRoundTrip:
    """Rebuild ``B`` from its heap and certify the two semigroup isomorphisms.

    ``alpha: X^-1 X -> T`` sends the class of ``(x, y)`` to ``[x, y]`` and
    ``beta: X X^-1 -> S`` sends it to ``<x, y>``. Both must be well defined,
    bijective and multiplicative, carry the rebuilt actions to the original
    ones, and carry the rebuilt brackets to the original brackets.
    """
    X = heap_of_bimodule(B)
    C = construct(X, seed=seed, rounds=rounds)
    B1 = C.bimodule
    report = ValidationReport("bimodule round trip")
    witnesses, maps = {}, {}
    for name, G, target, bracket in (("alpha", C.right, B.T, B.br_t), ("beta", C.left, B.S, B.br_s)):
        phi = _class_map(G, bracket, name, report)
        k = G.size
        counts = np.bincount(phi, minlength=target.n)
        bijective = k == target.n and bool(np.all(counts == 1))
        w = None
        if not bijective:
            w = (int(np.argmax(counts != 1)),)
        report.add(f"{name}-bijective", w, target.n, target.n, detail=f"{k} classes onto {target.n} elements")
        hw = homomorphism_witness(G.semigroup, target, phi)
        report.add(f"{name}-homomorphism", hw, k * k if hw is None else hw[0] * k + hw[1] + 1, k * k)
        ok = bijective and hw is None
        witnesses[name] = IsoWitness(tuple(int(v) for v in phi)) if ok else IsoWitness(
            None, f"{name} is not an isomorphism", ()
        )
        maps[name] = phi

    alpha, beta = maps["alpha"], maps["beta"]
    xv = np.arange(B.m)
    # x . y^-1 z = x alpha(y^-1 z); dually for the left action
    w, k = first_witness(B1.act_right != B.act_right[xv[:, None], alpha[None, :]])
    report.add("right-action-equivariant", w, k, B1.act_right.size)
    w, k = first_witness(B1.act_left != B.act_left[beta[:, None], xv[None, :]])
    report.add("left-action-equivariant", w, k, B1.act_left.size)
    w, k = first_witness(alpha[B1.br_t] != B.br_t)
    report.add("br_t-compatible", w, k, B.m**2)
    w, k = first_witness(beta[B1.br_s] != B.br_s)
    report.add("br_s-compatible", w, k, B.m**2)
    return BimoduleRoundTrip(report, witnesses["alpha"], witnesses["beta"], C)


def bimodule_equal(A: EquivalenceBimodule, B: EquivalenceBimodule) -> bool:
    return (
        A.S.equals(B.S)
        and A.T.equals(B.T)
        and all(np.array_equal(getattr(A, f), getattr(B, f)) for f in ("act_left", "act_right", "br_s", "br_t"))
    )


__all__ = [
    "EquivalenceBimodule",
    "Construction",
    "BimoduleRoundTrip",
    "eb_of",
    "validate_bimodule",
    "check_bracket_orders",
    "check_bracket_identities",
    "bracket_order",
    "heap_of_bimodule",
    "construct",
    "assemble_bimodule",
    "roundtrip_heap",
    "roundtrip_bimodule",
    "bimodule_equal",
    "RIGHT",
    "LEFT",
]

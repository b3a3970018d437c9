#!/usr/bin/env python3
"""Regenerate tests/fixtures.

Good fixtures come straight from the generators. Each broken fixture is a
single-entry mutation of GH(I_2) or EB(I_2), chosen by exhaustive search as
the mutation that breaks the target axiom while breaking the fewest other
checks (ties go to the earliest table position, then the smallest value).

Usage:
    python3 scripts/make_fault_fixtures.py [--out tests/fixtures]
"""
from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from heapmorita.finsemi import FiniteSemigroup, PartialBijection, semilattice_chain, symmetric_inverse_monoid
from heapmorita.formats import format_atlas, format_bimodule, format_heap, format_semigroup
from heapmorita.groupoid import build_right
from heapmorita.heap import GeneralizedHeap, atlas_closure, gh_of, validate_heap
from heapmorita.morita import EquivalenceBimodule, eb_of, validate_bimodule

HEAP_AXIOMS = ["A1", "A2", "A3", "A4"]
MC_AXIOMS = [f"MC{i}" for i in range(1, 8)]
BIMODULE_TABLES = ["act_left", "act_right", "br_s", "br_t"]


def best_heap_mutation(base: np.ndarray, axiom: str):
    n = base.shape[0]
    best = None
    for pos in np.ndindex(base.shape):
        for value in range(n):
            if value == base[pos]:
                continue
            ter = base.copy()
            ter[pos] = value
            report = validate_heap(GeneralizedHeap(ter))
            if report[axiom].passed:
                continue
            score = (len(report.failures()), pos, value)
            if best is None or score < best[0]:
                best = (score, ter)
    return best


def best_bimodule_mutation(B: EquivalenceBimodule, axiom: str, taken: set):
    best = None
    for t_index, name in enumerate(BIMODULE_TABLES):
        table = getattr(B, name)
        bound = {"act_left": B.m, "act_right": B.m, "br_s": B.S.n, "br_t": B.T.n}[name]
        for pos in np.ndindex(table.shape):
            for value in range(bound):
                if value == table[pos] or (name, pos, value) in taken:
                    continue
                arr = table.copy()
                arr[pos] = value
                tables = {k: getattr(B, k) for k in BIMODULE_TABLES}
                tables[name] = arr
                M = EquivalenceBimodule(B.S, B.T, **tables)
                report = validate_bimodule(M)
                if report[axiom].passed:
                    continue
                score = (len(report.failures()), t_index, pos, value)
                if best is None or score < best[0]:
                    best = (score, M, (name, pos, value))
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "tests" / "fixtures"))
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    def write(name: str, text: str) -> None:
        (out / name).write_text(text, encoding="utf-8")
        print(f"wrote {out / name}")

    I1, _ = symmetric_inverse_monoid(1)
    I2, maps = symmetric_inverse_monoid(2)
    X = gh_of(I2)
    fg = [PartialBijection(1, 2, ((0, 0),)), PartialBijection(1, 2, ((0, 1),))]
    fg_heap, fg_elems = atlas_closure(fg)

    write("i1.sg", format_semigroup(I1, ["symmetric inverse monoid on 1 point"]))
    write("i2.sg", format_semigroup(I2, ["symmetric inverse monoid on 2 points"] + [f"{i} = {f}" for i, f in enumerate(maps)]))
    write("chain7.sg", format_semigroup(semilattice_chain(7), ["chain 0 < 1 < ... < 6 under min"]))
    write("gh_i2.heap", format_heap(X, ["{xyz} = x y^-1 z on I_2"]))
    write("eb_i2.bim", format_bimodule(eb_of(I2), ["I_2 acting on itself"]))
    write("one.heap", format_heap(gh_of(semilattice_chain(1)), ["one-element heap"]))
    write("fg.atlas", format_atlas(1, 2, fg, ["f: 0 -> 0 and g: 0 -> 1"]))
    write("fg.heap", format_heap(fg_heap, ["closure of fg.atlas"] + [f"{i} = {f}" for i, f in enumerate(fg_elems)]))
    write("xinvx_of_gh_i2.sg", format_semigroup(build_right(X).semigroup, ["X^-1 X for X = GH(I_2)"]))

    not_assoc = FiniteSemigroup([[1, 0], [0, 0]], check=False)
    write("not_assoc.sg", format_semigroup(not_assoc, ["(0*0)*1 = 1*1 = 0 but 0*(0*1) = 0*0 = 1"]))
    write("bad_header.heap", "heep v1\nn 1\n0\n")
    write("out_of_range.sg", "semigroup v1\nn 2\n0 0\n0 2\n")
    write("short_row.heap", "heap v1\nn 2\n0 0\n0 1\n1 0\n")

    for axiom in HEAP_AXIOMS:
        (_, pos, value), ter = best_heap_mutation(X.ter, axiom)
        note = f"GH(I_2) with {{{' '.join(map(str, pos))}}} changed from {X.ter[pos]} to {value}; breaks {axiom}"
        write(f"broken_{axiom.lower()}.heap", format_heap(GeneralizedHeap(ter), [note]))

    # each bimodule fixture gets its own mutation, so no two files coincide
    B = eb_of(I2)
    taken: set = set()
    for axiom in MC_AXIOMS:
        _, M, (name, pos, value) = best_bimodule_mutation(B, axiom, taken)
        taken.add((name, pos, value))
        note = f"EB(I_2) with {name}{list(pos)} changed from {getattr(B, name)[pos]} to {value}; breaks {axiom}"
        write(f"broken_{axiom.lower()}.bim", format_bimodule(M, [note]))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

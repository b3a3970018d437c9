"""Plain-text formats: ``semigroup v1``, ``heap v1``, ``atlas v1`` and ``bimodule v1``.

All indices are 0-based and whitespace separated. Lines whose first
non-blank character is ``#`` are comments, as is anything after a ``#``.

``semigroup v1``::

    semigroup v1
    n 2
    inv 0 1          # optional
    0 0              # row a holds a*b for b = 0..n-1
    0 1

``heap v1`` has a ``n`` line and then ``n*n`` rows; the row for ``(x, y)``
(``x`` outer) holds ``{x y z}`` for ``z = 0..n-1``.

``atlas v1`` has a ``src k dst m`` line and one ``map s:t s:t ...`` line per
partial bijection (``map`` alone is the empty map).

``bimodule v1`` has a ``S ns T nt X m`` line, two embedded ``semigroup v1``
blocks (S then T, each with an ``inv`` line), and then the labelled tables
``actL`` (ns x m), ``actR`` (m x nt), ``brS`` (m x m) and ``brT`` (m x m).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .finsemi import FiniteSemigroup, InverseSemigroup, PartialBijection, recognize_inverse
from .heap import GeneralizedHeap
from .morita import EquivalenceBimodule


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {col}" if col is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.col = col


@dataclass
class _Token:
    text: str
    line: int
    col: int


class _Reader:
    def __init__(self, text: str):
        self.lines: list[list[_Token]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0]
            toks = []
            pos = 0
            for word in body.split():
                pos = body.index(word, pos)
                toks.append(_Token(word, lineno, pos + 1))
                pos += len(word)
            if toks:
                self.lines.append(toks)
        self.i = 0
        self.last_line = text.count("\n") + 1

    def next(self, what: str) -> list[_Token]:
        if self.i >= len(self.lines):
            raise ParseError(f"unexpected end of input, expected {what}", self.last_line)
        toks = self.lines[self.i]
        self.i += 1
        return toks

    def peek_word(self) -> str | None:
        return self.lines[self.i][0].text if self.i < len(self.lines) else None

    def header(self, kind: str) -> None:
        toks = self.next(f"'{kind} v1' header")
        words = [t.text for t in toks]
        if words != [kind, "v1"]:
            raise ParseError(f"expected header '{kind} v1', got {' '.join(words)!r}", toks[0].line, toks[0].col)

    def keyed(self, keys: Sequence[str]) -> list[int]:
        """Parse a line ``k1 v1 k2 v2 ...`` with the given keys."""
        toks = self.next(" ".join(f"{k} <int>" for k in keys))
        if len(toks) != 2 * len(keys):
            raise ParseError(f"expected '{' '.join(k + ' <int>' for k in keys)}'", toks[0].line, toks[0].col)
        vals = []
        for key, (kt, vt) in zip(keys, zip(toks[::2], toks[1::2])):
            if kt.text != key:
                raise ParseError(f"expected {key!r}, got {kt.text!r}", kt.line, kt.col)
            vals.append(_int(vt))
        return vals

    def row(self, width: int, bound: int, what: str, keyword: str | None = None) -> list[int]:
        toks = self.next(what)
        if keyword is not None:
            if toks[0].text != keyword:
                raise ParseError(f"expected {keyword!r}", toks[0].line, toks[0].col)
            toks = toks[1:]
        if len(toks) != width:
            t = toks[-1] if toks else None
            raise ParseError(
                f"{what}: expected {width} entries, got {len(toks)}",
                t.line if t else self.lines[self.i - 1][0].line,
                t.col if t else None,
            )
        out = []
        for t in toks:
            v = _int(t)
            if not 0 <= v < bound:
                raise ParseError(f"{what}: index {v} out of range 0..{bound - 1}", t.line, t.col)
            out.append(v)
        return out

    def label(self, name: str) -> None:
        toks = self.next(f"{name!r} label")
        if [t.text for t in toks] != [name]:
            raise ParseError(f"expected table label {name!r}", toks[0].line, toks[0].col)

    def end(self) -> None:
        if self.i < len(self.lines):
            t = self.lines[self.i][0]
            raise ParseError(f"unexpected trailing content {t.text!r}", t.line, t.col)


def _int(tok: _Token) -> int:
    try:
        return int(tok.text)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok.text!r}", tok.line, tok.col) from None


def _positive(value: int, name: str, reader: _Reader) -> int:
    if value < 1:
        raise ParseError(f"{name} must be at least 1, got {value}", reader.lines[reader.i - 1][0].line)
    return value


def _rows(arr) -> Iterable[str]:
    for row in np.asarray(arr):
        yield " ".join(str(int(v)) for v in row)


# ---------------------------------------------------------------------------
# semigroup v1


@dataclass
class SemigroupData:
    """Parsed but unvalidated semigroup: a table and an optional inverse map."""

    mul: np.ndarray
    inv: np.ndarray | None

    def semigroup(self) -> FiniteSemigroup:
        return FiniteSemigroup(self.mul)

    def inverse_semigroup(self) -> InverseSemigroup:
        """Validate associativity and the inverse map (recognised when absent)."""
        S = recognize_inverse(self.semigroup())
        if self.inv is not None and not np.array_equal(S.inv, self.inv):
            x = int(np.argmax(S.inv != self.inv))
            raise ParseError(f"inv line gives {self.inv[x]} as inverse of {x}, but it is {S.inv[x]}")
        return S


def _read_semigroup(r: _Reader) -> SemigroupData:
    r.header("semigroup")
    (n,) = r.keyed(["n"])
    _positive(n, "n", r)
    inv = None
    if r.peek_word() == "inv":
        inv = np.array(r.row(n, n, "inv line", keyword="inv"), dtype=np.int64)
    mul = np.array([r.row(n, n, f"row {a}") for a in range(n)], dtype=np.int64)
    return SemigroupData(mul, inv)


def parse_semigroup(text: str) -> SemigroupData:
    r = _Reader(text)
    data = _read_semigroup(r)
    r.end()
    return data


def format_semigroup(S: FiniteSemigroup | InverseSemigroup, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines += ["semigroup v1", f"n {S.n}"]
    if isinstance(S, InverseSemigroup):
        lines.append("inv " + " ".join(str(int(v)) for v in S.inv))
    lines += _rows(S.mul)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# heap v1


def parse_heap(text: str) -> GeneralizedHeap:
    r = _Reader(text)
    r.header("heap")
    (n,) = r.keyed(["n"])
    _positive(n, "n", r)
    rows = [r.row(n, n, f"row ({x}, {y})") for x in range(n) for y in range(n)]
    r.end()
    return GeneralizedHeap(np.array(rows, dtype=np.int64).reshape(n, n, n))


def format_heap(X: GeneralizedHeap, comments: Sequence[str] = ()) -> str:
    n = X.n
    lines = [f"# {c}" for c in comments]
    lines += ["heap v1", f"n {n}"]
    lines += _rows(X.ter.reshape(n * n, n))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# atlas v1


def parse_atlas(text: str) -> tuple[int, int, list[PartialBijection]]:
    r = _Reader(text)
    r.header("atlas")
    src, dst = r.keyed(["src", "dst"])
    if src < 0 or dst < 0:
        raise ParseError("universe sizes must be non-negative")
    maps = []
    while r.peek_word() is not None:
        toks = r.next("map line")
        if toks[0].text != "map":
            raise ParseError(f"expected 'map', got {toks[0].text!r}", toks[0].line, toks[0].col)
        pairs = []
        for t in toks[1:]:
            parts = t.text.split(":")
            if len(parts) != 2:
                raise ParseError(f"expected 's:t', got {t.text!r}", t.line, t.col)
            try:
                s, d = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"expected 's:t' integers, got {t.text!r}", t.line, t.col) from None
            if not (0 <= s < src and 0 <= d < dst):
                raise ParseError(f"pair {t.text} out of range for src {src} dst {dst}", t.line, t.col)
            pairs.append((s, d))
        try:
            maps.append(PartialBijection(src, dst, tuple(pairs)))
        except ValueError as exc:
            raise ParseError(str(exc), toks[0].line, toks[0].col) from None
    if not maps:
        raise ParseError("atlas has no maps", r.last_line)
    return src, dst, maps


def format_atlas(src: int, dst: int, maps: Sequence[PartialBijection], comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines += ["atlas v1", f"src {src} dst {dst}"]
    lines += [str(f) for f in maps]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# bimodule v1


def parse_bimodule(text: str) -> EquivalenceBimodule:
    r = _Reader(text)
    r.header("bimodule")
    ns, nt, m = r.keyed(["S", "T", "X"])
    for v, name in ((ns, "S"), (nt, "T"), (m, "X")):
        _positive(v, name, r)
    blocks = []
    for name, size in (("S", ns), ("T", nt)):
        start = r.lines[r.i][0].line if r.i < len(r.lines) else r.last_line
        data = _read_semigroup(r)
        if data.mul.shape[0] != size:
            raise ParseError(f"embedded semigroup {name} has {data.mul.shape[0]} elements, sizes line says {size}", start)
        if data.inv is None:
            raise ParseError(f"embedded semigroup {name} needs an inv line", start)
        blocks.append(data)
    tables = {}
    for label, rows, width, bound in (
        ("actL", ns, m, m),
        ("actR", m, nt, m),
        ("brS", m, m, ns),
        ("brT", m, m, nt),
    ):
        r.label(label)
        tables[label] = np.array([r.row(width, bound, f"{label} row {i}") for i in range(rows)], dtype=np.int64)
    r.end()
    S, T = (InverseSemigroup(FiniteSemigroup(b.mul), b.inv) for b in blocks)
    return EquivalenceBimodule(S, T, tables["actL"], tables["actR"], tables["brS"], tables["brT"])


def format_bimodule(B: EquivalenceBimodule, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines += ["bimodule v1", f"S {B.S.n} T {B.T.n} X {B.m}"]
    text = "\n".join(lines) + "\n"
    text += format_semigroup(B.S) + format_semigroup(B.T)
    for label, arr in (("actL", B.act_left), ("actR", B.act_right), ("brS", B.br_s), ("brT", B.br_t)):
        text += label + "\n" + "\n".join(_rows(arr)) + "\n"
    return text

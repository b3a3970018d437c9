import numpy as np
import pytest

from corpus import FIXTURES, sim
from heapmorita.finsemi import FiniteSemigroup, PartialBijection
from heapmorita.formats import (
    ParseError,
    format_atlas,
    format_bimodule,
    format_heap,
    format_semigroup,
    parse_atlas,
    parse_bimodule,
    parse_heap,
    parse_semigroup,
)
from heapmorita.morita import bimodule_equal, eb_of
from heapmorita.report import MalformedTableError

GOOD_SG = ["i1.sg", "i2.sg", "chain7.sg", "xinvx_of_gh_i2.sg", "not_assoc.sg"]
GOOD_HEAP = ["gh_i2.heap", "one.heap", "fg.heap"] + [f"broken_a{i}.heap" for i in range(1, 5)]
GOOD_BIM = ["eb_i2.bim"] + [f"broken_mc{i}.bim" for i in range(1, 8)]


def text(name):
    return (FIXTURES / name).read_text()


# -- parse -> serialize -> parse


@pytest.mark.parametrize("name", GOOD_SG)
def test_semigroup_roundtrip(name):
    a = parse_semigroup(text(name))
    S = a.inverse_semigroup() if a.inv is not None else FiniteSemigroup(a.mul, check=False)
    b = parse_semigroup(format_semigroup(S))
    assert np.array_equal(a.mul, b.mul)
    assert (a.inv is None and b.inv is None) or np.array_equal(a.inv, b.inv)


@pytest.mark.parametrize("name", GOOD_HEAP)
def test_heap_roundtrip(name):
    X = parse_heap(text(name))
    assert parse_heap(format_heap(X)).equals(X)


@pytest.mark.parametrize("name", GOOD_BIM)
def test_bimodule_roundtrip(name):
    B = parse_bimodule(text(name))
    assert bimodule_equal(parse_bimodule(format_bimodule(B)), B)


def test_atlas_roundtrip():
    src, dst, maps = parse_atlas(text("fg.atlas"))
    assert (src, dst) == (1, 2)
    assert parse_atlas(format_atlas(src, dst, maps)) == (src, dst, maps)


def test_generated_fixture_bytes_are_canonical():
    # the fixture file is exactly what the serializer writes
    assert format_bimodule(eb_of(sim(2)[0]), ["I_2 acting on itself"]) == text("eb_i2.bim")


def test_bare_map_is_empty_map():
    _, _, maps = parse_atlas("atlas v1\nsrc 2 dst 2\nmap\nmap 0:1 1:0\n")
    assert maps[0] == PartialBijection(2, 2)
    assert maps[1](0) == 1


def test_comments_and_blank_lines_ignored():
    data = parse_semigroup("# header comment\n\nsemigroup v1  # trailing\nn 1\n  0\n")
    assert data.mul.tolist() == [[0]]


def test_inv_line_checked_against_table():
    data = parse_semigroup("semigroup v1\nn 2\ninv 1 0\n0 0\n0 1\n")
    with pytest.raises(ParseError, match="inverse of 0"):
        data.inverse_semigroup()


# -- errors carry positions


def where(exc):
    return exc.value.line, exc.value.col


def test_bad_header():
    with pytest.raises(ParseError) as exc:
        parse_heap(text("bad_header.heap"))
    assert where(exc) == (1, 1)


def test_out_of_range_index():
    with pytest.raises(ParseError, match="out of range") as exc:
        parse_semigroup(text("out_of_range.sg"))
    assert where(exc) == (4, 3)


def test_short_heap_runs_out_of_rows():
    with pytest.raises(ParseError, match="end of input") as exc:
        parse_heap(text("short_row.heap"))
    assert exc.value.line == 6


def test_short_row():
    with pytest.raises(ParseError, match="expected 2 entries, got 1") as exc:
        parse_semigroup("semigroup v1\nn 2\n0 0\n  1\n")
    assert where(exc) == (4, 3)


def test_non_integer_entry():
    with pytest.raises(ParseError, match="integer") as exc:
        parse_semigroup("semigroup v1\nn 2\n0 x\n0 1\n")
    assert where(exc) == (3, 3)


def test_trailing_content():
    with pytest.raises(ParseError, match="trailing") as exc:
        parse_semigroup("semigroup v1\nn 1\n0\n0\n")
    assert where(exc) == (4, 1)


def test_zero_size_rejected():
    with pytest.raises(ParseError, match="at least 1"):
        parse_heap("heap v1\nn 0\n")


def test_bad_size_key():
    with pytest.raises(ParseError, match="expected 'n'") as exc:
        parse_heap("heap v1\nm 1\n0\n")
    assert where(exc) == (2, 1)


def test_bimodule_block_needs_inv():
    doc = text("eb_i2.bim").replace("inv 0 1 3 2 4 5 6\n", "", 1)
    assert doc != text("eb_i2.bim")
    with pytest.raises(ParseError, match="inv line"):
        parse_bimodule(doc)


def test_bimodule_size_mismatch():
    doc = text("eb_i2.bim").replace("S 7 T 7 X 7", "S 6 T 7 X 7")
    with pytest.raises(ParseError, match="sizes line says 6"):
        parse_bimodule(doc)


def test_bimodule_wrong_label():
    doc = text("eb_i2.bim").replace("brT", "brX")
    with pytest.raises(ParseError, match="brT"):
        parse_bimodule(doc)


def test_atlas_errors():
    with pytest.raises(ParseError, match="out of range") as exc:
        parse_atlas("atlas v1\nsrc 1 dst 2\nmap 0:2\n")
    assert where(exc) == (3, 5)
    with pytest.raises(ParseError, match="s:t"):
        parse_atlas("atlas v1\nsrc 1 dst 2\nmap 0-1\n")
    with pytest.raises(ParseError):
        parse_atlas("atlas v1\nsrc 2 dst 2\nmap 0:0 1:0\n")  # not injective
    with pytest.raises(ParseError, match="no maps"):
        parse_atlas("atlas v1\nsrc 1 dst 1\n")


def test_non_associative_table_parses_but_does_not_build():
    data = parse_semigroup(text("not_assoc.sg"))
    with pytest.raises(MalformedTableError):
        data.semigroup()

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from apnforge.errors import ParseError
from apnforge.formats import (
    format_code,
    format_function,
    format_perm,
    parse_code,
    parse_function,
    parse_perms,
)
from apnforge.funcspace import PolySpec, dillon_poly, evaluate, random_quadratic
from apnforge.gf2n import make_field
from apnforge.lincode import build_code, code_equal
from apnforge.permgrp import Permutation, frobenius_perm

F6 = make_field(6)


def test_function_file():
    text = "# Gold r=1\nfield gf2e6:0x5b\n\nterm 0x1 3\n# trailing comment\nterm 0x2b 5\n"
    p = parse_function(text)
    assert p.field == F6
    assert p.terms == ((1, 3), (0x2B, 5))
    assert parse_function(format_function(p)) == p


def test_function_file_default_modulus():
    p = parse_function("field gf2e6\nterm 0x1 3\n")
    assert p.field.modulus == 0x5B


@pytest.mark.parametrize(
    "text",
    [
        "term 0x1 3\n",
        "field gf2e6\nterm 1 3\n",
        "field gf2e6\nterm 0x1\n",
        "field gf2e6\nterm 0x40 3\n",
        "field gf2e6\nterm 0x1 -3\n",
        "field gf2e6\nmonomial 0x1 3\n",
        "",
    ],
)
def test_function_file_errors(text):
    with pytest.raises(ParseError):
        parse_function(text)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_function_round_trip(seed):
    p = random_quadratic(F6, np.random.default_rng(seed))
    assert parse_function(format_function(p)) == p


def test_code_dump_round_trip():
    c = build_code(evaluate(dillon_poly("dillon_h1", F6)))
    text = format_code(c)
    head = text.splitlines()[0]
    assert head == "binarycode n=6 len=64 dim=13 field=gf2e6:0x5b"
    rows = text.splitlines()[1:]
    assert len(rows) == 13 and all(len(r) == 64 for r in rows)
    assert code_equal(parse_code(text), c)


def test_code_dump_without_field_token():
    c = build_code(evaluate(PolySpec.from_terms(F6, [(1, 3)])))
    lines = format_code(c).splitlines()
    lines[0] = "binarycode n=6 len=64 dim=13"
    assert code_equal(parse_code("\n".join(lines)), c)


def test_code_dump_errors():
    c = build_code(evaluate(PolySpec.from_terms(F6, [(1, 3)])))
    lines = format_code(c).splitlines()
    with pytest.raises(ParseError):
        parse_code("\n".join(lines[:-1]))  # missing a row
    with pytest.raises(ParseError):
        parse_code("\n".join([lines[0], lines[1][:-1]] + lines[2:]))
    with pytest.raises(ParseError):
        parse_code("binarycode n=6 len=32 dim=0")
    dup = [lines[0].replace("dim=13", "dim=2"), lines[1], lines[1]]
    with pytest.raises(ParseError):
        parse_code("\n".join(dup))


def test_perm_format():
    p = frobenius_perm(F6, 1)
    text = format_perm(p)
    assert text.startswith("perm n=64: 0 1 4")
    assert parse_perms(text + "\n# next\n" + format_perm(p.inverse())) == [p, p.inverse()]


@pytest.mark.parametrize(
    "text",
    ["perm n=3: 0 1", "perm n=3: 0 0 1", "perm 0 1 2", "perm n=3: a b c"],
)
def test_perm_format_errors(text):
    with pytest.raises(ParseError):
        parse_perms(text)


def test_perm_round_trip_random():
    rng = np.random.default_rng(0)
    perms = [Permutation(rng.permutation(16)) for _ in range(5)]
    assert parse_perms("\n".join(format_perm(p) for p in perms)) == perms

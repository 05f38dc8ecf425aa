"""Text formats: function files, code dumps and permutation lists."""

from __future__ import annotations

import re

import numpy as np

from .errors import ParseError
from .funcspace import PolySpec
from .gf2n import FieldSpec, field_from_designation, make_field
from .lincode import BinaryCode, int_to_bits
from .permgrp import Permutation


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield no, line


# --- function files ---------------------------------------------------------------
#   field gf2e6[:0x5b]
#   term 0x<coef> <exponent>


def parse_function(text: str) -> PolySpec:
    field = None
    terms = []
    for no, line in _lines(text):
        parts = line.split()
        if field is None:
            if len(parts) != 2 or parts[0] != "field":
                raise ParseError(f"line {no}: expected 'field gf2e<n>[:0x<hex>]'")
            field = field_from_designation(parts[1])
            continue
        if len(parts) != 3 or parts[0] != "term":
            raise ParseError(f"line {no}: expected 'term 0x<coef> <exponent>'")
        try:
            coef = int(parts[1], 16) if parts[1].lower().startswith("0x") else None
            exp = int(parts[2], 10)
        except ValueError:
            coef = None
        if coef is None or exp < 0:
            raise ParseError(f"line {no}: bad term {line!r}")
        if coef >= field.size:
            raise ParseError(f"line {no}: coefficient {parts[1]} outside {field.designation}")
        terms.append((coef, exp))
    if field is None:
        raise ParseError("missing field directive")
    return PolySpec.from_terms(field, terms)


def format_function(p: PolySpec) -> str:
    out = [f"field {p.field.designation}"]
    out += [f"term {c:#x} {e}" for c, e in p.terms]
    return "\n".join(out) + "\n"


def read_function(path: str) -> PolySpec:
    with open(path, encoding="utf-8") as fh:
        return parse_function(fh.read())


# --- code dumps ---------------------------------------------------------------------

_CODE_HEADER = re.compile(r"^binarycode n=(\d+) len=(\d+) dim=(\d+)(?: field=(\S+))?$")


def format_code(c: BinaryCode) -> str:
    """Header plus the RREF rows.  The optional field token pins the modulus."""
    head = f"binarycode n={c.field.n} len={c.length} dim={c.dimension} field={c.field.designation}"
    rows = ["".join("1" if b else "0" for b in int_to_bits(r, c.length)) for r in c.rref[0]]
    return "\n".join([head] + rows) + "\n"


def parse_code(text: str) -> BinaryCode:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty code dump")
    m = _CODE_HEADER.match(lines[0][1])
    if not m:
        raise ParseError("expected 'binarycode n=<n> len=<N> dim=<k>'")
    n, length, dim = int(m[1]), int(m[2]), int(m[3])
    if length != 1 << n:
        raise ParseError(f"len={length} is not 2^{n}")
    field = field_from_designation(m[4]) if m[4] else make_field(n)
    if field.n != n:
        raise ParseError(f"field {m[4]} does not match n={n}")
    rows = []
    for no, line in lines[1:]:
        if len(line) != length or set(line) - {"0", "1"}:
            raise ParseError(f"line {no}: expected {length} characters over 0/1")
        # bit x of the word is coordinate x
        rows.append(int(line[::-1], 2))
    if len(rows) != dim:
        raise ParseError(f"header says dim={dim}, found {len(rows)} rows")
    code = BinaryCode(field, rows)
    if code.dimension != dim:
        raise ParseError(f"rows have rank {code.dimension}, header says {dim}")
    return code


def read_code(path: str) -> BinaryCode:
    with open(path, encoding="utf-8") as fh:
        return parse_code(fh.read())


# --- permutations -----------------------------------------------------------------------

_PERM = re.compile(r"^perm n=(\d+):(.*)$")


def format_perm(p: Permutation) -> str:
    return f"perm n={p.size}: " + " ".join(map(str, p.images.tolist()))


def parse_perms(text: str, field: FieldSpec | None = None) -> list[Permutation]:
    """One permutation per 'perm n=<N>:' line."""
    out = []
    for no, line in _lines(text):
        m = _PERM.match(line)
        if not m:
            raise ParseError(f"line {no}: expected 'perm n=<N>: <images>'")
        try:
            images = [int(t) for t in m[2].split()]
        except ValueError:
            raise ParseError(f"line {no}: non-integer image") from None
        if len(images) != int(m[1]):
            raise ParseError(f"line {no}: n={m[1]} but {len(images)} images")
        try:
            out.append(Permutation(np.array(images), field))
        except ValueError:
            raise ParseError(f"line {no}: images are not a permutation") from None
    return out


def read_perms(path: str, field: FieldSpec | None = None) -> list[Permutation]:
    with open(path, encoding="utf-8") as fh:
        return parse_perms(fh.read(), field)

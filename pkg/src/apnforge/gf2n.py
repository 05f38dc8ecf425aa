"""Arithmetic in GF(2^n) for 2 <= n <= 16.

Elements are stored as n-bit integers in the polynomial basis: bit i is the
coefficient of u^i, where u is the class of x modulo the field polynomial.
The canonical ordering of the field (used to index code coordinates) is the
integer value of that representation.

Hot paths work on plain ints and numpy arrays through :class:`FieldSpec`;
:class:`FieldElement` is the typed wrapper used at API boundaries.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from functools import cached_property
from math import gcd

import numpy as np

from .errors import (
    FieldMismatch,
    OddDegree,
    ParseError,
    ReducibleModulus,
    UnsupportedDegree,
    ZeroInverse,
)

MIN_DEGREE = 2
MAX_DEGREE = 16

# Primitive polynomials, top bit included.
DEFAULT_MODULI = {
    2: 0x7,  # x^2+x+1
    3: 0xB,  # x^3+x+1
    4: 0x13,  # x^4+x+1
    5: 0x25,  # x^5+x^2+1
    6: 0x5B,  # x^6+x^4+x^3+x+1
    7: 0x83,  # x^7+x+1
    8: 0x11D,  # x^8+x^4+x^3+x^2+1
    9: 0x211,  # x^9+x^4+1
    10: 0x409,  # x^10+x^3+1
    11: 0x805,  # x^11+x^2+1
    12: 0x1053,  # x^12+x^6+x^4+x+1
    13: 0x201B,  # x^13+x^4+x^3+x+1
    14: 0x4443,  # x^14+x^10+x^6+x+1
    15: 0x8003,  # x^15+x+1
    16: 0x1100B,  # x^16+x^12+x^3+x+1
}

MODULUS_TABLE_ENV = "APNFORGE_MODULUS_TABLE"

_DESIGNATION = re.compile(r"^gf2e(\d+)(?::0x([0-9a-fA-F]+))?$")


# --- plain polynomial arithmetic over GF(2) -------------------------------


def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit-polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for q in range(1 << d, 1 << (d + 1)):
            if poly_mod(poly, q) == 0:
                return False
    return True


def prime_factors(m: int) -> list[int]:
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def poly_str(poly: int) -> str:
    terms = []
    for i in range(poly.bit_length() - 1, -1, -1):
        if poly >> i & 1:
            terms.append("1" if i == 0 else "x" if i == 1 else f"x^{i}")
    return "+".join(terms) or "0"


def _load_modulus_table(path: str) -> dict[int, int]:
    table = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2 or parts[0] != "field":
                raise ParseError(f"{path}:{lineno}: expected 'field gf2e<n>:0x<hex>'")
            n, modulus = parse_designation(parts[1])
            if modulus is None:
                raise ParseError(f"{path}:{lineno}: modulus table entries need an explicit modulus")
            table[n] = modulus
    return table


def default_modulus(n: int) -> int:
    path = os.environ.get(MODULUS_TABLE_ENV)
    if path:
        table = _load_modulus_table(path)
        if n in table:
            return table[n]
    return DEFAULT_MODULI[n]


def parse_designation(text: str) -> tuple[int, int | None]:
    m = _DESIGNATION.match(text.strip())
    if not m:
        raise ParseError(f"bad field designation {text!r}, expected gf2e<n>[:0x<hex>]")
    return int(m.group(1)), int(m.group(2), 16) if m.group(2) else None


# --- fields ---------------------------------------------------------------


class FieldSpec:
    """GF(2^n) with an explicit irreducible modulus.

    Construct through :func:`make_field`.  Multiplication uses log/exp tables
    built from a primitive element; ``clmul`` + ``poly_mod`` stay available as
    the reference product.
    """

    def __init__(self, n: int, modulus: int, generator_hint: int | None = None):
        self.n = n
        self.modulus = modulus
        self.size = 1 << n
        self.order = self.size - 1
        self.order_factors = prime_factors(self.order)
        g = generator_hint if generator_hint is not None else 2
        if not self._is_generator_slow(g):
            g = next(a for a in range(2, self.size) if self._is_generator_slow(a))
        self.generator = g

        exp = np.zeros(2 * self.order, dtype=np.int64)
        log = np.zeros(self.size, dtype=np.int64)
        x = 1
        for i in range(self.order):
            exp[i] = x
            log[x] = i
            x = poly_mod(clmul(x, g), modulus)
        exp[self.order:] = exp[: self.order]
        self.exp = exp
        self.log = log

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.n, self.modulus) == (other.n, other.modulus)

    def __hash__(self):
        return hash((self.n, self.modulus))

    def __repr__(self):
        return f"FieldSpec(n={self.n}, modulus={poly_str(self.modulus)})"

    @property
    def designation(self) -> str:
        return f"gf2e{self.n}:0x{self.modulus:x}"

    def _is_generator_slow(self, a: int) -> bool:
        if a == 0 or a >= self.size:
            return False
        return all(self._pow_slow(a, self.order // p) != 1 for p in self.order_factors)

    def _pow_slow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = poly_mod(clmul(r, a), self.modulus)
            a = poly_mod(clmul(a, a), self.modulus)
            e >>= 1
        return r

    # scalar ops on ints

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroInverse("0 has no inverse")
        return int(self.exp[(self.order - self.log[a]) % self.order])

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroInverse("negative power of 0")
            return 1 if e == 0 else 0
        return int(self.exp[(int(self.log[a]) * e) % self.order])

    def frob(self, a: int, j: int = 1) -> int:
        """a^(2^j); negative j gives the inverse Frobenius."""
        return self.pow(a, pow(2, j % self.n))

    def trace(self, a: int) -> int:
        return int(self.trace_table[a])

    def mult_order(self, a: int) -> int:
        if a == 0:
            raise ZeroInverse("0 has no multiplicative order")
        return self.order // gcd(self.order, int(self.log[a]))

    def is_primitive(self, a: int) -> bool:
        if a == 0:
            return False
        return all(self.pow(a, self.order // p) != 1 for p in self.order_factors)

    def primitive_elements(self):
        return (a for a in range(2, self.size) if self.is_primitive(a))

    def element(self, bits: int) -> FieldElement:
        return FieldElement(bits, self)

    def elements(self):
        return [FieldElement(a, self) for a in range(self.size)]

    # vectorised ops

    def mul_vec(self, a, b):
        """Elementwise product of two int arrays (or an array and a scalar)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp[self.log[a] + self.log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def pow_vec(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        out = self.exp[(self.log[a] * (e % self.order)) % self.order]
        return np.where(a == 0, 0, out)

    @cached_property
    def trace_table(self):
        xs = np.arange(self.size, dtype=np.int64)
        acc = xs.copy()
        y = xs
        for _ in range(self.n - 1):
            y = self.mul_vec(y, y)
            acc ^= y
        if not np.all((acc == 0) | (acc == 1)):
            raise AssertionError("trace left the prime field")
        return acc.astype(np.uint8)

    @cached_property
    def gram(self):
        """Trace form on the polynomial basis: gram[i, j] = Tr(u^i u^j)."""
        n = self.n
        return np.array(
            [[self.trace(self.mul(1 << i, 1 << j)) for j in range(n)] for i in range(n)],
            dtype=np.uint8,
        )


@dataclass(frozen=True)
class FieldElement:
    bits: int
    field: FieldSpec

    def __post_init__(self):
        if not 0 <= self.bits < self.field.size:
            raise ValueError(f"{self.bits:#x} is not an element of {self.field!r}")

    def _check(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        return None

    def __add__(self, other):
        bad = self._check(other)
        if bad is not None:
            return bad
        return FieldElement(self.bits ^ other.bits, self.field)

    __sub__ = __add__

    def __mul__(self, other):
        bad = self._check(other)
        if bad is not None:
            return bad
        return FieldElement(self.field.mul(self.bits, other.bits), self.field)

    def __truediv__(self, other):
        bad = self._check(other)
        if bad is not None:
            return bad
        return FieldElement(self.field.mul(self.bits, self.field.inv(other.bits)), self.field)

    def __pow__(self, e: int):
        return FieldElement(self.field.pow(self.bits, e), self.field)

    def __bool__(self):
        return self.bits != 0

    def __int__(self):
        return self.bits

    def __repr__(self):
        return f"0x{self.bits:x}"


@dataclass(frozen=True)
class SubfieldSpec:
    """The index-2 subfield GF(2^k) of a parent field with n = 2k."""

    parent: FieldSpec
    k: int

    def __post_init__(self):
        if self.parent.n != 2 * self.k:
            raise OddDegree(f"GF(2^{self.k}) is not the index-2 subfield of GF(2^{self.parent.n})")

    def contains(self, a: int) -> bool:
        return self.parent.frob(a, self.k) == a

    def elements(self) -> list[int]:
        return [a for a in range(self.parent.size) if self.contains(a)]

    def primitive_element(self) -> int:
        """Smallest element of multiplicative order 2^k - 1."""
        target = (1 << self.k) - 1
        return next(a for a in self.elements() if a and self.parent.mult_order(a) == target)

    def rel_trace(self, a: int) -> int:
        return a ^ self.parent.frob(a, self.k)

    def trace(self, a: int) -> int:
        """Absolute trace of a subfield element down to GF(2)."""
        f = self.parent
        acc, y = 0, a
        for _ in range(self.k):
            acc ^= y
            y = f.mul(y, y)
        return acc


def subfield(field: FieldSpec) -> SubfieldSpec:
    if field.n % 2:
        raise OddDegree(f"GF(2^{field.n}) has no subfield of index 2")
    return SubfieldSpec(field, field.n // 2)


_FIELD_CACHE: dict[tuple[int, int, int | None], FieldSpec] = {}


def make_field(n: int, modulus: int | None = None, generator_hint: int | None = None) -> FieldSpec:
    """Validated GF(2^n); the default modulus comes from the built-in table."""
    if not isinstance(n, int) or not MIN_DEGREE <= n <= MAX_DEGREE:
        raise UnsupportedDegree(f"n={n} outside {MIN_DEGREE}..{MAX_DEGREE}")
    if modulus is None:
        modulus = default_modulus(n)
    if modulus.bit_length() - 1 != n:
        raise ReducibleModulus(f"{poly_str(modulus)} does not have degree {n}")
    key = (n, modulus, generator_hint)
    if key not in _FIELD_CACHE:
        if not is_irreducible(modulus):
            raise ReducibleModulus(f"{poly_str(modulus)} is reducible over GF(2)")
        _FIELD_CACHE[key] = FieldSpec(n, modulus, generator_hint)
    return _FIELD_CACHE[key]


def field_from_designation(text: str) -> FieldSpec:
    n, modulus = parse_designation(text)
    return make_field(n, modulus)


# --- element-level operations ---------------------------------------------


def _same_field(a: FieldElement, b: FieldElement):
    if a.field != b.field:
        raise FieldMismatch(f"{a.field!r} vs {b.field!r}")


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    _same_field(a, b)
    return FieldElement(a.field.mul(a.bits, b.bits), a.field)


def power(a: FieldElement, e: int) -> FieldElement:
    return FieldElement(a.field.pow(a.bits, e), a.field)


def trace(a: FieldElement) -> int:
    """Absolute trace, computed as a + a^2 + ... + a^(2^(n-1))."""
    f = a.field
    acc, y = 0, a.bits
    for _ in range(f.n):
        acc ^= y
        y = f.mul(y, y)
    if acc not in (0, 1):
        raise AssertionError(f"Tr({a}) = {acc:#x} not in GF(2)")
    return acc


def rel_trace(a: FieldElement, sub: SubfieldSpec) -> FieldElement:
    if a.field != sub.parent:
        raise FieldMismatch("element not in the subfield's parent")
    return FieldElement(sub.rel_trace(a.bits), a.field)


def is_primitive(a: FieldElement) -> bool:
    return a.field.is_primitive(a.bits)


def in_subfield(a: FieldElement, sub: SubfieldSpec) -> bool:
    if a.field != sub.parent:
        raise FieldMismatch("element not in the subfield's parent")
    return sub.contains(a.bits)

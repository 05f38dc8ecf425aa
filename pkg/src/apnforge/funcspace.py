"""Functions K -> K: polynomial and table forms, differential properties,
algebraic degree, and the named functions used throughout the package."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from math import gcd

import numpy as np

from .errors import BadParams, FieldMismatch, NoApnRepresentative, ZeroDirection
from .gf2n import FieldSpec, subfield


@dataclass(frozen=True)
class PolySpec:
    """Sparse univariate polynomial sum(c * x^e).

    ``terms`` holds ``(coefficient_bits, exponent)`` pairs with strictly
    increasing exponents and nonzero coefficients.  ``meta`` carries
    provenance such as the primitive element chosen for a named function.
    """

    field: FieldSpec
    terms: tuple[tuple[int, int], ...]
    meta: dict = dc_field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        last = -1
        for c, e in self.terms:
            if not 0 < c < self.field.size:
                raise BadParams(f"coefficient {c:#x} is zero or outside the field")
            if not 0 <= e <= self.field.order:
                raise BadParams(f"exponent {e} outside 0..{self.field.order}")
            if e <= last:
                raise BadParams("exponents must be strictly increasing")
            last = e

    @classmethod
    def from_terms(cls, field: FieldSpec, terms, meta=None) -> PolySpec:
        """Normalise arbitrary (coeff, exponent) pairs: reduce exponents,
        merge repeats, drop zero coefficients."""
        acc: dict[int, int] = {}
        for c, e in terms:
            c = int(c)
            if not 0 <= c < field.size:
                raise BadParams(f"coefficient {c:#x} outside the field")
            if e < 0:
                raise BadParams("negative exponent")
            if e > field.order:
                e = (e - 1) % field.order + 1
            acc[e] = acc.get(e, 0) ^ c
        items = tuple((c, e) for e, c in sorted(acc.items()) if c)
        return cls(field, items, dict(meta or {}))

    def __str__(self):
        parts = []
        for c, e in self.terms:
            mono = "1" if e == 0 else "x" if e == 1 else f"x^{e}"
            parts.append(mono if c == 1 else f"0x{c:x}*{mono}")
        return " + ".join(parts) or "0"


@dataclass(frozen=True, eq=False)
class FunctionTable:
    """f: K -> K as the array values[x] = f(x) in canonical element order."""

    field: FieldSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.int64)
        if v.shape != (self.field.size,):
            raise BadParams(f"table must have length {self.field.size}, got {v.shape}")
        if v.min() < 0 or v.max() >= self.field.size:
            raise BadParams("table value outside the field")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __eq__(self, other):
        return (
            isinstance(other, FunctionTable)
            and self.field == other.field
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.field, self.values.tobytes()))

    def __call__(self, x: int) -> int:
        return int(self.values[x])

    def __add__(self, other):
        if other.field != self.field:
            raise FieldMismatch("tables over different fields")
        return FunctionTable(self.field, self.values ^ other.values)

    def compose(self, inner: FunctionTable) -> FunctionTable:
        """x -> self(inner(x))."""
        return FunctionTable(self.field, self.values[inner.values])

    @classmethod
    def identity(cls, field: FieldSpec) -> FunctionTable:
        return cls(field, np.arange(field.size))


def evaluate(p: PolySpec) -> FunctionTable:
    f = p.field
    xs = np.arange(f.size, dtype=np.int64)
    out = np.zeros(f.size, dtype=np.int64)
    for c, e in p.terms:
        out ^= f.mul_vec(f.pow_vec(xs, e), c)
    return FunctionTable(f, out)


def _du_rows(values: np.ndarray, directions) -> int:
    size = len(values)
    xs = np.arange(size)
    best = 0
    for a in directions:
        counts = np.bincount(values[xs ^ a] ^ values, minlength=size)
        best = max(best, int(counts.max()))
    return best


def differential_uniformity(f: FunctionTable, threads: int = 1) -> int:
    """max over a != 0 and b of #{x : f(x+a) + f(x) = b}.

    The direction loop is split into ``threads`` strided chunks combined
    with a max-reduction, so the result does not depend on ``threads``.
    """
    size = f.field.size
    directions = range(1, size)
    if threads <= 1:
        return _du_rows(f.values, directions)
    chunks = [range(1 + i, size, threads) for i in range(threads)]
    with ThreadPoolExecutor(threads) as pool:
        return max(pool.map(lambda ch: _du_rows(f.values, ch), chunks))


def is_apn(f: FunctionTable) -> bool:
    return differential_uniformity(f) == 2


def anf(f: FunctionTable) -> np.ndarray:
    """Moebius transform applied to all output bits at once.

    Entry m of the result packs, bit by bit, the ANF coefficient of the
    monomial prod_{i in m} x_i for each coordinate function.
    """
    a = f.values.copy()
    n = f.field.n
    for i in range(n):
        step = 1 << i
        a = a.reshape(-1, 2 * step)
        a[:, step:] ^= a[:, :step]
    return a.reshape(-1)


def algebraic_degree(f: FunctionTable) -> int:
    coeffs = anf(f)
    monomials = np.nonzero(coeffs)[0]
    if len(monomials) == 0:
        return 0
    return int(np.bitwise_count(monomials.astype(np.uint64)).max())


def is_quadratic(f: FunctionTable) -> bool:
    """Degree at most 2: every derivative x -> f(x+a)+f(x)+f(a) is linear."""
    return algebraic_degree(f) <= 2


def derivative_map(f: FunctionTable, a: int) -> FunctionTable:
    """x -> f(x+a) + f(x) + f(a) + f(0).

    The f(0) term makes the map vanish at 0 for functions with a constant
    part; it changes nothing when f(0) = 0.
    """
    a = int(a)
    if a == 0:
        raise ZeroDirection("derivative direction must be nonzero")
    v = f.values
    xs = np.arange(f.field.size)
    return FunctionTable(f.field, v[xs ^ a] ^ v ^ v[a] ^ v[0])


def derivatives_additive(f: FunctionTable) -> bool:
    """Exhaustive definition-level quadratic test, O(2^(3n)).

    Independent of :func:`algebraic_degree`; kept as its cross-check.
    """
    size = f.field.size
    xs = np.arange(size)
    for a in range(1, size):
        d = derivative_map(f, a).values
        if not np.array_equal(d[xs[:, None] ^ xs[None, :]], d[:, None] ^ d[None, :]):
            return False
    return True


# --- named functions ------------------------------------------------------

# Coefficients are powers of a primitive element u; None means coefficient 1.
_DILLON = {
    "dillon_h1": (6, [(None, 3), (None, 5), (62, 9), (3, 10), (None, 18), (3, 20), (3, 34), (None, 40)]),
    "dillon_h2": (6, [(None, 3), (11, 5), (13, 9), (None, 17), (11, 33), (None, 48)]),
    "dillon_h3": (8, [(None, 3), (None, 17), (16, 18), (16, 33), (15, 48)]),
}

BUILTINS = ("gold", "family", "dillon_h1", "dillon_h2", "dillon_h3")


def gold_poly(field: FieldSpec, r: int) -> PolySpec:
    if r < 1 or gcd(r, field.n) != 1:
        raise BadParams(f"gcd(r,n) != 1 (r={r}, n={field.n})")
    return PolySpec.from_terms(field, [(1, 2**r + 1)], meta={"name": "gold", "r": r})


def default_family_b(field: FieldSpec) -> int:
    return next(field.primitive_elements())


def default_family_c(field: FieldSpec) -> int:
    sub = subfield(field)
    return next(a for a in range(field.size) if not sub.contains(a))


def family_poly(field: FieldSpec, s: int, b: int | None = None, c: int | None = None) -> PolySpec:
    """b x^(2^s+1) + (b x^(2^s+1))^(2^k) + c x^(2^k+1) on GF(2^(2k))."""
    if field.n % 2:
        raise BadParams(f"family needs n = 2k, got n={field.n}")
    k = field.n // 2
    if k % 2 == 0:
        raise BadParams(f"k even (k={k})")
    if k < 3:
        raise BadParams(f"k must be at least 3 (k={k})")
    if s < 1 or s % 2 == 0:
        raise BadParams(f"s must be a positive odd integer (s={s})")
    if gcd(k, s) != 1:
        raise BadParams(f"gcd(k,s) != 1 (k={k}, s={s})")
    sub = subfield(field)
    b = default_family_b(field) if b is None else b
    c = default_family_c(field) if c is None else c
    if not 0 <= b < field.size or not field.is_primitive(b):
        raise BadParams(f"b={b:#x} is not primitive")
    if not 0 <= c < field.size or sub.contains(c):
        raise BadParams(f"c lies in subfield L (c={c:#x})")
    e = 2**s + 1
    terms = [(b, e), (field.frob(b, k), e * 2**k), (c, 2**k + 1)]
    return PolySpec.from_terms(field, terms, meta={"name": "family", "k": k, "s": s, "b": b, "c": c})


def _dillon_poly(name: str, field: FieldSpec, u: int) -> PolySpec:
    _, spec = _DILLON[name]
    terms = [(1 if p is None else field.pow(u, p), e) for p, e in spec]
    return PolySpec.from_terms(field, terms, meta={"name": name, "u": u})


def dillon_poly(name: str, field: FieldSpec) -> PolySpec:
    """Substitute the first primitive u (integer order) that yields an APN function."""
    n, _ = _DILLON[name]
    if field.n != n:
        raise BadParams(f"{name} is defined on GF(2^{n}), not GF(2^{field.n})")
    for u in field.primitive_elements():
        p = _dillon_poly(name, field, u)
        if is_apn(evaluate(p)):
            return p
    raise NoApnRepresentative(f"no primitive element makes {name} APN in {field!r}")


def builtin_function(name: str, field: FieldSpec, params: dict | None = None) -> PolySpec:
    params = dict(params or {})
    if name == "gold":
        return gold_poly(field, int(params.get("r", 1)))
    if name == "family":
        return family_poly(field, int(params.get("s", 1)), params.get("b"), params.get("c"))
    if name in _DILLON:
        return dillon_poly(name, field)
    raise BadParams(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")


def random_quadratic(field: FieldSpec, rng: np.random.Generator, affine: bool = True) -> PolySpec:
    """Random sum of c_ij x^(2^i+2^j) plus (optionally) a random affine part."""
    n = field.n
    terms = []
    for i in range(n):
        for j in range(i + 1, n):
            terms.append((int(rng.integers(field.size)), 2**i + 2**j))
    if affine:
        terms.append((int(rng.integers(field.size)), 0))
        for i in range(n):
            terms.append((int(rng.integers(field.size)), 2**i))
    return PolySpec.from_terms(field, terms, meta={"name": "random_quadratic"})

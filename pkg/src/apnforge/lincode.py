"""Binary linear codes of length 2^n attached to functions K -> K.

Codewords are Python ints with bit x holding coordinate x (x in canonical
element order).  Row reduction pivots on the lowest set bit, so the reduced
row-echelon form, and everything derived from it, is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CapTooLarge,
    FieldMismatch,
    LengthMismatch,
    NotSupercode,
    NoWitness,
    SizeMismatch,
    TooBig,
)
from .funcspace import FunctionTable
from .gf2n import FieldSpec

MAX_DUAL_CAP = 8


# --- bit helpers ------------------------------------------------------------


def bits_to_int(bits) -> int:
    packed = np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def int_to_bits(word: int, length: int) -> np.ndarray:
    raw = word.to_bytes((length + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:length]


def _lowbit(v: int) -> int:
    return (v & -v).bit_length() - 1


# --- small dense GF(2) matrices (n x n, n <= 16) ------------------------------


def gf2_inv(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    m = np.concatenate([a.astype(np.uint8) & 1, np.eye(n, dtype=np.uint8)], axis=1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r, col]), None)
        if piv is None:
            raise np.linalg.LinAlgError("singular over GF(2)")
        m[[col, piv]] = m[[piv, col]]
        for r in range(n):
            if r != col and m[r, col]:
                m[r] ^= m[col]
    return m[:, n:]


def gf2_rank(a: np.ndarray) -> int:
    rows = [bits_to_int(r) for r in np.asarray(a, dtype=np.uint8)]
    return len(_rref(rows)[0])


def gf2_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return ((a.astype(np.int64) @ b.astype(np.int64)) & 1).astype(np.uint8)


def _rref(rows) -> tuple[list[int], list[int]]:
    """Fully reduced echelon basis, pivot = lowest set bit, sorted by pivot."""
    basis: dict[int, int] = {}
    for r in rows:
        for p, b in basis.items():
            if r >> p & 1:
                r ^= b
        if r:
            p = _lowbit(r)
            for q in basis:
                if basis[q] >> p & 1:
                    basis[q] ^= r
            basis[p] = r
    pivots = sorted(basis)
    return [basis[p] for p in pivots], pivots


# --- codes ------------------------------------------------------------------


class BinaryCode:
    """Row space over GF(2) of a set of length-2^n generator rows.

    ``source`` is the function the code was built from, when known; it lets
    :func:`ea_witness` use the function block directly.
    """

    def __init__(self, field: FieldSpec, rows, source: FunctionTable | None = None):
        self.field = field
        self.length = field.size
        self.rows = tuple(int(r) for r in rows)
        full = (1 << self.length) - 1
        for r in self.rows:
            if r < 0 or r > full:
                raise LengthMismatch(f"row wider than {self.length} coordinates")
        self.source = source
        self._rref = None

    @property
    def rref(self) -> tuple[list[int], list[int]]:
        if self._rref is None:
            self._rref = _rref(self.rows)
        return self._rref

    @property
    def dimension(self) -> int:
        return len(self.rref[0])

    def reduce(self, word: int) -> int:
        rows, pivots = self.rref
        for p, b in zip(pivots, rows):
            if word >> p & 1:
                word ^= b
        return word

    def __contains__(self, word: int) -> bool:
        return self.reduce(word) == 0

    def matrix(self, reduced: bool = True) -> np.ndarray:
        rows = self.rref[0] if reduced else self.rows
        if not rows:
            return np.zeros((0, self.length), dtype=np.uint8)
        return np.stack([int_to_bits(r, self.length) for r in rows])

    def __repr__(self):
        return f"BinaryCode(n={self.field.n}, length={self.length}, dim={self.dimension})"


def _trace_rows(field: FieldSpec, values: np.ndarray) -> np.ndarray:
    """Matrix with rows x -> Tr(u^i * values[x]), i = 0..n-1."""
    tr = field.trace_table
    return np.stack([tr[field.mul_vec(values, 1 << i)] for i in range(field.n)]).astype(np.uint8)


def rm1_code(field: FieldSpec) -> BinaryCode:
    """First-order Reed-Muller code: words x -> Tr(alpha x) + eps."""
    ones = (1 << field.size) - 1
    g0 = _trace_rows(field, np.arange(field.size))
    return BinaryCode(field, [ones] + [bits_to_int(r) for r in g0])


def build_code(f: FunctionTable) -> BinaryCode:
    """Code spanned by x -> Tr(alpha x) + Tr(beta f(x)) + eps.

    Generators: the all-ones row, Tr(b_i x), then Tr(b_i f(x)), with the
    polynomial basis b_i = u^(i-1).
    """
    field = f.field
    ones = (1 << field.size) - 1
    g0 = _trace_rows(field, np.arange(field.size))
    gf = _trace_rows(field, f.values)
    rows = [ones] + [bits_to_int(r) for r in g0] + [bits_to_int(r) for r in gf]
    return BinaryCode(field, rows, source=f)


def codeword(f: FunctionTable, alpha: int, beta: int, eps: int) -> int:
    field = f.field
    tr = field.trace_table
    xs = np.arange(field.size)
    word = tr[field.mul_vec(xs, alpha)] ^ tr[field.mul_vec(f.values, beta)] ^ (eps & 1)
    return bits_to_int(word)


def dimension(c: BinaryCode) -> int:
    return c.dimension


def _check_same(c: BinaryCode, d: BinaryCode):
    if c.length != d.length:
        raise LengthMismatch(f"lengths {c.length} and {d.length} differ")


def code_equal(c: BinaryCode, d: BinaryCode) -> bool:
    _check_same(c, d)
    return c.rref[0] == d.rref[0]


def contains_code(c: BinaryCode, sub: BinaryCode) -> bool:
    """True iff ``sub`` is a subcode of ``c``."""
    _check_same(c, sub)
    return all(r in c for r in sub.rref[0])


def permute_word(word: int, images: np.ndarray) -> int:
    """Relabel coordinates: the result has bit x equal to bit images[x] of word."""
    return bits_to_int(int_to_bits(word, len(images))[images])


def permute_code(c: BinaryCode, p) -> BinaryCode:
    images = np.asarray(getattr(p, "images", p))
    if len(images) != c.length:
        raise SizeMismatch(f"permutation of {len(images)} points on a length-{c.length} code")
    bits = c.matrix(reduced=False)
    if len(bits) == 0:
        return BinaryCode(c.field, [])
    return BinaryCode(c.field, [bits_to_int(r) for r in bits[:, images]])


# --- codeword enumeration -----------------------------------------------------


def enumerate_codewords(c: BinaryCode, max_dim: int = 18) -> np.ndarray:
    """All 2^k codewords as a (2^k, N) uint8 matrix; word i = sum of basis rows in i."""
    k = c.dimension
    if k > max_dim:
        raise TooBig(f"dimension {k} > {max_dim}: too many codewords to enumerate")
    basis = c.matrix()
    words = np.zeros((1, c.length), dtype=np.uint8)
    for row in basis:
        words = np.concatenate([words, words ^ row])
    return words


def weight_distribution(c: BinaryCode, max_dim: int = 16) -> dict[int, int]:
    weights = enumerate_codewords(c, max_dim).sum(axis=1)
    w, counts = np.unique(weights, return_counts=True)
    return {int(a): int(b) for a, b in zip(w, counts)}


# --- dual distance ------------------------------------------------------------


def _subset_sums(cols: np.ndarray, h: int):
    """Yield arrays whose concatenation lists the XOR of every h-subset once."""
    n = len(cols)
    if h == 0:
        yield np.zeros(1, dtype=cols.dtype)
        return
    if h == 1:
        yield cols
        return
    if h == 2:
        for i in range(n - 1):
            yield cols[i] ^ cols[i + 1:]
        return
    # pairs (j, l), j < l, grouped by j; offsets[j] = first pair with first index j
    pair_sums = np.concatenate([cols[j] ^ cols[j + 1:] for j in range(n - 1)] + [cols[:0]])
    sizes = np.arange(n - 1, -1, -1)
    offsets = np.concatenate([[0], np.cumsum(sizes)])

    def prefixes(start, depth, acc):
        # all (depth)-subsets with minimum index >= start, yielding (sum, max index)
        if depth == 0:
            yield acc, start - 1
            return
        for i in range(start, n):
            yield from prefixes(i + 1, depth - 1, acc ^ cols[i])

    for acc, last in prefixes(0, h - 2, cols.dtype.type(0)):
        if last + 1 < n:
            tail = pair_sums[offsets[last + 1]:]
            if len(tail):
                yield acc ^ tail


class _SeenSet:
    def __init__(self, bits: int):
        self.dense = bits <= 26
        self.table = np.zeros(1 << bits, dtype=bool) if self.dense else set()

    def hits(self, values: np.ndarray) -> bool:
        if self.dense:
            return bool(self.table[values].any())
        return any(int(v) in self.table for v in values)

    def add(self, values: np.ndarray):
        if self.dense:
            self.table[values] = True
        else:
            self.table.update(int(v) for v in values)


def _has_dependency(cols: np.ndarray, w: int, bits: int) -> bool:
    """Assuming no dependency among fewer than w columns, decide whether w
    columns sum to zero (meet in the middle on subset sums)."""
    h = w // 2
    seen = _SeenSet(bits)
    if w % 2 == 0:
        for chunk in _subset_sums(cols, h):
            if len(np.unique(chunk)) < len(chunk) or seen.hits(chunk):
                return True
            seen.add(chunk)
        return False
    for chunk in _subset_sums(cols, h):
        seen.add(chunk)
    return any(seen.hits(chunk) for chunk in _subset_sums(cols, h + 1))


def dual_min_distance(c: BinaryCode, cap: int = 6) -> int | None:
    """Smallest w <= cap such that some w columns of a generator matrix are
    dependent, i.e. the minimum weight of the dual code; None if above cap."""
    if cap > MAX_DUAL_CAP:
        raise CapTooLarge(f"cap {cap} > {MAX_DUAL_CAP}")
    m = c.matrix()
    k = m.shape[0]
    weights = (1 << np.arange(k, dtype=np.int64)) if k else np.zeros(0, dtype=np.int64)
    cols = (m.T.astype(np.int64) @ weights) if k else np.zeros(c.length, dtype=np.int64)
    for w in range(1, cap + 1):
        if _has_dependency(cols, w, max(k, 1)):
            return w
    return None


# --- function recovery and EA witnesses ------------------------------------------


def _complement_rows(c: BinaryCode) -> list[int]:
    c0 = rm1_code(c.field)
    if not contains_code(c, c0):
        raise NotSupercode("code does not contain the first-order Reed-Muller code")
    n = c.field.n
    if c.dimension > 2 * n + 1:
        raise TooBig(f"dimension {c.dimension} > 2n+1 = {2 * n + 1}")
    p0 = set(c0.rref[1])
    rows, pivots = c.rref
    return [r for r, p in zip(rows, pivots) if p not in p0]


def _table_from_block(field: FieldSpec, block: np.ndarray) -> FunctionTable:
    """Inverse of the trace-row construction: columns of T^-1 * block give f(x)."""
    f_cols = gf2_matmul(gf2_inv(field.gram), block)
    weights = 1 << np.arange(field.n, dtype=np.int64)
    return FunctionTable(field, f_cols.T.astype(np.int64) @ weights)


def function_from_code(c: BinaryCode) -> FunctionTable:
    """Some f with C_f = c, for any c containing RM(1, n) of dimension <= 2n+1."""
    n = c.field.n
    g1 = _complement_rows(c)
    block = np.zeros((n, c.length), dtype=np.uint8)
    for i, r in enumerate(g1):
        block[i] = int_to_bits(r, c.length)
    return _table_from_block(c.field, block)


def function_block(c: BinaryCode) -> np.ndarray:
    """The n x N block Tr(b_i f(x)) for the source (or a recovered) function."""
    f = c.source if c.source is not None else function_from_code(c)
    return _trace_rows(c.field, f.values)


@dataclass(frozen=True, eq=False)
class AffineWitness:
    """Solution of G_g = B1 G_f + B G0' + t 1, B1 invertible."""

    B1: np.ndarray
    B: np.ndarray
    t: np.ndarray

    def block(self, field: FieldSpec, f_block: np.ndarray) -> np.ndarray:
        g0 = _trace_rows(field, np.arange(field.size))
        return gf2_matmul(self.B1, f_block) ^ gf2_matmul(self.B, g0) ^ self.t[:, None]

    def apply(self, f: FunctionTable) -> FunctionTable:
        """The function g = A1(f(x)) + A(x) whose block the witness produces."""
        return _table_from_block(f.field, self.block(f.field, _trace_rows(f.field, f.values)))

    def verify(self, c: BinaryCode, d: BinaryCode) -> bool:
        """Substitute into the block equation, coordinate by coordinate."""
        if gf2_rank(self.B1) != len(self.B1):
            return False
        return np.array_equal(self.block(c.field, function_block(c)), function_block(d))


def _left_solutions(basis_rows: list[int], target: int, nvars: int):
    """Solutions v (bit nvars-1-j = coefficient of basis row j) of
    sum v_j basis_j = target, as (minimal particular solution, kernel basis)."""
    # eliminate on words, tracking combinations
    pivots: dict[int, tuple[int, int]] = {}
    kernel = []
    for j, row in enumerate(basis_rows):
        combo = 1 << (nvars - 1 - j)
        for p, (w, cmb) in pivots.items():
            if row >> p & 1:
                row ^= w
                combo ^= cmb
        if row:
            p = _lowbit(row)
            for q in list(pivots):
                w, cmb = pivots[q]
                if w >> p & 1:
                    pivots[q] = (w ^ row, cmb ^ combo)
            pivots[p] = (row, combo)
        else:
            kernel.append(combo)
    sol = 0
    for p, (w, cmb) in pivots.items():
        if target >> p & 1:
            target ^= w
            sol ^= cmb
    if target:
        return None, kernel
    # reduce kernel to echelon on highest bits, then minimise the particular solution
    red: list[int] = []
    for v in kernel:
        for b in red:
            if v ^ b < v:
                v ^= b
        if v:
            red = [b ^ v if b ^ v < b else b for b in red]
            red.append(v)
            red.sort(reverse=True)
    for b in red:
        if sol ^ b < sol:
            sol ^= b
    return sol, red


def _coset_members(sol: int, kernel: list[int]):
    members = {sol}
    for b in kernel:
        members |= {m ^ b for m in members}
    return sorted(members)


def ea_witness(c: BinaryCode, d: BinaryCode) -> AffineWitness:
    """Find (B1, B, t) with G_D = B1 G_C + B G0' + t 1 when the codes are equal."""
    _check_same(c, d)
    if c.field != d.field:
        raise FieldMismatch("codes built over different fields")
    field = c.field
    n = field.n
    _complement_rows(c)
    _complement_rows(d)
    if not code_equal(c, d):
        raise NoWitness("codes differ, so no affine relation exists")
    fb = function_block(c)
    gb = function_block(d)
    g0 = _trace_rows(field, np.arange(field.size))
    ones = (1 << field.size) - 1
    basis = [bits_to_int(r) for r in fb] + [bits_to_int(r) for r in g0] + [ones]
    nvars = 2 * n + 1

    cosets = []
    for i in range(n):
        sol, kernel = _left_solutions(basis, bits_to_int(gb[i]), nvars)
        if sol is None:
            raise NoWitness(f"row {i} of the target block is outside the code")
        cosets.append(_coset_members(sol, kernel) if kernel else [sol])

    chosen: list[int] = []

    def b1_part(v):
        return v >> (n + 1)

    def extend(i, span_rows):
        if i == n:
            return True
        for v in cosets[i]:
            r = b1_part(v)
            for b in span_rows:
                if r ^ b < r:
                    r ^= b
            if r:
                chosen.append(v)
                rows = sorted([b ^ r if b ^ r < b else b for b in span_rows] + [r], reverse=True)
                if extend(i + 1, rows):
                    return True
                chosen.pop()
        return False

    if not extend(0, []):
        raise NoWitness("no invertible B1 in the solution set")

    def unpack(v):
        bits = [(v >> (nvars - 1 - j)) & 1 for j in range(nvars)]
        return bits[:n], bits[n:2 * n], bits[2 * n]

    parts = [unpack(v) for v in chosen]
    B1 = np.array([p[0] for p in parts], dtype=np.uint8)
    B = np.array([p[1] for p in parts], dtype=np.uint8)
    t = np.array([p[2] for p in parts], dtype=np.uint8)
    return AffineWitness(B1, B, t)

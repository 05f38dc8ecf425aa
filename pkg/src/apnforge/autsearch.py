"""Full automorphism group of a binary code.

The search works on the incidence structure between coordinates and a set of
codewords (whole weight classes, added in increasing weight until they span
the code).  A permutation preserving those weight classes preserves their
span, so the structure and the code have the same automorphism group.

Colourings of the coordinates are refined to equilibrium (colour counts in
blocks, then block-colour counts at points) and individualised along a base
path.  For each base level, deepest first, every candidate image outside the
known basic orbit is either mapped to by an explicit automorphism found by
descending the search tree, or refuted by exhausting its subtree.  Leaves are
accepted only after :func:`is_automorphism`, so hash collisions in the
refinement can weaken pruning but never admit a non-automorphism.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import BadParams, SearchTimeout, TooBig, TooLong
from .lincode import BinaryCode, gf2_rank
from .permgrp import (
    Permutation,
    PermGroup,
    frobenius_perm,
    is_automorphism,
    mult_perm,
    translation_generators,
)

log = logging.getLogger(__name__)

MAX_LENGTH = 1024
_HASH_BITS = 26
_MASK = (1 << _HASH_BITS) - 1


# --- codeword classes -----------------------------------------------------------


def _packed_basis(c: BinaryCode) -> np.ndarray:
    m = c.matrix()
    return np.packbits(m, axis=1, bitorder="little")


def _codeword_chunks(c: BinaryCode, low: int = 12, deadline: float | None = None):
    """Yield packed codeword chunks covering all 2^k words exactly once."""
    basis = _packed_basis(c)
    k = len(basis)
    low = min(low, k)
    table = np.zeros((1, basis.shape[1] if k else 1), dtype=np.uint8)
    for row in basis[:low]:
        table = np.concatenate([table, table ^ row])
    high = basis[low:]
    word = np.zeros(table.shape[1], dtype=np.uint8)
    for g in range(1 << len(high)):
        if deadline is not None and time.monotonic() > deadline:
            raise SearchTimeout("automorphism search exceeded its budget")
        if g:
            # Gray code: flip the row at the lowest set bit of g
            word = word ^ high[(g & -g).bit_length() - 1]
        yield table ^ word


def weight_classes(c: BinaryCode, deadline: float | None = None) -> dict[int, int]:
    hist: dict[int, int] = {}
    for chunk in _codeword_chunks(c, deadline=deadline):
        w, counts = np.unique(np.bitwise_count(chunk).sum(axis=1), return_counts=True)
        for a, b in zip(w.tolist(), counts.tolist()):
            hist[a] = hist.get(a, 0) + b
    return dict(sorted(hist.items()))


def _collect(c: BinaryCode, weights: set[int], deadline: float | None = None) -> np.ndarray:
    parts = []
    for chunk in _codeword_chunks(c, deadline=deadline):
        wt = np.bitwise_count(chunk).sum(axis=1)
        sel = np.isin(wt, list(weights))
        if sel.any():
            parts.append(chunk[sel])
    packed = np.concatenate(parts) if parts else np.zeros((0, 1), dtype=np.uint8)
    return np.unpackbits(packed, axis=1, bitorder="little")[:, : c.length]


def select_blocks(c: BinaryCode, max_blocks: int = 200_000, extra_blocks: int = 0,
                  deadline: float | None = None):
    """Whole weight classes, lightest first, until they span the code.

    ``extra_blocks`` allows further classes to be added for sharper refinement
    as long as the running total stays within it.
    """
    hist = weight_classes(c, deadline)
    candidates = [w for w in hist if 0 < w < c.length]
    chosen: list[int] = []
    total = 0
    blocks = np.zeros((0, c.length), dtype=np.uint8)
    for w in candidates:
        chosen.append(w)
        total += hist[w]
        if total > max_blocks:
            raise TooBig(f"more than {max_blocks} codewords needed to span the code")
        blocks = _collect(c, set(chosen), deadline)
        if gf2_rank(blocks) == c.dimension:
            break
    for w in candidates[len(chosen):]:
        if total + hist[w] > extra_blocks:
            break
        chosen.append(w)
        total += hist[w]
        blocks = _collect(c, set(chosen), deadline)
    return blocks, chosen


# --- refinement ------------------------------------------------------------------


def _mix(x: np.ndarray, salt: int) -> np.ndarray:
    """splitmix64 finaliser, vectorised; wraps modulo 2^64."""
    with np.errstate(over="ignore"):
        z = x.astype(np.uint64) + np.uint64(salt)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


class Refiner:
    """Equitable-style colour refinement on the point/block incidence.

    All arithmetic is exact (small integers in float64 matmuls, then uint64
    hashing), so colours are a function of the labelled structure only and
    are preserved by every automorphism.
    """

    def __init__(self, blocks: np.ndarray, deadline: float | None = None):
        self.m, self.n = blocks.shape
        self.M = np.ascontiguousarray(blocks, dtype=np.float64)
        self.MT = np.ascontiguousarray(self.M.T)
        self.weights = blocks.sum(axis=1).astype(np.uint64)
        rng = np.random.default_rng(0x5EED)
        self.ra = rng.integers(0, 1 << _HASH_BITS, size=self.n + 1).astype(np.float64)
        self.rb = rng.integers(0, 1 << _HASH_BITS, size=self.n + 1).astype(np.float64)
        self.deadline = deadline
        self.calls = 0

    @staticmethod
    def _canon(major: np.ndarray, minor: np.ndarray) -> np.ndarray:
        order = np.lexsort((minor, major))
        keys_major = major[order]
        keys_minor = minor[order]
        new = np.empty(len(order), dtype=bool)
        new[0] = True
        new[1:] = (keys_major[1:] != keys_major[:-1]) | (keys_minor[1:] != keys_minor[:-1])
        ids = np.cumsum(new) - 1
        out = np.empty(len(order), dtype=np.int64)
        out[order] = ids
        return out

    def refine(self, colors: np.ndarray) -> np.ndarray:
        self.calls += 1
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SearchTimeout("automorphism search exceeded its budget")
        ncol = int(colors.max()) + 1
        while True:
            h1 = (self.M @ self.ra[colors]).astype(np.uint64)
            h2 = (self.M @ self.rb[colors]).astype(np.uint64)
            with np.errstate(over="ignore"):
                bkey = _mix(h1, 1) ^ _mix(h2, 2) ^ _mix(self.weights, 3)
            v1 = (_mix(bkey, 4) & np.uint64(_MASK)).astype(np.float64)
            v2 = (_mix(bkey, 5) & np.uint64(_MASK)).astype(np.float64)
            p1 = (self.MT @ v1).astype(np.uint64)
            p2 = (self.MT @ v2).astype(np.uint64)
            pkey = _mix(p1, 6) ^ _mix(p2, 7)
            new = self._canon(colors, pkey)
            nnew = int(new.max()) + 1
            colors = new
            if nnew == ncol:
                return colors
            ncol = nnew

    @staticmethod
    def individualize(colors: np.ndarray, point: int) -> np.ndarray:
        flag = np.ones(len(colors), dtype=np.int64)
        flag[point] = 0
        return Refiner._canon(colors, flag)


# --- search ----------------------------------------------------------------------


@dataclass
class SearchStats:
    blocks: int = 0
    weights: list = dc_field(default_factory=list)
    base: list = dc_field(default_factory=list)
    nodes: int = 0
    leaves: int = 0
    refuted: int = 0
    found: int = 0
    elapsed: float = 0.0


def canonical_automorphisms(c: BinaryCode) -> list[Permutation]:
    """Translations, the largest subgroup of K* and the smallest Frobenius
    power that preserve c (each checked, none assumed)."""
    field = c.field
    found = [p for p in translation_generators(field) if is_automorphism(c, p)]
    order = field.order
    for d in sorted((d for d in range(2, order + 1) if order % d == 0), reverse=True):
        p = mult_perm(field, field.pow(field.generator, order // d))
        if is_automorphism(c, p):
            found.append(p)
            break
    for j in range(1, field.n):
        if field.n % j == 0:
            p = frobenius_perm(field, j)
            if is_automorphism(c, p):
                found.append(p)
                break
    return found


def _hist(colors: np.ndarray) -> bytes:
    return np.bincount(colors).tobytes()


def full_automorphism_group(
    c: BinaryCode,
    seed=None,
    budget: float | None = None,
    canonical_seed: bool = True,
    extra_blocks: int = 0,
    stats: SearchStats | None = None,
) -> PermGroup:
    """Aut(c) as a :class:`PermGroup`.

    ``seed`` (a PermGroup or sequence of permutations) and, with
    ``canonical_seed``, the canonical automorphisms that pass the membership
    test, are known elements used to prune the search.  Raises
    :class:`SearchTimeout` when ``budget`` seconds elapse.
    """
    if c.length > MAX_LENGTH:
        raise TooLong(f"length {c.length} > {MAX_LENGTH}")
    start = time.monotonic()
    deadline = None if budget is None else start + budget
    stats = stats if stats is not None else SearchStats()

    known: list[Permutation] = []
    if seed is not None:
        known.extend(seed.generators if isinstance(seed, PermGroup) else seed)
    for p in known:
        if not is_automorphism(c, p):
            raise BadParams("seed contains a permutation that is not an automorphism")
    if canonical_seed:
        known.extend(canonical_automorphisms(c))

    blocks, weights = select_blocks(c, extra_blocks=extra_blocks, deadline=deadline)
    stats.blocks, stats.weights = len(blocks), weights
    ref = Refiner(blocks, deadline)
    N = c.length

    # base path
    parts = [ref.refine(np.zeros(N, dtype=np.int64))]
    base: list[int] = []
    while int(parts[-1].max()) + 1 < N:
        cur = parts[-1]
        counts = np.bincount(cur)
        target = int(np.nonzero(counts > 1)[0][0])
        b = int(np.nonzero(cur == target)[0][0])
        base.append(b)
        parts.append(ref.refine(ref.individualize(cur, b)))
    stats.base = base
    depth = len(base)
    hists = [_hist(p) for p in parts]
    left_pos = np.argsort(parts[-1])
    log.info("blocks=%d weights=%s base=%s", len(blocks), weights, base)

    group = PermGroup(known, N, base_prefix=base, field=c.field)

    def descend(j, right):
        stats.nodes += 1
        if j == depth:
            stats.leaves += 1
            g = np.empty(N, dtype=np.int64)
            g[left_pos] = np.argsort(right)
            p = Permutation._trusted(g, c.field)
            return p if is_automorphism(c, p) else None
        color = parts[j][base[j]]
        for y in np.nonzero(right == color)[0]:
            nxt = ref.refine(ref.individualize(right, int(y)))
            if _hist(nxt) != hists[j + 1]:
                continue
            p = descend(j + 1, nxt)
            if p is not None:
                return p
        return None

    for i in range(depth - 1, -1, -1):
        cell = np.nonzero(parts[i] == parts[i][base[i]])[0]
        refuted: set[int] = set()
        for x in cell.tolist():
            if x in group.basic_orbit(i) or x in refuted:
                continue
            right = ref.refine(ref.individualize(parts[i], x))
            p = None
            if _hist(right) == hists[i + 1]:
                p = descend(i + 1, right)
            if p is None:
                stats.refuted += 1
                stab = group.stabilizer_generators(i)
                orbit = PermGroup(stab, N).orbit(x) if stab else {x}
                refuted |= orbit
            else:
                stats.found += 1
                known.append(p)
                group = PermGroup(known, N, base_prefix=base, field=c.field)
    stats.elapsed = time.monotonic() - start
    log.info("aut order %d in %.2fs (%d nodes)", group.order, stats.elapsed, stats.nodes)
    return group

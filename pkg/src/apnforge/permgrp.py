"""Permutations of the 2^n coordinate places and stabilizer chains.

A permutation is stored as its image array: ``p.images[x]`` is the image of
place x.  Products compose right to left, ``(p * q)(x) = p(q(x))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm, prod

import numpy as np

from .errors import SizeMismatch, ZeroScalar
from .gf2n import FieldSpec
from .lincode import BinaryCode, int_to_bits, bits_to_int


class Permutation:
    __slots__ = ("images", "field", "_key")

    def __init__(self, images, field: FieldSpec | None = None):
        a = np.asarray(images, dtype=np.int64)
        if a.ndim != 1 or not np.array_equal(np.sort(a), np.arange(len(a))):
            raise ValueError("images do not form a bijection")
        a.setflags(write=False)
        self.images = a
        self.field = field
        self._key = None

    @classmethod
    def _trusted(cls, images, field=None) -> Permutation:
        p = cls.__new__(cls)
        images.setflags(write=False)
        p.images = images
        p.field = field
        p._key = None
        return p

    @classmethod
    def identity(cls, size: int, field: FieldSpec | None = None) -> Permutation:
        return cls._trusted(np.arange(size, dtype=np.int64), field)

    @property
    def size(self) -> int:
        return len(self.images)

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = self.images.astype(np.int32).tobytes()
        return self._key

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def __mul__(self, other: Permutation) -> Permutation:
        if other.size != self.size:
            raise SizeMismatch("permutations of different degree")
        return Permutation._trusted(self.images[other.images], self.field or other.field)

    def inverse(self) -> Permutation:
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.size)
        return Permutation._trusted(inv, self.field)

    def __pow__(self, e: int) -> Permutation:
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = Permutation.identity(self.size, self.field)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self, h: Permutation) -> Permutation:
        """h * self * h^-1."""
        return h * self * h.inverse()

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.size)))

    def fixed_points(self) -> np.ndarray:
        return np.nonzero(self.images == np.arange(self.size))[0]

    def __eq__(self, other):
        return isinstance(other, Permutation) and np.array_equal(self.images, other.images)

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Permutation({self.images.tolist()})"

    def cycles(self) -> list[tuple[int, ...]]:
        seen = np.zeros(self.size, dtype=bool)
        out = []
        for start in range(self.size):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = int(self.images[x])
            out.append(tuple(cyc))
        return out


def element_order(p: Permutation) -> int:
    return lcm(*(len(c) for c in p.cycles()))


# --- canonical permutations of K -------------------------------------------------


def translation_perm(field: FieldSpec, k: int) -> Permutation:
    """x -> x + k."""
    return Permutation._trusted(np.arange(field.size, dtype=np.int64) ^ int(k), field)


def mult_perm(field: FieldSpec, a: int) -> Permutation:
    """x -> a x."""
    if int(a) == 0:
        raise ZeroScalar("multiplication by 0 is not a permutation")
    return Permutation._trusted(field.mul_vec(np.arange(field.size), int(a)), field)


def frobenius_perm(field: FieldSpec, j: int = 1) -> Permutation:
    """x -> x^(2^j)."""
    return Permutation._trusted(field.pow_vec(np.arange(field.size), pow(2, j % field.n)), field)


def translation_generators(field: FieldSpec) -> list[Permutation]:
    return [translation_perm(field, 1 << i) for i in range(field.n)]


def gold_generators(field: FieldSpec) -> list[Permutation]:
    """Translations, multiplication by a primitive element and the Frobenius."""
    return translation_generators(field) + [mult_perm(field, field.generator), frobenius_perm(field, 1)]


def is_automorphism(c: BinaryCode, p: Permutation) -> bool:
    """Every generator row, relabelled by p, lies in the row space of c."""
    if p.size != c.length:
        raise SizeMismatch(f"permutation of {p.size} points on a length-{c.length} code")
    rows = c.rref[0]
    if not rows:
        return True
    bits = np.stack([int_to_bits(r, c.length) for r in rows])[:, p.images]
    return all(bits_to_int(r) in c for r in bits)


# --- stabilizer chains ---------------------------------------------------------------


@dataclass
class _Level:
    point: int
    gens: list  # image arrays fixing all earlier base points
    orbit: dict  # point -> transversal array u with u[point_of_level] = key
    inv: dict  # point -> inverse of transversal array


def _orbit(base_point: int, gens: list, size: int) -> tuple[dict, dict]:
    ident = np.arange(size, dtype=np.int64)
    orbit = {base_point: ident}
    frontier = [base_point]
    while frontier:
        nxt = []
        for x in frontier:
            u = orbit[x]
            for g in gens:
                y = int(g[x])
                if y not in orbit:
                    orbit[y] = g[u]
                    nxt.append(y)
        frontier = nxt
    inv = {}
    for y, u in orbit.items():
        ui = np.empty_like(u)
        ui[u] = ident
        inv[y] = ui
    return orbit, inv


class PermGroup:
    """Permutation group with a stabilizer chain built by deterministic
    Schreier-Sims.  The base extends ``base_prefix`` by the smallest point
    moved by a residue, so the chain is reproducible."""

    def __init__(self, gens, size: int | None = None, base_prefix=(), field: FieldSpec | None = None):
        gens = [g if isinstance(g, Permutation) else Permutation(g) for g in gens]
        if size is None:
            if not gens:
                raise ValueError("need a degree for the trivial group")
            size = gens[0].size
        for g in gens:
            if g.size != size:
                raise SizeMismatch("generators of different degree")
        self.size = size
        self.field = field or next((g.field for g in gens if g.field is not None), None)
        self.generators = [g for g in gens if not g.is_identity()]
        self.levels: list[_Level] = []
        self._build([int(b) for b in base_prefix])
        self.order = prod(len(lv.orbit) for lv in self.levels)

    # construction

    def _new_level(self, point):
        self.levels.append(_Level(point, [], {}, {}))

    def _refresh(self, i):
        lv = self.levels[i]
        lv.orbit, lv.inv = _orbit(lv.point, lv.gens, self.size)

    def sift(self, g: np.ndarray, start: int = 0) -> tuple[np.ndarray, int]:
        """Strip g through levels start..; returns (residue, level it stopped at)."""
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            y = int(g[lv.point])
            ui = lv.inv.get(y)
            if ui is None:
                return g, i
            g = ui[g]
        return g, len(self.levels)

    def _first_moved(self, g: np.ndarray) -> int:
        moved = np.nonzero(g != np.arange(self.size))[0]
        return int(moved[0])

    def _build(self, prefix):
        for b in prefix:
            self._new_level(b)
        gens = [g.images for g in self.generators]
        for g in gens:
            if all(g[lv.point] == lv.point for lv in self.levels):
                self._new_level(self._first_moved(g))
        for g in gens:
            for lv in self.levels:
                lv.gens.append(g)
                if g[lv.point] != lv.point:
                    break
        for i in range(len(self.levels)):
            self._refresh(i)
        # Schreier generators, deepest level first
        i = len(self.levels) - 1
        while i >= 0:
            restart = self._check_level(i)
            i = restart if restart is not None else i - 1
        # drop trailing trivial levels not requested as base prefix
        while len(self.levels) > len(prefix) and len(self.levels[-1].orbit) == 1:
            self.levels.pop()

    def _check_level(self, i):
        lv = self.levels[i]
        for x, u in list(lv.orbit.items()):
            for s in list(lv.gens):
                y = int(s[x])
                h = lv.inv[y][s[u]]
                h, j = self.sift(h, i + 1)
                if j < len(self.levels) or not np.array_equal(h, np.arange(self.size)):
                    if j == len(self.levels):
                        self._new_level(self._first_moved(h))
                    for lev in range(i + 1, j + 1):
                        self.levels[lev].gens.append(h)
                        self._refresh(lev)
                    return j
        return None

    # queries

    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self.levels]

    def __len__(self):
        return self.order

    def contains(self, p: Permutation) -> bool:
        if p.size != self.size:
            return False
        h, j = self.sift(p.images)
        return j == len(self.levels) and bool(np.array_equal(h, np.arange(self.size)))

    __contains__ = contains

    def orbit(self, point: int) -> set[int]:
        _, inv = _orbit(point, [g.images for g in self.generators], self.size)
        return set(inv)

    def orbits(self) -> list[set[int]]:
        left = set(range(self.size))
        out = []
        while left:
            o = self.orbit(min(left))
            out.append(o)
            left -= o
        return out

    def basic_orbit(self, i: int) -> set[int]:
        return set(self.levels[i].orbit) if i < len(self.levels) else set()

    def stabilizer_generators(self, i: int) -> list[Permutation]:
        """Strong generators fixing the first i base points."""
        if i >= len(self.levels):
            return []
        return [Permutation._trusted(g.copy(), self.field) for g in self.levels[i].gens]

    def element_array(self, limit: int = 10**6) -> np.ndarray:
        """All elements as a (|G|, N) array, built from the transversals."""
        if self.order > limit:
            from .errors import GroupTooLarge

            raise GroupTooLarge(f"|G| = {self.order} > {limit}")
        elems = np.arange(self.size, dtype=np.int64)[None, :]
        for lv in reversed(self.levels):
            reps = np.stack(list(lv.orbit.values()))
            elems = reps[:, elems].reshape(-1, self.size)
        return elems

    def elements(self, limit: int = 10**6) -> list[Permutation]:
        return [Permutation._trusted(e, self.field) for e in self.element_array(limit)]

    def random_element(self, rng: np.random.Generator) -> Permutation:
        g = np.arange(self.size, dtype=np.int64)
        for lv in self.levels:
            reps = list(lv.orbit.values())
            g = g[reps[int(rng.integers(len(reps)))]]
        return Permutation._trusted(g, self.field)

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return all(other.contains(g) for g in self.generators)

    def __eq__(self, other):
        return (
            isinstance(other, PermGroup)
            and self.order == other.order
            and self.is_subgroup_of(other)
        )

    def __hash__(self):
        return hash(self.order)

    def is_abelian(self) -> bool:
        gs = self.generators
        return all((a * b) == (b * a) for i, a in enumerate(gs) for b in gs[i + 1:])

    def __repr__(self):
        return f"PermGroup(degree={self.size}, order={self.order})"


def group_order(gens, size: int | None = None) -> PermGroup:
    return PermGroup(list(gens), size)

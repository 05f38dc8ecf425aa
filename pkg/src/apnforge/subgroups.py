"""Regular elementary abelian subgroups and conjugacy, by enumeration."""

from __future__ import annotations

import numpy as np

from .errors import DegreeTooLarge, GroupTooLarge, NotSubgroup
from .permgrp import Permutation, PermGroup

MAX_DEGREE = 64
MAX_ORDER = 10**6


def _keys(arr: np.ndarray) -> list[bytes]:
    a = np.ascontiguousarray(arr.astype(np.int32))
    return [row.tobytes() for row in a]


def regular_elem_abelian_subgroups(G: PermGroup) -> list[PermGroup]:
    """All subgroups of G that are elementary abelian of order N = degree and
    act regularly.

    Such a subgroup consists of the identity and N - 1 commuting fixed-point-free
    involutions.  Subgroups are grown one generator at a time; a generator is
    accepted only if it has larger index than the previous one and is the
    smallest-index element of the new coset, which reaches every subgroup
    exactly once.
    """
    N = G.size
    if N > MAX_DEGREE:
        raise DegreeTooLarge(f"degree {N} > {MAX_DEGREE}")
    if G.order > MAX_ORDER:
        raise GroupTooLarge(f"|G| = {G.order} > {MAX_ORDER}")
    rank = N.bit_length() - 1
    if 1 << rank != N:
        return []
    elems = G.element_array(MAX_ORDER)
    ident = np.arange(N)
    invol = np.all(np.take_along_axis(elems, elems, axis=1) == ident, axis=1)
    fpf = np.all(elems != ident, axis=1)
    cand = elems[invol & fpf]
    index = {k: i for i, k in enumerate(_keys(cand))}

    found: list[PermGroup] = []

    def grow(members: np.ndarray, gens: list[int], last: int):
        if len(gens) == rank:
            found.append(PermGroup([Permutation(cand[i], G.field) for i in gens], N, field=G.field))
            return
        for i in range(last + 1, len(cand)):
            c = cand[i]
            if any(not np.array_equal(c[cand[g]], cand[g][c]) for g in gens):
                continue
            coset = c[members]  # c * h for every member h
            idx = []
            for k in _keys(coset):
                j = index.get(k)
                if j is None:
                    break
                idx.append(j)
            else:
                if min(idx) == i:
                    grow(np.concatenate([members, coset]), gens + [i], i)

    grow(ident[None, :], [], -1)
    return found


def conjugating_element(G: PermGroup, A: PermGroup, B: PermGroup) -> Permutation | None:
    """Some h in G with h A h^-1 = B, or None when A and B are not conjugate in G."""
    if not A.is_subgroup_of(G) or not B.is_subgroup_of(G):
        raise NotSubgroup("A and B must be subgroups of G")
    if A.order != B.order:
        return None
    if G.order > MAX_ORDER:
        raise GroupTooLarge(f"|G| = {G.order} > {MAX_ORDER}")
    elems = G.element_array(MAX_ORDER)
    inv = np.empty_like(elems)
    np.put_along_axis(inv, elems, np.arange(G.size)[None, :], axis=1)
    alive = np.ones(len(elems), dtype=bool)
    for a in A.generators:
        conj = np.take_along_axis(elems, a.images[inv], axis=1)  # h a h^-1
        ok = np.array([B.contains(Permutation._trusted(row.copy())) if alive[i] else False
                       for i, row in enumerate(conj)])
        alive &= ok
        if not alive.any():
            return None
    i = int(np.nonzero(alive)[0][0])
    return Permutation._trusted(elems[i].copy(), G.field)

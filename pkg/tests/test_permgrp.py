import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy.combinatorics import Permutation as SymPerm, PermutationGroup

from apnforge.errors import GroupTooLarge, SizeMismatch, ZeroScalar
from apnforge.funcspace import PolySpec, evaluate, family_poly, random_quadratic
from apnforge.gf2n import make_field
from apnforge.lincode import build_code
from apnforge.permgrp import (
    Permutation,
    PermGroup,
    element_order,
    frobenius_perm,
    gold_generators,
    group_order,
    is_automorphism,
    mult_perm,
    translation_generators,
    translation_perm,
)

F4, F5, F6 = make_field(4), make_field(5), make_field(6)


def cube_code(F):
    return build_code(evaluate(PolySpec.from_terms(F, [(1, 3)])))


def sympy_order(perms):
    return PermutationGroup([SymPerm(p.images.tolist()) for p in perms]).order()


def random_perms(rng, size, count):
    return [Permutation(rng.permutation(size)) for _ in range(count)]


def test_product_convention():
    p = Permutation([1, 2, 0])
    q = Permutation([0, 2, 1])
    assert (p * q)(1) == p(q(1))
    assert (p * p.inverse()).is_identity()
    assert p**3 == Permutation.identity(3)
    assert p**-1 == p.inverse()
    assert q.conjugate(p) == p * q * p.inverse()


def test_bad_permutations():
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])
    with pytest.raises(SizeMismatch):
        Permutation([1, 0]) * Permutation([0, 1, 2])


def test_translations():
    assert translation_perm(F4, 0).is_identity()
    a, b = 0x5, 0xC
    assert translation_perm(F4, a) * translation_perm(F4, b) == translation_perm(F4, a ^ b)
    assert PermGroup(translation_generators(F4)).order == 16


def test_multiplications_and_frobenius():
    assert mult_perm(F4, 1).is_identity()
    assert element_order(mult_perm(F4, F4.generator)) == 15
    with pytest.raises(ZeroScalar):
        mult_perm(F4, 0)
    assert frobenius_perm(F6, 0).is_identity()
    assert (frobenius_perm(F5, 1) ** 5).is_identity()
    assert element_order(frobenius_perm(F6, 1)) == 6
    assert element_order(Permutation.identity(8)) == 1


def test_canonical_automorphisms_of_gold_codes():
    c4, c5 = cube_code(F4), cube_code(F5)
    assert is_automorphism(c4, mult_perm(F4, F4.generator))
    assert is_automorphism(c5, frobenius_perm(F5, 1))
    for k in range(16):
        assert is_automorphism(c4, translation_perm(F4, k))
    swap = np.arange(16)
    swap[[0, 1]] = [1, 0]
    assert not is_automorphism(c4, Permutation(swap))
    assert is_automorphism(c4, Permutation.identity(16))


@pytest.mark.parametrize("seed", range(10))
def test_translations_preserve_quadratic_codes(seed):
    rng = np.random.default_rng(seed)
    c = build_code(evaluate(random_quadratic(F5, rng)))
    assert all(is_automorphism(c, translation_perm(F5, k)) for k in range(32))


def test_gold_generator_group_order():
    assert group_order(gold_generators(F4)).order == 960
    assert group_order(gold_generators(F6)).order == 64 * 63 * 6


def test_u_generators_order():
    from apnforge.family import FamilyParams, u_generators

    assert PermGroup(u_generators(FamilyParams.make(3))).order == 1344


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(3, 12), st.integers(1, 3))
def test_order_matches_sympy(seed, size, count):
    rng = np.random.default_rng(seed)
    gens = random_perms(rng, size, count)
    G = PermGroup(gens)
    assert G.order == sympy_order(gens)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_membership_matches_sympy(seed):
    rng = np.random.default_rng(seed)
    # a small group on 8 points so that membership is not always true
    gens = [Permutation([1, 0, 3, 2, 5, 4, 7, 6]), Permutation(rng.permutation(8))]
    G = PermGroup(gens)
    S = PermutationGroup([SymPerm(g.images.tolist()) for g in gens])
    for p in random_perms(rng, 8, 5) + [G.random_element(rng)]:
        assert G.contains(p) == S.contains(SymPerm(p.images.tolist()))


def test_element_array_is_the_group():
    G = PermGroup(gold_generators(F4))
    elems = G.element_array()
    assert len({row.tobytes() for row in elems}) == 960
    assert all(G.contains(Permutation(row)) for row in elems[::37])
    with pytest.raises(GroupTooLarge):
        G.element_array(limit=100)


def test_base_prefix_is_respected():
    G = PermGroup(gold_generators(F4), base_prefix=[5, 9])
    assert G.base[:2] == [5, 9]
    assert G.order == 960
    assert G.basic_orbit(0) == set(range(16))
    for g in G.stabilizer_generators(1):
        assert g(5) == 5


def test_orbits_and_subgroups():
    T = PermGroup(translation_generators(F4))
    G = PermGroup(gold_generators(F4))
    assert T.is_subgroup_of(G) and not G.is_subgroup_of(T)
    assert T.orbits() == [set(range(16))]
    assert T.is_abelian() and not G.is_abelian()
    M = PermGroup([mult_perm(F4, F4.generator)])
    assert M.orbits() == [{0}, set(range(1, 16))]


def test_family_u_is_automorphism_group_sample():
    from apnforge.family import FamilyParams, family_code, subgroup_U

    p = FamilyParams.make(3)
    U, c = subgroup_U(p), family_code(p)
    rng = np.random.default_rng(0)
    assert all(is_automorphism(c, U.random_element(rng)) for _ in range(30))

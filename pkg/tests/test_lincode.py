import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from apnforge.errors import CapTooLarge, LengthMismatch, NotSupercode, NoWitness, TooBig
from apnforge.funcspace import FunctionTable, PolySpec, evaluate, family_poly, gold_poly, is_apn, random_quadratic
from apnforge.gf2n import make_field, subfield
from apnforge.lincode import (
    BinaryCode,
    bits_to_int,
    build_code,
    code_equal,
    codeword,
    contains_code,
    dual_min_distance,
    ea_witness,
    enumerate_codewords,
    function_from_code,
    gf2_inv,
    gf2_matmul,
    gf2_rank,
    int_to_bits,
    permute_code,
    rm1_code,
    weight_distribution,
)

F4, F5, F6 = make_field(4), make_field(5), make_field(6)


def mono(F, e, c=1):
    return evaluate(PolySpec.from_terms(F, [(c, e)]))


def dual_distance_oracle(c: BinaryCode) -> int:
    """Minimum weight of a nonzero vector orthogonal to every row (all 2^N vectors)."""
    N = c.length
    G = c.matrix().astype(np.int64)
    vs = (np.arange(1, 1 << N)[:, None] >> np.arange(N)) & 1
    ortho = ((vs @ G.T) % 2 == 0).all(axis=1)
    return int(vs[ortho].sum(axis=1).min())


def test_bit_helpers():
    bits = np.array([1, 0, 1, 1, 0], dtype=np.uint8)
    assert bits_to_int(bits) == 0b01101
    assert int_to_bits(0b01101, 5).tolist() == bits.tolist()


def test_gf2_matrix_helpers():
    rng = np.random.default_rng(1)
    while True:
        a = rng.integers(0, 2, (6, 6)).astype(np.uint8)
        if gf2_rank(a) == 6:
            break
    assert np.array_equal(gf2_matmul(a, gf2_inv(a)), np.eye(6, dtype=np.uint8))


def test_codeword_definition():
    f = mono(F5, 3)
    tr = F5.trace
    for alpha, beta, eps in [(0, 0, 1), (3, 0, 0), (0, 7, 0), (9, 17, 1)]:
        expect = [tr(F5.mul(alpha, x)) ^ tr(F5.mul(beta, f(x))) ^ eps for x in range(32)]
        assert int_to_bits(codeword(f, alpha, beta, eps), 32).tolist() == expect
        assert codeword(f, alpha, beta, eps) in build_code(f)


@pytest.mark.parametrize(
    "f,dim",
    [
        (mono(F4, 3), 9),
        (mono(F5, 3), 11),
        (mono(F6, 2), 7),
        (evaluate(family_poly(F6, 1)), 13),
        (evaluate(family_poly(F6, 5)), 13),
    ],
)
def test_dimensions(f, dim):
    assert build_code(f).dimension == dim


def test_linearized_function_gives_rm1():
    assert code_equal(build_code(mono(F6, 2)), rm1_code(F6))
    assert rm1_code(F4).dimension == 5
    assert BinaryCode(F4, []).dimension == 0


def test_rm1_weight_distribution():
    assert weight_distribution(rm1_code(F4)) == {0: 1, 8: 30, 16: 1}
    assert len(enumerate_codewords(build_code(mono(F4, 3)))) == 512


def test_equality_and_containment():
    c = build_code(mono(F6, 3))
    assert code_equal(c, c)
    assert contains_code(c, rm1_code(F6))
    assert not code_equal(build_code(evaluate(family_poly(F6, 1))), c)
    with pytest.raises(LengthMismatch):
        code_equal(c, rm1_code(F5))


def test_c_independence_at_code_level():
    L = subfield(F6)
    outside = [a for a in range(64) if not L.contains(a)]
    base = build_code(evaluate(family_poly(F6, 1, c=outside[0])))
    for d in outside[1:6]:
        assert code_equal(base, build_code(evaluate(family_poly(F6, 1, c=d))))


def test_permute_code():
    c = build_code(mono(F4, 3))
    assert code_equal(permute_code(c, np.arange(16)), c)
    # translation by 5 preserves a quadratic code
    assert code_equal(permute_code(c, np.arange(16) ^ 5), c)
    swap = np.arange(16)
    swap[[0, 1]] = [1, 0]
    assert not code_equal(permute_code(c, swap), c)
    swap = np.arange(16)
    swap[[3, 11]] = [11, 3]
    assert not code_equal(permute_code(c, swap), c)


@pytest.mark.parametrize(
    "c,expected",
    [(rm1_code(F4), 4), (build_code(mono(F4, 3)), 6), (build_code(mono(F4, 5)), 4)],
)
def test_dual_distance_against_oracle(c, expected):
    assert dual_distance_oracle(c) == expected
    assert dual_min_distance(c, 6) == expected


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 8))
def test_dual_distance_random_codes(seed, k):
    rng = np.random.default_rng(seed)
    rows = [int(r) for r in rng.integers(1, 1 << 16, k)]
    c = BinaryCode(F4, rows)
    d = dual_distance_oracle(c)
    got = dual_min_distance(c, 8)
    assert got == (d if d <= 8 else None)


def test_dual_distance_cap():
    c = build_code(mono(F5, 3))
    assert dual_min_distance(c, 6) == 6
    assert dual_min_distance(c, 5) is None
    with pytest.raises(CapTooLarge):
        dual_min_distance(c, 9)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_round_trip(n):
    F = make_field(n)
    rng = np.random.default_rng(n)
    for _ in range(5):
        f = evaluate(random_quadratic(F, rng))
        c = build_code(f)
        g = function_from_code(c)
        assert code_equal(build_code(g), c)


def test_recovery_examples():
    assert function_from_code(rm1_code(F4)).values.tolist() == [0] * 16
    g = function_from_code(build_code(mono(F4, 3)))
    assert is_apn(g)
    assert code_equal(build_code(g), build_code(mono(F4, 3)))


def test_recovery_rejects_bad_codes():
    with pytest.raises(NotSupercode):
        function_from_code(BinaryCode(F4, [1]))
    big = BinaryCode(F4, [1 << i for i in range(16)])
    with pytest.raises(TooBig):
        function_from_code(big)


def test_witness_trivial_and_family():
    c = build_code(mono(F6, 3))
    w = ea_witness(c, c)
    assert w.verify(c, c)
    L = subfield(F6)
    c1, c2 = [a for a in range(64) if not L.contains(a)][:2]
    a = build_code(evaluate(family_poly(F6, 1, c=c1)))
    b = build_code(evaluate(family_poly(F6, 1, c=c2)))
    w = ea_witness(a, b)
    assert w.verify(a, b)
    assert gf2_rank(w.B1) == 6


def test_witness_fails_for_unequal_codes():
    a = build_code(evaluate(family_poly(F6, 1)))
    with pytest.raises(NoWitness):
        ea_witness(a, build_code(evaluate(gold_poly(F6, 1))))


@pytest.mark.parametrize("seed", range(3))
def test_witness_for_explicit_ea_transform(seed):
    """g = A1(f(x + 3)) + A(x) with random affine A1, A; the codes coincide
    (an inner linear map would relabel coordinates instead)."""
    rng = np.random.default_rng(seed)
    F = F5
    f = evaluate(random_quadratic(F, rng, affine=False))

    def random_linear(invertible):
        while True:
            M = rng.integers(0, 2, (5, 5)).astype(np.uint8)
            if not invertible or gf2_rank(M) == 5:
                break
        cols = [bits_to_int(M[:, j]) for j in range(5)]
        out = np.zeros(32, dtype=np.int64)
        for x in range(32):
            for j in range(5):
                if x >> j & 1:
                    out[x] ^= cols[j]
        return out

    A1, A = random_linear(True), random_linear(False)
    g = FunctionTable(F, A1[f.values[np.arange(32) ^ 3]] ^ 7 ^ A)
    cf, cg = build_code(f), build_code(g)
    assert code_equal(cf, cg)
    w = ea_witness(cf, cg)
    assert w.verify(cf, cg)
    assert code_equal(build_code(w.apply(f)), cg)


def test_witness_for_non_apn_code():
    # x^5 on GF(16) has a smaller code; the solution spaces have kernels
    c = build_code(mono(F4, 5))
    assert ea_witness(c, c).verify(c, c)

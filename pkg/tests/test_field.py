import random

import pytest

from kpsim.field import (classical_poly_mul, clmul, from_hex, gf_add, gf_inv,
                         gf_mul_ref, gf_square, reduce233, to_hex, F_POLY)


def oracle_clmul(a, b):
    """Independent shift-and-XOR carry-less multiplication oracle."""
    acc = 0
    for i in range(b.bit_length()):
        if (b >> i) & 1:
            acc ^= a << i
    return acc


def rand233(rng):
    return rng.getrandbits(233)


def test_add_self_inverse_and_identity():
    rng = random.Random(1)
    for _ in range(100):
        a = rand233(rng)
        assert gf_add(a, a) == 0
        assert gf_add(a, 0) == a


def test_add_bitwise_example():
    # (t^74 + 1) + (t^74 + t) = t + 1
    assert gf_add((1 << 74) | 1, (1 << 74) | 2) == 3


def test_classical_poly_mul_identity():
    rng = random.Random(2)
    for _ in range(20):
        b = rng.getrandbits(12)
        assert classical_poly_mul(1, b, 12) == b


def test_classical_poly_mul_gf2_square():
    # (t + 1)^2 = t^2 + 1 over GF(2)
    assert classical_poly_mul(0b11, 0b11, 2) == 0b101


def test_classical_poly_mul_5bit_frozen():
    # value frozen from the shift-and-XOR oracle
    assert oracle_clmul(0b10011, 0b00111) == 0b1111001
    assert classical_poly_mul(0b10011, 0b00111, 5) == 0b1111001


def test_classical_poly_mul_exhaustive_5bit():
    for a in range(32):
        for b in range(32):
            assert classical_poly_mul(a, b, 5) == oracle_clmul(a, b)


def test_clmul_matches_classical_at_full_width():
    rng = random.Random(3)
    for _ in range(50):
        a, b = rand233(rng), rand233(rng)
        assert clmul(a, b) == classical_poly_mul(a, b, 233) == oracle_clmul(a, b)


def test_classical_poly_mul_rejects_oversized():
    with pytest.raises(ValueError):
        classical_poly_mul(0b100, 1, 2)
    with pytest.raises(ValueError):
        classical_poly_mul(1, 1, 0)


def test_reduce_modulus_to_zero():
    assert reduce233(F_POLY) == 0


def test_reduce_already_reduced():
    rng = random.Random(4)
    for _ in range(50):
        a = rand233(rng)
        assert reduce233(a) == a


def test_reduce_single_substitution():
    assert reduce233(1 << 233) == (1 << 74) | 1


def test_reduce_rejects_degree_above_bound():
    with pytest.raises(ValueError):
        reduce233(1 << 465)
    # degree exactly 464 is fine
    reduce233(1 << 464)


def test_mul_ref_identities():
    rng = random.Random(5)
    for _ in range(50):
        a = rand233(rng)
        assert gf_mul_ref(a, 1) == a
        assert gf_mul_ref(a, 0) == 0


def test_oracle_closure_commutative_associative_distributive():
    rng = random.Random(6)
    for _ in range(10_000):
        a, b = rand233(rng), rand233(rng)
        assert gf_mul_ref(a, b) == gf_mul_ref(b, a)
    for _ in range(10_000):
        a, b, c = rand233(rng), rand233(rng), rand233(rng)
        assert gf_mul_ref(gf_mul_ref(a, b), c) == gf_mul_ref(a, gf_mul_ref(b, c))
        assert gf_mul_ref(a, b ^ c) == gf_mul_ref(a, b) ^ gf_mul_ref(a, c)


def test_square_consistency():
    rng = random.Random(7)
    for _ in range(10_000):
        a = rand233(rng)
        assert gf_square(a) == gf_mul_ref(a, a)


def test_square_trivial_cases():
    assert gf_square(1) == 1
    assert gf_square(2) == 4  # t^2
    # (t^117)^2 = t^234 = t * (t^74 + 1) = t^75 + t
    assert gf_square(1 << 117) == (1 << 75) | 2


def test_inversion_property():
    rng = random.Random(8)
    for _ in range(1000):
        a = rand233(rng)
        if a == 0:
            continue
        assert gf_mul_ref(a, gf_inv(a)) == 1


def test_inverse_edge_cases():
    assert gf_inv(1) == 1
    with pytest.raises(ZeroDivisionError):
        gf_inv(0)


def test_hex_round_trip():
    rng = random.Random(9)
    for _ in range(100):
        a = rand233(rng)
        s = to_hex(a)
        assert len(s) == 59
        assert from_hex(s) == a
        assert from_hex("0x" + s) == a


def test_hex_errors():
    with pytest.raises(ValueError):
        from_hex("ff")  # wrong length
    with pytest.raises(ValueError):
        from_hex("f" * 59)  # top 3 bits set
    with pytest.raises(ValueError):
        to_hex(1 << 233)

import io
import random

import numpy as np
import pytest

from kpsim.attack import (EcdsaSample, correctness, extract_candidates,
                          key_to_bits, mean_profile, recover_private_key,
                          relative_correctness, run_attack)

B233_ORDER = 0x1000000000000000000000000000013E974E72F8A6922031D2603CFE0D7


def forward_ecdsa_s(key, k, e, r, epsilon):
    """Independent forward signature equation: s = k^-1 (e + r*key)."""
    return (pow(k, -1, epsilon) * (e + r * key)) % epsilon


def planted_matrix(rng, rows, planted_col, key):
    """Low-noise matrix with the key planted in one column: bit 1 maps one
    unit below the column mean, bit 0 one unit above."""
    m = 0.01 * rng.normal(0, 1, size=(rows, 54))
    bits = key_to_bits(key, rows)
    m[:, planted_col] = np.where(bits == 1, -1.0, 1.0)
    return m


def test_mean_profile_identical_rows():
    row = np.arange(54, dtype=float)
    m = np.tile(row, (10, 1))
    assert np.array_equal(mean_profile(m), row)


def test_mean_profile_toy():
    assert np.array_equal(mean_profile([[1.0, 2.0], [3.0, 4.0]]), [2.0, 3.0])


def test_mean_profile_oracle():
    rng = np.random.default_rng(1)
    m = rng.normal(0, 5, size=(230, 54))
    expected = [sum(m[j][i] for j in range(230)) / 230 for i in range(54)]
    assert np.allclose(mean_profile(m), expected, rtol=0, atol=1e-12)


def test_mean_profile_rejects_malformed():
    with pytest.raises(ValueError):
        mean_profile(np.zeros(54))
    with pytest.raises(ValueError):
        mean_profile(np.zeros((0, 54)))


def test_extract_tie_rule_all_ones():
    # a constant column ties with its mean everywhere: all bits become 1
    m = np.ones((20, 54)) * 7.5
    cands = extract_candidates(m, mean_profile(m))
    assert all((c.bits == 1).all() for c in cands)
    assert [c.clock_index for c in cands] == list(range(1, 55))


def test_extract_single_low_row():
    m = np.ones((10, 54))
    m[4, 17] = 0.0
    cands = extract_candidates(m, mean_profile(m))
    bits = cands[17].bits
    assert bits[4] == 1 and bits.sum() == 1


def test_extract_dimension_mismatch():
    m = np.zeros((5, 54))
    with pytest.raises(ValueError):
        extract_candidates(m, np.zeros(53))


def test_planted_leak_recovered():
    rng = np.random.default_rng(2)
    key = int.from_bytes(rng.bytes(29), "big") % (1 << 230)
    m = planted_matrix(rng, 230, planted_col=7, key=key)
    cands = extract_candidates(m, mean_profile(m))
    assert np.array_equal(cands[7].bits, key_to_bits(key, 230))


def test_relative_correctness_identities():
    bits = key_to_bits(0b1011, 4)
    assert relative_correctness(bits, bits) == 100.0
    assert relative_correctness(bits, 1 - bits) == 0.0
    half = np.array([1, 1, 0, 0], dtype=np.uint8)
    assert relative_correctness(half, np.array([1, 0, 1, 0], np.uint8)) == 50.0
    with pytest.raises(ValueError):
        relative_correctness(bits, key_to_bits(0, 5))


def test_exact_half_matches():
    ones = np.ones(230, np.uint8)
    key = np.zeros(230, np.uint8)
    key[:115] = 1
    assert relative_correctness(ones, key) == 50.0


def test_correctness_folding():
    assert correctness(31) == 69.0
    assert correctness(50) == 50.0
    assert correctness(100) == 100.0
    for d1 in range(101):
        assert correctness(d1) == correctness(100 - d1)
        assert 50.0 <= correctness(d1) <= 100.0
    with pytest.raises(ValueError):
        correctness(-1)
    with pytest.raises(ValueError):
        correctness(100.5)


def test_run_attack_planted():
    rng = np.random.default_rng(3)
    key = int.from_bytes(rng.bytes(29), "big") % (1 << 230)
    m = planted_matrix(rng, 230, planted_col=30, key=key)
    report = run_attack(m, true_key=key)
    assert report.scored
    assert report.best.delta == 100.0
    assert report.best.clock_index == 31  # 1-based
    assert report.entries[0].rank == 1


def test_run_attack_constant_matrix():
    key = (1 << 100) - 1  # 100 ones then zeros
    m = np.ones((230, 54))
    report = run_attack(m, true_key=key)
    # every candidate is all-ones; delta1 = 100/230 of the bits
    expect_d1 = 100.0 * 100 / 230
    assert all(abs(e.delta1 - expect_d1) < 1e-9 for e in report.entries)


def test_affine_rescaling_invariance():
    rng = np.random.default_rng(4)
    m = rng.normal(0, 3, size=(120, 54))
    key = int.from_bytes(rng.bytes(15), "big")
    a = run_attack(m, true_key=key)
    b = run_attack(2.5 * m + 17.0, true_key=key)
    for ea, eb in zip(a.entries, b.entries):
        assert ea.clock_index == eb.clock_index
        assert ea.delta == eb.delta
        assert np.array_equal(ea.candidate.bits, eb.candidate.bits)


def test_ranking_is_permutation_and_stable():
    rng = np.random.default_rng(5)
    m = rng.normal(0, 1, size=(230, 54))
    key = int.from_bytes(rng.bytes(29), "big") % (1 << 230)
    report = run_attack(m, true_key=key)
    clocks = sorted(e.clock_index for e in report.entries)
    assert clocks == list(range(1, 55))
    deltas = [e.delta for e in report.entries]
    assert deltas == sorted(deltas, reverse=True)
    # stable tie-break by original clock index
    for x, y in zip(report.entries, report.entries[1:]):
        if x.delta == y.delta:
            assert x.clock_index < y.clock_index


def test_column_permutation_equivariance():
    rng = np.random.default_rng(6)
    m = rng.normal(0, 1, size=(60, 54))
    perm = rng.permutation(54)
    c1 = extract_candidates(m, mean_profile(m))
    c2 = extract_candidates(m[:, perm], mean_profile(m[:, perm]))
    for new_i, old_i in enumerate(perm):
        assert np.array_equal(c2[new_i].bits, c1[old_i].bits)


def test_iid_noise_stays_near_ideal():
    for seed in range(5):
        rng = np.random.default_rng(seed)
        m = rng.normal(0, 1, size=(230, 54))
        key = int.from_bytes(rng.bytes(29), "big") % (1 << 230)
        report = run_attack(m, true_key=key)
        assert report.best.delta <= 62.0


def test_unscored_proxy_mode():
    rng = np.random.default_rng(7)
    m = rng.normal(0, 1, size=(230, 54))
    report = run_attack(m)
    assert not report.scored
    assert all(e.delta is None and e.delta1 is None for e in report.entries)
    buf = io.StringIO()
    report.to_csv(buf)
    text = buf.getvalue()
    assert "proxy" in text
    assert "best_delta=na" in text


def test_report_csv_format():
    rng = np.random.default_rng(8)
    key = int.from_bytes(rng.bytes(29), "big") % (1 << 230)
    m = planted_matrix(rng, 230, planted_col=3, key=key)
    report = run_attack(m, true_key=key)
    buf = io.StringIO()
    report.to_csv(buf, comments=["origin=test"])
    lines = buf.getvalue().splitlines()
    assert lines[0] == "# origin=test"
    assert lines[1] == "rank,clock_index,delta1,delta,candidate_hex"
    assert len([l for l in lines if not l.startswith("#")]) == 55  # header+54
    assert lines[-1].startswith("# best_delta=100 best_clock=4")
    first = lines[2].split(",")
    assert first[0] == "1"
    assert int(first[4], 16) == key


def test_recover_private_key_toy():
    # epsilon=11, r=3, s=4, k=5, e=2 -> Key = 6 (checked by forward s)
    sample = EcdsaSample(e=2, r=3, s=4, k=5, epsilon=11)
    key = recover_private_key(sample)
    assert key == 6
    assert forward_ecdsa_s(key, 5, 2, 3, 11) == 4


def test_recover_private_key_zero_case():
    # s*k == e (mod eps) -> key 0
    sample = EcdsaSample(e=20 % 13, r=5, s=4, k=5, epsilon=13)
    assert recover_private_key(sample) == 0


def test_recover_round_trip_small_prime():
    rng = random.Random(9)
    eps = 10007
    for _ in range(300):
        key = rng.randrange(1, eps)
        k = rng.randrange(1, eps)
        r = rng.randrange(1, eps)
        e = rng.randrange(0, eps)
        s = forward_ecdsa_s(key, k, e, r, eps)
        if s == 0:
            continue
        assert recover_private_key(EcdsaSample(e, r, s, k, eps)) == key


def test_recover_round_trip_b233_order():
    rng = random.Random(10)
    eps = B233_ORDER
    for _ in range(100):
        key = rng.randrange(1, eps)
        k = rng.randrange(1, eps)
        r = rng.randrange(1, eps)
        e = rng.randrange(0, eps)
        s = forward_ecdsa_s(key, k, e, r, eps)
        assert recover_private_key(EcdsaSample(e, r, s, k, eps)) == key


def test_recover_errors():
    with pytest.raises(ValueError):
        EcdsaSample(e=1, r=0, s=1, k=1, epsilon=11)
    with pytest.raises(ValueError, match="not invertible"):
        recover_private_key(EcdsaSample(e=1, r=5, s=1, k=1, epsilon=15))

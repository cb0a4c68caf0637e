import numpy as np
import pytest

from kpsim.ladder import CycleActivity
from kpsim.trace import (PowerModelParams, PowerTrace, compress,
                         power_of_cycle, read_trace, slice_into_slots,
                         slot_matrix_to_csv, trace_from_activity, write_trace)


def test_power_of_cycle_trivials():
    params = PowerModelParams()
    rng = np.random.default_rng(0)
    assert power_of_cycle(CycleActivity(0, 0), params, rng) == 0.0
    assert power_of_cycle(CycleActivity(42, 0), params, rng) == 42.0
    params = PowerModelParams(alpha=2.0, beta=0.5)
    assert power_of_cycle(CycleActivity(10, 4), params, rng) == 22.0


def test_power_noise_determinism():
    params = PowerModelParams(sigma=3.0)
    a = [power_of_cycle(CycleActivity(5, 5), params,
                        np.random.default_rng(9)) for _ in range(1)]
    b = [power_of_cycle(CycleActivity(5, 5), params,
                        np.random.default_rng(9)) for _ in range(1)]
    assert a == b


def test_batch_matches_per_cycle():
    params = PowerModelParams(alpha=1.5, beta=0.25, sigma=2.0)
    toggles = [3, 1, 4, 1, 5, 9, 2, 6]
    hds = [2, 7, 1, 8, 2, 8, 1, 8]
    batch = trace_from_activity(toggles, hds, params,
                                np.random.default_rng(77))
    stream = np.random.default_rng(77)
    singles = [power_of_cycle(CycleActivity(t, h), params, stream)
               for t, h in zip(toggles, hds)]
    assert np.allclose(batch.samples, singles, rtol=0, atol=0)


def test_params_validation():
    with pytest.raises(ValueError):
        PowerModelParams(alpha=-1)
    with pytest.raises(ValueError):
        PowerModelParams(sigma=-0.5)


def test_compress_identity_and_mean():
    t = PowerTrace([1.0, 3.0, 2.0, 2.0], {"samples_per_cycle": 1})
    assert np.array_equal(compress(t).samples, t.samples)
    t2 = PowerTrace([1.0, 3.0, 2.0, 2.0],
                    {"samples_per_cycle": 2, "cycles_per_slot": 54})
    c = compress(t2)
    assert np.array_equal(c.samples, [2.0, 2.0])
    assert c.samples_per_cycle == 1
    # idempotent on per-cycle traces
    assert np.array_equal(compress(c).samples, c.samples)


def test_compress_oracle():
    rng = np.random.default_rng(5)
    raw = rng.normal(0, 1, size=120)
    t = PowerTrace(raw, {"samples_per_cycle": 4})
    expected = [np.mean(raw[i:i + 4]) for i in range(0, 120, 4)]
    assert np.allclose(compress(t).samples, expected)


def test_compress_indivisible():
    t = PowerTrace([1.0, 2.0, 3.0], {"samples_per_cycle": 2})
    with pytest.raises(ValueError, match="divisible"):
        compress(t)


def _linear_trace(key_bits):
    cycles = (key_bits - 1) * 54
    return PowerTrace(np.arange(cycles, dtype=float),
                      {"key_bits": key_bits, "cycles_per_slot": 54,
                       "samples_per_cycle": 1})


def test_slice_shape_and_indexing():
    trace = _linear_trace(232)
    m = slice_into_slots(trace)
    assert m.shape == (230, 54)
    # slot j comes from time position (230 - j) of the main loop
    for j in (0, 1, 229):
        start = (230 - j) * 54
        assert np.array_equal(m[j], np.arange(start, start + 54, dtype=float))


def test_slice_length_mismatch():
    short = PowerTrace(np.zeros(230 * 54),
                       {"key_bits": 232, "cycles_per_slot": 54})
    with pytest.raises(ValueError, match="expected 12474"):
        slice_into_slots(short)


def test_slice_requires_key_bits():
    t = PowerTrace(np.zeros(108), {"cycles_per_slot": 54})
    with pytest.raises(ValueError, match="key bit length"):
        slice_into_slots(t)
    m = slice_into_slots(t, key_bitlen=3)
    assert m.shape == (1, 54)


def test_slice_requires_compressed():
    t = PowerTrace(np.zeros(108), {"key_bits": 2, "cycles_per_slot": 54,
                                   "samples_per_cycle": 2})
    with pytest.raises(ValueError, match="compressed"):
        slice_into_slots(t)


def test_write_read_round_trip(tmp_path):
    rng = np.random.default_rng(8)
    samples = rng.normal(0, 123.456, size=200)
    md = {"design": "basic", "key_bits": 232, "cycles_per_slot": 54,
          "alpha": 1.0, "sigma": 0.125, "seed": 3}
    path = tmp_path / "t.trace"
    write_trace(PowerTrace(samples, md), path)
    back = read_trace(path)
    assert np.array_equal(back.samples, samples)  # exact, not approximate
    assert back.metadata["design"] == "basic"
    assert back.metadata["key_bits"] == 232
    assert back.metadata["sigma"] == 0.125


def test_read_missing_required_metadata(tmp_path):
    path = tmp_path / "bad.trace"
    path.write_text("# design=basic\n1.0\n2.0\n")
    with pytest.raises(ValueError, match="cycles_per_slot"):
        read_trace(path)


def test_read_minimal_external_file(tmp_path):
    path = tmp_path / "min.trace"
    path.write_text("# cycles_per_slot=54\n"
                    + "".join("%d.5\n" % i for i in range(54)))
    t = read_trace(path)
    assert len(t.samples) == 54  # one slot-equivalent of values
    assert t.samples[1] == 1.5
    assert t.samples_per_cycle == 1


def test_read_parse_error_names_line(tmp_path):
    path = tmp_path / "junk.trace"
    path.write_text("# cycles_per_slot=54\n1.0\nnot-a-number\n")
    with pytest.raises(ValueError, match="line 3"):
        read_trace(path)


def test_csv_export(tmp_path):
    m = np.array([[1.0, 2.5], [3.25, 4.0]])
    path = tmp_path / "m.csv"
    with open(path, "w") as fh:
        slot_matrix_to_csv(m, fh)
    rows = path.read_text().strip().splitlines()
    assert rows == ["1.0,2.5", "3.25,4.0"]

"""Power-trace modelling, serialisation, and attack preparation.

Per-cycle power is a weighted sum of the partial-multiplier toggle count and
the register-write Hamming distance, plus optional Gaussian noise:

    p = alpha * pm_toggles + beta * register_hd + N(0, sigma)

Traces are stored as one decimal value per line with '#' key=value metadata
lines; values round-trip exactly (shortest-repr formatting).  For the attack
a compressed trace is fragmented into per-key-bit slots of 54 clock cycles,
dropping the first main-loop slot, giving the (key_bits - 2) x 54 slot
matrix the difference-of-means test consumes.
"""

from dataclasses import dataclass, field

import numpy as np

CYCLES_PER_SLOT = 54

REQUIRED_METADATA = ("cycles_per_slot",)

_FLOAT_KEYS = {"alpha", "beta", "sigma"}
_INT_KEYS = {"key_bits", "cycles", "cycles_per_slot", "samples_per_cycle",
             "seed", "noise_seed"}


@dataclass
class PowerModelParams:
    alpha: float = 1.0
    beta: float = 1.0
    sigma: float = 0.0
    noise_seed: int = 0

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0 or self.sigma < 0:
            raise ValueError("power model weights must be non-negative")


@dataclass
class PowerTrace:
    samples: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)

    @property
    def samples_per_cycle(self):
        return int(self.metadata.get("samples_per_cycle", 1))

    @property
    def cycles_per_slot(self):
        return int(self.metadata.get("cycles_per_slot", CYCLES_PER_SLOT))


def power_of_cycle(activity, params, noise_stream):
    """Power value of a single cycle-activity record."""
    return (params.alpha * activity.pm_toggles
            + params.beta * activity.register_hd
            + float(noise_stream.normal(0.0, params.sigma)))


def trace_from_activity(pm_toggles, register_hd, params, noise_stream,
                        metadata=None):
    """Vectorised power model over whole activity arrays.

    Draw-for-draw identical to mapping power_of_cycle over the cycles with
    the same noise stream.
    """
    pm = np.asarray(pm_toggles, dtype=np.float64)
    hd = np.asarray(register_hd, dtype=np.float64)
    if pm.shape != hd.shape:
        raise ValueError("activity arrays disagree in length")
    samples = params.alpha * pm + params.beta * hd
    samples = samples + noise_stream.normal(0.0, params.sigma, size=len(pm))
    md = dict(metadata or {})
    md.setdefault("cycles", len(pm))
    md.setdefault("cycles_per_slot", CYCLES_PER_SLOT)
    md.setdefault("samples_per_cycle", 1)
    md.setdefault("alpha", params.alpha)
    md.setdefault("beta", params.beta)
    md.setdefault("sigma", params.sigma)
    md.setdefault("noise_seed", params.noise_seed)
    return PowerTrace(samples, md)


def compress(trace):
    """Average each clock cycle's samples down to one value per cycle."""
    spc = trace.samples_per_cycle
    if spc == 1:
        return PowerTrace(trace.samples.copy(),
                          dict(trace.metadata, samples_per_cycle=1))
    n = len(trace.samples)
    if n % spc:
        raise ValueError("sample count %d not divisible by "
                         "samples_per_cycle %d" % (n, spc))
    samples = trace.samples.reshape(-1, spc).mean(axis=1)
    md = dict(trace.metadata)
    md["samples_per_cycle"] = 1
    md["cycles"] = len(samples)
    return PowerTrace(samples, md)


def slice_into_slots(trace, key_bitlen=None):
    """Fragment a compressed trace into the per-key-bit slot matrix.

    Row j holds the 54 per-cycle values of the slot in which key bit j was
    processed; the slot of the first processed bit (the highest main-loop
    bit) is excluded, as is the top bit, which never enters the main loop.
    """
    if trace.samples_per_cycle != 1:
        raise ValueError("trace must be compressed to one value per cycle")
    if key_bitlen is None:
        if "key_bits" not in trace.metadata:
            raise ValueError("key bit length unknown: pass key_bitlen or "
                             "provide key_bits metadata")
        key_bitlen = int(trace.metadata["key_bits"])
    spc = trace.cycles_per_slot
    nslots = key_bitlen - 1
    expected = nslots * spc
    if len(trace.samples) != expected:
        raise ValueError("expected %d cycles (%d slots of %d) for a %d-bit "
                         "key, got %d" % (expected, nslots, spc, key_bitlen,
                                          len(trace.samples)))
    rows = key_bitlen - 2
    matrix = np.empty((rows, spc), dtype=np.float64)
    for j in range(rows):
        start = (key_bitlen - 2 - j) * spc
        matrix[j] = trace.samples[start:start + spc]
    return matrix


def slot_matrix_to_csv(matrix, fh):
    for row in matrix:
        fh.write(",".join(repr(float(v)) for v in row))
        fh.write("\n")


def write_trace(trace, path):
    with open(path, "w") as fh:
        for key, value in trace.metadata.items():
            fh.write("# %s=%s\n" % (key, value))
        for v in trace.samples:
            fh.write(repr(float(v)))
            fh.write("\n")


def read_trace(path):
    metadata = {}
    samples = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" not in body:
                    raise ValueError("%s: line %d: malformed metadata line"
                                     % (path, lineno))
                key, value = body.split("=", 1)
                key, value = key.strip(), value.strip()
                if key in _INT_KEYS:
                    try:
                        value = int(value)
                    except ValueError:
                        raise ValueError("%s: line %d: %s must be an integer"
                                         % (path, lineno, key)) from None
                elif key in _FLOAT_KEYS:
                    value = float(value)
                metadata[key] = value
                continue
            try:
                samples.append(float(line))
            except ValueError:
                raise ValueError("%s: line %d: not a power value: %r"
                                 % (path, lineno, line)) from None
    for key in REQUIRED_METADATA:
        if key not in metadata:
            raise ValueError("%s: missing required metadata key %r"
                             % (path, key))
    return PowerTrace(np.array(samples, dtype=np.float64), metadata)

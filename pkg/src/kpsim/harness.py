"""Batch experiment driver: simulate traces, attack them, aggregate results.

All randomness is derived from explicit integer seeds, so identical
experiment specifications reproduce identical output files byte for byte.
Per run the seed is split into a countermeasure stream (scalar blinding
r, blinding point, projective factor) and the ladder's permutation stream;
random keys come from a tagged child of the experiment seed alone so all
designs of one experiment share the same (k, P) inputs.
"""

from dataclasses import dataclass, field

import numpy as np

from .attack import run_attack
from .curve import INFINITY, default_curve, ec_add, scalar_mul_ref
from .datapath import DESIGNS
from .ladder import montgomery_kp, randomize_scalar
from .trace import PowerModelParams, compress, slice_into_slots, \
    trace_from_activity

CM_SCALAR = "scalar-randomization"
CM_BLIND = "point-blinding"
CM_PROJECTIVE = "projective-randomization"
COUNTERMEASURES = (CM_SCALAR, CM_BLIND, CM_PROJECTIVE)

_KEY_TAG = 0x6B657973  # distinguishes the key stream from run streams


@dataclass
class ExperimentSpec:
    designs: tuple = tuple(DESIGNS)
    key: object = "random"                   # int or "random"
    point: object = "G"                      # Point or "G"
    countermeasure_arms: tuple = ((),)       # each arm: tuple of CM names
    seeds: tuple = (0,)
    params: PowerModelParams = field(default_factory=PowerModelParams)
    curve_file: object = None

    def __post_init__(self):
        if not self.designs:
            raise ValueError("at least one design is required")
        if not self.seeds:
            raise ValueError("at least one seed is required")
        for d in self.designs:
            if d not in DESIGNS:
                raise ValueError("unknown design %r" % (d,))
        for arm in self.countermeasure_arms:
            for cm in arm:
                if cm not in COUNTERMEASURES:
                    raise ValueError("unknown countermeasure %r" % (cm,))


def random_scalar(rng):
    """Random 232-bit scalar with the top bit set."""
    return int.from_bytes(rng.bytes(29), "big") % (1 << 232) | (1 << 231)


def experiment_key(key_spec, seed):
    if key_spec == "random":
        rng = np.random.default_rng(np.random.SeedSequence([_KEY_TAG, seed]))
        return random_scalar(rng)
    key = int(key_spec)
    if key.bit_length() != 232 or not (key >> 231) & 1:
        raise ValueError("scalar must be 232 bits with the top bit set")
    return key


def run_traced(key, point, design, seed, countermeasures=(), curve=None):
    """One ladder execution with the selected countermeasures applied.

    Returns (LadderResult-like, processed_scalar): the trace belongs to the
    execution that actually ran (blinded point, randomized scalar and/or
    projective representation).
    """
    curve = curve if curve is not None else default_curve()
    config = DESIGNS[design] if isinstance(design, str) else design
    ss = np.random.SeedSequence(seed)
    cm_ss, ladder_ss = ss.spawn(2)
    cm_rng = np.random.default_rng(cm_ss)

    k_eff = key
    point_eff = point
    lam = None
    if CM_SCALAR in countermeasures:
        k_eff = randomize_scalar(key, curve, cm_rng)
    if CM_BLIND in countermeasures:
        r = int(cm_rng.integers(1, 1 << 62)) | 1
        blind = scalar_mul_ref(r, curve.g, curve)
        point_eff = ec_add(point, blind, curve)
        if point_eff is INFINITY:
            raise ValueError("degenerate blinding: P + R is the identity")
    if CM_PROJECTIVE in countermeasures:
        lam = 0
        while lam == 0:
            lam = int.from_bytes(cm_rng.bytes(30), "big") % (1 << 233)

    res = montgomery_kp(k_eff, point_eff, config, ladder_ss, curve,
                        projective_lambda=lam)
    return res, k_eff


def simulate_power_trace(key, point, design, seed, params=None,
                         countermeasures=(), curve=None):
    """Simulate one run and convert it to a PowerTrace with full metadata."""
    params = params if params is not None else PowerModelParams()
    curve = curve if curve is not None else default_curve()
    res, k_eff = run_traced(key, point, design, seed, countermeasures, curve)
    noise = np.random.default_rng(
        np.random.SeedSequence([params.noise_seed, seed]))
    config = DESIGNS[design]
    md = {
        "design": design,
        "pm_variant": config.pm_variant,
        "sequence_mode": config.sequence_mode,
        "countermeasures": ",".join(countermeasures) or "none",
        "key_bits": k_eff.bit_length(),
        "cycles": len(res.trace),
        "cycles_per_slot": 54,
        "samples_per_cycle": 1,
        "alpha": params.alpha,
        "beta": params.beta,
        "sigma": params.sigma,
        "seed": seed,
        "noise_seed": params.noise_seed,
    }
    trace = trace_from_activity(res.trace.pm_toggles, res.trace.register_hd,
                                params, noise, md)
    return trace, k_eff


def attack_power_trace(trace, true_key=None):
    """Compress, fragment, and run the difference-of-means attack."""
    slots = slice_into_slots(compress(trace))
    return run_attack(slots, true_key=true_key)


def best_delta(trace, true_key):
    return attack_power_trace(trace, true_key).best.delta


def run_experiment(spec):
    """Run design x countermeasure-arm x seed, returning result rows.

    Rows are dicts with design, countermeasures, seed, rank, clock_index,
    delta1, delta; summaries maps (design, arm) to the mean best delta.
    """
    curve = default_curve() if spec.curve_file is None \
        else spec.curve_file
    rows = []
    summaries = {}
    for design in spec.designs:
        for arm in spec.countermeasure_arms:
            arm_label = ",".join(arm) or "none"
            bests = []
            for seed in spec.seeds:
                key = experiment_key(spec.key, seed)
                point = curve.g if spec.point == "G" else spec.point
                trace, k_eff = simulate_power_trace(
                    key, point, design, seed, spec.params, arm, curve)
                report = attack_power_trace(trace, true_key=k_eff)
                bests.append(report.best.delta)
                for e in report.entries:
                    rows.append({
                        "design": design,
                        "countermeasures": arm_label,
                        "seed": seed,
                        "rank": e.rank,
                        "clock_index": e.clock_index,
                        "delta1": e.delta1,
                        "delta": e.delta,
                    })
            summaries[(design, arm_label)] = float(np.mean(bests))
    return rows, summaries


def experiment_csv(spec, rows, summaries, fh, comment_lines=()):
    for line in comment_lines:
        fh.write("# %s\n" % line)
    fh.write("design,countermeasures,seed,rank,clock_index,delta1,delta\n")
    for row in rows:
        fh.write("%s,%s,%d,%d,%d,%.10g,%.10g\n" % (
            row["design"], row["countermeasures"], row["seed"], row["rank"],
            row["clock_index"], row["delta1"], row["delta"]))
    for (design, arm), mean_best in sorted(summaries.items()):
        fh.write("# summary design=%s countermeasures=%s "
                 "mean_best_delta=%.10g\n" % (design, arm, mean_best))

"""The 233-bit field multiplier as a 9-cycle sequential machine.

A full multiplication is decomposed by 4-segment iterative Karatsuba into 9
partial products of 59-bit operands.  One partial product is computed per
clock cycle by the selected partial multiplier, XORed into the accumulator
at every offset of its accumulation-plan entry, and the accumulator is
reduced after every cycle.  The execution order of the 9 partial products is
either the fixed plan order or a fresh uniformly random permutation per
multiplication.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .field import clmul, gf_mul_ref, reduce233
from .netlist import batch_evaluate, build_classical_pm, build_combined_pm

SEG = 59
_SEG_MASK = (1 << SEG) - 1

PM_COMBINED = "combined"
PM_CLASSICAL = "classical"
SEQ_FIXED = "fixed"
SEQ_RANDOMIZED = "randomized"


@dataclass(frozen=True)
class DesignConfig:
    pm_variant: str
    sequence_mode: str

    def __post_init__(self):
        if self.pm_variant not in (PM_COMBINED, PM_CLASSICAL):
            raise ValueError("unknown pm variant %r" % (self.pm_variant,))
        if self.sequence_mode not in (SEQ_FIXED, SEQ_RANDOMIZED):
            raise ValueError("unknown sequence mode %r" % (self.sequence_mode,))


# the four investigated designs
DESIGNS = {
    "basic": DesignConfig(PM_COMBINED, SEQ_FIXED),
    "rand-seq": DesignConfig(PM_COMBINED, SEQ_RANDOMIZED),
    "classical-pm": DesignConfig(PM_CLASSICAL, SEQ_FIXED),
    "classical-rand": DesignConfig(PM_CLASSICAL, SEQ_RANDOMIZED),
}


class SegmentPair(NamedTuple):
    j: int      # 1-based partial-product index
    a: int      # 59-bit operand
    b: int


class MultCycleActivity(NamedTuple):
    pm_toggles: int
    accumulator_hd: int


# Accumulation plan: partial product j is XORed into the product register at
# each listed shift.  Derived from the 2-over-2 recursive Karatsuba
# recombination with segment size 59 and verified against schoolbook
# multiplication by the test suite before anything was built on top.
PLAN_OFFSETS = {
    1: (0, SEG, 2 * SEG, 3 * SEG),          # a0*b0
    2: (SEG, 2 * SEG, 3 * SEG, 4 * SEG),    # a1*b1
    3: (SEG, 3 * SEG),                      # (a0^a1)*(b0^b1)
    4: (2 * SEG, 3 * SEG, 4 * SEG, 5 * SEG),  # a2*b2
    5: (3 * SEG, 4 * SEG, 5 * SEG, 6 * SEG),  # a3*b3
    6: (3 * SEG, 5 * SEG),                  # (a2^a3)*(b2^b3)
    7: (2 * SEG, 3 * SEG),                  # (a0^a2)*(b0^b2)
    8: (3 * SEG, 4 * SEG),                  # (a1^a3)*(b1^b3)
    9: (3 * SEG,),                          # (a0^a1^a2^a3)*(b0^b1^b2^b3)
}


@lru_cache(maxsize=None)
def get_pm_netlist(variant):
    if variant == PM_COMBINED:
        return build_combined_pm()
    if variant == PM_CLASSICAL:
        return build_classical_pm(59)
    raise ValueError("unknown pm variant %r" % (variant,))


def _segments(x):
    return [(x >> (SEG * i)) & _SEG_MASK for i in range(4)]


def decompose(a, b):
    """Split a 233-bit pair into the 9 Karatsuba segment-product operands."""
    a0, a1, a2, a3 = _segments(a)
    b0, b1, b2, b3 = _segments(b)
    return [
        SegmentPair(1, a0, b0),
        SegmentPair(2, a1, b1),
        SegmentPair(3, a0 ^ a1, b0 ^ b1),
        SegmentPair(4, a2, b2),
        SegmentPair(5, a3, b3),
        SegmentPair(6, a2 ^ a3, b2 ^ b3),
        SegmentPair(7, a0 ^ a2, b0 ^ b2),
        SegmentPair(8, a1 ^ a3, b1 ^ b3),
        SegmentPair(9, a0 ^ a1 ^ a2 ^ a3, b0 ^ b1 ^ b2 ^ b3),
    ]


def sample_permutation(mode, rng):
    """Execution order of the 9 partial products for one multiplication.

    Fixed mode is the identity; randomized mode draws an unbiased
    element-swap (Fisher-Yates) shuffle from the supplied generator.
    """
    if mode == SEQ_FIXED:
        return tuple(range(1, 10))
    if mode != SEQ_RANDOMIZED:
        raise ValueError("unknown sequence mode %r" % (mode,))
    order = list(range(1, 10))
    for i in range(8, 0, -1):
        j = int(rng.integers(0, i + 1))
        order[i], order[j] = order[j], order[i]
    return tuple(order)


class MultRun(NamedTuple):
    product: int
    pairs: list       # pm input pairs in executed order
    acc_hd: list      # per-cycle accumulator Hamming distance
    acc_values: list  # accumulator after each cycle (reduced)
    order: tuple      # executed partial-product indices


def mult_schedule(a, b, mode, rng):
    """Functional 9-cycle run of one field multiplication."""
    pairs = decompose(a, b)
    order = sample_permutation(mode, rng)
    seq = []
    acc_hd = []
    acc_values = []
    acc = 0
    for j in order:
        sp = pairs[j - 1]
        p = clmul(sp.a, sp.b)
        raw = acc
        for off in PLAN_OFFSETS[j]:
            raw ^= p << off
        nxt = reduce233(raw)
        acc_hd.append((acc ^ nxt).bit_count())
        acc = nxt
        seq.append((sp.a, sp.b))
        acc_values.append(acc)
    return MultRun(acc, seq, acc_hd, acc_values, order)


def field_mul(a, b, config, pm_state, rng):
    """One sequential field multiplication through the configured datapath.

    Returns (product, 9 MultCycleActivity records, new PM state).  The
    product is independent of the sampled permutation; the activity records
    are what the power model consumes.
    """
    netlist = get_pm_netlist(config.pm_variant)
    if pm_state.netlist is not netlist:
        raise ValueError("PM state does not belong to the configured netlist")
    run = mult_schedule(a, b, config.sequence_mode, rng)
    _, toggles, new_state = batch_evaluate(netlist, run.pairs, pm_state)
    activity = [MultCycleActivity(int(t), h)
                for t, h in zip(toggles, run.acc_hd)]
    return run.product, activity, new_state


def field_mul_ref(a, b):
    """Oracle the datapath is checked against."""
    return gf_mul_ref(a, b)

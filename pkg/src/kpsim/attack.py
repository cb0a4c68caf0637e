"""Horizontal DPA by difference of the means, plus ECDSA key recovery.

Given the slot matrix (one row per key bit, one column per clock cycle
within the 54-cycle slot), each clock index yields one key candidate: bit j
of candidate i is 1 exactly when the slot value p_j^i is smaller than or
equal to the column mean.  Candidates are scored against the processed
scalar as the percentage of correct bits (delta1) and folded to
delta = 50 + |50 - delta1|, since a candidate extracted with delta1 near 0
just means the opposite assumption was the right one.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass
class KeyCandidate:
    clock_index: int          # 1-based clock cycle within the slot
    bits: np.ndarray          # bit j = hypothesis for key bit j

    @property
    def value(self):
        v = 0
        for j in range(len(self.bits) - 1, -1, -1):
            v = (v << 1) | int(self.bits[j])
        return v

    @property
    def hex(self):
        width = (len(self.bits) + 3) // 4
        return "%0*x" % (width, self.value)


@dataclass
class RankedCandidate:
    rank: int
    clock_index: int
    delta1: Optional[float]
    delta: Optional[float]
    candidate: KeyCandidate


@dataclass
class AttackReport:
    entries: list
    scored: bool

    @property
    def best(self):
        return self.entries[0]

    def to_csv(self, fh, comments=()):
        for line in comments:
            fh.write("# %s\n" % line)
        if not self.scored:
            fh.write("# ranking=proxy (majority-vote agreement; no true "
                     "key supplied)\n")
        fh.write("rank,clock_index,delta1,delta,candidate_hex\n")
        for e in self.entries:
            d1 = "" if e.delta1 is None else "%.10g" % e.delta1
            d = "" if e.delta is None else "%.10g" % e.delta
            fh.write("%d,%d,%s,%s,%s\n"
                     % (e.rank, e.clock_index, d1, d, e.candidate.hex))
        best = self.best
        fh.write("# best_delta=%s best_clock=%d\n"
                 % ("%.10g" % best.delta if self.scored else "na",
                    best.clock_index))


def _check_matrix(slots):
    slots = np.asarray(slots, dtype=np.float64)
    if slots.ndim != 2 or slots.shape[0] < 1 or slots.shape[1] < 1:
        raise ValueError("slot matrix must be 2-D and non-empty")
    return slots


def mean_profile(slots):
    """Column means: the mean power profile of the slots."""
    return _check_matrix(slots).mean(axis=0)


def extract_candidates(slots, profile):
    """One key candidate per clock index by the at-most-mean rule."""
    slots = _check_matrix(slots)
    profile = np.asarray(profile, dtype=np.float64)
    if profile.shape != (slots.shape[1],):
        raise ValueError("profile length %d does not match %d columns"
                         % (len(profile), slots.shape[1]))
    return [
        KeyCandidate(i + 1, (slots[:, i] <= profile[i]).astype(np.uint8))
        for i in range(slots.shape[1])
    ]


def key_to_bits(key, nbits):
    return np.array([(key >> j) & 1 for j in range(nbits)], dtype=np.uint8)


def relative_correctness(candidate, true_bits):
    """delta1: percentage of candidate bits matching the processed key."""
    bits = candidate.bits if isinstance(candidate, KeyCandidate) else candidate
    true_bits = np.asarray(true_bits, dtype=np.uint8)
    if len(bits) != len(true_bits):
        raise ValueError("candidate and key lengths differ (%d vs %d)"
                         % (len(bits), len(true_bits)))
    return 100.0 * np.count_nonzero(bits == true_bits) / len(bits)


def correctness(delta1):
    """Fold delta1 into [50, 100]: delta = 50 + |50 - delta1|."""
    if not 0.0 <= delta1 <= 100.0:
        raise ValueError("delta1 out of range: %r" % (delta1,))
    return 50.0 + abs(50.0 - delta1)


def run_attack(slots, true_key=None, true_bits=None):
    """Full difference-of-means pipeline over a slot matrix.

    With a true key the candidates are ranked by folded correctness delta
    (descending, ties by clock index); without one the ranking falls back
    to an attacker-observable proxy, the agreement of each candidate with
    the majority vote over all candidates, and the report is marked
    unscored.
    """
    slots = _check_matrix(slots)
    profile = mean_profile(slots)
    candidates = extract_candidates(slots, profile)

    if true_key is not None or true_bits is not None:
        if true_bits is None:
            true_bits = key_to_bits(true_key, slots.shape[0])
        scored = []
        for cand in candidates:
            d1 = relative_correctness(cand, true_bits)
            scored.append((correctness(d1), d1, cand))
        scored.sort(key=lambda t: (-t[0], t[2].clock_index))
        entries = [RankedCandidate(r + 1, c.clock_index, d1, d, c)
                   for r, (d, d1, c) in enumerate(scored)]
        return AttackReport(entries, scored=True)

    stack = np.stack([c.bits for c in candidates])
    majority = (stack.sum(axis=0) * 2 >= len(candidates)).astype(np.uint8)
    prox = [(100.0 * np.count_nonzero(c.bits == majority) / len(c.bits), c)
            for c in candidates]
    prox.sort(key=lambda t: (-t[0], t[1].clock_index))
    entries = [RankedCandidate(r + 1, c.clock_index, None, None, c)
               for r, (_, c) in enumerate(prox)]
    return AttackReport(entries, scored=False)


@dataclass
class EcdsaSample:
    e: int        # message hash
    r: int        # signature component
    s: int        # signature component
    k: int        # revealed nonce
    epsilon: int  # order of the base point

    def __post_init__(self):
        if not (0 < self.r < self.epsilon and 0 < self.s < self.epsilon):
            raise ValueError("signature components must lie in (0, epsilon)")


def recover_private_key(sample):
    """Key = (s*k - e) / r mod epsilon."""
    try:
        r_inv = pow(sample.r, -1, sample.epsilon)
    except ValueError:
        raise ValueError("r is not invertible modulo the group order") \
            from None
    return ((sample.s * sample.k - sample.e) * r_inv) % sample.epsilon

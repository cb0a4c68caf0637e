"""Simulate one kP execution and break it with the single-trace attack.

A 232-bit scalar takes 231 main-loop slots of 54 cycles.  The compressed
trace is fragmented into 230 slots (the two most significant bits are
excluded), each clock index yields a key candidate by the at-most-mean
rule, and candidates are scored against the processed scalar.
"""

import numpy as np

from kpsim.curve import default_curve
from kpsim.harness import (attack_power_trace, experiment_key,
                           simulate_power_trace)
from kpsim.trace import compress, slice_into_slots

curve = default_curve()
key = experiment_key("random", seed=0)
print("scalar bits:", key.bit_length())

trace, processed = simulate_power_trace(key, curve.g, "basic", seed=0)
print("trace cycles:", len(trace.samples),
      "(%d slots of 54 cycles)" % (processed.bit_length() - 1))

slots = slice_into_slots(compress(trace))
print("slot matrix:", slots.shape)
print("column std ranges from %.1f to %.1f (leaky clock cycles stand out)"
      % (slots.std(axis=0).min(), slots.std(axis=0).max()))

report = attack_power_trace(trace, true_key=processed)
print("\ntop five key candidates (rank, clock cycle, delta1, delta):")
for e in report.entries[:5]:
    print("  #%d  clock %2d  delta1 %6.2f  delta %6.2f"
          % (e.rank, e.clock_index, e.delta1, e.delta))
print("\nbest candidate recovers %.2f%% of the key bits" % report.best.delta)

# a candidate with delta1 near zero is a perfectly wrong guess - flipping
# it recovers the key just as well, which is what the folded delta scores
worst = min(report.entries, key=lambda e: e.delta1)
print("most inverted candidate: clock %d, delta1 %.2f -> delta %.2f"
      % (worst.clock_index, worst.delta1, worst.delta))

"""The two partial-multiplier designs and the 9-cycle field multiplication.

The combined multiplier composes three multiplication methods (2-segment
Karatsuba over 6-segment Winograd over 5-bit classical cores); the
alternative uses the classical formula for the full 59 bits.  Both are real
gate-level netlists whose switching activity drives the power model, and a
233-bit product takes 9 partial products accumulated with reduction after
every cycle.
"""

import numpy as np

from kpsim.datapath import (DESIGNS, decompose, field_mul, get_pm_netlist,
                            PLAN_OFFSETS, sample_permutation)
from kpsim.field import gf_mul_ref
from kpsim.formulas import COMBINED_59, Classical, gate_cost
from kpsim.netlist import evaluate

print("gate complexity (formula calculator vs built netlist)")
for label, tree, variant in (("combined", COMBINED_59, "combined"),
                             ("classical", Classical(59), "classical")):
    cost = gate_cost(tree)
    nl = get_pm_netlist(variant)
    print("  %-9s calculator %4d AND %4d XOR | netlist %4d AND %4d XOR"
          % (label, cost.and_count, cost.xor_count,
             nl.and_count, nl.xor_count))

# one partial multiplication = one clock cycle; toggles are the power proxy
nl = get_pm_netlist("combined")
state = nl.initial_state()
print("\npartial multiplier toggle counts over a few cycles:")
for a, b in [(0x123456789ABCDEF, 0x2468ACE13579BDF),
             (0x123456789ABCDEF, 0x2468ACE13579BDF),  # same inputs: 0
             (0x7FFFFFFFFFFFFFF, 0x1)]:
    _, toggles, state = evaluate(nl, a, b, state)
    print("  inputs (%015x, %015x) -> %d toggles" % (a, b, toggles))

# the accumulation plan: 9 Karatsuba segment products at fixed offsets
a = 0x1F2E3D4C5B6A7988776655443322110FFEEDDCCBBAA998877665544332
b = 0x0123456789ABCDEF0123456789ABCDEF0123456789ABCDEF0123456789
print("\naccumulation plan (segment size 59):")
for sp in decompose(a, b):
    print("  j=%d offsets %s" % (sp.j, PLAN_OFFSETS[sp.j]))

rng = np.random.default_rng(7)
print("\nrandomized execution orders, one per multiplication:")
for _ in range(3):
    print(" ", sample_permutation("randomized", rng))

st = get_pm_netlist("combined").initial_state()
product, activity, _ = field_mul(a, b, DESIGNS["rand-seq"], st, rng)
print("\n9-cycle product equals the reference:", product == gf_mul_ref(a, b))
print("per-cycle activity (toggles, accumulator HD):")
print(" ", [(x.pm_toggles, x.accumulator_hd) for x in activity])

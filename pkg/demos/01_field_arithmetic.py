"""Tour of the GF(2^233) arithmetic layer.

Field elements are plain ints (bit i = coefficient of t^i), reduced by
f(t) = t^233 + t^74 + 1.  Everything downstream - the gate-level
multipliers, the 9-cycle datapath, the ladder - is tested against the
reference product shown here.
"""

import random

from kpsim.field import (clmul, classical_poly_mul, from_hex, gf_add, gf_inv,
                         gf_mul_ref, gf_square, reduce233, to_hex)

rng = random.Random(0)
a = rng.getrandbits(233)
b = rng.getrandbits(233)

print("a =", to_hex(a))
print("b =", to_hex(b))
print()

print("addition is XOR:    a + a =", to_hex(gf_add(a, a)))
product = gf_mul_ref(a, b)
print("reference product:  a * b =", to_hex(product))
print("commutes:          ", gf_mul_ref(b, a) == product)

# the unreduced 465-bit polynomial product, then reduction
raw = clmul(a, b)
print("raw product bits:   %d; reduced == reference: %s"
      % (raw.bit_length(), reduce233(raw) == product))

# the per-coefficient schoolbook form computes the same thing
small_a, small_b = 0b10011, 0b00111
print("schoolbook 5-bit:   %s (shift-XOR oracle agrees: %s)"
      % (bin(classical_poly_mul(small_a, small_b, 5)),
         classical_poly_mul(small_a, small_b, 5) == clmul(small_a, small_b)))

print("squaring:           a^2 == a*a:", gf_square(a) == gf_mul_ref(a, a))
print("inversion:          a * a^-1 =", to_hex(gf_mul_ref(a, gf_inv(a))))

# fixed-width hex round-trips exactly
assert from_hex(to_hex(a)) == a
print("hex round-trip:     ok (59 digits, 0x prefix optional)")

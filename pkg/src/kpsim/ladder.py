"""Cycle-accurate Montgomery point multiplication over B-233.

The engine follows the x-only projective ladder: per processed key bit one
54-cycle slot runs six 9-cycle field multiplications back to back while the
squarings, additions and register writes execute in parallel at fixed cycle
positions.  The slot schedule (0-based cycle within the slot) is:

    cycle  0   load MA<-X1, MB<-Z2            M1 = T = X1*Z2   (cycles 0-8)
    cycle  1   ALU<-S1 = Xd^2
    cycle  2   ALU<-S2 = Zd^2
    cycle  3   ALU<-S3 = S1^2
    cycle  4   ALU<-S4 = S2^2
    cycle  9   load MA<-X2, MB<-Z1            M2 = U = X2*Z1   (cycles 9-17)
    cycle 18   load MA<-T, MB<-U; ALU<-V=T^U  M3 = T*U         (cycles 18-26)
    cycle 19   ALU<-Zadd = V^2
    cycle 20   Zadd -> add-target Z register
    cycle 27   load MA<-xP, MB<-Zadd          M4 = xP*Zadd     (cycles 27-35)
    cycle 36   load MA<-S1, MB<-S2; ALU<-Xadd = M4 ^ M3
               M5 = Zdbl = S1*S2              (cycles 36-44)
    cycle 37   Xadd -> add-target X register
    cycle 44   Zdbl -> double-target Z register
    cycle 45   load MA<-b, MB<-S4             M6 = b*S4        (cycles 45-53)
    cycle 53   ALU<-Xdbl = S3 ^ M6; Xdbl -> double-target X register

With key bit 1 the ladder addition lands in (X1, Z1) and (X2, Z2) is
doubled; with key bit 0 the roles swap.  The sequence of operation kinds is
identical for both bit values, only the operand routing differs (SPA
resistance by construction); per bit this is 6 multiplications, 5 squarings
and 3 additions.

Leakage model.  Each cycle records the partial-multiplier toggle count and
the summed Hamming distance of every tracked register write: the four point
registers, the two multiplier operand registers, the ALU output register,
the multiplier accumulator, and the controller output register.  The
controller word encodes cycle counters, the ALU opcode and the source /
destination routing selects; each of its bits drives a wide select/enable
tree, modelled by counting its Hamming distance CTRL_FANOUT times.  Routing
selects for the two point-register pairs necessarily differ in code weight
(unbalanced mux trees), which is what makes per-cycle power statistics key
dependent in the first place - the classical-multiplier and randomized-
sequence designs counter it by raising the fluctuation around that bias,
not by removing it.
"""

from dataclasses import dataclass

import numpy as np

from .curve import (INFINITY, Point, default_curve, ec_add, ec_neg, on_curve,
                    scalar_mul_ref)
from .datapath import DesignConfig, get_pm_netlist, mult_schedule
from .field import gf_inv, gf_mul_ref, gf_square
from .netlist import batch_evaluate

CYCLES_PER_SLOT = 54

# controller-output fan-outs: every bit of a select group drives this many
# leaf gates.  CTRL_FANOUT covers the slot-level routing word (ALU sources,
# register write destinations); SEQ_FANOUT covers the partial-product index
# lines steering the accumulation-offset and segment muxes of the field
# multiplier.
CTRL_FANOUT = 160
SEQ_FANOUT = 64

# 3-bit routing codes; the two register pairs differ in code weight
_CODE = {"NONE": 0, "X1": 1, "Z1": 2, "SCRATCH": 3, "X2": 5, "Z2": 6}
_ALU_IDLE, _ALU_SQ, _ALU_ADD = 0, 1, 2


class CycleActivity:
    __slots__ = ("pm_toggles", "register_hd")

    def __init__(self, pm_toggles, register_hd):
        self.pm_toggles = pm_toggles
        self.register_hd = register_hd

    def __repr__(self):
        return "CycleActivity(pm_toggles=%d, register_hd=%d)" % (
            self.pm_toggles, self.register_hd)


@dataclass
class KpTrace:
    """Per-cycle activity of one ladder execution."""
    pm_toggles: np.ndarray
    register_hd: np.ndarray
    scalar_bits: int
    config: DesignConfig
    seed: object

    def __len__(self):
        return len(self.pm_toggles)

    @property
    def cycles_per_slot(self):
        return CYCLES_PER_SLOT

    def activities(self):
        for t, h in zip(self.pm_toggles, self.register_hd):
            yield CycleActivity(int(t), int(h))


@dataclass
class LadderState:
    X1: int
    Z1: int
    X2: int
    Z2: int
    x_p: int


@dataclass
class LadderResult:
    x_result: int
    trace: KpTrace
    state: LadderState
    processed_scalar: int


def _ctrl_word(cycle, bit):
    """Controller output word for one slot cycle (0-based) and key bit."""
    xd, zd = ("X2", "Z2") if bit else ("X1", "Z1")
    xa, za = ("X1", "Z1") if bit else ("X2", "Z2")
    alu_op, src0, src1, dst = _ALU_IDLE, "NONE", "NONE", "NONE"
    if cycle == 0:
        src0, src1 = "X1", "Z2"
    elif cycle == 1:
        alu_op, src0 = _ALU_SQ, xd
    elif cycle == 2:
        alu_op, src0 = _ALU_SQ, zd
    elif cycle in (3, 4):
        alu_op, src0 = _ALU_SQ, "SCRATCH"
    elif cycle == 9:
        src0, src1 = "X2", "Z1"
    elif cycle == 18:
        alu_op, src0, src1 = _ALU_ADD, "SCRATCH", "SCRATCH"
    elif cycle == 19:
        alu_op, src0 = _ALU_SQ, "SCRATCH"
    elif cycle == 20:
        dst = za
    elif cycle == 27:
        src0, src1 = "SCRATCH", "SCRATCH"
    elif cycle == 36:
        alu_op, src0, src1 = _ALU_ADD, "SCRATCH", "SCRATCH"
    elif cycle == 37:
        dst = xa
    elif cycle == 44:
        dst = zd
    elif cycle == 45:
        src0, src1 = "SCRATCH", "SCRATCH"
    elif cycle == 53:
        alu_op, dst = _ALU_ADD, xd
    return ((cycle % 9)
            | (cycle // 9) << 4
            | alu_op << 7
            | _CODE[src0] << 9
            | _CODE[src1] << 12
            | _CODE[dst] << 15)


def _ctrl_tables():
    """Per-slot controller Hamming distances for both key-bit values.

    Returns (within, boundary, entry): within[bit] is a length-54 vector
    whose entry i >= 1 is hd(word[i-1], word[i]); boundary[prev][cur] is the
    slot-crossing distance landing on cycle 0; entry[bit] is the distance
    from the all-zero reset word.
    """
    words = {b: [_ctrl_word(c, b) for c in range(CYCLES_PER_SLOT)]
             for b in (0, 1)}
    within = {}
    for b in (0, 1):
        vec = [0] * CYCLES_PER_SLOT
        for c in range(1, CYCLES_PER_SLOT):
            vec[c] = (words[b][c - 1] ^ words[b][c]).bit_count()
        within[b] = np.array(vec, dtype=np.int64)
    boundary = {
        p: {c: (words[p][-1] ^ words[c][0]).bit_count() for c in (0, 1)}
        for p in (0, 1)
    }
    entry = {b: words[b][0].bit_count() for b in (0, 1)}
    return within, boundary, entry


_CTRL_WITHIN, _CTRL_BOUNDARY, _CTRL_ENTRY = _ctrl_tables()

# the operation-kind schedule must not depend on the key bit (SPA resistance)
_OPKIND_MASK = (1 << 9) - 1  # counter + ALU-op fields of the control word
assert all(
    _ctrl_word(c, 0) & _OPKIND_MASK == _ctrl_word(c, 1) & _OPKIND_MASK
    for c in range(CYCLES_PER_SLOT))


def randomize_projective(state, lam):
    """Scale both projective point registers by a nonzero field element."""
    if lam == 0:
        raise ValueError("projective randomization factor must be nonzero")
    return LadderState(
        X1=gf_mul_ref(state.X1, lam), Z1=gf_mul_ref(state.Z1, lam),
        X2=gf_mul_ref(state.X2, lam), Z2=gf_mul_ref(state.Z2, lam),
        x_p=state.x_p)


def randomize_scalar(k, curve, rng):
    """Coron scalar blinding: k' = k + r * order with a fresh 32-bit r."""
    r = int(rng.integers(0, 1 << 32, dtype=np.uint64))
    return k + r * curve.order


def montgomery_kp(k, point, config, seed, curve=None, *,
                  projective_lambda=None, verify_each_bit=False):
    """Traced x-only ladder computation of [k]P.

    Returns a LadderResult carrying the affine x of [k]P, the per-cycle
    activity trace (54 cycles per processed bit), the final projective
    state, and the scalar that was actually processed.
    """
    curve = curve if curve is not None else default_curve()
    if point is INFINITY:
        raise ValueError("the ladder input point must not be the identity")
    if not on_curve(point, curve):
        raise ValueError("input point is not on the curve")
    if point.x == 0:
        raise ValueError("input point has order 2")
    if k.bit_length() < 2:
        raise ValueError("scalar must have at least 2 bits")

    xp = point.x
    state = LadderState(X1=xp, Z1=1,
                        X2=gf_square(gf_square(xp)) ^ curve.b,
                        Z2=gf_square(xp), x_p=xp)
    if projective_lambda is not None:
        state = randomize_projective(state, projective_lambda)

    rng = np.random.default_rng(seed)
    nbits = k.bit_length()
    nslots = nbits - 1
    total = nslots * CYCLES_PER_SLOT
    reg_hd = np.zeros(total, dtype=np.int64)
    pm_pairs = []
    pp_index = []  # executed partial-product index per cycle
    seq_mode = config.sequence_mode

    X1, Z1, X2, Z2 = state.X1, state.Z1, state.X2, state.Z2
    ma = mb = alu = 0  # operand and ALU output registers (reset)
    b_curve = curve.b

    if verify_each_bit:
        ref0, ref1 = point, ec_add(point, point, curve)

    for slot, j in enumerate(range(nbits - 2, -1, -1)):
        bit = (k >> j) & 1
        base = slot * CYCLES_PER_SLOT

        # controller register activity
        if slot == 0:
            reg_hd[base] += CTRL_FANOUT * _CTRL_ENTRY[bit]
        else:
            reg_hd[base] += CTRL_FANOUT * _CTRL_BOUNDARY[prev_bit][bit]
        reg_hd[base + 1:base + CYCLES_PER_SLOT] += \
            CTRL_FANOUT * _CTRL_WITHIN[bit][1:]
        prev_bit = bit

        def write(old, new, cyc):
            reg_hd[base + cyc] += (old ^ new).bit_count()
            return new

        def run_mult(opa, opb, start):
            run = mult_schedule(opa, opb, seq_mode, rng)
            pm_pairs.extend(run.pairs)
            pp_index.extend(run.order)
            reg_hd[base + start:base + start + 9] += np.asarray(
                run.acc_hd, dtype=np.int64)
            return run.product

        xd, zd = (X2, Z2) if bit else (X1, Z1)

        ma = write(ma, X1, 0)
        mb = write(mb, Z2, 0)
        t = run_mult(X1, Z2, 0)                    # M1
        s1 = gf_square(xd)
        alu = write(alu, s1, 1)
        s2 = gf_square(zd)
        alu = write(alu, s2, 2)
        s3 = gf_square(s1)
        alu = write(alu, s3, 3)
        s4 = gf_square(s2)
        alu = write(alu, s4, 4)

        ma = write(ma, X2, 9)
        mb = write(mb, Z1, 9)
        u = run_mult(X2, Z1, 9)                    # M2

        v = t ^ u
        ma = write(ma, t, 18)
        mb = write(mb, u, 18)
        alu = write(alu, v, 18)
        tu = run_mult(t, u, 18)                    # M3
        z_add = gf_square(v)
        alu = write(alu, z_add, 19)
        if bit:
            Z1 = write(Z1, z_add, 20)
        else:
            Z2 = write(Z2, z_add, 20)

        ma = write(ma, xp, 27)
        mb = write(mb, z_add, 27)
        xz = run_mult(xp, z_add, 27)               # M4

        x_add = xz ^ tu
        ma = write(ma, s1, 36)
        mb = write(mb, s2, 36)
        alu = write(alu, x_add, 36)
        z_dbl = run_mult(s1, s2, 36)               # M5
        if bit:
            X1 = write(X1, x_add, 37)
        else:
            X2 = write(X2, x_add, 37)
        if bit:
            Z2 = write(Z2, z_dbl, 44)
        else:
            Z1 = write(Z1, z_dbl, 44)

        ma = write(ma, b_curve, 45)
        mb = write(mb, s4, 45)
        bz = run_mult(b_curve, s4, 45)             # M6
        x_dbl = s3 ^ bz
        alu = write(alu, x_dbl, 53)
        if bit:
            X2 = write(X2, x_dbl, 53)
        else:
            X1 = write(X1, x_dbl, 53)

        if verify_each_bit:
            if bit:
                ref0 = ec_add(ref0, ref1, curve)
                ref1 = ec_add(ref1, ref1, curve)
            else:
                ref1 = ec_add(ref0, ref1, curve)
                ref0 = ec_add(ref0, ref0, curve)
            for ref, xx, zz in ((ref0, X1, Z1), (ref1, X2, Z2)):
                if ref is INFINITY:
                    assert zz == 0, "ladder lost the identity"
                else:
                    assert xx == gf_mul_ref(ref.x, zz), \
                        "ladder ratio invariant broken at bit %d" % j

    # partial-product index lines: Hamming distance of the 4-bit select
    # between consecutive cycles, weighted by its fan-out
    idx = np.asarray(pp_index, dtype=np.int64)
    prev = np.concatenate(([0], idx[:-1]))
    transitions = idx ^ prev
    pop4 = np.array([bin(v).count("1") for v in range(16)], dtype=np.int64)
    reg_hd += SEQ_FANOUT * pop4[transitions]

    netlist = get_pm_netlist(config.pm_variant)
    _, toggles, _ = batch_evaluate(netlist, pm_pairs)
    trace = KpTrace(pm_toggles=toggles, register_hd=reg_hd,
                    scalar_bits=nbits, config=config, seed=seed)

    final = LadderState(X1=X1, Z1=Z1, X2=X2, Z2=Z2, x_p=xp)
    if Z1 == 0:
        raise ArithmeticError("[k]P is the identity; x is undefined")
    x_result = gf_mul_ref(X1, gf_inv(Z1))
    return LadderResult(x_result=x_result, trace=trace, state=final,
                        processed_scalar=k)


def ladder_affine_point(state, point, curve=None):
    """Recover the affine result point from a finished ladder state.

    Standard y-recovery for x-only ladders on binary curves; `point` is the
    ladder input P (difference of the two tracked points).
    """
    curve = curve if curve is not None else default_curve()
    if state.Z1 == 0:
        return INFINITY
    if state.Z2 == 0:
        return ec_neg(point)
    x1 = gf_mul_ref(state.X1, gf_inv(state.Z1))
    x2 = gf_mul_ref(state.X2, gf_inv(state.Z2))
    xq, yq = point
    r1 = x1 ^ xq
    r2 = x2 ^ xq
    num = gf_mul_ref(r1, r2) ^ gf_square(xq) ^ yq
    y1 = gf_mul_ref(gf_mul_ref(r1, num), gf_inv(xq)) ^ yq
    return Point(x1, y1)


def blind_point(k, point, blind, config, seed, curve=None, *,
                projective_lambda=None):
    """Ladder run on the blinded point P + R, corrected back to [k]P.

    The returned trace is that of the blinded execution; the correction
    subtracts [k]R from the recovered affine result.
    """
    curve = curve if curve is not None else default_curve()
    if blind is INFINITY:
        return montgomery_kp(k, point, config, seed, curve,
                             projective_lambda=projective_lambda)
    if not on_curve(blind, curve):
        raise ValueError("blinding point is not on the curve")
    blinded = ec_add(point, blind, curve)
    if blinded is INFINITY:
        raise ValueError("degenerate blinding: P + R is the identity")
    res = montgomery_kp(k, blinded, config, seed, curve,
                        projective_lambda=projective_lambda)
    k_blinded = ladder_affine_point(res.state, blinded, curve)
    correction = ec_neg(scalar_mul_ref(k, blind, curve))
    corrected = ec_add(k_blinded, correction, curve)
    if corrected is INFINITY:
        raise ArithmeticError("[k]P is the identity; x is undefined")
    return LadderResult(x_result=corrected.x, trace=res.trace,
                        state=res.state, processed_scalar=k)

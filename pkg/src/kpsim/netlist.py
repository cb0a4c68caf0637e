"""Gate-level AND/XOR netlists of the 59-bit partial multipliers and their
switching-activity (toggle) simulation.

Wire numbering: primary inputs occupy ids 0 .. n_inputs-1 (operand A bits
first, then operand B bits); gate g drives wire id n_inputs + g.  Gates are
stored in topological order: a gate only references primary inputs or
lower-numbered gates.

The combined multiplier is built for 60-bit operands (2-segment Karatsuba
over 30-bit halves, each realised as a 6-segment Winograd block composed as
a 2x3 Karatsuba split, with classical 5-bit cores).  Operand bit 59 is a
structural constant zero; AND gates fed by it are kept (wired to an explicit
constant-zero wire) so the AND count stays at the formula count, while XOR
gates with a constant input are folded away.

Toggle counting covers every gate output plus any primary-output wire driven
directly by a primary input; primary-input switching itself is not counted
(it is attributed to the operand registers).  The documented initial state
is the response to the all-zero input pair, i.e. every gate output 0.
"""

from dataclasses import dataclass

import numpy as np

from .field import clmul

AND = 0
XOR = 1

_KIND_NAMES = ("AND", "XOR")


class GateNetlist:
    def __init__(self, name, n_bits, kind, in0, in1, outputs):
        self.name = name
        self.n_bits = n_bits
        self.n_inputs = 2 * n_bits
        self.kind = kind
        self.in0 = in0
        self.in1 = in1
        self.outputs = outputs
        self.and_count = sum(1 for k in kind if k == AND)
        self.xor_count = len(kind) - self.and_count

    @property
    def n_gates(self):
        return len(self.kind)

    def initial_state(self):
        return NetlistState(self, 0, 0)

    def __repr__(self):
        return "<GateNetlist %s: %d AND, %d XOR>" % (
            self.name, self.and_count, self.xor_count)


@dataclass
class NetlistState:
    """Last input pair applied to a multiplier instance.

    Gate outputs are a pure combinational function of the inputs, so the
    pair fully determines every stored gate value.
    """
    netlist: GateNetlist
    a: int
    b: int


class _Builder:
    """Emits gates with constant folding over symbolic wires.

    A wire is either an int ref or None for the structural constant 0.
    XOR gates with a constant input are folded; AND gates are always
    emitted (padded multiplier structure) using a shared zero wire.
    """

    def __init__(self, n_inputs):
        self.n_inputs = n_inputs
        self.kind = []
        self.in0 = []
        self.in1 = []
        self._zero = None

    def _emit(self, kind, u, v):
        self.kind.append(kind)
        self.in0.append(u)
        self.in1.append(v)
        return self.n_inputs + len(self.kind) - 1

    def zero(self):
        if self._zero is None:
            self._zero = self._emit(XOR, 0, 0)
        return self._zero

    def and_(self, u, v):
        if u is None or v is None:
            self._emit(AND, self.zero() if u is None else u,
                       self.zero() if v is None else v)
            return None
        return self._emit(AND, u, v)

    def xor(self, u, v):
        if u is None:
            return v
        if v is None:
            return u
        return self._emit(XOR, u, v)


def _classical_product(bd, abits, bbits):
    """Schoolbook product of two wire vectors: output i XORs all a_k & b_l
    with k + l = i."""
    n = len(abits)
    out = []
    for i in range(2 * n - 1):
        acc = None
        for k in range(max(0, i - n + 1), min(i, n - 1) + 1):
            acc = bd.xor(acc, bd.and_(abits[k], bbits[i - k]))
        out.append(acc)
    return out


def _karatsuba2(bd, abits, bbits, child):
    """2-segment Karatsuba over even-length operands.

    Recombination shares V[j] = P0[m+j] ^ P1[j], which appears in both
    overlap regions; per level that is the 7m-3 XOR wiring.
    """
    n = len(abits)
    m = n // 2
    alo, ahi = abits[:m], abits[m:]
    blo, bhi = bbits[:m], bbits[m:]
    asum = [bd.xor(alo[j], ahi[j]) for j in range(m)]
    bsum = [bd.xor(blo[j], bhi[j]) for j in range(m)]
    p0 = child(bd, alo, blo)
    p1 = child(bd, ahi, bhi)
    p2 = child(bd, asum, bsum)
    out = [None] * (2 * n - 1)
    for i in range(m):
        out[i] = p0[i]
    v = [bd.xor(p0[m + j], p1[j]) for j in range(m - 1)]
    for j in range(m - 1):
        out[m + j] = bd.xor(bd.xor(v[j], p0[j]), p2[j])
    out[2 * m - 1] = bd.xor(bd.xor(p0[m - 1], p1[m - 1]), p2[m - 1])
    for j in range(m - 1):
        out[2 * m + j] = bd.xor(bd.xor(v[j], p1[m + j]), p2[m + j])
    for j in range(m - 1, 2 * m - 1):
        out[2 * m + j] = p1[j]
    return out


def _karatsuba3(bd, abits, bbits, child):
    """3-segment Karatsuba (six segment products) over length-3m operands."""
    n = len(abits)
    m = n // 3
    xa = [abits[i * m:(i + 1) * m] for i in range(3)]
    xb = [bbits[i * m:(i + 1) * m] for i in range(3)]

    def prep(x, i, j):
        return [bd.xor(x[i][k], x[j][k]) for k in range(m)]

    d0 = child(bd, xa[0], xb[0])
    d1 = child(bd, xa[1], xb[1])
    d2 = child(bd, xa[2], xb[2])
    e01 = child(bd, prep(xa, 0, 1), prep(xb, 0, 1))
    e02 = child(bd, prep(xa, 0, 2), prep(xb, 0, 2))
    e12 = child(bd, prep(xa, 1, 2), prep(xb, 1, 2))

    w = 2 * m - 1
    t01 = [bd.xor(d0[i], d1[i]) for i in range(w)]
    t12 = [bd.xor(d1[i], d2[i]) for i in range(w)]
    c1 = [bd.xor(e01[i], t01[i]) for i in range(w)]
    c2 = [bd.xor(bd.xor(e02[i], t01[i]), d2[i]) for i in range(w)]
    c3 = [bd.xor(e12[i], t12[i]) for i in range(w)]

    out = [None] * (2 * n - 1)
    for k, chunk in enumerate((d0, c1, c2, c3, d2)):
        for i, wire in enumerate(chunk):
            out[k * m + i] = bd.xor(out[k * m + i], wire)
    return out


def build_classical_pm(n=59):
    """Netlist of the schoolbook multiplier: n^2 AND, (n-1)^2 XOR."""
    if n < 1:
        raise ValueError("operand length must be >= 1")
    bd = _Builder(2 * n)
    abits = list(range(n))
    bbits = list(range(n, 2 * n))
    out = _classical_product(bd, abits, bbits)
    return GateNetlist("classical-%d" % n, n, bd.kind, bd.in0, bd.in1, out)


def build_combined_pm():
    """Netlist of the 59-bit combined multiplier (Karatsuba / Winograd /
    classical); 1350 AND gates exactly, XOR count reported by the object."""
    bd = _Builder(118)
    abits = list(range(59)) + [None]
    bbits = list(range(59, 118)) + [None]

    def mul15(b_, xa, xb):
        return _karatsuba3(b_, xa, xb, _classical_product)

    def mul30(b_, xa, xb):
        return _karatsuba2(b_, xa, xb, mul15)

    out = _karatsuba2(bd, abits, bbits, mul30)[:117]
    if any(w is None for w in out):
        raise AssertionError("combined multiplier left a dead product bit")
    return GateNetlist("combined-59", 59, bd.kind, bd.in0, bd.in1, out)


def dump_netlist(netlist, fh):
    """Write the textual dump: a header line then one gate per line."""
    fh.write("inputs %d outputs %d gates %d\n"
             % (netlist.n_inputs, len(netlist.outputs), netlist.n_gates))
    for g in range(netlist.n_gates):
        fh.write("%d %s %d %d\n" % (g, _KIND_NAMES[netlist.kind[g]],
                                    netlist.in0[g], netlist.in1[g]))


# ---------------------------------------------------------------------------
# evaluation
#
# Whole input sequences are evaluated bit-parallel: every wire's value over
# T cycles is one Python int used as a T-bit lane, one AND/XOR per gate.
# Per-cycle toggle totals are accumulated with bit-sliced counters.

def _pack_lanes(values, nbits):
    arr = np.asarray(values, dtype=np.uint64)
    lanes = []
    for i in range(nbits):
        bits = ((arr >> np.uint64(i)) & np.uint64(1)).astype(np.uint8)
        lanes.append(int.from_bytes(
            np.packbits(bits, bitorder="little").tobytes(), "little"))
    return lanes


def _lane_bits(lane, count):
    raw = np.frombuffer(lane.to_bytes((count + 7) // 8, "little"),
                        dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little", count=count)


def batch_evaluate(netlist, pairs, state=None, want_products=False):
    """Evaluate a sequence of input pairs against a netlist instance.

    Returns (products, toggles, state'): toggles[t] counts the wires that
    changed between cycle t-1 and t (the state pair acting as cycle -1);
    products is None unless requested.
    """
    if state is None:
        state = netlist.initial_state()
    if state.netlist is not netlist:
        raise ValueError("netlist state belongs to a different netlist")
    nb = netlist.n_bits
    for a, b in pairs:
        if a >> nb or b >> nb:
            raise ValueError("operand exceeds %d bits" % nb)
    t1 = len(pairs) + 1
    a_seq = [state.a] + [p[0] for p in pairs]
    b_seq = [state.b] + [p[1] for p in pairs]
    wires = _pack_lanes(a_seq, nb) + _pack_lanes(b_seq, nb)

    mask = (1 << t1) - 1
    planes = []
    kind, in0, in1 = netlist.kind, netlist.in0, netlist.in1
    for g in range(netlist.n_gates):
        u = wires[in0[g]]
        w = wires[in1[g]]
        v = (u & w) if kind[g] == AND else (u ^ w)
        wires.append(v)
        carry = (v ^ (v << 1)) & mask
        i = 0
        while carry:
            if i == len(planes):
                planes.append(carry)
                break
            s = planes[i]
            planes[i] = s ^ carry
            carry = s & carry
            i += 1
    # primary-output wires fed straight from inputs toggle too
    for ref in netlist.outputs:
        if ref < netlist.n_inputs:
            v = wires[ref]
            carry = (v ^ (v << 1)) & mask
            i = 0
            while carry:
                if i == len(planes):
                    planes.append(carry)
                    break
                s = planes[i]
                planes[i] = s ^ carry
                carry = s & carry
                i += 1

    counts = np.zeros(t1, dtype=np.int64)
    for i, plane in enumerate(planes):
        counts += _lane_bits(plane, t1).astype(np.int64) << i
    toggles = counts[1:]

    products = None
    if want_products:
        rows = np.empty((len(netlist.outputs), t1 - 1), dtype=np.uint8)
        for o, ref in enumerate(netlist.outputs):
            rows[o] = _lane_bits(wires[ref], t1)[1:]
        packed = np.packbits(rows.T, axis=1, bitorder="little")
        products = [int.from_bytes(row.tobytes(), "little") for row in packed]

    new_state = NetlistState(netlist, pairs[-1][0], pairs[-1][1]) \
        if pairs else state
    return products, toggles, new_state


def evaluate(netlist, a, b, state):
    """Single-cycle evaluation: returns (product, toggle count, state')."""
    products, toggles, new_state = batch_evaluate(
        netlist, [(a, b)], state, want_products=True)
    return products[0], int(toggles[0]), new_state


def reference_product(a, b):
    """Polynomial product the netlists must defer to."""
    return clmul(a, b)

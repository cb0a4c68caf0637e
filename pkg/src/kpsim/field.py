"""GF(2^233) arithmetic with the reduction polynomial f(t) = t^233 + t^74 + 1.

Field elements are plain Python ints interpreted as polynomials over GF(2):
bit i is the coefficient of t^i.  0 and 1 are the additive and multiplicative
identities.  All reducing operations return values of degree < 233.
"""

DEGREE = 233
MID_EXP = 74
F_POLY = (1 << 233) | (1 << 74) | 1
FIELD_MASK = (1 << 233) - 1

HEX_DIGITS = 59  # 236 bits, top 3 bits always zero

# spread table: byte b -> 16-bit word with the bits of b interleaved with zeros
_SQ_SPREAD = []
for _b in range(256):
    _s = 0
    for _i in range(8):
        _s |= ((_b >> _i) & 1) << (2 * _i)
    _SQ_SPREAD.append(_s)


def gf_add(a, b):
    """Field addition: coefficient-wise XOR."""
    return a ^ b


def clmul(a, b):
    """Carry-less (polynomial) product by shift-and-XOR. No reduction."""
    acc = 0
    while a:
        low = a & -a
        acc ^= b << (low.bit_length() - 1)
        a ^= low
    return acc


def classical_poly_mul(a, b, n):
    """Polynomial product of two operands of length n, coefficient by
    coefficient: c_i is the GF(2) sum of a_k * b_l over all k + l = i.

    This is the schoolbook form the classical hardware multiplier realises;
    clmul computes the same product by a different route.
    """
    if n < 1:
        raise ValueError("operand length must be >= 1")
    if a >> n or b >> n:
        raise ValueError("operand does not fit in %d bits" % n)
    c = 0
    for i in range(2 * n - 1):
        bit = 0
        for k in range(max(0, i - n + 1), min(i, n - 1) + 1):
            bit ^= (a >> k) & (b >> (i - k)) & 1
        c |= bit << i
    return c


def reduce233(c):
    """Reduce a raw polynomial of degree <= 464 modulo f(t).

    Substitutes t^233 -> t^74 + 1 from the high bits down, the way a
    hardware reduction network does.
    """
    if c.bit_length() > 465:
        raise ValueError("degree %d exceeds the 464 reduction bound"
                         % (c.bit_length() - 1))
    while c >> 233:
        high = c >> 233
        c = (c & FIELD_MASK) ^ (high << 74) ^ high
    return c


def gf_mul_ref(a, b):
    """Golden field product: full polynomial product followed by reduction.

    Every other multiplication path (netlists, the sequential datapath) is
    tested against this.
    """
    return reduce233(clmul(a, b))


def gf_square(a):
    """Field squaring via bit spreading plus reduction."""
    s = 0
    shift = 0
    while a:
        s |= _SQ_SPREAD[a & 0xFF] << shift
        a >>= 8
        shift += 16
    return reduce233(s)


def gf_inv(a):
    """Field inverse by Fermat exponentiation a^(2^233 - 2)."""
    if a == 0:
        raise ZeroDivisionError("zero has no inverse in GF(2^233)")
    # exponent 2^233 - 2 = 0b111...10 (232 ones followed by a zero)
    result = 1
    square = gf_square(a)  # a^2
    for _ in range(232):
        result = gf_mul_ref(result, square)
        square = gf_square(square)
    return result


def to_hex(a):
    """Format a field element as exactly 59 hex digits (no 0x prefix)."""
    if a >> 233:
        raise ValueError("value has degree >= 233")
    return "%0*x" % (HEX_DIGITS, a)


def from_hex(s):
    """Parse a 59-hex-digit field element; a 0x prefix is accepted."""
    s = s.strip()
    if s[:2].lower() == "0x":
        s = s[2:]
    if len(s) != HEX_DIGITS:
        raise ValueError("expected %d hex digits, got %d" % (HEX_DIGITS, len(s)))
    v = int(s, 16)
    if v >> 233:
        raise ValueError("top 3 bits of the 236-bit hex field must be zero")
    return v

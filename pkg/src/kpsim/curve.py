"""NIST B-233 curve parameters and the affine reference group law.

The curve y^2 + xy = x^3 + a*x^2 + b over GF(2^233) with a = 1.  Parameters
are loaded from a key=value text file and validated on load; the affine
double-and-add here is the golden oracle every ladder execution is checked
against.
"""

from dataclasses import dataclass
from importlib import resources
from typing import NamedTuple, Optional

from .field import from_hex, gf_add, gf_inv, gf_mul_ref, gf_square, to_hex


class Point(NamedTuple):
    x: int
    y: int


INFINITY = None  # the group identity is represented as None


@dataclass(frozen=True)
class CurveParams:
    a: int
    b: int
    g: Point
    order: int
    cofactor: int


def on_curve(point, curve):
    if point is INFINITY:
        return True
    x, y = point
    lhs = gf_square(y) ^ gf_mul_ref(x, y)
    rhs = gf_mul_ref(gf_square(x), x ^ curve.a) ^ curve.b
    return lhs == rhs


def ec_neg(point):
    if point is INFINITY:
        return INFINITY
    return Point(point.x, point.x ^ point.y)


def ec_double(point, curve):
    if point is INFINITY or point.x == 0:
        return INFINITY
    x, y = point
    lam = x ^ gf_mul_ref(y, gf_inv(x))
    x3 = gf_square(lam) ^ lam ^ curve.a
    y3 = gf_square(x) ^ gf_mul_ref(lam, x3) ^ x3
    return Point(x3, y3)


def ec_add(p, q, curve):
    if p is INFINITY:
        return q
    if q is INFINITY:
        return p
    if p.x == q.x:
        if p.y == q.y:
            return ec_double(p, curve)
        return INFINITY  # q == -p
    lam = gf_mul_ref(gf_add(p.y, q.y), gf_inv(gf_add(p.x, q.x)))
    x3 = gf_square(lam) ^ lam ^ p.x ^ q.x ^ curve.a
    y3 = gf_mul_ref(lam, p.x ^ x3) ^ x3 ^ p.y
    return Point(x3, y3)


def scalar_mul_ref(k, point, curve):
    """Reference [k]P by plain MSB-first double-and-add."""
    if k < 0:
        raise ValueError("scalar must be non-negative")
    result = INFINITY
    for i in range(k.bit_length() - 1, -1, -1):
        result = ec_double(result, curve)
        if (k >> i) & 1:
            result = ec_add(result, point, curve)
    return result


def _parse_int(value):
    value = value.strip()
    if value.lower().startswith("0x"):
        return int(value, 16)
    return int(value)


def parse_curve_file(text):
    """Parse the key=value curve parameter format and validate the point."""
    entries = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError("line %d: expected key=value" % lineno)
        key, value = line.split("=", 1)
        entries[key.strip()] = value.strip()
    missing = {"field", "b", "gx", "gy", "order", "cofactor"} - set(entries)
    if missing:
        raise ValueError("missing curve keys: %s" % ", ".join(sorted(missing)))
    if entries["field"] != "b233":
        raise ValueError("unsupported field %r" % (entries["field"],))
    curve = CurveParams(
        a=1,
        b=from_hex(entries["b"]),
        g=Point(from_hex(entries["gx"]), from_hex(entries["gy"])),
        order=_parse_int(entries["order"]),
        cofactor=int(entries["cofactor"]),
    )
    if curve.cofactor != 2:
        raise ValueError("B-233 cofactor must be 2")
    if not on_curve(curve.g, curve):
        raise ValueError("base point fails the curve equation")
    if curve.order.bit_length() != 233:
        raise ValueError("base-point order has the wrong magnitude")
    return curve


def load_curve(path=None):
    """Load curve parameters from a file, or the packaged B-233 defaults."""
    if path is None:
        text = resources.files("kpsim").joinpath("data/b233.params").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return parse_curve_file(text)


_DEFAULT = None


def default_curve():
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_curve()
    return _DEFAULT


def curve_file_text(curve):
    """Serialise parameters back to the interchange format."""
    return (
        "field=b233\n"
        "b=%s\ngx=%s\ngy=%s\norder=0x%x\ncofactor=%d\n"
        % (to_hex(curve.b), to_hex(curve.g.x), to_hex(curve.g.y),
           curve.order, curve.cofactor)
    )

"""Multiplication-formula trees and their gate-complexity calculators.

A formula tree describes how a polynomial multiplier is composed from
multiplication methods: a classical (schoolbook) core, 2-segment Karatsuba
levels and 6-segment Winograd levels.  Gate costs compose additively:

    classical(n):   n^2 AND, (n-1)^2 XOR
    karatsuba2:     3 * child + (7m - 3) XOR        [m = child length]
    winograd6:      18 * child + (72m - 19) XOR     [m = child length]
"""

from dataclasses import dataclass
from typing import NamedTuple, Union


class GateCost(NamedTuple):
    and_count: int
    xor_count: int

    def __add__(self, other):
        return GateCost(self.and_count + other.and_count,
                        self.xor_count + other.xor_count)

    def scale(self, k):
        return GateCost(k * self.and_count, k * self.xor_count)


@dataclass(frozen=True)
class Classical:
    n: int


@dataclass(frozen=True)
class Karatsuba2:
    child: "Formula"


@dataclass(frozen=True)
class Winograd6:
    child: "Formula"


Formula = Union[Classical, Karatsuba2, Winograd6]

# the 59/60-bit partial multiplier: Karatsuba over Winograd over classical
COMBINED_59 = Karatsuba2(Winograd6(Classical(5)))


def operand_length(tree):
    """Operand length in bits handled by a formula tree."""
    if isinstance(tree, Classical):
        return tree.n
    if isinstance(tree, Karatsuba2):
        return 2 * operand_length(tree.child)
    if isinstance(tree, Winograd6):
        return 6 * operand_length(tree.child)
    raise TypeError("not a formula node: %r" % (tree,))


def gate_cost(tree):
    """AND/XOR gate counts of the multiplier a formula tree describes."""
    if isinstance(tree, Classical):
        if tree.n < 1:
            raise ValueError("classical block length must be >= 1")
        return GateCost(tree.n ** 2, (tree.n - 1) ** 2)
    if isinstance(tree, Karatsuba2):
        m = operand_length(tree.child)
        return gate_cost(tree.child).scale(3) + GateCost(0, 7 * m - 3)
    if isinstance(tree, Winograd6):
        m = operand_length(tree.child)
        return gate_cost(tree.child).scale(18) + GateCost(0, 72 * m - 19)
    raise TypeError("not a formula node: %r" % (tree,))

import pytest

from kpsim.formulas import (COMBINED_59, Classical, GateCost, Karatsuba2,
                            Winograd6, gate_cost, operand_length)


def test_classical_paper_values():
    assert gate_cost(Classical(5)) == GateCost(25, 16)
    assert gate_cost(Classical(59)) == GateCost(3481, 3364)


def test_classical_degenerate():
    assert gate_cost(Classical(1)) == GateCost(1, 0)
    with pytest.raises(ValueError):
        gate_cost(Classical(0))


def test_combined_59_paper_value():
    assert operand_length(COMBINED_59) == 60
    assert gate_cost(COMBINED_59) == GateCost(1350, 2094)


def test_winograd_level_alone():
    # 18 * (25, 16) + (0, 72*5 - 19) over 5-bit cores
    w = Winograd6(Classical(5))
    assert operand_length(w) == 30
    assert gate_cost(w) == GateCost(450, 629)


def test_karatsuba_level_composition():
    # one Karatsuba level over 8-bit classical cores: 3*(64,49) + (0, 53)
    k = Karatsuba2(Classical(8))
    assert operand_length(k) == 16
    assert gate_cost(k) == GateCost(192, 200)


def test_cost_additivity():
    c = gate_cost(Classical(7))
    assert c + GateCost(1, 2) == GateCost(50, 38)
    assert c.scale(3) == GateCost(147, 108)

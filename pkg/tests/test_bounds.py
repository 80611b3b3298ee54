"""Agent-count threshold table and its counting-argument diagnostic."""

from fractions import Fraction

import pytest

from mmsalloc.bounds import (
    BoundParams,
    BoundTable,
    n_c_chores,
    n_c_goods,
    required_agents_chores,
    required_agents_goods,
)
from mmsalloc.errors import COutOfRange, NegativeC


def test_anchored_small_values():
    assert [n_c_goods(c) for c in range(0, 8)] == [1, 1, 1, 1, 1, 1, 4, 8]
    assert n_c_chores(5) == 1
    assert n_c_chores(6) == 166
    assert n_c_chores(7) == 915


def test_closed_form_values():
    assert n_c_goods(8) == 1446
    assert n_c_goods(9) == 8587


def test_counting_argument_stays_within_the_table():
    for c in range(8, 15):
        assert required_agents_goods(c) <= n_c_goods(c)
    for c in range(6, 15):
        assert required_agents_chores(c) <= n_c_chores(c)


def test_required_agents_known_values():
    assert required_agents_goods(7) == 122
    assert required_agents_goods(8) == 292
    assert required_agents_chores(6) == 84
    assert required_agents_chores(7) == 351


def test_range_errors():
    with pytest.raises(NegativeC):
        n_c_goods(-1)
    with pytest.raises(COutOfRange):
        required_agents_goods(6)
    with pytest.raises(COutOfRange):
        required_agents_chores(5)


def test_overrides_and_params():
    table = BoundTable(goods_overrides=((8, 999),))
    assert table.n_c_goods(8) == 999
    assert table.n_c_goods(9) == 8587
    tweaked = BoundTable(params=BoundParams(alpha_goods=Fraction(7, 10)))
    assert tweaked.n_c_goods(8) > 1446
    with pytest.raises(ValueError):
        BoundParams(alpha_goods=Fraction(3, 2))

"""
Tests for the variable orders of the fix-and-propagate dive
"""

import numpy as np
import pytest

from fixprop.config import Tiebreaker, VariableStrategy
from fixprop.errors import StrategyError
from fixprop.models.lp_solution import LpSolution
from fixprop.services.ordering import dual_order, fractionality, order_variables
from oracles import make_instance


def _lp(x, y=None, r=None):
    x = np.asarray(x, dtype=float)
    y = np.zeros(0) if y is None else np.asarray(y, dtype=float)
    r = np.zeros(len(x)) if r is None else np.asarray(r, dtype=float)
    return LpSolution(x=x, y=y, reduced_costs=r)


def _integer_instance(n, A=None, upper=None, is_integer=None):
    A = np.ones((1, n)) if A is None else np.asarray(A, dtype=float)
    m = A.shape[0]
    upper = np.ones(n) if upper is None else upper
    is_integer = np.ones(n, dtype=bool) if is_integer is None else is_integer
    return make_instance(np.zeros(n), A, np.full(m, -np.inf), np.full(m, 10.0), np.zeros(n), upper, is_integer)


def test_fractionality():
    np.testing.assert_allclose(fractionality([0.1, 0.5, 0.49, 2.9, -1.25, 3.0]), [0.1, 0.5, 0.49, 0.1, 0.25, 0.0])


def test_frac_puts_most_integral_first():
    inst = _integer_instance(3)
    order = order_variables(inst, _lp([0.1, 0.5, 0.49]), "frac")
    assert order.indices == (0, 2, 1)
    assert order.strategy is VariableStrategy.FRAC


def test_frac_descending_variant():
    inst = _integer_instance(3)
    order = order_variables(inst, _lp([0.1, 0.5, 0.49]), "frac", frac_descending=True)
    assert order.indices == (1, 2, 0)


def test_redcost_puts_largest_magnitude_first():
    inst = _integer_instance(4)
    order = order_variables(inst, _lp(np.zeros(4), r=[0.5, -3.0, 0.0, 1.0]), "redcost")
    assert list(order) == [1, 3, 0, 2]


def test_type_puts_binaries_first_in_index_order():
    inst = _integer_instance(4, upper=np.array([5.0, 1.0, 3.0, 1.0]))
    order = order_variables(inst, None, "type")
    assert order.indices == (1, 3, 0, 2)


def test_continuous_variables_are_never_ordered():
    inst = _integer_instance(4, is_integer=np.array([True, False, True, False]))
    order = order_variables(inst, _lp([0.3, 0.5, 0.0, 0.2]), "frac")
    assert set(order) == {0, 2}
    assert len(order) == 2


def test_dual_order_scans_rows_by_dual_magnitude():
    """|y| = (5, 1) over rows {x1, x2} and {x2, x3}, |r| = (0.2, 0.9, 0.1)"""
    A = [[1.0, 1.0, 0.0], [0.0, 1.0, 1.0]]
    inst = _integer_instance(3, A=A)
    lp = _lp(np.zeros(3), y=[-5.0, 1.0], r=[0.2, -0.9, 0.1])
    assert dual_order(inst, lp, [0, 1, 2]) == [1, 0, 2]
    assert order_variables(inst, lp, "dual").indices == (1, 0, 2)


def test_dual_order_appends_leftovers_by_reduced_cost():
    A = [[1.0, 0.0, 0.0, 0.0]]
    inst = _integer_instance(4, A=A)
    lp = _lp(np.zeros(4), y=[1.0], r=[0.0, 0.1, 0.7, 0.3])
    assert dual_order(inst, lp, [0, 1, 2, 3]) == [0, 2, 3, 1]


def test_random_is_a_seeded_permutation():
    inst = _integer_instance(20)
    a = order_variables(inst, None, "random", seed=5)
    b = order_variables(inst, None, "random", seed=5)
    c = order_variables(inst, None, "random", seed=6)
    assert a.indices == b.indices
    assert sorted(a) == list(range(20))
    assert a.indices != c.indices


class TestTies:
    """Keys within 1e-6 form one group, resolved by the tiebreaker then index"""

    def test_ties_fall_back_to_index(self):
        inst = _integer_instance(3)
        order = order_variables(inst, _lp([1.0, 0.0, 2.0]), "frac")
        assert order.indices == (0, 1, 2)

    def test_near_ties_are_grouped(self):
        inst = _integer_instance(3)
        lp = _lp([0.2, 0.2 + 4e-7, 0.2 - 4e-7])
        assert order_variables(inst, lp, "frac").indices == (0, 1, 2)

    def test_tiebreaker_orders_within_group(self):
        inst = _integer_instance(3)
        lp = _lp([0.0, 1.0, 2.0], r=[0.1, 2.0, 0.5])
        order = order_variables(inst, lp, "frac", "redcost")
        assert order.indices == (1, 2, 0)
        assert order.tiebreaker is Tiebreaker.REDCOST

    def test_tiebreaker_does_not_cross_groups(self):
        inst = _integer_instance(3)
        lp = _lp([0.4, 0.0, 0.0], r=[9.0, 0.1, 0.2])
        assert order_variables(inst, lp, "frac", "redcost").indices == (2, 1, 0)

    def test_type_with_frac_tiebreak(self):
        inst = _integer_instance(4, upper=np.array([3.0, 1.0, 1.0, 3.0]))
        lp = _lp([0.5, 0.3, 0.0, 0.1])
        assert order_variables(inst, lp, "type", "frac").indices == (2, 1, 3, 0)

    def test_dual_tiebreak_uses_position_in_dual_order(self):
        A = [[1.0, 1.0, 0.0], [0.0, 1.0, 1.0]]
        inst = _integer_instance(3, A=A)
        lp = _lp(np.zeros(3), y=[-5.0, 1.0], r=[0.2, -0.9, 0.1])
        assert order_variables(inst, lp, "frac", "dual").indices == (1, 0, 2)


@pytest.mark.parametrize(
    "strategy, tiebreaker, lp",
    [
        ("frac", "none", None),
        ("type", "redcost", None),
        ("frac", "frac", _lp([0.0])),
        ("median", "none", _lp([0.0])),
        ("type", "median", None),
    ],
)
def test_invalid_combinations(strategy, tiebreaker, lp):
    inst = _integer_instance(1)
    with pytest.raises(StrategyError):
        order_variables(inst, lp, strategy, tiebreaker)


def test_lp_free_strategies_accept_no_lp():
    inst = _integer_instance(3)
    assert len(order_variables(inst, None, VariableStrategy.TYPE, Tiebreaker.NONE)) == 3
    assert len(order_variables(inst, None, VariableStrategy.RANDOM)) == 3

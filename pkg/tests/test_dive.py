"""
Tests for the depth-first fix-and-propagate search
"""

import math

import numpy as np
import pytest

from fixprop.config import HeuristicConfig
from fixprop.models.instance import check_feasibility
from fixprop.models.lp_solution import LpSolution
from fixprop.services.dive import SearchStatus, dfs_search
from fixprop.services.ordering import order_variables
from fixprop.services.propagation import Domain, build_clique_table
from oracles import binary_instance, feasible_points, make_instance, random_binary_instance, random_integer_instance


def _lp(x):
    x = np.asarray(x, dtype=float)
    return LpSolution(x=x, y=np.zeros(0), reduced_costs=np.zeros(len(x)))


def _search(instance, x_lp, config=None, **kwargs):
    lp = _lp(x_lp)
    order = order_variables(instance, lp, "frac")
    return dfs_search(instance, build_clique_table(instance), order, lp, config, **kwargs)


def _odd_cycle():
    """x0 + x1 = 1, x0 + x2 = 1, x1 + x2 = 1 has no 0/1 solution"""
    return binary_instance(
        [0.0] * 3,
        [[1.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0]],
        [1.0, 1.0, 1.0],
        [1.0, 1.0, 1.0],
        name="odd_cycle",
    )


def _wrong_first_guess():
    """x0 + x1 = 1, x0 + x2 = 1, x1 + x2 >= 1: only x0 = 0 works"""
    return binary_instance(
        [0.0] * 3,
        [[1.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0]],
        [1.0, 1.0, 1.0],
        [1.0, 1.0, np.inf],
        name="wrong_guess",
    )


def test_feasible_rounding_needs_no_backtracks():
    inst = binary_instance([1.0, 1.0, 1.0], [[1.0, 1.0, 1.0]], [-np.inf], [2.0])
    outcome = _search(inst, [1.0, 0.0, 1.0])
    assert outcome.found
    np.testing.assert_array_equal(outcome.assignment, [1.0, 0.0, 1.0])
    assert outcome.backtracks == 0
    assert outcome.nodes == 3


def test_propagation_completes_the_assignment(assignment_pair):
    """x1 + x2 = 1: the first fixing forces the second"""
    outcome = _search(assignment_pair, [0.5, 0.5])
    assert outcome.status is SearchStatus.FOUND
    assert outcome.nodes == 1
    assert outcome.depth == 1
    assert outcome.backtracks == 0
    assert outcome.assignment.sum() == 1.0


def test_root_infeasibility_explores_nothing():
    """2 x1 + 2 x2 = 1 has no integer point"""
    inst = binary_instance([0.0, 0.0], [[2.0, 2.0]], [1.0], [1.0])
    outcome = _search(inst, [0.25, 0.25])
    assert outcome.status is SearchStatus.EXHAUSTED
    assert outcome.nodes == 0
    assert outcome.assignment is None


def test_exhausted_tree():
    outcome = _search(_odd_cycle(), [0.5, 0.5, 0.5])
    assert outcome.status is SearchStatus.EXHAUSTED
    assert outcome.nodes == 2
    assert outcome.backtracks == 2
    assert not outcome.found


def test_backtrack_to_sibling():
    outcome = _search(_wrong_first_guess(), [1.0, 0.0, 0.0])
    assert outcome.found
    np.testing.assert_array_equal(outcome.assignment, [0.0, 1.0, 1.0])
    assert outcome.backtracks == 1
    assert outcome.nodes == 2
    assert outcome.trace == ((0, 1.0, 1.0), (0, 0.0, 0.0))


def test_backtrack_limit():
    outcome = _search(_odd_cycle(), [0.5, 0.5, 0.5], HeuristicConfig(backtrack_limit=1))
    assert outcome.status is SearchStatus.BACKTRACK_LIMIT
    assert outcome.backtracks == 2


def test_node_limit():
    outcome = _search(_wrong_first_guess(), [1.0, 0.0, 0.0], HeuristicConfig(node_limit=1))
    assert outcome.status is SearchStatus.NODE_LIMIT
    assert outcome.nodes == 1


def test_time_limit():
    outcome = _search(_odd_cycle(), [0.5, 0.5, 0.5], time_limit=1e-9)
    assert outcome.status is SearchStatus.TIME_LIMIT
    assert outcome.nodes == 0


def test_restriction_is_branched_on_again():
    """
    x + 2y + 2z = 6, y + z <= 1, x in [0, 5] general integer, LP value x = 3.

    x = 3 and x = 2 both fail, the restriction x in [4, 5] survives and x is
    branched on again before y and z.
    """
    inst = make_instance(
        c=[1.0, 0.0, 0.0],
        A=[[1.0, 2.0, 2.0], [0.0, 1.0, 1.0]],
        row_lower=[6.0, -np.inf],
        row_upper=[6.0, 1.0],
        col_lower=[0.0, 0.0, 0.0],
        col_upper=[5.0, 1.0, 1.0],
        is_integer=[True, True, True],
    )
    outcome = _search(inst, [3.0, 0.0, 0.0])
    assert outcome.found
    np.testing.assert_array_equal(outcome.assignment, [4.0, 0.0, 1.0])
    assert outcome.backtracks == 2
    assert outcome.trace[:4] == ((0, 3.0, 3.0), (0, 2.0, 2.0), (0, 4.0, 5.0), (0, 4.0, 4.0))
    assert outcome.nodes == 5


def test_continuous_columns_are_nan_in_the_assignment(mixed_instance):
    outcome = _search(mixed_instance, [0.0, 1.0, 0.5])
    assert outcome.found
    assert math.isnan(outcome.assignment[2])
    np.testing.assert_array_equal(outcome.assignment[:2], [0.0, 1.0])


def test_starting_domain_is_respected(small_knapsack):
    domain = Domain.from_instance(small_knapsack)
    domain.apply(1, 1.0, 1.0)
    outcome = _search(small_knapsack, [1.0, 0.0, 1.0], domain=domain)
    assert outcome.found
    assert outcome.assignment[1] == 1.0
    assert outcome.domain is domain


def test_same_seed_same_dive(rng):
    inst = random_binary_instance(rng, 10, 6)
    x_lp = rng.random(10)
    config = HeuristicConfig(seed=3)
    a = _search(inst, x_lp, config)
    b = _search(inst, x_lp, config)
    assert a.status == b.status
    assert a.trace == b.trace
    assert a.nodes == b.nodes


@pytest.mark.parametrize("seed", range(15))
def test_search_is_complete_on_binaries(seed):
    """Without limits a found leaf is feasible and an exhausted tree means no solution"""
    rng = np.random.default_rng(500 + seed)
    inst = random_binary_instance(rng, 7, 5)
    config = HeuristicConfig(backtrack_limit=math.inf, node_limit=10**6, seed=seed)
    outcome = _search(inst, rng.random(7), config)
    if outcome.found:
        assert check_feasibility(inst, outcome.assignment).feasible
    else:
        assert outcome.status is SearchStatus.EXHAUSTED
        assert feasible_points(inst) == []


def _contains(points, x):
    return any(np.array_equal(p, x) for p in points)


@pytest.mark.parametrize("seed", range(15))
def test_search_is_complete_on_two_value_integer_domains(seed):
    """Domains {l, l + 1} with l in [-2, 1]: branching covers both values exactly"""
    rng = np.random.default_rng(600 + seed)
    inst = random_integer_instance(rng, 7, 5, width=1)
    points = feasible_points(inst)
    config = HeuristicConfig(backtrack_limit=math.inf, node_limit=10**6, seed=seed)
    outcome = _search(inst, rng.uniform(inst.col_lower, inst.col_upper), config)
    if outcome.found:
        assert _contains(points, outcome.assignment)
    else:
        assert outcome.status is SearchStatus.EXHAUSTED
        assert points == []


@pytest.mark.parametrize("seed", range(15))
def test_wide_integer_domains_agree_with_enumeration(seed):
    """Found leaves are enumerated feasible points; instances without any point are exhausted"""
    rng = np.random.default_rng(700 + seed)
    inst = random_integer_instance(rng, 4, 3, width=4)
    points = feasible_points(inst)
    config = HeuristicConfig(backtrack_limit=math.inf, node_limit=10**6, seed=seed)
    outcome = _search(inst, rng.uniform(inst.col_lower, inst.col_upper), config)
    if outcome.found:
        assert _contains(points, outcome.assignment)
        assert check_feasibility(inst, outcome.assignment).feasible
    else:
        assert outcome.status is SearchStatus.EXHAUSTED
    if not points:
        assert not outcome.found


@pytest.mark.parametrize(
    "sign, col_lower, col_upper, restriction, value",
    [
        (1.0, 0.0, np.inf, (0, 1.0, np.inf), 1.0),
        (-1.0, -np.inf, 0.0, (0, -np.inf, -1.0), -1.0),
    ],
)
def test_infinite_side_becomes_a_restriction(sign, col_lower, col_upper, restriction, value):
    """
    z + y1 >= 1, z + y2 >= 1, y1 + y2 <= 1 (z mirrored by sign): z = 0 forces both
    y to 1, so the dive has to move z one step into its unbounded side
    """
    inst = make_instance(
        [0.0, 0.0, 0.0],
        [[sign, 1.0, 0.0], [sign, 0.0, 1.0], [0.0, 1.0, 1.0]],
        [1.0, 1.0, -np.inf],
        [np.inf, np.inf, 1.0],
        [col_lower, 0.0, 0.0],
        [col_upper, 1.0, 1.0],
        [True, True, True],
    )
    outcome = _search(inst, [0.0, 0.0, 0.0])
    assert outcome.found
    np.testing.assert_array_equal(outcome.assignment, [value, 0.0, 0.0])
    assert outcome.trace == ((0, 0.0, 0.0), restriction, (0, value, value), (1, 0.0, 0.0), (2, 0.0, 0.0))
    assert outcome.backtracks == 1
    assert check_feasibility(inst, outcome.assignment).feasible

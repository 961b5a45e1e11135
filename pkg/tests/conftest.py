import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from oracles import binary_instance, make_instance  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_lp():
    """min x + y  s.t.  x + 2y >= 2,  3x + y >= 3,  x, y >= 0  (optimum (0.8, 0.6), value 1.4)"""
    return make_instance(
        c=[1.0, 1.0],
        A=[[1.0, 2.0], [3.0, 1.0]],
        row_lower=[2.0, 3.0],
        row_upper=[np.inf, np.inf],
        col_lower=[0.0, 0.0],
        col_upper=[np.inf, np.inf],
        name="small_lp",
    )


@pytest.fixture
def assignment_pair():
    """x1 + x2 = 1 over binaries"""
    return binary_instance([1.0, 1.0], [[1.0, 1.0]], [1.0], [1.0], name="pair")


@pytest.fixture
def small_knapsack():
    """max 5x1 + 4x2 + 3x3  s.t.  2x1 + 3x2 + x3 <= 4, optimum 8 at (1, 0, 1)"""
    return binary_instance([-5.0, -4.0, -3.0], [[2.0, 3.0, 1.0]], [-np.inf], [4.0], name="knap3")


@pytest.fixture
def mixed_instance():
    """
    min -x1 - 2x2 + y   s.t.  x1 + x2 + y >= 1.5,  x1 + x2 <= 1,  y <= 3
    x binary, y continuous in [0, 3]; optimum x = (0, 1), y = 0.5, value -1.5
    """
    return make_instance(
        c=[-1.0, -2.0, 1.0],
        A=[[1.0, 1.0, 1.0], [1.0, 1.0, 0.0]],
        row_lower=[1.5, -np.inf],
        row_upper=[np.inf, 1.0],
        col_lower=[0.0, 0.0, 0.0],
        col_upper=[1.0, 1.0, 3.0],
        is_integer=[True, True, False],
        name="mixed",
    )


SMALL_MPS = """\
NAME          SMALL
ROWS
 N  COST
 L  LIM1
 G  LIM2
 E  MYEQN
COLUMNS
    MARKER                 'MARKER'                 'INTORG'
    X1        COST         1.0   LIM1         1.0
    X1        LIM2         1.0
    MARKER                 'MARKER'                 'INTEND'
    X2        COST         2.0   LIM1         1.0
    X2        MYEQN       -1.0
    X3        COST        -1.0   MYEQN        1.0
RHS
    RHS       LIM1         4.0   LIM2         1.0
    RHS       MYEQN        7.0
BOUNDS
 UP BND       X1           4.0
 MI BND       X2
 UP BND       X2           1.0
ENDATA
"""


@pytest.fixture
def small_mps_text():
    return SMALL_MPS

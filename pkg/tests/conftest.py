from fractions import Fraction as F

import pytest

from trichotomy import Equation


@pytest.fixture
def t1_family():
    """beta_2 = beta_4 = 1, B_1 = 1, alpha = 0; A selects the case."""
    return lambda A: Equation(0, A, {2: 1, 4: 1}, {1: 1})


@pytest.fixture
def t2_family():
    """x_n = (1 + x_{n-2}) / (A + x_{n-1})."""
    return lambda A: Equation(1, A, {2: 1}, {1: 1})


@pytest.fixture
def odd_lag_example():
    """(alpha + g x_{n-2} + e x_{n-4} + x_{n-7}) / (A + x_{n-7}) with g = e = 3/4."""
    return lambda A, alpha=1: Equation(alpha, A, {2: F(3, 4), 4: F(3, 4), 7: 1}, {7: 1})

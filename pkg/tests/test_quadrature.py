import math

import numpy as np
import pytest

from pqslln.errors import QuadratureFailure
from pqslln.quadrature import integrate


def test_exponential_decay():
    res = integrate(lambda t: np.exp(-t), 0.0, 40.0)
    exact = 1.0 - math.exp(-40.0)
    assert abs(res.value - exact) <= 1e-9 * exact


def test_power_tail_with_log_substitution():
    # int_1^1e10 t^-2 dt = 1 - 1e-10
    f = lambda t: np.maximum(t, 1.0) ** -2.0
    res = integrate(f, 1.0, 1e10, breakpoints=[1.0])
    exact = 1.0 - 1e-10
    assert abs(res.value - exact) <= 1e-9


def test_step_function_exact_at_breakpoint():
    c = 1.37
    f = lambda t: np.where(t < c, 1.0, 0.0)
    res = integrate(f, 0.0, 10.0, breakpoints=[c])
    assert res.value == pytest.approx(c, rel=1e-14)


def test_zero_length_interval():
    assert integrate(lambda t: t, 2.0, 2.0).value == 0.0


def test_budget_exhaustion_raises():
    # highly oscillatory integrand with an absurdly small budget
    f = lambda t: np.sin(1000.0 * t) ** 2
    with pytest.raises(QuadratureFailure):
        integrate(f, 0.0, 1000.0, rel_tol=1e-12, budget=16, log_from=None)


def test_piecewise_tail_accuracy():
    # int_0^B of pareto(2) survival in Y = |X| space: 1 + (1 - 1/B)
    f = lambda t: np.where(t <= 1.0, 1.0, np.maximum(t, 1.0) ** -2.0)
    res = integrate(f, 0.0, 1e6, breakpoints=[1.0])
    exact = 2.0 - 1e-6
    assert abs(res.value - exact) <= 1e-9 * exact

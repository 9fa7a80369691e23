import numpy as np
import pytest

from hhbounds.classic import c_coeffs
from hhbounds.errmodel import ZERO, CallableError, ConstantError, PowerMeasure3, beta_fn
from hhbounds.functions import from_callable, make_function
from hhbounds.meansys import lift_weighted_system
from hhbounds.measure import atomic, lebesgue
from hhbounds.residual import jensen_eta
from hhbounds.upper import (cor6a_error, cor6b_error, upper_bound_cor6a, upper_bound_cor6b, upper_bound_thm5,
                            upper_bound_thm6, upper_error_thm5)


@pytest.fixture
def ms01(lin01, one):
    return lift_weighted_system(lin01, one)


def test_thm5_error_examples(ms01):
    assert upper_error_thm5(ms01, ZERO, 0, 1) == 0.0
    assert upper_error_thm5(ms01, ConstantError(0.7), 0, 1) == pytest.approx(0.7, abs=1e-13)
    bump = CallableError(lambda v, w, u: u * (1 - u), "bump")
    assert upper_error_thm5(ms01, bump, 0, 1) == pytest.approx(1 / 6, abs=1e-13)


def test_thm5_examples(ms01, lin01, t2, exp_sys, one):
    r = upper_bound_thm5(t2, ms01, lin01, ZERO, 0, 1)
    assert (r.lhs, r.rhs_main, r.margin) == pytest.approx((1 / 3, 0.5, 1 / 6), abs=1e-13)
    r = upper_bound_thm5(make_function("poly", (3, -1)), ms01, lin01, ZERO, 0, 1)
    assert abs(r.margin) <= 1e-12
    ms = lift_weighted_system(exp_sys, one)
    r = upper_bound_thm5(make_function("exp", (2,)), ms, exp_sys, ZERO, 0, 1)
    c = c_coeffs(exp_sys, one, 0, 1)
    assert r.margin >= 0
    assert r.meta["weight_x"] == pytest.approx(c.c1 / c.c, abs=1e-9)
    assert r.meta["weight_y"] == pytest.approx(c.c2 / c.c, abs=1e-9)


def test_thm6_examples(t2):
    r = upper_bound_thm6(t2, lebesgue(), ZERO)
    assert r.margin == pytest.approx(1 / 6, abs=1e-13)
    assert upper_bound_thm6(t2, lebesgue(), ConstantError(0.2)).error_term == pytest.approx(0.2, abs=1e-13)
    r = upper_bound_thm6(t2, atomic([(0.3, 1.0)]), ZERO)
    assert (r.lhs, r.rhs_main, r.margin) == pytest.approx((0.09, 0.3, 0.21), abs=1e-15)


def test_thm6_perturbed(rng):
    for _ in range(10):
        a, b = rng.uniform(0.5, 2), rng.uniform(-0.01, 0.01)
        g = from_callable(lambda t, a=a, b=b: a * t ** 2 + b * np.sin(40 * t), "g")
        assert upper_bound_thm6(g, lebesgue(), jensen_eta(g, 33)).margin >= -1e-9


def test_cor6a_examples(t2):
    assert cor6a_error(PowerMeasure3([(1, 1, 1, 1)]), lebesgue(), 2) == pytest.approx(1 / 3, abs=1e-13)
    assert cor6a_error(PowerMeasure3([(0, 0, 0, 5)]), atomic([(0.2, 0.4), (0.7, 0.6)]), 3) == pytest.approx(5)
    a = upper_bound_cor6a(t2, lebesgue(), PowerMeasure3([]))
    b = upper_bound_thm6(t2, lebesgue(), ZERO)
    assert (a.lhs, a.rhs_main, a.error_term) == pytest.approx((b.lhs, b.rhs_main, b.error_term), abs=1e-15)


def test_cor6b_examples(t2):
    assert cor6b_error(PowerMeasure3([(1, 1, 0, 1)]), 1) == pytest.approx(1 / 6)
    r = upper_bound_cor6b(t2, PowerMeasure3([]))
    assert r.margin == pytest.approx(0.25)
    assert cor6b_error(PowerMeasure3([(1, 1, 1, 1)]), 2) == pytest.approx(1 / 3)


@pytest.mark.parametrize("p,q,r,s", [(1, 1, 1, 2), (0.3, 2.5, 0, 1), (4, 0.1, 2, 0.5), (0, 0, 1, 3)])
def test_cor6b_matches_cor6a(p, q, r, s):
    nu = PowerMeasure3([(p, q, r, 0.9)])
    assert cor6b_error(nu, s) == pytest.approx(cor6a_error(nu, lebesgue(), s), abs=1e-10)
    assert cor6b_error(nu, s) == pytest.approx(0.9 * s ** r * beta_fn(p + 1, q + 1), rel=1e-14)


def test_cor6b_counterexample():
    # -t^2 has Jensen residual t(1-t) at every scale, matching the atom exactly,
    # yet the midpoint form fails by 1/12
    g = make_function("poly", (0, 0, -1))
    r = upper_bound_cor6b(g, PowerMeasure3([(1, 1, 2, 1)]), 1.0)
    assert r.margin == pytest.approx(-1 / 12, abs=1e-15)
    assert upper_bound_cor6a(g, lebesgue(), PowerMeasure3([(1, 1, 2, 1)])).margin >= -1e-12


def test_error_monotone(rng):
    mu = atomic([(0.2, 0.5), (0.6, 0.5)])
    small = PowerMeasure3([(1, 1, 1, 1)])
    big = PowerMeasure3([(1, 1, 1, 1), (2, 0, 0, 0.2)])
    for s in rng.uniform(0.1, 2, 5):
        assert cor6a_error(big, mu, s) >= cor6a_error(small, mu, s)

import numpy as np
import pytest

from hhbounds.cheb import make_system
from hhbounds.classic import c_coeffs, classic_bounds, xi_point
from hhbounds.errmodel import ZERO
from hhbounds.errors import InputError
from hhbounds.functions import Interval, make_function
from hhbounds.lower import lower_bound_thm3
from hhbounds.meansys import lift_weighted_system
from hhbounds.residual import is_omega_convex

RHOS = [make_function("const", (1.0,)), make_function("exp", (0.7,)),
        make_function("const", (1.5,)) + make_function("sin", (3,)) * 0.5]


def test_xi_examples(lin01, one, exp_sys):
    assert xi_point(lin01, one, 0, 1) == pytest.approx(0.5, abs=1e-12)
    assert xi_point(exp_sys, one, 0, 1) == pytest.approx(0.5413248546129181, abs=1e-11)
    rho = make_function("poly", (0, 2))
    assert xi_point(make_system("linear", domain=Interval(0, 1)), rho, 0, 1) == pytest.approx(2 / 3, abs=1e-11)


def test_coeff_examples(one, exp_sys):
    lin = make_system("linear")
    c = c_coeffs(lin, one, 0, 1)
    assert (c.c, c.c1, c.c2) == pytest.approx((1, 0.5, 0.5), abs=1e-12)
    c = c_coeffs(lin, one, 0, 2)
    assert (c.c, c.c1, c.c2) == pytest.approx((2, 1, 1), abs=1e-12)
    c = c_coeffs(exp_sys, one, 0, 1)
    # determinant form versus the cross form scaled by c
    assert c.c1 == pytest.approx(c.c * c.cross1, abs=1e-10)
    assert c.c2 == pytest.approx(c.c * c.cross2, abs=1e-10)
    # closed forms for (1, e^t), rho = 1 on (0, 1)
    e = np.e
    assert c.c1 == pytest.approx((e - (e - 1)) / (e - 1), abs=1e-12)
    assert c.c2 == pytest.approx(((e - 1) - 1) / (e - 1), abs=1e-12)


def test_classic_examples(lin01, one, t2, exp_sys):
    r = classic_bounds(t2, lin01, one, 0, 1)
    assert (r.lower, r.integral, r.upper) == pytest.approx((0.25, 1 / 3, 0.5), abs=1e-12)
    lin = make_system("linear")
    r = classic_bounds(make_function("poly", (0, 1)), lin, one, -0.5, 1.5)
    assert abs(r.margin_lower) <= 1e-12 and abs(r.margin_upper) <= 1e-12
    r = classic_bounds(make_function("exp", (2,)), exp_sys, one, 0, 1)
    assert r.margin_lower >= 0 and r.margin_upper >= 0


def test_classic_input_errors(lin01, one, t2):
    with pytest.raises(InputError):
        classic_bounds(t2, lin01, one, 1, 0)
    with pytest.raises(InputError):
        classic_bounds(t2, lin01, make_function("poly", (-1, 1)), 0, 1)


@pytest.mark.parametrize("name,params", [("linear", ()), ("exp", ()), ("trig", ()), ("power", (1, 2))])
def test_span_exactness_and_thm3_consistency(name, params, rng):
    sys = make_system(name, params)
    for rho in RHOS:
        ms = lift_weighted_system(sys, rho)
        for _ in range(4):
            x, y = np.sort(rng.uniform(sys.domain.lo, sys.domain.hi, 2))
            a, b = rng.uniform(-2, 2, 2)
            span = make_function("const", (0.0,)).__class__(lambda t: a * sys.omega0(t) + b * sys.omega1(t), "span")
            r = classic_bounds(span, sys, rho, x, y)
            assert abs(r.margin_lower) <= 1e-10 * (1 + abs(r.integral))
            assert abs(r.margin_upper) <= 1e-10 * (1 + abs(r.integral))
            f = make_function("exp", (2.0,)) if name != "trig" else make_function("cos", (1.0,)) * -1
            r = classic_bounds(f, sys, rho, x, y)
            rep = lower_bound_thm3(f, ms, sys, ZERO, x, y)
            c = r.coeffs.c
            assert r.lower == pytest.approx(c * rep.lhs, rel=1e-11, abs=1e-12)
            assert r.integral == pytest.approx(c * rep.rhs_main, rel=1e-11, abs=1e-12)


def test_margins_for_convex(rng):
    sys = make_system("exp")
    f = make_function("exp", (2.5,)) + make_function("exp", (1,)) * -3
    assert is_omega_convex(f, sys).ok
    for _ in range(30):
        x, y = np.sort(rng.uniform(-1, 2, 2))
        r = classic_bounds(f, sys, RHOS[2], x, y)
        assert r.margin_lower >= -1e-9 and r.margin_upper >= -1e-9

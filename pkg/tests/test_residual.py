import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hhbounds.cheb import make_system
from hhbounds.errors import InputError
from hhbounds.functions import Interval, make_function
from hhbounds.residual import (convexity_residual, is_omega_convex, jensen_eta, jensen_residual, measured_eps,
                               sup_jensen)


def test_convexity_residual_examples(lin01, t2):
    assert convexity_residual(t2, lin01, 0, 0.5, 1) == pytest.approx(-0.25)
    assert convexity_residual(make_function("poly", (0, 1)), lin01, 0.1, 0.2, 0.9) == pytest.approx(0, abs=1e-15)
    assert convexity_residual(-t2, lin01, 0, 0.5, 1) == pytest.approx(0.25)
    with pytest.raises(InputError):
        convexity_residual(t2, lin01, 0.5, 0.2, 1)


def test_is_omega_convex_examples(exp_sys):
    lin = make_system("linear")
    assert is_omega_convex(make_function("exp", (1,)), lin, 20).ok
    sin_rep = is_omega_convex(make_function("sin", (1,)), make_system("linear", domain=Interval(0, math.pi)), 20)
    assert not sin_rep.ok and sin_rep.worst_residual > 0
    assert is_omega_convex(make_function("exp", (2,)), exp_sys, 20).ok


def test_jensen_residual_examples(t2):
    assert jensen_residual(t2, 0.5) == pytest.approx(-0.25)
    assert jensen_residual(make_function("poly", (0, 1)), 0.3) == pytest.approx(0, abs=1e-16)
    assert jensen_residual(make_function("poly", (0, 1, -1)), 0.5) == pytest.approx(0.25)


def test_measured_eps_examples(lin01, t2):
    assert measured_eps(t2, lin01).is_zero
    assert measured_eps(make_function("poly", (3, -2)), lin01).is_zero
    wig = t2 + make_function("sin", (20,)) * 0.1
    m = measured_eps(wig, lin01)
    assert not m.is_zero and m.sup > 0
    # direct scan oracle of the table maximum
    g = np.linspace(0, 1, 33)
    best = 0.0
    for i in range(33):
        for k in range(i + 1, 33):
            for j in range(k + 1, 33):
                x, u, y = g[i], g[k], g[j]
                r = wig(u) - ((y - u) * wig(x) + (u - x) * wig(y)) / (y - x)
                best = max(best, r)
    assert m.sup == pytest.approx(best, abs=1e-12)


def test_measured_lookup_at_nodes(lin01):
    f = make_function("poly", (0, 0, 1)) + make_function("sin", (20,)) * 0.1
    m = measured_eps(f, lin01, 9)
    g = m.grid
    assert m.lookup(g[1], g[7], g[4]) == pytest.approx(max(0.0, float(m.residual(g[1], g[4], g[7]))), abs=1e-14)
    assert m.lookup(g[1], g[7], g[4]) == pytest.approx(m.table[1, 7, 4], abs=1e-14)


@settings(max_examples=30)
@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-0.9, 0.2), st.floats(0.3, 1.9))
def test_span_residual_vanishes(a, b, x, y):
    sys = make_system("exp")
    f = make_function("const", (a,)) + make_function("exp", (1,)) * b
    u = 0.5 * (x + y)
    assert convexity_residual(f, sys, x, u, y) == pytest.approx(0, abs=1e-12)


@settings(max_examples=30)
@given(st.floats(-1, 0.4), st.floats(0.6, 2), st.floats(0.01, 0.99))
def test_linear_residual_matches_jensen(x, y, t):
    f = make_function("exp", (1.3,)) + make_function("sin", (4,))
    u = (1 - t) * x + t * y
    seg = f.__class__(lambda s: f((1 - s) * x + s * y), "seg")
    assert convexity_residual(f, make_system("linear"), x, u, y) == pytest.approx(jensen_residual(seg, t), abs=1e-12)


def test_both_signs_convex_iff_span():
    sys = make_system("exp")
    span = make_function("const", (0.3,)) + make_function("exp", (1,)) * 2
    assert is_omega_convex(span, sys).ok and is_omega_convex(-span, sys).ok
    f = make_function("exp", (2,))
    assert is_omega_convex(f, sys).ok and not is_omega_convex(-f, sys).ok


def test_perturbation_bound(rng):
    sys = make_system("exp")
    f0 = make_function("exp", (2,))
    c = 0.02
    f = f0 + make_function("sin", (17,)) * c
    for _ in range(200):
        x, u, y = np.sort(rng.uniform(-1, 2, 3))
        w1, w2 = sys.weights(x, u, y)
        assert convexity_residual(f, sys, x, u, y) <= c * (1 + abs(w1) + abs(w2)) + 1e-12


def test_jensen_models(t2):
    assert jensen_eta(t2).is_zero
    wig = t2 + make_function("sin", (30,)) * 0.05
    assert sup_jensen(wig).c == pytest.approx(jensen_eta(wig, 129).sup)
    assert sup_jensen(wig).c > 0

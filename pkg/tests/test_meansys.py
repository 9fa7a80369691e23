import math

import numpy as np
import pytest

from hhbounds.cheb import make_system
from hhbounds.errors import ContractError, InputError
from hhbounds.functions import Interval, make_function
from hhbounds.meansys import MeanSystem, check_reproducing, lift_weighted_system, partition_sums
from hhbounds.measure import gauss_legendre


def test_lift_examples(lin01, one, exp_sys):
    ms = lift_weighted_system(lin01, one)
    assert ms.mean0(0.2, 0.8) == pytest.approx(0.5, abs=1e-12)
    assert np.allclose(ms.lam(np.linspace(0, 1, 5), 0, 1), 1.0)
    ms2 = lift_weighted_system(exp_sys, one)
    assert ms2.mean0(0.0, 1.0) == pytest.approx(math.log(math.e - 1), abs=1e-11)
    ms3 = lift_weighted_system(lin01, make_function("poly", (0, 2)).with_domain(Interval(0, 1)))
    assert ms3.mean0(0.0, 1.0) == pytest.approx(2 / 3, abs=1e-11)


def test_lift_rejects_nonpositive_rho(lin01):
    with pytest.raises(InputError):
        lift_weighted_system(lin01, make_function("poly", (-0.5, 1)))


def test_reproducing_examples(lin01, one, exp_sys):
    rep = check_reproducing(lift_weighted_system(lin01, one), lin01, 0, 1)
    assert rep.defect0 <= 1e-12 and rep.defect1 <= 1e-12
    rep = check_reproducing(lift_weighted_system(exp_sys, one), exp_sys, 0, 1)
    assert rep.defect0 <= 1e-10 and rep.defect1 <= 1e-10
    ms = lift_weighted_system(exp_sys, one)
    half = MeanSystem(lambda t, x, y: 0.5 * ms.lam(t, x, y), ms.mean, ms.mean0, ms.base_measure)
    bad = check_reproducing(half, exp_sys, 0, 1)
    assert not bad.ok
    assert bad.defect0 == pytest.approx(0.5 * float(exp_sys.omega0(ms.mean0(0, 1))), rel=1e-9)


def test_partition_examples(lin01, one):
    ps = partition_sums(lift_weighted_system(lin01, one), lin01, 0, 1)
    assert (ps.s0p, ps.s0pp, ps.s1p, ps.s1pp) == pytest.approx((0.5, 0.5, 0.125, 0.375), abs=1e-13)
    assert ps.denom == pytest.approx(0.125, abs=1e-13)
    rho = make_function("poly", (0, 2))
    sys = make_system("linear", domain=Interval(0.0, 1.0))
    ms = lift_weighted_system(sys, rho.with_domain(Interval(0, 1)))
    ps = partition_sums(ms, sys, 0.0, 1.0)
    # Lambda = 2t on [0,1]; M0 = 2/3; 4/9 and 5/9 by closed form
    assert ps.s0p == pytest.approx(4 / 9, abs=1e-12)
    assert ps.s0pp == pytest.approx(5 / 9, abs=1e-12)


def test_partition_contract_failure(exp_sys, one):
    ms = lift_weighted_system(exp_sys, one)
    half = MeanSystem(lambda t, x, y: 0.5 * ms.lam(t, x, y), ms.mean, ms.mean0, ms.base_measure)
    with pytest.raises(ContractError):
        partition_sums(half, exp_sys, 0, 1)


def test_change_of_variables(rng):
    sys = make_system("exp")
    rho = make_function("exp", (0.5,)) + make_function("const", (1.0,))
    ms = lift_weighted_system(sys, rho)
    g = make_function("poly", (1, -2, 0.5, 1))
    for _ in range(10):
        x, y = np.sort(rng.uniform(-1, 2, 2))
        t, w = ms.base_measure.nodes()
        lhs = float(w @ (ms.lam(t, x, y) * g(ms.mean(t, x, y))))
        tt, ww = gauss_legendre(x, y)
        rhs = float(ww @ (g(tt) * rho(tt))) / ms.scale(x, y)
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_means_inside(rng):
    sys = make_system("trig")
    ms = lift_weighted_system(sys, make_function("const", (1.0,)))
    t = np.linspace(0, 1, 33)
    for _ in range(20):
        x, y = np.sort(rng.uniform(sys.domain.lo, sys.domain.hi, 2))
        m = ms.mean(t, x, y)
        assert np.all((m >= x) & (m <= y))
        assert x < ms.mean0(x, y) < y

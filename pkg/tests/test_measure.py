import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hhbounds.errors import ContractError, EvaluationError, InputError
from hhbounds.functions import from_callable, make_function
from hhbounds.measure import (QuadratureConfig, UnitMeasure, atomic, default_quadrature, first_moment,
                              gauss_legendre, integrate, lebesgue, s_functional, split_moments, with_density)

ident = make_function("poly", (0, 1))
half_half = atomic([(0.0, 0.5), (1.0, 0.5)])


def test_integrate_examples():
    assert integrate(lebesgue(), ident) == pytest.approx(0.5, abs=1e-15)
    assert integrate(half_half, ident) == pytest.approx(0.5, abs=1e-15)
    assert integrate(half_half, ident, 0.5, 1.0, include_a=False) == pytest.approx(0.5, abs=1e-15)
    assert integrate(half_half, ident, 0.0, 1.0, include_a=True, include_b=False) == 0.0


def test_moments_examples():
    assert first_moment(lebesgue()) == pytest.approx(0.5, abs=1e-14)
    assert first_moment(half_half) == 0.5
    assert first_moment(atomic([(0.3, 1.0)])) == pytest.approx(0.3, abs=1e-15)
    assert s_functional(lebesgue()) == pytest.approx(0.125, abs=1e-14)
    assert s_functional(half_half) == pytest.approx(0.25, abs=1e-15)
    with pytest.raises(ContractError):
        s_functional(atomic([(0.5, 1.0)]))


def test_atom_at_mean_goes_left():
    mu = atomic([(0.0, 0.25), (0.5, 0.5), (1.0, 0.25)])
    sm = split_moments(mu)
    assert sm.m1 == 0.5
    assert sm.mass_left == pytest.approx(0.75) and sm.mass_right == pytest.approx(0.25)
    # S = 0.75 * 0.25 - 0.25 * 0.25
    assert sm.s == pytest.approx(0.125)


def test_non_probability_rejected():
    mu = atomic([(0.2, 0.5)])
    assert not mu.is_probability
    with pytest.raises(ContractError):
        first_moment(mu)
    assert first_moment(mu.normalized()) == pytest.approx(0.2)


def test_measure_validation():
    with pytest.raises(InputError):
        atomic([(1.5, 1.0)])
    with pytest.raises(InputError):
        atomic([(0.5, 0.0)])
    with pytest.raises(InputError):
        with_density(make_function("poly", (-1, 1)))
    with pytest.raises(InputError):
        UnitMeasure(make_function("const", (2,)), (), True)


def test_density_measure():
    mu = with_density(make_function("poly", (0, 2)))
    assert mu.is_probability
    assert first_moment(mu) == pytest.approx(2 / 3, abs=1e-14)


def test_evaluation_error():
    bad = from_callable(lambda t: 1.0 / (t - 0.5) ** 0 * np.where(t > 0.7, np.nan, 1.0))
    with pytest.raises(EvaluationError):
        integrate(lebesgue(), bad)


def test_gauss_legendre_polynomial_exactness():
    t, w = gauss_legendre(0.0, 1.0, QuadratureConfig(panels=4, nodes_per_panel=8))
    for k in range(16):
        assert float(w @ t ** k) == pytest.approx(1.0 / (k + 1), abs=1e-14)


def test_refined_quadrature_handles_endpoint_singularity():
    q = QuadratureConfig().refined(24)
    t, w = gauss_legendre(0.0, 1.0, q)
    # int_0^1 t^0.3 dt = 1/1.3
    assert float(w @ t ** 0.3) == pytest.approx(1 / 1.3, abs=1e-12)


def test_env_override(monkeypatch):
    monkeypatch.setenv("HH_QUAD_PANELS", "12")
    assert default_quadrature().panels == 12
    monkeypatch.setenv("HH_QUAD_PANELS", "zero")
    with pytest.raises(InputError):
        default_quadrature()


@settings(max_examples=40)
@given(st.floats(0.01, 0.99), st.integers(0, 6))
def test_additivity(b, k):
    g = make_function("poly", tuple([0] * k + [1]))
    mu = with_density(make_function("exp", (1,))) if k % 2 else lebesgue()
    whole = integrate(mu, g, 0.0, 1.0)
    parts = integrate(mu, g, 0.0, b) + integrate(mu, g, b, 1.0, include_a=False)
    assert whole == pytest.approx(parts, abs=1e-13)


@settings(max_examples=40)
@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0.01, 1)), min_size=2, max_size=6))
def test_s_positive_when_support_check_passes(atoms):
    total = sum(w for _, w in atoms)
    mu = atomic([(p, w / total) for p, w in atoms], probability=True) if abs(
        sum(w / total for _, w in atoms) - 1) < 1e-10 else None
    if mu is None:
        return
    sm = split_moments(mu)
    if sm.mass_left > 1e-14 and sm.mass_right > 1e-14:
        assert s_functional(mu) > 0
    else:
        with pytest.raises(ContractError):
            s_functional(mu)

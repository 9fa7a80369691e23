"""Approximate lower bounds: the value at the mean point against the average.

Two families:

* mean systems (``lower_bound_thm3``): ``f(M0) <= int Lambda f(M) dmu + E``
  where ``E`` is a determinant-weighted average of the error over pairs of
  nodes straddling ``M0``;
* segments with a probability measure (``lower_bound_thm4`` and its
  specialisations): ``f_seg(m1) <= int f_seg dmu + I / S``.
"""

from __future__ import annotations

import numpy as np

from .cheb import LINEAR01, ChebyshevSystem
from .errmodel import ErrorModel, PowerMeasure2
from .errors import ContractError, InputError
from .functions import RealFunction
from .meansys import REPRODUCING_TOL, MeanSystem, check_reproducing, partition_sums, split_nodes
from .measure import (BLOCK_MASS_FLOOR, DEFAULT_Q, QuadratureConfig, UnitMeasure, integrate,
                      lebesgue, split_moments)
from .report import BoundReport

DENOM_RTOL = 1e-8


def lower_error_E(ms: MeanSystem, sys: ChebyshevSystem, eps: ErrorModel, x: float, y: float,
                  q: QuadratureConfig = DEFAULT_Q) -> float:
    ps = partition_sums(ms, sys, x, y, q)
    sp = split_nodes(ms, x, y, q)
    num, den = eps.pair_sum(sp.lower_w, sp.lower_m, sp.upper_w, sp.upper_m, sp.m0, sys)
    if abs(den - ps.denom) > DENOM_RTOL * max(abs(ps.denom), 1e-300):
        raise ContractError(f"pair-sum denominator {den!r} disagrees with partition sums {ps.denom!r}")
    return num / den


def lower_bound_thm3(f: RealFunction, ms: MeanSystem, sys: ChebyshevSystem, eps: ErrorModel,
                     x: float, y: float, q: QuadratureConfig = DEFAULT_Q,
                     tol: float = REPRODUCING_TOL) -> BoundReport:
    if x == y:
        fx = float(f(x))
        return BoundReport.build("thm3", fx, fx, 0.0, x=x, y=y, degenerate=True)
    if not x < y:
        raise InputError("need x <= y")
    rep = check_reproducing(ms, sys, x, y, tol, q)
    if not rep.ok:
        raise ContractError(f"mean system does not reproduce the Chebyshev system at ({x}, {y}): "
                            f"defects {rep.defect0:.3g}, {rep.defect1:.3g}")
    t, w = ms.base_measure.nodes(0.0, 1.0, True, True, q)
    lam = np.asarray(ms.lam(t, x, y), dtype=float) * np.ones_like(t)
    rhs = float(np.dot(w * lam, f.checked(np.asarray(ms.mean(t, x, y), dtype=float) * np.ones_like(t))))
    m0 = float(ms.mean0(x, y))
    err = lower_error_E(ms, sys, eps, x, y, q)
    return BoundReport.build("thm3", float(f(m0)), rhs, err, x=x, y=y, m0=m0, error_model=eps.spec)


def _blocks(mu: UnitMeasure, q: QuadratureConfig):
    sm = split_moments(mu, q)
    if sm.mass_left <= BLOCK_MASS_FLOOR or sm.mass_right <= BLOCK_MASS_FLOOR:
        raise ContractError("measure support is a singleton (one side of the mean has no mass)")
    tl, wl = mu.nodes(0.0, sm.m1, True, True, q)
    tr, wr = mu.nodes(sm.m1, 1.0, False, True, q)
    return sm, tl, wl, tr, wr


def i_double_integral(mu: UnitMeasure, eta: ErrorModel, s: float,
                      q: QuadratureConfig = DEFAULT_Q) -> float:
    """Double integral over ``[0, m1] x (m1, 1]`` of ``(t'' - t') eta(tau)``.

    ``tau = (m1 - t')/(t'' - t')`` and closed-form models see the segment
    length ``(t'' - t') * s``.
    """
    return _i_and_s(mu, eta, s, q)[0]


def _i_and_s(mu, eta, s, q):
    if s < 0:
        raise InputError("s must be >= 0")
    sm, tl, wl, tr, wr = _blocks(mu, q)
    num, den = eta.pair_sum(wl, tl, wr, tr, sm.m1, LINEAR01, scale=s)
    return num, sm.s, sm


def lower_bound_thm4(f_seg: RealFunction, mu: UnitMeasure, eta: ErrorModel, s: float = 1.0,
                     q: QuadratureConfig = DEFAULT_Q, theorem: str = "thm4") -> BoundReport:
    """``f_seg(m1) <= int f_seg dmu + I / S`` for a probability measure ``mu``."""
    i_val, s_mu, sm = _i_and_s(mu, eta, s, q)
    rhs = integrate(mu, f_seg, q=q)
    return BoundReport.build(theorem, float(f_seg(sm.m1)), rhs, i_val / s_mu,
                             m1=sm.m1, s_mu=s_mu, i=i_val, s=s, error_model=eta.spec)


def lower_bound_cor2hp1(f_seg: RealFunction, eta: ErrorModel, s: float = 1.0,
                        q: QuadratureConfig = DEFAULT_Q) -> BoundReport:
    """Lebesgue case: ``f_seg(1/2) <= int_0^1 f_seg + 8 I``."""
    rep = lower_bound_thm4(f_seg, lebesgue(), eta, s, q, theorem="cor2hp1")
    if abs(1.0 / rep.meta["s_mu"] - 8.0) > 1e-12:
        raise ContractError(f"Lebesgue prefactor is {1.0 / rep.meta['s_mu']!r}, expected 8")
    return rep


def j_functional(nu: PowerMeasure2, mu: UnitMeasure, s: float,
                 q: QuadratureConfig = DEFAULT_Q) -> float:
    """Sum over atoms of ``c * int_[0,m1] (m1-t)^p * int_(m1,1] (t-m1)^q * s^(p+q-1)``."""
    q = q.refined(24)
    sm, tl, wl, tr, wr = _blocks(mu, q)
    total = 0.0
    for p, qq, c in nu.atoms:
        e = p + qq - 1.0
        if s == 0 and e < 0:
            raise InputError(f"s = 0 with atom ({p}, {qq}) gives a singular power")
        left = float(wl @ np.power(sm.m1 - tl, p))
        right = float(wr @ np.power(tr - sm.m1, qq))
        total += c * left * right * s ** e
    return total


def cor4c2_error(nu: PowerMeasure2, s: float) -> float:
    total = 0.0
    for p, q, c in nu.atoms:
        e = p + q - 1.0
        if s == 0 and e < 0:
            raise InputError(f"s = 0 with atom ({p}, {q}) gives a singular power")
        total += c * s ** e / (2.0 ** e * (p + 1.0) * (q + 1.0))
    return total


def lower_bound_cor4c2(f_seg: RealFunction, nu: PowerMeasure2, s: float = 1.0,
                       q: QuadratureConfig = DEFAULT_Q) -> BoundReport:
    rhs = integrate(lebesgue(), f_seg, q=q)
    return BoundReport.build("cor4c2", float(f_seg(0.5)), rhs, cor4c2_error(nu, s), s=s,
                             error_model=nu.spec)

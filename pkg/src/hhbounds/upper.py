"""Approximate upper bounds: the average against the endpoint combination."""

from __future__ import annotations

import numpy as np

from .cheb import LINEAR01, ChebyshevSystem
from .errmodel import ErrorModel, PowerMeasure3, beta_fn
from .errors import ContractError, InputError
from .functions import RealFunction
from .meansys import REPRODUCING_TOL, MeanSystem, check_reproducing
from .measure import DEFAULT_Q, QuadratureConfig, UnitMeasure, first_moment, integrate
from .report import BoundReport


def _weighted_nodes(ms: MeanSystem, x: float, y: float, q: QuadratureConfig):
    t, w = ms.base_measure.nodes(0.0, 1.0, True, True, q)
    lam = np.asarray(ms.lam(t, x, y), dtype=float) * np.ones_like(t)
    m = np.asarray(ms.mean(t, x, y), dtype=float) * np.ones_like(t)
    return w * lam, m


def upper_error_thm5(ms: MeanSystem, eps: ErrorModel, x: float, y: float,
                     q: QuadratureConfig = DEFAULT_Q, sys: ChebyshevSystem | None = None) -> float:
    """``int Lambda eps_{x,y}(M) dmu``.

    ``sys`` is only needed by closed-form models, which locate ``M`` on
    ``[x, y]`` through the determinant weights.
    """
    if not x < y:
        raise InputError("need x < y")
    wl, m = _weighted_nodes(ms, x, y, q)
    vals = eps.along(x, y, m, sys if sys is not None else LINEAR01)
    return float(np.dot(wl, vals))


def upper_bound_thm5(f: RealFunction, ms: MeanSystem, sys: ChebyshevSystem, eps: ErrorModel,
                     x: float, y: float, q: QuadratureConfig = DEFAULT_Q,
                     tol: float = REPRODUCING_TOL) -> BoundReport:
    """``int Lambda f(M) <= W(M0,y)/W(x,y) f(x) + W(x,M0)/W(x,y) f(y) + E``."""
    if not x < y:
        raise InputError("need x < y")
    rep = check_reproducing(ms, sys, x, y, tol, q)
    if not rep.ok:
        raise ContractError(f"mean system does not reproduce the Chebyshev system at ({x}, {y}): "
                            f"defects {rep.defect0:.3g}, {rep.defect1:.3g}")
    wl, m = _weighted_nodes(ms, x, y, q)
    lhs = float(np.dot(wl, f.checked(m)))
    m0 = float(ms.mean0(x, y))
    d = float(sys.det(x, y))
    k1 = float(sys.det(m0, y)) / d
    k2 = float(sys.det(x, m0)) / d
    rhs = k1 * float(f(x)) + k2 * float(f(y))
    err = upper_error_thm5(ms, eps, x, y, q, sys)
    return BoundReport.build("thm5", lhs, rhs, err, x=x, y=y, m0=m0, weight_x=k1, weight_y=k2,
                             error_model=eps.spec)


def upper_bound_thm6(f_seg: RealFunction, mu: UnitMeasure, eta: ErrorModel, s: float = 1.0,
                     q: QuadratureConfig = DEFAULT_Q, theorem: str = "thm6") -> BoundReport:
    """``int f_seg dmu <= (1 - m1) f_seg(0) + m1 f_seg(1) + int eta dmu``."""
    m1 = first_moment(mu, q)
    t, w = mu.nodes(0.0, 1.0, True, True, q)
    lhs = float(np.dot(w, f_seg.checked(t)))
    rhs = (1.0 - m1) * float(f_seg(0.0)) + m1 * float(f_seg(1.0))
    err = float(np.dot(w, eta.along(0.0, 1.0, t, LINEAR01, scale=s)))
    return BoundReport.build(theorem, lhs, rhs, err, m1=m1, s=s, error_model=eta.spec)


def cor6a_error(nu: PowerMeasure3, mu: UnitMeasure, s: float, q: QuadratureConfig = DEFAULT_Q) -> float:
    """Per-atom ``c s^r int t^p (1-t)^q dmu``; endpoint-graded quadrature."""
    qr = q.refined(24)
    t, w = mu.nodes(0.0, 1.0, True, True, qr)
    total = 0.0
    for p, qq, r, c in nu.atoms:
        total += c * s ** r * float(w @ (np.power(t, p) * np.power(1.0 - t, qq)))
    return total


def upper_bound_cor6a(f_seg: RealFunction, mu: UnitMeasure, nu: PowerMeasure3, s: float = 1.0,
                      q: QuadratureConfig = DEFAULT_Q) -> BoundReport:
    m1 = first_moment(mu, q)
    lhs = integrate(mu, f_seg, q=q)
    rhs = (1.0 - m1) * float(f_seg(0.0)) + m1 * float(f_seg(1.0))
    return BoundReport.build("cor6a", lhs, rhs, cor6a_error(nu, mu, s, q), m1=m1, s=s,
                             error_model=nu.spec)


def cor6b_error(nu: PowerMeasure3, s: float) -> float:
    return sum(c * beta_fn(p + 1.0, q + 1.0) * s ** r for p, q, r, c in nu.atoms)


def upper_bound_cor6b(f_seg: RealFunction, nu: PowerMeasure3, s: float = 1.0,
                      q: QuadratureConfig = DEFAULT_Q) -> BoundReport:
    """Midpoint form: ``f_seg(1/2) <= (f_seg(0) + f_seg(1))/2 + sum c B(p+1, q+1) s^r``.

    This is the stated midpoint inequality, certified as written.  It is not
    implied by the power-error hypothesis in general: ``f_seg(t) = -t^2``
    with the single atom ``(1, 1, 2, 1)`` and ``s = 1`` satisfies the
    hypothesis with equality yet has margin ``-1/12``.  The integral form is
    :func:`upper_bound_cor6a` with Lebesgue measure.
    """
    lhs = float(f_seg(0.5))
    rhs = 0.5 * (float(f_seg(0.0)) + float(f_seg(1.0)))
    return BoundReport.build("cor6b", lhs, rhs, cor6b_error(nu, s), s=s, error_model=nu.spec)

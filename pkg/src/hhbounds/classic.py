"""The exact two-sided bound for (omega0, omega1)-convex functions.

For a positive weight ``rho`` on ``[x, y]``::

    c f(xi) <= int_x^y f rho <= c1 f(x) + c2 f(y)

where ``xi`` inverts the ratio ``omega1/omega0`` at the moment quotient.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cheb import ChebyshevSystem, ratio_inverse
from .errors import DegeneracyError, InputError, RangeError
from .functions import Interval, RealFunction
from .measure import DEFAULT_Q, QuadratureConfig, gauss_legendre
from .report import BoundReport


@dataclass(frozen=True)
class ClassicCoefficients:
    xi: float
    c: float
    c1: float
    c2: float
    cross1: float
    cross2: float
    """``det(xi, y) / det(x, y)`` and ``det(x, xi) / det(x, y)``: the weights of
    the normalised (``1/c``-scaled) upper bound, so ``c1 == c * cross1``."""


def _moments(sys, rho, x, y, q):
    if not x < y:
        raise InputError(f"need x < y, got ({x!r}, {y!r})")
    for p in (x, y):
        if not sys.domain.contains(p):
            raise InputError(f"point {p!r} outside system domain")
    t, w = gauss_legendre(x, y, q)
    r = rho.checked(t)
    if np.any(r <= 0):
        raise InputError(f"weight {rho.label} must be positive on [{x}, {y}]")
    wr = w * r
    return float(wr @ sys.omega0(t)), float(wr @ sys.omega1(t)), t, wr


def xi_point(sys: ChebyshevSystem, rho: RealFunction, x: float, y: float,
             q: QuadratureConfig = DEFAULT_Q) -> float:
    m0, m1, _, _ = _moments(sys, rho, x, y, q)
    return _xi_from_moments(sys, m0, m1, x, y)


def _xi_from_moments(sys, m0, m1, x, y):
    try:
        return ratio_inverse(sys, m1 / m0, Interval(x, y))
    except RangeError as exc:
        raise DegeneracyError(f"moment ratio outside the ratio range on [{x}, {y}]") from exc


def c_coeffs(sys: ChebyshevSystem, rho: RealFunction, x: float, y: float,
             q: QuadratureConfig = DEFAULT_Q) -> ClassicCoefficients:
    m0, m1, _, _ = _moments(sys, rho, x, y, q)
    xi = _xi_from_moments(sys, m0, m1, x, y)
    w0x, w1x = float(sys.omega0(x)), float(sys.omega1(x))
    w0y, w1y = float(sys.omega0(y)), float(sys.omega1(y))
    d = w0x * w1y - w1x * w0y
    c = m0 / float(sys.omega0(xi))
    c1 = (m0 * w1y - w0y * m1) / d
    c2 = (w0x * m1 - w1x * m0) / d
    cross1 = float(sys.det(xi, y)) / d
    cross2 = float(sys.det(x, xi)) / d
    return ClassicCoefficients(xi, c, c1, c2, cross1, cross2)


@dataclass(frozen=True)
class ClassicReport:
    lower: float
    integral: float
    upper: float
    coeffs: ClassicCoefficients
    x: float
    y: float

    @property
    def margin_lower(self) -> float:
        return self.integral - self.lower

    @property
    def margin_upper(self) -> float:
        return self.upper - self.integral

    def reports(self) -> tuple[BoundReport, BoundReport]:
        lo = BoundReport.build("classic-lower", self.lower, self.integral, 0.0, x=self.x, y=self.y)
        hi = BoundReport.build("classic-upper", self.integral, self.upper, 0.0, x=self.x, y=self.y)
        return lo, hi


def classic_bounds(f: RealFunction, sys: ChebyshevSystem, rho: RealFunction, x: float, y: float,
                   q: QuadratureConfig = DEFAULT_Q) -> ClassicReport:
    m0, m1, t, wr = _moments(sys, rho, x, y, q)
    cc = c_coeffs(sys, rho, x, y, q)
    integral = float(wr @ f.checked(t))
    lower = cc.c * float(f(cc.xi))
    upper = cc.c1 * float(f(x)) + cc.c2 * float(f(y))
    return ClassicReport(lower, integral, upper, cc, float(x), float(y))

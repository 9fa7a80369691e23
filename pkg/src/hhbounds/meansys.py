"""Weighted mean systems ``(Lambda, M, M0)`` over a parameter measure on [0, 1].

A mean system reproduces a Chebyshev system when
``int Lambda(t) omega_i(M(t)) dmu(t) = omega_i(M0)`` for ``i = 0, 1``.
The lifted system of a positive weight ``rho`` is the standard instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .cheb import ChebyshevSystem
from .errors import ContractError, DegeneracyError, InputError
from .functions import RealFunction
from .measure import DEFAULT_Q, QuadratureConfig, UnitMeasure, gauss_legendre, lebesgue

REPRODUCING_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class MeanSystem:
    """``lam(t, x, y)``, ``mean(t, x, y)`` vectorised in ``t``; ``mean0(x, y)`` scalar."""

    lam: Callable
    mean: Callable
    mean0: Callable
    base_measure: UnitMeasure
    name: str = "mean-system"
    scale: Callable | None = None
    split_t: Callable | None = None
    """Optional ``split_t(x, y)``: parameter where a monotone ``M`` reaches ``M0``."""


def _interval_moments(sys: ChebyshevSystem, rho: RealFunction, x: float, y: float,
                      q: QuadratureConfig):
    t, w = gauss_legendre(x, y, q)
    r = rho.checked(t)
    if np.any(r <= 0):
        raise InputError(f"weight {rho.label} must be positive on [{x}, {y}]")
    wr = w * r
    return float(wr @ sys.omega0(t)), float(wr @ sys.omega1(t))


def lift_weighted_system(sys: ChebyshevSystem, rho: RealFunction,
                         q: QuadratureConfig = DEFAULT_Q) -> MeanSystem:
    """Mean system of a positive weight: ``M0 = xi``, ``M = (1-t)x + ty``,
    ``Lambda = (y - x) rho(M) / c`` over Lebesgue measure."""
    from .classic import c_coeffs

    grid = sys.domain.grid(65)
    if np.any(rho.checked(grid) <= 0):
        raise InputError(f"weight {rho.label} must be positive on the system domain")

    @lru_cache(maxsize=1024)
    def coeffs(x, y):
        return c_coeffs(sys, rho, x, y, q)

    def mean(t, x, y):
        t = np.asarray(t, dtype=float)
        return (1.0 - t) * x + t * y

    def lam(t, x, y):
        return (y - x) * rho(mean(t, x, y)) / coeffs(float(x), float(y)).c

    def mean0(x, y):
        return coeffs(float(x), float(y)).xi

    def scale(x, y):
        return coeffs(float(x), float(y)).c

    def split_t(x, y):
        return min(max((mean0(x, y) - x) / (y - x), 0.0), 1.0)

    return MeanSystem(lam, mean, mean0, lebesgue(), f"lift({sys.spec or sys.name}, {rho.label})", scale,
                      split_t)


@dataclass(frozen=True)
class ReproducingReport:
    defect0: float
    defect1: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.defect0 <= self.tol and self.defect1 <= self.tol


def _nodes(ms: MeanSystem, x: float, y: float, q: QuadratureConfig):
    t, w = ms.base_measure.nodes(0.0, 1.0, True, True, q)
    lam = np.asarray(ms.lam(t, x, y), dtype=float) * np.ones_like(t)
    m = np.asarray(ms.mean(t, x, y), dtype=float) * np.ones_like(t)
    return t, w, lam, m


def check_reproducing(ms: MeanSystem, sys: ChebyshevSystem, x: float, y: float,
                      tol: float = REPRODUCING_TOL, q: QuadratureConfig = DEFAULT_Q) -> ReproducingReport:
    if not x < y:
        raise InputError("need x < y")
    _, w, lam, m = _nodes(ms, x, y, q)
    m0 = float(ms.mean0(x, y))
    d0 = abs(float(np.dot(w * lam, sys.omega0(m))) - float(sys.omega0(m0)))
    d1 = abs(float(np.dot(w * lam, sys.omega1(m))) - float(sys.omega1(m0)))
    return ReproducingReport(d0, d1, tol)


@dataclass(frozen=True)
class PartitionSums:
    s0p: float
    s0pp: float
    s1p: float
    s1pp: float

    @property
    def denom(self) -> float:
        return self.s0p * self.s1pp - self.s1p * self.s0pp


@dataclass(frozen=True)
class Split:
    """Node data of a mean system at ``(x, y)``, split at ``M0``."""

    m0: float
    lower_w: np.ndarray
    lower_m: np.ndarray
    upper_w: np.ndarray
    upper_m: np.ndarray


def split_nodes(ms: MeanSystem, x: float, y: float, q: QuadratureConfig = DEFAULT_Q) -> Split:
    """Classify nodes into ``M < M0`` and ``M >= M0`` (both with ``Lambda > 0``).

    The returned weights already include ``Lambda``.  When the system knows
    where ``M`` crosses ``M0`` the quadrature is split there, so the partial
    sums converge at the full rule order instead of O(panel width).
    """
    m0 = float(ms.mean0(x, y))
    if ms.split_t is None:
        _, w, lam, m = _nodes(ms, x, y, q)
    else:
        t0 = float(ms.split_t(x, y))
        tl, wl = ms.base_measure.nodes(0.0, t0, True, False, q)
        tr, wr = ms.base_measure.nodes(t0, 1.0, True, True, q)
        t, w = np.concatenate([tl, tr]), np.concatenate([wl, wr])
        lam = np.asarray(ms.lam(t, x, y), dtype=float) * np.ones_like(t)
        m = np.asarray(ms.mean(t, x, y), dtype=float) * np.ones_like(t)
    if np.any(lam < 0):
        raise ContractError("Lambda must be nonnegative")
    if np.any((m < x - 1e-12 * abs(y - x)) | (m > y + 1e-12 * abs(y - x))):
        raise ContractError("M(t, x, y) must lie in [x, y]")
    active = lam > 0
    lo = active & (m < m0)
    hi = active & (m >= m0)
    return Split(m0, w[lo] * lam[lo], m[lo], w[hi] * lam[hi], m[hi])


def partition_sums(ms: MeanSystem, sys: ChebyshevSystem, x: float, y: float,
                   q: QuadratureConfig = DEFAULT_Q, tol: float = REPRODUCING_TOL) -> PartitionSums:
    """The four partial sums of ``Lambda omega_i(M)`` below and above ``M0``.

    Checks that each pair adds up to ``omega_i(M0)`` (within ``tol`` scaled by
    the magnitudes involved) and that the cross determinant is positive.
    """
    if not x < y:
        raise InputError("need x < y")
    sp = split_nodes(ms, x, y, q)
    ps = PartitionSums(
        float(sp.lower_w @ sys.omega0(sp.lower_m)), float(sp.upper_w @ sys.omega0(sp.upper_m)),
        float(sp.lower_w @ sys.omega1(sp.lower_m)), float(sp.upper_w @ sys.omega1(sp.upper_m)),
    )
    for total, target, i in ((ps.s0p + ps.s0pp, float(sys.omega0(sp.m0)), 0),
                             (ps.s1p + ps.s1pp, float(sys.omega1(sp.m0)), 1)):
        if abs(total - target) > tol * (1.0 + abs(target)):
            raise ContractError(f"reproducing identity fails for omega{i}: {total!r} vs {target!r}")
    if not ps.denom > 0:
        raise DegeneracyError(f"partition determinant {ps.denom!r} is not positive")
    return ps

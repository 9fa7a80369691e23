"""Convexity residuals: how far ``f`` sits above its (omega0, omega1)-interpolant.

A positive residual at ``x < u < y`` is a convexity violation.  Clipped at
zero, these residuals are the error functions fed into the bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cheb import LINEAR01, ChebyshevSystem
from .errmodel import ConstantError, MeasuredResidual
from .errors import InputError
from .functions import Interval, RealFunction

RESIDUAL_GRID = 33


def convexity_residual(f: RealFunction, sys: ChebyshevSystem, x: float, u: float, y: float) -> float:
    if not x < u < y:
        raise InputError(f"need x < u < y, got ({x!r}, {u!r}, {y!r})")
    for p in (x, y):
        if not sys.domain.contains(p):
            raise InputError(f"point {p!r} outside system domain")
    w1, w2 = sys.weights(x, u, y)
    return float(f(u) - w1 * f(x) - w2 * f(y))


def jensen_residual(g: RealFunction, t: float) -> float:
    """Residual of ordinary convexity of ``g`` on [0, 1] at ``t``."""
    if not 0.0 <= t <= 1.0:
        raise InputError("t must lie in [0, 1]")
    return float(g(t) - (1.0 - t) * g(0.0) - t * g(1.0))


def _triples(grid: np.ndarray):
    n = grid.size
    i, k, j = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    mask = (i < k) & (k < j)
    return i[mask], k[mask], j[mask]


def _scan(f: RealFunction, sys: ChebyshevSystem, grid: np.ndarray):
    i, k, j = _triples(grid)
    x, u, y = grid[i], grid[k], grid[j]
    fx, fu, fy = f(grid)[i], f(grid)[k], f(grid)[j]
    d = sys.det(x, y)
    r = fu - (sys.det(u, y) * fx + sys.det(x, u) * fy) / d
    return (i, k, j), r, d


@dataclass(frozen=True)
class ConvexityReport:
    ok: bool
    worst: tuple[float, float, float]
    worst_residual: float
    grid_n: int

    def __bool__(self):
        return self.ok


def _interval_for(f: RealFunction, sys: ChebyshevSystem, interval: Interval | None) -> Interval:
    if interval is not None:
        return interval
    if f.domain is not None:
        return f.domain
    return sys.domain


def is_omega_convex(f: RealFunction, sys: ChebyshevSystem, grid_n: int = RESIDUAL_GRID,
                    interval: Interval | None = None, tol: float = 1e-10) -> ConvexityReport:
    """Scan all grid triples ``x < u < y`` for a positive residual.

    The comparison is relative: a residual counts as a violation when it
    exceeds ``tol * (1 + max |f| on the grid)``.  The worst triple is the one
    with the largest residual.
    """
    if grid_n < 3:
        raise InputError("grid_n must be at least 3")
    grid = _interval_for(f, sys, interval).grid(grid_n)
    (i, k, j), r, _ = _scan(f, sys, grid)
    scale = 1.0 + float(np.max(np.abs(f(grid))))
    w = int(np.argmax(r))
    worst = (float(grid[i[w]]), float(grid[k[w]]), float(grid[j[w]]))
    return ConvexityReport(bool(r[w] <= tol * scale), worst, float(r[w]), grid_n)


def measured_eps(f: RealFunction, sys: ChebyshevSystem, grid_n: int = RESIDUAL_GRID,
                 interval: Interval | None = None, exact: bool = True) -> MeasuredResidual:
    """Tabulate ``max(0, residual)`` on a ``grid_n``-point grid over ``interval``.

    The grid runs over the closed interval (no endpoint offset), so a model
    built on ``[x, y]`` has ``x`` and ``y`` as exact grid nodes.
    """
    if grid_n < 3:
        raise InputError("grid_n must be at least 3")
    iv = _interval_for(f, sys, interval)
    grid = np.linspace(iv.lo, iv.hi, grid_n)
    (i, k, j), r, _ = _scan(f, sys, grid)
    table = np.zeros((grid_n, grid_n, grid_n))
    table[i, j, k] = np.maximum(r, 0.0)
    return MeasuredResidual(f, sys, grid, table, exact)


def jensen_eta(g: RealFunction, grid_n: int = RESIDUAL_GRID, exact: bool = True) -> MeasuredResidual:
    """Measured ordinary-convexity residuals of a segment trace ``g`` on [0, 1]."""
    return measured_eps(g, LINEAR01, grid_n, Interval(0.0, 1.0), exact)


def sup_jensen(g: RealFunction, grid_n: int = 129) -> ConstantError:
    """Constant error model equal to the largest grid Jensen residual of ``g``."""
    return ConstantError(jensen_eta(g, grid_n).sup)

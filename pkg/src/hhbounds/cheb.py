"""Positive Chebyshev systems (omega0, omega1) on a real interval.

The determinant ``omega_det(x, y) = w0(x) w1(y) - w1(x) w0(y)`` drives every
convexity weight in the package.  The Chebyshev property is only ever checked
on sample grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ChebyshevError, InputError, RangeError
from .functions import Interval, RealFunction, fmt_number, make_function

DEFAULT_GRID = 257
RATIO_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ChebyshevSystem:
    omega0: RealFunction
    omega1: RealFunction
    domain: Interval
    name: str = "custom"
    spec: str | None = None

    def ratio(self, t):
        """``omega1 / omega0``; strictly increasing for a positive system."""
        return np.asarray(self.omega1(t)) / np.asarray(self.omega0(t))

    def det(self, x, y):
        """Vectorised determinant; broadcasting follows numpy rules."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return self.omega0(x) * self.omega1(y) - self.omega1(x) * self.omega0(y)

    def weights(self, x, u, y):
        """The two convexity weights ``(W(u,y)/W(x,y), W(x,u)/W(x,y))``."""
        d = self.det(x, y)
        return self.det(u, y) / d, self.det(x, u) / d

    def with_domain(self, domain: Interval) -> "ChebyshevSystem":
        spec = None
        if self.spec is not None:
            spec = self.spec.split("@")[0] + f"@{fmt_number(domain.lo)},{fmt_number(domain.hi)}"
        return ChebyshevSystem(self.omega0, self.omega1, domain, self.name, spec)


def _require_in(sys: ChebyshevSystem, *points: float) -> None:
    for p in points:
        if not sys.domain.contains(float(p)):
            raise InputError(f"point {p!r} outside system domain [{sys.domain.lo}, {sys.domain.hi}]")


def omega_det(sys: ChebyshevSystem, x: float, y: float) -> float:
    _require_in(sys, x, y)
    if x == y:
        return 0.0
    return float(sys.det(x, y))


@dataclass(frozen=True)
class ChebyshevReport:
    ok: bool
    grid_n: int
    min_omega0: float
    min_det: float
    first_violation: tuple[str, float, float] | None = None

    def summary(self) -> str:
        if self.ok:
            return f"pass (grid {self.grid_n}, min omega0 {self.min_omega0:.3g}, min det {self.min_det:.3g})"
        kind, a, b = self.first_violation
        return f"fail: {kind} at ({a!r}, {b!r})"


def check_chebyshev(sys: ChebyshevSystem, grid_n: int = DEFAULT_GRID) -> ChebyshevReport:
    """Check ``omega0 > 0`` on a grid and ``det(x, y) > 0`` for every grid pair ``x < y``.

    Violations are reported, never raised.  The first violation is the first
    offending grid point, or the lexicographically first offending pair.
    """
    if grid_n < 3:
        raise InputError("grid_n must be at least 3")
    t = sys.domain.grid(grid_n)
    w0 = np.asarray(sys.omega0(t), dtype=float)
    w1 = np.asarray(sys.omega1(t), dtype=float)
    min_w0 = float(np.min(w0))
    d = np.outer(w0, w1) - np.outer(w1, w0)
    iu = np.triu_indices(grid_n, k=1)
    pair_d = d[iu]
    min_det = float(np.min(pair_d))
    bad0 = np.flatnonzero(~(w0 > 0))
    if bad0.size:
        i = int(bad0[0])
        return ChebyshevReport(False, grid_n, min_w0, min_det, ("omega0<=0", float(t[i]), float(t[i])))
    bad = np.flatnonzero(~(pair_d > 0))
    if bad.size:
        k = int(bad[0])
        i, j = int(iu[0][k]), int(iu[1][k])
        return ChebyshevReport(False, grid_n, min_w0, min_det, ("det<=0", float(t[i]), float(t[j])))
    return ChebyshevReport(True, grid_n, min_w0, min_det)


def ratio_inverse(sys: ChebyshevSystem, v: float, bracket: Interval | None = None,
                  tol: float = RATIO_TOL) -> float:
    """Solve ``(omega1/omega0)(u) = v`` for ``u`` in ``bracket`` by bisection.

    Bisection stops once the bracket is narrower than ``tol``.  A midpoint
    whose ratio falls outside the current bracket values means the ratio is
    not monotone there and raises :class:`ChebyshevError`.
    """
    if bracket is None:
        bracket = sys.domain
    if tol <= 0:
        raise InputError("tol must be positive")
    a, b = float(bracket.lo), float(bracket.hi)
    fa, fb = float(sys.ratio(a)), float(sys.ratio(b))
    if not fa < fb:
        raise ChebyshevError(f"ratio not increasing across bracket: r({a})={fa}, r({b})={fb}")
    slack = 1e-14 * max(1.0, abs(fa), abs(fb))
    if not fa - slack <= v <= fb + slack:
        raise RangeError(f"value {v!r} outside ratio range [{fa!r}, {fb!r}]")
    if v <= fa:
        return a
    if v >= fb:
        return b
    while b - a > tol:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = float(sys.ratio(m))
        if not fa <= fm <= fb:
            raise ChebyshevError(f"ratio not monotone near {m!r}")
        if fm < v:
            a, fa = m, fm
        elif fm > v:
            b, fb = m, fm
        else:
            return m
    return 0.5 * (a + b)


def interpolant(sys: ChebyshevSystem, x: float, xi: float, y: float, eta: float) -> RealFunction:
    """The combination of omega0, omega1 taking value ``xi`` at ``x`` and ``eta`` at ``y``."""
    if x == y:
        raise InputError("interpolation nodes must differ")
    _require_in(sys, x, y)
    d = float(sys.det(x, y))
    if d == 0.0:
        raise ChebyshevError(f"det({x}, {y}) vanishes")

    def fn(u):
        return (xi * sys.det(u, y) + eta * sys.det(x, u)) / d

    return RealFunction(fn, "interpolant", (x, xi, y, eta), sys.domain)


# ---------------------------------------------------------------- catalog

_TRIG_DELTA = 0.05

DEFAULT_DOMAINS = {
    "linear": (-1.0, 2.0),
    "exp": (-1.0, 2.0),
    "trig": (-math.pi / 2 + _TRIG_DELTA, math.pi / 2 - _TRIG_DELTA),
    "power": (0.05, 2.0),
    "poly": (-1.0, 2.0),
}

SYSTEM_CATALOG = tuple(DEFAULT_DOMAINS)


def _one():
    return make_function("const", (1.0,))


def linear(domain: Interval | None = None) -> ChebyshevSystem:
    return make_system("linear", domain=domain)


def make_system(name: str, params: Sequence[float] = (), domain: Interval | None = None,
                polys: tuple[Sequence[float], Sequence[float]] | None = None) -> ChebyshevSystem:
    """Build a catalog system.

    ``linear`` = (1, t); ``exp`` = (1, e^t); ``trig`` = (cos, sin);
    ``power:a,b`` = (t^a, t^b) with a < b on a positive interval;
    ``poly`` takes two coefficient lists via ``polys``.
    """
    if name not in DEFAULT_DOMAINS:
        raise InputError(f"unknown system {name!r}; known: {', '.join(SYSTEM_CATALOG)}")
    if domain is None:
        domain = Interval(*DEFAULT_DOMAINS[name])
    params = tuple(float(p) for p in params)
    head = name
    if name == "linear":
        w0, w1 = _one(), make_function("poly", (0.0, 1.0))
    elif name == "exp":
        w0, w1 = _one(), make_function("exp", (1.0,))
    elif name == "trig":
        if domain.lo <= -math.pi / 2 or domain.hi >= math.pi / 2:
            raise InputError("trig system needs a domain inside (-pi/2, pi/2)")
        w0, w1 = make_function("cos", (1.0,)), make_function("sin", (1.0,))
    elif name == "power":
        if len(params) != 2:
            raise InputError("power system takes exactly two exponents a,b")
        a, b = params
        if not a < b:
            raise InputError("power system needs a < b")
        if domain.lo < 0:
            raise InputError("power system needs a nonnegative domain")
        w0, w1 = make_function("pow", (a,)), make_function("pow", (b,))
        head = f"power:{fmt_number(a)},{fmt_number(b)}"
    else:
        if polys is None:
            raise InputError("poly system needs two coefficient lists")
        c0, c1 = polys
        w0, w1 = make_function("poly", c0), make_function("poly", c1)
        head = "poly:[{}];[{}]".format(",".join(fmt_number(c) for c in w0.params),
                                       ",".join(fmt_number(c) for c in w1.params))
    if params and name not in ("power",):
        raise InputError(f"system {name!r} takes no parameters")
    lo, hi = DEFAULT_DOMAINS[name]
    spec = head
    if (domain.lo, domain.hi) != (lo, hi):
        spec += f"@{fmt_number(domain.lo)},{fmt_number(domain.hi)}"
    return ChebyshevSystem(w0.with_domain(domain), w1.with_domain(domain), domain, name, spec)


LINEAR01 = make_system("linear", domain=Interval(0.0, 1.0))

"""Error models for approximate convexity, and the special functions they use.

An error model answers one question: how much may ``f`` exceed its convexity
interpolant?  Two query shapes are used by the bounds:

* ``pairs(v, w, u, sys)``: the matrix ``eps_{v_i, w_j}(u)`` for a fixed
  interior point ``u`` and node vectors ``v < u <= w``;
* ``along(v, w, u, sys)``: the vector ``eps_{v, w}(u_k)`` for fixed ends.

Closed-form models (constant, power measures, dyadic series) are functions
of a relative position ``tau`` and a segment length; the default ``pairs`` and
``along`` derive ``tau`` from the determinant weights and the length from
``|w - v| * scale``.  Measured models evaluate the actual residual instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from . import kernels
from .cheb import ChebyshevSystem
from .errors import InputError
from .functions import RealFunction, fmt_number

DYADIC_TERMS = 40
PHI_TOL = 1e-10
PHI_MAX_BLOCKS = 24


def dist_to_integers(s):
    """Distance from ``s`` to the nearest integer, elementwise."""
    s = np.asarray(s, dtype=float)
    d = np.abs(s - np.floor(s + 0.5))
    return float(d) if d.ndim == 0 else d


class ErrorModel:
    """Base class of the error-model union; see the module docstring."""

    kind = "abstract"

    @property
    def spec(self) -> str:
        raise NotImplementedError

    def segment(self, tau, length):
        raise InputError(f"{self.kind} error model has no closed form in (tau, length)")

    def pairs(self, v, w, u: float, sys: ChebyshevSystem, scale: float = 1.0) -> np.ndarray:
        v = np.asarray(v, dtype=float)[:, None]
        w = np.asarray(w, dtype=float)[None, :]
        d_vw = sys.det(v, w)
        tau = sys.det(v, u) / d_vw
        return np.asarray(self.segment(tau, np.abs(w - v) * scale), dtype=float) * np.ones_like(d_vw)

    def along(self, v: float, w: float, u, sys: ChebyshevSystem, scale: float = 1.0) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        tau = sys.det(v, u) / sys.det(v, w)
        return np.asarray(self.segment(tau, abs(w - v) * scale), dtype=float) * np.ones_like(u)

    def pair_sum(self, a, v, b, w, u: float, sys: ChebyshevSystem, scale: float = 1.0):
        """``(sum a_i b_j D(v_i,w_j) eps_ij, sum a_i b_j D(v_i,w_j))``."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if a.size == 0 or b.size == 0:
            return 0.0, 0.0
        d_vw = sys.det(np.asarray(v, dtype=float)[:, None], np.asarray(w, dtype=float)[None, :])
        eps = self.pairs(v, w, u, sys, scale)
        return float(a @ (d_vw * eps) @ b), float(a @ d_vw @ b)

    def __repr__(self):
        return f"<{type(self).__name__} {self.spec}>"


@dataclass(frozen=True, repr=False)
class ConstantError(ErrorModel):
    c: float = 0.0
    kind = "const"

    def __post_init__(self):
        if not math.isfinite(self.c):
            raise InputError("constant error must be finite")

    @property
    def spec(self) -> str:
        return "zero" if self.c == 0 else f"const:{fmt_number(self.c)}"

    def segment(self, tau, length):
        return np.full(np.broadcast(np.asarray(tau), np.asarray(length)).shape, self.c)

    def pairs(self, v, w, u, sys, scale=1.0):
        return np.full((np.size(v), np.size(w)), self.c)

    def along(self, v, w, u, sys, scale=1.0):
        return np.full(np.shape(u), self.c)

    def pair_sum(self, a, v, b, w, u, sys, scale=1.0):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if a.size == 0 or b.size == 0:
            return 0.0, 0.0
        d_vw = sys.det(np.asarray(v, dtype=float)[:, None], np.asarray(w, dtype=float)[None, :])
        den = float(a @ d_vw @ b)
        return self.c * den, den


ZERO = ConstantError(0.0)


# ------------------------------------------------------------ power measures

def _check_power_atoms(atoms, width):
    out = []
    for atom in atoms:
        if len(atom) != width:
            raise InputError(f"power atom {atom!r} needs {width} entries")
        vals = tuple(float(x) for x in atom)
        if any(x < 0 for x in vals[:-1]):
            raise InputError(f"power exponents must be >= 0 in {atom!r}")
        if not vals[-1] > 0:
            raise InputError(f"power atom weight must be > 0 in {atom!r}")
        out.append(vals)
    return tuple(out)


@dataclass(frozen=True, repr=False)
class PowerMeasure2(ErrorModel):
    """Finite atomic measure of ``(p, q, c)`` triples; ``c t^p (1-t)^q s^(p+q-1)``."""

    atoms: tuple[tuple[float, float, float], ...] = ()
    kind = "power2"

    def __post_init__(self):
        object.__setattr__(self, "atoms", _check_power_atoms(self.atoms, 3))

    @property
    def spec(self) -> str:
        body = ",".join("(" + ",".join(fmt_number(x) for x in a) + ")" for a in self.atoms)
        return f"power2:[{body}]"

    def segment(self, tau, length):
        return power_eta2(self, tau, length)


@dataclass(frozen=True, repr=False)
class PowerMeasure3(ErrorModel):
    """Finite atomic measure of ``(p, q, r, c)``; ``c t^p (1-t)^q s^r``."""

    atoms: tuple[tuple[float, float, float, float], ...] = ()
    kind = "power3"

    def __post_init__(self):
        object.__setattr__(self, "atoms", _check_power_atoms(self.atoms, 4))

    @property
    def spec(self) -> str:
        body = ",".join("(" + ",".join(fmt_number(x) for x in a) + ")" for a in self.atoms)
        return f"power3:[{body}]"

    def segment(self, tau, length):
        return power_eta3(self, tau, length)


def power_eta2(nu: PowerMeasure2, t, s):
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    out = np.zeros(np.broadcast(t, s).shape)
    for p, q, c in nu.atoms:
        e = p + q - 1.0
        if e < 0 and np.any(s == 0):
            raise InputError(f"segment length 0 with atom ({p}, {q}) gives a singular power")
        out = out + c * np.power(t, p) * np.power(1.0 - t, q) * np.power(s, e)
    return float(out) if out.ndim == 0 else out


def power_eta3(nu: PowerMeasure3, t, s):
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    out = np.zeros(np.broadcast(t, s).shape)
    for p, q, r, c in nu.atoms:
        out = out + c * np.power(t, p) * np.power(1.0 - t, q) * np.power(s, r)
    return float(out) if out.ndim == 0 else out


# ------------------------------------------------------------ dyadic series

class SeriesValue(NamedTuple):
    value: float
    tail: float


@dataclass(frozen=True, repr=False)
class DyadicErrorModel(ErrorModel):
    """``eta(t) = sum_n 2^-n alpha(2 dist(2^n t, Z) s)``, truncated to ``n_terms``."""

    alpha: RealFunction
    n_terms: int = DYADIC_TERMS
    kind = "dyadic"

    def __post_init__(self):
        if self.n_terms < 1:
            raise InputError("n_terms must be >= 1")
        probe = self.alpha.checked(np.linspace(0.0, 10.0, 101))
        if np.any(probe < 0):
            raise InputError(f"alpha {self.alpha.label} must be nonnegative")

    @property
    def spec(self) -> str:
        a = self.alpha
        if a.spec is not None and ":" in a.spec and "+" not in a.spec and "*" not in a.spec:
            name, params = a.spec.split(":", 1)
            alpha = f"{name}({params})"
        else:
            alpha = a.label
        return f"dyadic:alpha={alpha},n={self.n_terms}"

    def segment(self, tau, length):
        tau = np.asarray(tau, dtype=float)
        length = np.asarray(length, dtype=float)
        tau, length = np.broadcast_arrays(tau, length)
        if self.alpha.name == "pow":
            # alpha(u) = c |u|^p factors out of the series
            p = self.alpha.params[0]
            c = self.alpha.params[1] if len(self.alpha.params) > 1 else 1.0
            flat = kernels.dyadic_sum(np.ascontiguousarray(tau).ravel(), p, self.n_terms)
            out = c * np.power(2.0 * np.abs(length), p) * flat.reshape(tau.shape)
        else:
            out = np.zeros(tau.shape)
            x = tau.astype(float).copy()
            scale = 1.0
            for _ in range(self.n_terms):
                out += scale * self.alpha(2.0 * dist_to_integers(x) * length)
                x *= 2.0
                scale *= 0.5
        return float(out) if out.ndim == 0 else out

    def tail_bound(self, s: float) -> float:
        """``2^(1 - n_terms)`` times the sampled sup of alpha on ``[0, s]``."""
        sup = float(np.max(self.alpha.checked(np.linspace(0.0, abs(s), 257))))
        return 2.0 ** (1 - self.n_terms) * sup


def dyadic_eta(model: DyadicErrorModel, s: float, t: float) -> SeriesValue:
    if not 0.0 <= t <= 1.0:
        raise InputError("t must lie in [0, 1]")
    if s < 0:
        raise InputError("s must be >= 0")
    return SeriesValue(float(model.segment(t, s)), model.tail_bound(s))


# ------------------------------------------------------------ kernel Phi

def _phi_lead(sigma):
    return (1.0 - sigma) * (3.0 * sigma + 1.0)


def _phi_tail_coeff(sigma):
    # block k sums to C(sigma) / 2^(k+1) + O(4^-k); C is the limiting integral
    a = 2.0 * np.asarray(sigma, dtype=float)
    with np.errstate(divide="ignore"):
        upper = np.where(a > 1.0, 1.0 / np.where(a > 0, a, 1.0), 1.0)
    return 2.0 * (2.0 + 0.5 * a * a - 1.0 / upper - a * a * upper)


class PhiValue(NamedTuple):
    value: float
    blocks: int
    cutoff: int
    tail_estimate: float
    certificate: float


def _phi_iterate(sigma: np.ndarray, tol: float):
    partial = _phi_lead(sigma)
    coeff = _phi_tail_coeff(sigma)
    prev = None
    k = 0
    while True:
        partial = partial + kernels.phi_blocks(sigma, k, k + 1)
        n_k = 2.0 ** (k + 1)
        est = partial + coeff / n_k
        if prev is not None and k >= 3 and np.max(np.abs(est - prev)) < tol:
            break
        if k + 1 >= PHI_MAX_BLOCKS:
            break
        prev = est
        k += 1
    return est, partial, coeff / n_k, k + 1


def phi_kernel_detail(sigma: float, tol: float = PHI_TOL) -> PhiValue:
    """The kernel series with its truncation data.

    Terms are summed in dyadic blocks ``2^k <= m < 2^(k+1)``.  After block
    ``k`` the remaining tail is estimated as ``C(sigma) / 2^(k+1)``; the
    loop stops once one more block (a doubling of the cutoff) moves the
    tail-corrected value by less than ``tol``.  ``certificate`` is the crude
    bound ``16 / cutoff`` on the uncorrected remainder.
    """
    if not 0.0 <= sigma <= 1.0:
        raise InputError("sigma must lie in [0, 1]")
    if not tol > 0:
        raise InputError("tol must be > 0")
    est, _, tail, blocks = _phi_iterate(np.array([float(sigma)]), tol)
    cutoff = 2 ** blocks
    return PhiValue(float(est[0]), blocks, cutoff, float(tail[0]), 16.0 / cutoff)


def phi_kernel(sigma: float, tol: float = PHI_TOL) -> float:
    return phi_kernel_detail(sigma, tol).value


def phi_kernel_array(sigma, tol: float = PHI_TOL) -> np.ndarray:
    sigma = np.ascontiguousarray(sigma, dtype=float)
    if np.any((sigma < 0) | (sigma > 1)):
        raise InputError("sigma must lie in [0, 1]")
    est, _, _, _ = _phi_iterate(sigma.ravel(), tol)
    return est.reshape(sigma.shape)


def phi_weighted_integral(alpha: RealFunction, s: float = 1.0, q=None, tol: float = PHI_TOL) -> float:
    """``int_0^1 alpha(sigma s) Phi(sigma) d sigma`` by composite Gauss-Legendre."""
    from .measure import DEFAULT_Q, gauss_legendre

    t, w = gauss_legendre(0.0, 1.0, q or DEFAULT_Q)
    return float(np.dot(w, alpha.checked(t * s) * phi_kernel_array(t, tol)))


# ------------------------------------------------------------ beta function

def beta_fn(p1: float, p2: float) -> float:
    """Euler's beta function for positive arguments."""
    if not (p1 > 0 and p2 > 0):
        raise InputError(f"beta needs positive arguments, got ({p1!r}, {p2!r})")
    if p1 + p2 < 170.0:
        return math.gamma(p1) * math.gamma(p2) / math.gamma(p1 + p2)
    return math.exp(math.lgamma(p1) + math.lgamma(p2) - math.lgamma(p1 + p2))


# ------------------------------------------------------------ measured / callable

@dataclass(frozen=True, eq=False, repr=False)
class MeasuredResidual(ErrorModel):
    """Clipped convexity residuals of a concrete function.

    ``table[i, j, k]`` holds ``max(0, residual(v_i, u_k, w_j))`` on the grid
    (zero where ``v < u < w`` fails); :meth:`lookup` interpolates it
    trilinearly.  When ``exact`` is set, the theorem queries (``pairs``,
    ``along``, ``pair_sum``) evaluate the residual of ``f`` directly at the
    requested points, which is a true upper bound rather than an interpolated
    one.
    """

    f: RealFunction
    sys: ChebyshevSystem
    grid: np.ndarray
    table: np.ndarray
    exact: bool = True
    kind = "measured"
    _interp: object = field(default=None, compare=False)

    def __post_init__(self):
        g = self.grid
        interp = RegularGridInterpolator((g, g, g), self.table, method="linear",
                                         bounds_error=False, fill_value=None)
        object.__setattr__(self, "_interp", interp)

    @property
    def spec(self) -> str:
        mode = "" if self.exact else ",interp"
        return f"measured:grid={len(self.grid)}{mode}"

    @property
    def is_zero(self) -> bool:
        return not np.any(self.table > 0)

    @property
    def sup(self) -> float:
        return float(np.max(self.table))

    def lookup(self, v, w, u):
        """Trilinear interpolation of the table, clamped to the grid and clipped at 0."""
        g = self.grid
        pts = np.stack(np.broadcast_arrays(*(np.clip(np.asarray(z, dtype=float), g[0], g[-1])
                                             for z in (v, w, u))), axis=-1)
        out = np.maximum(self._interp(pts), 0.0)
        return float(out) if out.ndim == 0 else out

    def residual(self, v, u, w):
        """Signed residual ``f(u) - W1 f(v) - W2 f(w)``; zero where ``v == w``."""
        v, u, w = np.broadcast_arrays(*(np.asarray(z, dtype=float) for z in (v, u, w)))
        sys = self.sys
        d_vw = sys.det(v, w)
        safe = np.where(d_vw == 0, 1.0, d_vw)
        r = self.f(u) - (sys.det(u, w) * self.f(v) + sys.det(v, u) * self.f(w)) / safe
        return np.where(d_vw == 0, 0.0, r)

    def pairs(self, v, w, u, sys, scale=1.0):
        v = np.asarray(v, dtype=float)[:, None]
        w = np.asarray(w, dtype=float)[None, :]
        if self.exact:
            return np.maximum(self.residual(v, u, w), 0.0)
        return self.lookup(v, w, u)

    def along(self, v, w, u, sys, scale=1.0):
        if self.exact:
            return np.maximum(self.residual(v, u, w), 0.0)
        return self.lookup(v, w, u)

    def pair_sum(self, a, v, b, w, u, sys, scale=1.0):
        if not self.exact:
            return super().pair_sum(a, v, b, w, u, sys, scale)
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if a.size == 0 or b.size == 0:
            return 0.0, 0.0
        s = self.sys
        v = np.asarray(v, dtype=float)
        w = np.asarray(w, dtype=float)
        return kernels.clipped_pair_sum(
            a, s.omega0(v), s.omega1(v), self.f(v),
            b, s.omega0(w), s.omega1(w), self.f(w),
            float(s.omega0(u)), float(s.omega1(u)), float(self.f(u)),
        )


@dataclass(frozen=True, eq=False, repr=False)
class CallableError(ErrorModel):
    """A user-supplied ``eps(v, w, u)``, vectorised over numpy arrays."""

    fn: Callable
    label: str = "callable"
    kind = "callable"

    @property
    def spec(self) -> str:
        return f"callable:{self.label}"

    def pairs(self, v, w, u, sys, scale=1.0):
        v = np.asarray(v, dtype=float)[:, None]
        w = np.asarray(w, dtype=float)[None, :]
        return np.asarray(self.fn(v, w, u), dtype=float) * np.ones((v.shape[0], w.shape[1]))

    def along(self, v, w, u, sys, scale=1.0):
        u = np.asarray(u, dtype=float)
        return np.asarray(self.fn(v, w, u), dtype=float) * np.ones_like(u)

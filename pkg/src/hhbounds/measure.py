"""Measures on [0, 1] (density plus atoms) and composite Gauss-Legendre quadrature.

Every integral in the package goes through :meth:`UnitMeasure.nodes`, which
returns a discrete node/weight pair.  Working with the discrete measure
directly is what keeps the integral identities consistent between modules.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ContractError, EvaluationError, InputError
from .functions import RealFunction, fmt_number, make_function

PROBABILITY_TOL = 1e-10
BLOCK_MASS_FLOOR = 1e-14


@dataclass(frozen=True)
class QuadratureConfig:
    """Composite Gauss-Legendre layout.

    ``refine`` adds that many geometrically graded panels at each end of an
    integration interval, for integrands with algebraic endpoint singularities.
    """

    panels: int = 64
    nodes_per_panel: int = 16
    tol: float = 1e-9
    refine: int = 0

    def __post_init__(self):
        if self.panels < 1:
            raise InputError("panels must be >= 1")
        if self.nodes_per_panel < 2:
            raise InputError("nodes_per_panel must be >= 2")
        if not self.tol > 0:
            raise InputError("tol must be > 0")
        if self.refine < 0:
            raise InputError("refine must be >= 0")

    def refined(self, levels: int) -> "QuadratureConfig":
        return replace(self, refine=max(self.refine, levels))


DEFAULT_Q = QuadratureConfig()


def default_quadrature() -> QuadratureConfig:
    """Default layout, with ``HH_QUAD_PANELS`` overriding the panel count."""
    raw = os.environ.get("HH_QUAD_PANELS")
    if raw:
        try:
            return QuadratureConfig(panels=int(raw))
        except ValueError as exc:
            raise InputError(f"HH_QUAD_PANELS must be a positive integer, got {raw!r}") from exc
    return DEFAULT_Q


@lru_cache(maxsize=32)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=256)
def _panel_edges(a: float, b: float, panels: int, refine: int) -> np.ndarray:
    edges = np.linspace(a, b, panels + 1)
    if refine and b > a:
        h = edges[1] - edges[0]
        left = a + h * 2.0 ** -np.arange(1, refine + 1)
        right = b - h * 2.0 ** -np.arange(1, refine + 1)
        edges = np.unique(np.concatenate([edges, left, right]))
    edges.setflags(write=False)
    return edges


def gauss_legendre(a: float, b: float, q: QuadratureConfig = DEFAULT_Q):
    """Nodes and weights of the composite rule on ``[a, b]``."""
    if b <= a:
        return np.empty(0), np.empty(0)
    x, w = _leggauss(q.nodes_per_panel)
    edges = _panel_edges(float(a), float(b), q.panels, q.refine)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (lo + half * (x[None, :] + 1.0)).ravel()
    weights = (half * w[None, :]).ravel()
    return nodes, weights


@dataclass(frozen=True, eq=False)
class UnitMeasure:
    """``density(t) dt`` on [0, 1] plus finitely many weighted atoms."""

    density: RealFunction | None = None
    atoms: tuple[tuple[float, float], ...] = ()
    is_probability: bool = False
    spec: str | None = None

    def __post_init__(self):
        for pos, wt in self.atoms:
            if not 0.0 <= pos <= 1.0:
                raise InputError(f"atom position {pos!r} outside [0, 1]")
            if not wt > 0:
                raise InputError(f"atom weight must be > 0, got {wt!r}")
        if self.density is not None:
            t, _ = gauss_legendre(0.0, 1.0, DEFAULT_Q)
            vals = self.density.checked(t)
            if np.any(vals < 0):
                raise InputError(f"density {self.density.label} is negative at t={t[np.argmax(vals < 0)]!r}")
        if self.density is None and not self.atoms:
            raise InputError("a measure needs a density or at least one atom")
        if self.is_probability:
            m = self.mass()
            if abs(m - 1.0) > PROBABILITY_TOL:
                raise InputError(f"probability measure has total mass {m!r}")

    def nodes(self, a: float = 0.0, b: float = 1.0, include_a: bool = True,
              include_b: bool = True, q: QuadratureConfig = DEFAULT_Q):
        """Discrete nodes/weights of this measure restricted to an interval.

        The inclusion flags select which atoms sitting exactly on ``a`` or
        ``b`` count; they do not affect the (atomless) density part.
        """
        if not 0.0 <= a <= b <= 1.0:
            raise InputError(f"need 0 <= a <= b <= 1, got a={a!r}, b={b!r}")
        parts_t, parts_w = [], []
        if self.density is not None and b > a:
            t, w = gauss_legendre(a, b, q)
            parts_t.append(t)
            parts_w.append(w * self.density.checked(t))
        if self.atoms:
            pos = np.array([p for p, _ in self.atoms])
            wt = np.array([c for _, c in self.atoms])
            lo_ok = pos >= a if include_a else pos > a
            hi_ok = pos <= b if include_b else pos < b
            sel = lo_ok & hi_ok
            parts_t.append(pos[sel])
            parts_w.append(wt[sel])
        if not parts_t:
            return np.empty(0), np.empty(0)
        return np.concatenate(parts_t), np.concatenate(parts_w)

    def mass(self, a: float = 0.0, b: float = 1.0, include_a: bool = True,
             include_b: bool = True, q: QuadratureConfig = DEFAULT_Q) -> float:
        _, w = self.nodes(a, b, include_a, include_b, q)
        return float(np.sum(w))

    def normalized(self) -> "UnitMeasure":
        """Rescale to total mass one and mark as a probability measure."""
        m = self.mass()
        if not m > 0:
            raise ContractError("cannot normalise a measure of zero mass")
        dens = None if self.density is None else self.density * (1.0 / m)
        atoms = tuple((p, c / m) for p, c in self.atoms)
        spec = None
        if self.spec is not None:
            spec = self.spec if abs(m - 1.0) <= PROBABILITY_TOL else f"{fmt_number(1.0 / m)}*({self.spec})"
        return UnitMeasure(dens, atoms, True, spec)


def lebesgue() -> UnitMeasure:
    return UnitMeasure(make_function("const", (1.0,)), (), True, "lebesgue")


def atomic(atoms: Sequence[tuple[float, float]], probability: bool | None = None) -> UnitMeasure:
    atoms = tuple((float(p), float(c)) for p, c in atoms)
    total = sum(c for _, c in atoms)
    if probability is None:
        probability = abs(total - 1.0) <= PROBABILITY_TOL
    spec = "atoms:[" + ",".join(f"({fmt_number(p)},{fmt_number(c)})" for p, c in atoms) + "]"
    return UnitMeasure(None, atoms, probability, spec)


def with_density(rho: RealFunction, probability: bool | None = None) -> UnitMeasure:
    mu = UnitMeasure(rho, (), False, f"density:{rho.label}")
    if probability is None:
        probability = abs(mu.mass() - 1.0) <= PROBABILITY_TOL
    return UnitMeasure(rho, (), probability, mu.spec)


def integrate(mu: UnitMeasure, g: RealFunction, a: float = 0.0, b: float = 1.0,
              include_a: bool = True, include_b: bool = True,
              q: QuadratureConfig = DEFAULT_Q) -> float:
    """Integral of ``g`` against ``mu`` over the chosen (half-)open or closed interval."""
    t, w = mu.nodes(a, b, include_a, include_b, q)
    if t.size == 0:
        return 0.0
    vals = g.checked(t) if isinstance(g, RealFunction) else np.asarray(g(t), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise EvaluationError("integrand is not finite at a quadrature node")
    return float(np.dot(w, vals))


def _identity():
    return make_function("poly", (0.0, 1.0))


def first_moment(mu: UnitMeasure, q: QuadratureConfig = DEFAULT_Q) -> float:
    """Mean position of a probability measure."""
    if not mu.is_probability:
        raise ContractError("first moment requires a probability measure")
    t, w = mu.nodes(0.0, 1.0, True, True, q)
    return float(np.clip(np.dot(w, t), 0.0, 1.0))


@dataclass(frozen=True)
class SplitMoments:
    """Masses and first moments of the blocks ``[0, m1]`` and ``(m1, 1]``."""

    m1: float
    mass_left: float
    mass_right: float
    moment_left: float
    moment_right: float

    @property
    def s(self) -> float:
        return self.mass_left * self.moment_right - self.mass_right * self.moment_left


def split_moments(mu: UnitMeasure, q: QuadratureConfig = DEFAULT_Q) -> SplitMoments:
    m1 = first_moment(mu, q)
    tl, wl = mu.nodes(0.0, m1, True, True, q)
    tr, wr = mu.nodes(m1, 1.0, False, True, q)
    return SplitMoments(m1, float(wl.sum()), float(wr.sum()), float(wl @ tl), float(wr @ tr))


def s_functional(mu: UnitMeasure, q: QuadratureConfig = DEFAULT_Q) -> float:
    """``mu[0,m1] * int_(m1,1] t - mu(m1,1] * int_[0,m1] t``, with ``m1`` the mean.

    An atom exactly at the mean belongs to the closed left block.  Raises
    :class:`ContractError` when either block carries no mass, which is the
    operational form of "support is a singleton".
    """
    sm = split_moments(mu, q)
    if sm.mass_left <= BLOCK_MASS_FLOOR or sm.mass_right <= BLOCK_MASS_FLOOR:
        raise ContractError("measure support is a singleton (one side of the mean has no mass)")
    return sm.s

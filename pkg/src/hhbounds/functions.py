"""Real intervals and vectorised real functions, plus the function catalog.

Every function in the package is a :class:`RealFunction`: a numpy-vectorised
callable with a label.  Catalog entries are identified by a name and a tuple
of float parameters so they can be written to and read back from config text.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import EvaluationError, InputError

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise InputError(f"interval endpoints must be finite, got ({self.lo}, {self.hi})")
        if not self.lo < self.hi:
            raise InputError(f"interval needs lo < hi, got ({self.lo}, {self.hi})")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float, slack: float = 0.0) -> bool:
        """Membership in the closure ``[lo, hi]``, widened by ``slack``."""
        return self.lo - slack <= x <= self.hi + slack

    def grid(self, n: int, offset: float = 1e-6) -> np.ndarray:
        """``n`` equispaced points, pulled in from each end by ``offset * width``."""
        pad = offset * self.width
        return np.linspace(self.lo + pad, self.hi - pad, n)


def _fmt(v: float) -> str:
    v = float(v)
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


@dataclass(frozen=True, eq=False)
class RealFunction:
    """A real function of one variable, evaluated elementwise on numpy arrays.

    ``spec`` is the canonical catalog text when the function came from the
    catalog (``"poly:0,0,1"``); hand-built functions leave it ``None``.
    """

    fn: ArrayFn
    name: str = "f"
    params: tuple[float, ...] = ()
    domain: Interval | None = None
    spec: str | None = None

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        out = np.asarray(self.fn(arr), dtype=float)
        if out.shape != arr.shape:
            out = np.broadcast_to(out, arr.shape).astype(float)
        if arr.ndim == 0:
            return float(out)
        return out

    def checked(self, t: np.ndarray) -> np.ndarray:
        """Evaluate and raise :class:`EvaluationError` on any non-finite value."""
        out = np.asarray(self(t), dtype=float)
        if not np.all(np.isfinite(out)):
            bad = np.atleast_1d(np.asarray(t, dtype=float))[~np.isfinite(np.atleast_1d(out))]
            raise EvaluationError(f"{self.label} is not finite at t={bad[0]!r}")
        return out

    @property
    def label(self) -> str:
        return self.spec if self.spec is not None else self.name

    def with_domain(self, domain: Interval) -> "RealFunction":
        return RealFunction(self.fn, self.name, self.params, domain, self.spec)

    def __add__(self, other):
        if isinstance(other, RealFunction):
            f, g = self.fn, other.fn
            spec = None
            if self.spec is not None and other.spec is not None:
                spec = f"{self.spec} + {other.spec}"
            return RealFunction(lambda t: f(t) + g(t), f"({self.name}+{other.name})",
                                domain=self.domain or other.domain, spec=spec)
        c = float(other)
        f = self.fn
        return RealFunction(lambda t: f(t) + c, f"({self.name}+{_fmt(c)})", domain=self.domain)

    __radd__ = __add__

    def __mul__(self, k):
        c = float(k)
        f = self.fn
        spec = f"{_fmt(c)}*{self.spec}" if self.spec is not None else None
        return RealFunction(lambda t: c * f(t), f"{_fmt(c)}*{self.name}",
                            domain=self.domain, spec=spec)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other if isinstance(other, RealFunction) else -float(other))


def from_callable(fn: ArrayFn, name: str = "f", domain: Interval | None = None) -> RealFunction:
    return RealFunction(fn, name, domain=domain)


def _poly(params):
    coeffs = np.asarray(params, dtype=float)
    return lambda t: np.polynomial.polynomial.polyval(t, coeffs)


def _exp(params):
    k = params[0] if params else 1.0
    return lambda t: np.exp(k * t)


def _abs(params):
    c = params[0] if params else 0.0
    return lambda t: np.abs(t - c)


def _sin(params):
    w = params[0] if params else 1.0
    return lambda t: np.sin(w * t)


def _cos(params):
    w = params[0] if params else 1.0
    return lambda t: np.cos(w * t)


def _const(params):
    c = params[0] if params else 0.0
    return lambda t: np.full_like(np.asarray(t, dtype=float), c)


def _pow(params):
    # c * |t|**p with 0**0 = 1
    p = params[0] if params else 1.0
    c = params[1] if len(params) > 1 else 1.0
    return lambda t: c * np.power(np.abs(t), p)


_ARITY = {
    "poly": (1, None),
    "exp": (0, 1),
    "abs": (0, 1),
    "sin": (0, 1),
    "cos": (0, 1),
    "const": (1, 1),
    "pow": (1, 2),
}

_BUILDERS = {
    "poly": _poly,
    "exp": _exp,
    "abs": _abs,
    "sin": _sin,
    "cos": _cos,
    "const": _const,
    "pow": _pow,
}

FUNCTION_CATALOG = tuple(_BUILDERS)


def make_function(name: str, params: Sequence[float] = ()) -> RealFunction:
    """Build a catalog function.

    ``poly:c0,c1,...`` is ``sum c_k t**k``; ``exp:k`` is ``exp(k t)``;
    ``abs:c`` is ``|t - c|``; ``sin:w``/``cos:w`` are ``sin(w t)``/``cos(w t)``;
    ``const:c``; ``pow:p[,c]`` is ``c |t|**p``.
    """
    if name not in _BUILDERS:
        raise InputError(f"unknown function {name!r}; known: {', '.join(FUNCTION_CATALOG)}")
    params = tuple(float(p) for p in params)
    lo, hi = _ARITY[name]
    if len(params) < lo or (hi is not None and len(params) > hi):
        want = f"{lo}" if lo == hi else f"{lo}..{hi if hi is not None else 'n'}"
        raise InputError(f"function {name!r} takes {want} parameters, got {len(params)}")
    spec = name if not params else f"{name}:{','.join(_fmt(p) for p in params)}"
    return RealFunction(_BUILDERS[name](params), name, params, spec=spec)


def linear_combination(terms: Sequence[tuple[float, RealFunction]]) -> RealFunction:
    """``sum_k a_k f_k`` with a canonical spec ``a*f + g + ...``."""
    if not terms:
        raise InputError("empty linear combination")
    coeffs = [float(a) for a, _ in terms]
    fns = [f.fn for _, f in terms]

    def fn(t):
        out = coeffs[0] * fns[0](t)
        for a, f in zip(coeffs[1:], fns[1:]):
            out = out + a * f(t)
        return out

    parts = []
    for a, f in terms:
        body = f.spec if f.spec is not None else f.name
        parts.append(body if a == 1.0 else f"{_fmt(a)}*{body}")
    if len(terms) == 1 and coeffs[0] == 1.0:
        return terms[0][1]
    return RealFunction(fn, "+".join(f.name for _, f in terms), spec=" + ".join(parts))


def fmt_number(v: float) -> str:
    """Shortest text that parses back to the same float."""
    return _fmt(v)

"""Flat ``key = value`` configuration with a typed mini-syntax for catalogs.

Value grammars (whitespace around tokens is ignored)::

    function  term ("+" term)*          term    [number "*"] atom
              atom    name | name:p1,p2,... | name(p1,p2,...)
    system    name[:params][@lo,hi]     e.g. linear, exp@0,1, power:1,2
              poly:[c0,c1,...];[d0,d1,...]
    measure   term ("+" term)*          term    [number "*"] atom
              atom    lebesgue | density:<function> | atoms:[(t,w),...]
    error     zero | const:c | power2:[(p,q,c),...] | power3:[(p,q,r,c),...]
              dyadic:alpha=<function>,n=N | measured[:grid=N[,interp]]
    h         quadratic[:a,b,c] | maxaffine[:k] | maxaffine:[(m,b),...]

Lists (``theorems``, ``systems``) are separated by ``;`` at bracket depth 0;
``theorems`` also accepts ``,``.  ``#`` starts a comment.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, fields
from pathlib import Path

from .cheb import ChebyshevSystem, make_system
from .errmodel import ZERO, ConstantError, DyadicErrorModel, ErrorModel, PowerMeasure2, PowerMeasure3
from .errors import ConfigError, HHError
from .functions import FUNCTION_CATALOG, Interval, RealFunction, fmt_number, linear_combination, make_function
from .measure import PROBABILITY_TOL, UnitMeasure, lebesgue

THEOREMS = ("classic", "thm3", "thm4", "thm5", "thm6", "cor2hp1", "identity-cor4c2", "identity-cor6")
FAMILIES = ("convex", "perturbed", "span")


class _Fail(Exception):
    """Parse failure at a 0-based offset into the value being parsed."""

    def __init__(self, message: str, offset: int = 0):
        super().__init__(message)
        self.message = message
        self.offset = offset


# ---------------------------------------------------------------- lexical helpers

def _number(text: str, offset: int = 0) -> float:
    try:
        v = float(text.strip())
    except ValueError:
        raise _Fail(f"expected a number, got {text.strip()!r}", offset) from None
    if not math.isfinite(v):
        raise _Fail(f"number must be finite, got {text.strip()!r}", offset)
    return v


def _split_top(text: str, seps: str, offset: int = 0) -> list[tuple[str, int]]:
    """Split at separators outside brackets; ``+`` inside exponents is kept."""
    out, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise _Fail(f"unbalanced {ch!r}", offset + i)
        elif ch in seps and depth == 0:
            if ch in "+-" and i > 0 and text[i - 1] in "eE" and i > 1 and text[i - 2].isdigit():
                continue
            out.append((text[start:i], offset + start))
            start = i + 1
    if depth != 0:
        raise _Fail("unbalanced brackets", offset + len(text))
    out.append((text[start:], offset + start))
    return out


def _strip(piece: str, offset: int) -> tuple[str, int]:
    lead = len(piece) - len(piece.lstrip())
    return piece.strip(), offset + lead


def _numbers(text: str, offset: int) -> tuple[float, ...]:
    text, offset = _strip(text, offset)
    if not text:
        return ()
    return tuple(_number(p, o) for p, o in _split_top(text, ",", offset))


def _tuples(text: str, offset: int, width: int | None = None) -> list[tuple[float, ...]]:
    """``[(a,b),(c,d)]`` -> list of tuples."""
    text, offset = _strip(text, offset)
    if not (text.startswith("[") and text.endswith("]")):
        raise _Fail("expected a bracketed list like [(a,b),...]", offset)
    body = text[1:-1]
    out = []
    if not body.strip():
        return out
    for piece, off in _split_top(body, ",", offset + 1):
        piece, off = _strip(piece, off)
        if not (piece.startswith("(") and piece.endswith(")")):
            raise _Fail(f"expected a parenthesised tuple, got {piece!r}", off)
        vals = _numbers(piece[1:-1], off + 1)
        if width is not None and len(vals) != width:
            raise _Fail(f"tuple {piece} needs {width} entries, got {len(vals)}", off)
        out.append(vals)
    return out


_COEF = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*\*")


def _terms(text: str, offset: int) -> list[tuple[float, str, int]]:
    """Split ``a*atom + atom`` into (coefficient, atom text, offset)."""
    out = []
    for piece, off in _split_top(text, "+", offset):
        piece, off = _strip(piece, off)
        if not piece:
            raise _Fail("empty term", off)
        coef = 1.0
        m = _COEF.match(piece)
        if m:
            coef = _number(m.group(1), off)
            off += m.end()
            piece, off = _strip(piece[m.end():], off)
        out.append((coef, piece, off))
    return out


# ---------------------------------------------------------------- functions

def _function_atom(text: str, offset: int) -> RealFunction:
    m = re.fullmatch(r"([A-Za-z_]\w*)\s*(?:\((.*)\)|:(.*))?", text, re.S)
    if not m:
        raise _Fail(f"bad function {text!r}", offset)
    name = m.group(1)
    if name not in FUNCTION_CATALOG:
        raise _Fail(f"unknown function {name!r}; known: {', '.join(FUNCTION_CATALOG)}", offset)
    body = m.group(2) if m.group(2) is not None else m.group(3)
    start = m.start(2) if m.group(2) is not None else m.start(3)
    params = () if body is None else _numbers(body, offset + start)
    try:
        return make_function(name, params)
    except HHError as exc:
        raise _Fail(str(exc), offset) from None


def _parse_function(text: str, offset: int = 0) -> RealFunction:
    text, offset = _strip(text, offset)
    if not text:
        raise _Fail("empty function", offset)
    terms = [(c, _function_atom(a, o)) for c, a, o in _terms(text, offset)]
    return linear_combination(terms)


def parse_function(text: str) -> RealFunction:
    return _wrap(_parse_function, text)


# ---------------------------------------------------------------- systems

def _parse_system(text: str, offset: int = 0) -> ChebyshevSystem:
    text, offset = _strip(text, offset)
    domain = None
    head = text
    if "@" in text:
        at = text.index("@")
        head = text[:at].strip()
        lohi = _numbers(text[at + 1:], offset + at + 1)
        if len(lohi) != 2:
            raise _Fail("domain needs two numbers lo,hi", offset + at + 1)
        try:
            domain = Interval(*lohi)
        except HHError as exc:
            raise _Fail(str(exc), offset + at + 1) from None
    name, _, body = head.partition(":")
    name = name.strip()
    try:
        if name == "poly":
            lists = _split_top(body, ";", offset + len(name) + 1)
            if len(lists) != 2:
                raise _Fail("poly system needs two lists [c...];[d...]", offset)
            polys = []
            for piece, off in lists:
                piece, off = _strip(piece, off)
                if not (piece.startswith("[") and piece.endswith("]")):
                    raise _Fail("expected [c0,c1,...]", off)
                polys.append(_numbers(piece[1:-1], off + 1))
            return make_system("poly", domain=domain, polys=(polys[0], polys[1]))
        params = _numbers(body, offset + len(name) + 1) if body else ()
        return make_system(name, params, domain)
    except _Fail:
        raise
    except HHError as exc:
        raise _Fail(str(exc), offset) from None


def parse_system(text: str) -> ChebyshevSystem:
    return _wrap(_parse_system, text)


# ---------------------------------------------------------------- measures

def _parse_measure(text: str, offset: int = 0) -> UnitMeasure:
    text, offset = _strip(text, offset)
    if not text:
        raise _Fail("empty measure", offset)
    dens: list[tuple[float, RealFunction]] = []
    atoms: list[tuple[float, float]] = []
    specs = []
    for coef, atom, off in _terms(text, offset):
        if coef <= 0:
            raise _Fail("measure coefficients must be > 0", off)
        name, _, body = atom.partition(":")
        name = name.strip()
        if name == "lebesgue" and not body:
            dens.append((coef, make_function("const", (1.0,))))
            specs.append(_scaled(coef, "lebesgue"))
        elif name == "density":
            f = _parse_function(body, off + len("density:"))
            dens.append((coef, f))
            specs.append(_scaled(coef, f"density:{f.label}"))
        elif name == "atoms":
            pts = _tuples(body, off + len("atoms:"), 2)
            if not pts:
                raise _Fail("atoms list is empty", off)
            atoms.extend((p, coef * w) for p, w in pts)
            specs.append(_scaled(coef, "atoms:[" + ",".join(
                f"({fmt_number(p)},{fmt_number(w)})" for p, w in pts) + "]"))
        else:
            raise _Fail(f"unknown measure {atom!r}; known: lebesgue, density:<f>, atoms:[...]", off)
    spec = " + ".join(specs)
    if spec == "lebesgue":
        return lebesgue()
    density = linear_combination(dens) if dens else None
    try:
        mu = UnitMeasure(density, tuple(atoms), False, spec)
        prob = abs(mu.mass() - 1.0) <= PROBABILITY_TOL
        return UnitMeasure(density, tuple(atoms), prob, spec)
    except HHError as exc:
        raise _Fail(str(exc), offset) from None


def _scaled(c: float, body: str) -> str:
    return body if c == 1.0 else f"{fmt_number(c)}*{body}"


def parse_measure(text: str) -> UnitMeasure:
    return _wrap(_parse_measure, text)


# ---------------------------------------------------------------- error models

@dataclass(frozen=True)
class MeasuredSpec:
    """Placeholder for a measured residual model; the function comes later."""

    grid: int = 33
    exact: bool = True

    @property
    def spec(self) -> str:
        return f"measured:grid={self.grid}" + ("" if self.exact else ",interp")


def _kv(body: str, offset: int) -> dict[str, tuple[str, int]]:
    out = {}
    for piece, off in _split_top(body, ",", offset):
        piece, off = _strip(piece, off)
        if not piece:
            continue
        key, eq, val = piece.partition("=")
        out[key.strip()] = (val if eq else "", off + len(key) + len(eq))
    return out


def _parse_error(text: str, offset: int = 0) -> ErrorModel | MeasuredSpec:
    text, offset = _strip(text, offset)
    name, colon, body = text.partition(":")
    name = name.strip()
    boff = offset + len(name) + len(colon)
    try:
        if name == "zero" and not body:
            return ZERO
        if name == "const":
            return ConstantError(_number(body, boff))
        if name == "power2":
            return PowerMeasure2(tuple(_tuples(body, boff, 3)))
        if name == "power3":
            return PowerMeasure3(tuple(_tuples(body, boff, 4)))
        if name == "dyadic":
            kv = _kv(body, boff)
            if "alpha" not in kv:
                raise _Fail("dyadic model needs alpha=<function>", boff)
            alpha = _parse_function(*kv["alpha"])
            n = int(_number(*kv["n"])) if "n" in kv else 40
            extra = set(kv) - {"alpha", "n"}
            if extra:
                raise _Fail(f"unknown dyadic option {sorted(extra)[0]!r}", boff)
            return DyadicErrorModel(alpha, n)
        if name == "measured":
            kv = _kv(body, boff)
            grid = int(_number(*kv["grid"])) if "grid" in kv else 33
            extra = set(kv) - {"grid", "interp"}
            if extra:
                raise _Fail(f"unknown measured option {sorted(extra)[0]!r}", boff)
            if grid < 3:
                raise _Fail("measured grid must be >= 3", boff)
            return MeasuredSpec(grid, "interp" not in kv)
    except _Fail:
        raise
    except HHError as exc:
        raise _Fail(str(exc), offset) from None
    raise _Fail(f"unknown error model {text!r}; known: zero, const, power2, power3, dyadic, measured", offset)


def parse_error(text: str) -> ErrorModel | MeasuredSpec:
    return _wrap(_parse_error, text)


# ---------------------------------------------------------------- convex generator specs

@dataclass(frozen=True)
class HSpec:
    """Ordinary-convex profile ``h``; ``None`` fields are drawn at random."""

    kind: str
    quad: tuple[float, float, float] | None = None
    pieces: tuple[tuple[float, float], ...] | None = None
    k: int = 3

    @property
    def spec(self) -> str:
        if self.kind == "quadratic":
            return "quadratic" if self.quad is None else "quadratic:" + ",".join(map(fmt_number, self.quad))
        if self.pieces is not None:
            return "maxaffine:[" + ",".join(f"({fmt_number(m)},{fmt_number(b)})"
                                            for m, b in self.pieces) + "]"
        return f"maxaffine:{self.k}"


def _parse_h(text: str, offset: int = 0) -> HSpec:
    text, offset = _strip(text, offset)
    name, _, body = text.partition(":")
    boff = offset + len(name) + 1
    if name == "quadratic":
        if not body:
            return HSpec("quadratic")
        vals = _numbers(body, boff)
        if len(vals) != 3:
            raise _Fail("quadratic takes a,b,c", boff)
        if vals[0] < 0:
            raise _Fail("quadratic needs a >= 0", boff)
        return HSpec("quadratic", quad=vals)
    if name == "maxaffine":
        if not body:
            return HSpec("maxaffine")
        if body.strip().startswith("["):
            pieces = _tuples(body, boff, 2)
            if not pieces:
                raise _Fail("maxaffine needs at least one piece", boff)
            return HSpec("maxaffine", pieces=tuple(pieces), k=len(pieces))
        k = _number(body, boff)
        if k != int(k) or k < 1:
            raise _Fail("maxaffine:k needs an integer k >= 1", boff)
        return HSpec("maxaffine", k=int(k))
    raise _Fail(f"unknown convex profile {text!r}; known: quadratic, maxaffine", offset)


def parse_h(text: str) -> HSpec:
    return _wrap(_parse_h, text)


def _wrap(parser, text: str):
    try:
        return parser(text, 0)
    except _Fail as exc:
        raise ConfigError(exc.message, None, exc.offset + 1) from None


# ---------------------------------------------------------------- suite spec

@dataclass(frozen=True)
class SuiteSpec:
    """A validated suite configuration in canonical text form."""

    suite_id: str = "suite"
    seed: int = 0
    theorems: tuple[str, ...] = ("classic",)
    systems: tuple[str, ...] = ("linear",)
    family: str = "convex"
    h: str = "quadratic"
    specimens: int = 10
    pairs: int = 10
    perturb: float = 0.01
    error: str = "zero"
    measure: str = "lebesgue"
    rho: str = "const:1"
    s: float = 1.0
    tolerance: float = 1e-8
    identity_samples: int = 100
    identity_tol: float = 1e-12
    grid: int = 33
    panels: int = 64

    def system_objects(self) -> list[ChebyshevSystem]:
        return [parse_system(s) for s in self.systems]

    def error_object(self) -> ErrorModel | MeasuredSpec:
        return parse_error(self.error)

    def measure_object(self) -> UnitMeasure:
        return parse_measure(self.measure)

    def rho_object(self) -> RealFunction:
        return parse_function(self.rho)

    def h_object(self) -> HSpec:
        return parse_h(self.h)


_INT_KEYS = {"seed", "specimens", "pairs", "identity_samples", "grid", "panels"}
_FLOAT_KEYS = {"perturb", "s", "tolerance", "identity_tol"}
_KEYS = tuple(f.name for f in fields(SuiteSpec))


def _canon(key: str, raw: str, off: int):
    """Parse one value and return its canonical form."""
    if key == "suite_id":
        if not re.fullmatch(r"[\w.\-]+", raw):
            raise _Fail("suite_id may contain letters, digits, '_', '.', '-'", off)
        return raw
    if key in _INT_KEYS:
        # exact integer literal; going through float would round large seeds
        if not re.fullmatch(r"[-+]?\d+", raw):
            _number(raw, off)
            raise _Fail(f"{key} must be an integer", off)
        v = int(raw)
        if key == "seed":
            if not 0 <= v < 2 ** 64:
                raise _Fail("seed must be a 64-bit unsigned integer", off)
        elif key == "grid" and v < 3:
            raise _Fail("grid must be >= 3", off)
        elif v < 1:
            raise _Fail(f"{key} must be >= 1", off)
        return v
    if key in _FLOAT_KEYS:
        v = _number(raw, off)
        if v < 0:
            raise _Fail(f"{key} must be >= 0", off)
        return v
    if key == "theorems":
        names = []
        for piece, o in _split_top(raw, ";,", off):
            piece, o = _strip(piece, o)
            if piece not in THEOREMS:
                raise _Fail(f"unknown theorem {piece!r}; known: {', '.join(THEOREMS)}", o)
            if piece in names:
                raise _Fail(f"theorem {piece!r} listed twice", o)
            names.append(piece)
        return tuple(names)
    if key == "systems":
        out = []
        for piece, o in _split_top(raw, ";", off):
            out.append(_parse_system(piece, o).spec)
        return tuple(out)
    if key == "family":
        if raw not in FAMILIES:
            raise _Fail(f"unknown family {raw!r}; known: {', '.join(FAMILIES)}", off)
        return raw
    if key == "h":
        return _parse_h(raw, off).spec
    if key == "error":
        return _parse_error(raw, off).spec
    if key == "measure":
        return _parse_measure(raw, off).spec
    if key == "rho":
        return _parse_function(raw, off).label
    raise AssertionError(key)


def parse_config_text(text: str) -> SuiteSpec:
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        if "=" not in body:
            raise ConfigError("expected 'key = value'", lineno, len(body) - len(body.lstrip()) + 1)
        key_part, _, val_part = body.partition("=")
        key = key_part.strip()
        kcol = len(key_part) - len(key_part.lstrip()) + 1
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}; known: {', '.join(_KEYS)}", lineno, kcol)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno, kcol)
        vstart = len(key_part) + 1
        raw, voff = _strip(val_part, vstart)
        if not raw:
            raise ConfigError(f"empty value for {key!r}", lineno, voff + 1)
        try:
            values[key] = _canon(key, raw, voff)
        except _Fail as exc:
            raise ConfigError(exc.message, lineno, exc.offset + 1) from None
    return SuiteSpec(**values)


def parse_config(path) -> SuiteSpec:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {p}") from None
    except OSError as exc:
        raise ConfigError(f"cannot read config file {p}: {exc}") from None
    return parse_config_text(text)


def _fmt_value(v) -> str:
    if isinstance(v, tuple):
        return "; ".join(v)
    if isinstance(v, float):
        return fmt_number(v) if v == int(v) and abs(v) < 1e15 else repr(v)
    return str(v)


def serialize(spec: SuiteSpec) -> str:
    """Config text that parses back to ``spec``."""
    return "".join(f"{f.name} = {_fmt_value(getattr(spec, f.name))}\n" for f in fields(spec))

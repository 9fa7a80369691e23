"""Batch certification: random specimens, random cells, one JSON report.

Every random draw comes from a PCG64 stream seeded by
``SeedSequence(seed, spawn_key=...)`` with a spawn key naming the task, so a
cell's value does not depend on which worker computed it or in what order.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any

import numpy as np

from .cheb import ChebyshevSystem
from .classic import classic_bounds
from .config import HSpec, MeasuredSpec, SuiteSpec, parse_h
from .errmodel import PowerMeasure2, PowerMeasure3
from .errors import GeneratorError, InputError
from .functions import Interval, RealFunction, fmt_number
from .lower import cor4c2_error, j_functional, lower_bound_cor2hp1, lower_bound_thm3, lower_bound_thm4
from .meansys import lift_weighted_system
from .measure import QuadratureConfig, lebesgue
from .residual import RESIDUAL_GRID, is_omega_convex, jensen_eta, measured_eps
from .upper import cor6a_error, cor6b_error, upper_bound_thm5, upper_bound_thm6

RNG_NAME = "PCG64"
MAX_GENERATOR_ATTEMPTS = 10
SEGMENT_THEOREMS = ("thm4", "thm6", "cor2hp1")
IDENTITY_THEOREMS = ("identity-cor4c2", "identity-cor6")
MIN_GAP = 0.05


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


# ---------------------------------------------------------------- generators

def _h_callable(h: HSpec, rng: np.random.Generator, vlo: float, vhi: float):
    """Concrete ``h`` with random coefficients filled in; returns (fn, text)."""
    width = vhi - vlo
    if h.kind == "quadratic":
        if h.quad is not None:
            a, b, c = h.quad
        else:
            a = float(rng.uniform(0.2, 2.0)) / max(width, 1e-12) ** 2
            b = float(rng.uniform(vlo, vhi))
            c = float(rng.uniform(-1.0, 1.0))
        return (lambda v: a * (v - b) ** 2 + c), f"quadratic:{fmt_number(a)},{fmt_number(b)},{fmt_number(c)}"
    if h.pieces is not None:
        pieces = h.pieces
    else:
        slopes = np.sort(rng.uniform(-2.0, 2.0, h.k)) / max(width, 1e-12)
        knots = rng.uniform(vlo, vhi, h.k)
        # piece i passes through (knot_i, 0); the max is convex regardless
        pieces = tuple((float(m), float(-m * k)) for m, k in zip(slopes, knots))
    ms = np.array([m for m, _ in pieces])
    bs = np.array([b for _, b in pieces])

    def fn(v):
        v = np.asarray(v, dtype=float)
        return np.max(ms[:, None] * v.ravel()[None, :] + bs[:, None], axis=0).reshape(v.shape)

    text = "maxaffine:[" + ",".join(f"({fmt_number(m)},{fmt_number(b)})" for m, b in pieces) + "]"
    return fn, text


@dataclass(frozen=True)
class Generated:
    f: RealFunction
    retries: int


def gen_omega_convex_detail(sys: ChebyshevSystem, h_spec: HSpec | str, seed: int,
                            grid_n: int = RESIDUAL_GRID) -> Generated:
    """``f = omega0 * h(omega1 / omega0)`` with ``h`` ordinary-convex, confirmed by a scan."""
    h = parse_h(h_spec) if isinstance(h_spec, str) else h_spec
    r = sys.ratio(sys.domain.grid(65))
    vlo, vhi = float(np.min(r)), float(np.max(r))
    w0, ratio = sys.omega0, sys.ratio
    for attempt in range(MAX_GENERATOR_ATTEMPTS):
        rng = _rng(seed, attempt)
        hf, text = _h_callable(h, rng, vlo, vhi)

        def fn(t, hf=hf):
            return w0(t) * hf(ratio(t))

        f = RealFunction(fn, f"omega-convex[{sys.spec}; {text}]", domain=sys.domain)
        if is_omega_convex(f, sys, grid_n).ok:
            return Generated(f, attempt)
    raise GeneratorError(f"{MAX_GENERATOR_ATTEMPTS} generated functions for {sys.spec} "
                         f"failed the convexity scan; this indicates a bug")


def gen_omega_convex(sys: ChebyshevSystem, h_spec: HSpec | str, seed: int) -> RealFunction:
    return gen_omega_convex_detail(sys, h_spec, seed).f


def gen_perturbed(f0: RealFunction, bound: float, seed: int, n_modes: int = 4) -> RealFunction:
    """``f0 + delta`` with ``delta`` a sum of sines whose amplitudes sum to ``bound``."""
    if not bound >= 0:
        raise InputError("bound must be >= 0")
    if bound == 0:
        return f0
    rng = _rng(seed, 0)
    raw = rng.uniform(0.2, 1.0, n_modes)
    amps = bound * raw / raw.sum()
    freqs = rng.uniform(2.0, 40.0, n_modes)
    phases = rng.uniform(0.0, 2 * math.pi, n_modes)
    base = f0.fn

    def fn(t):
        t = np.asarray(t, dtype=float)
        out = base(t)
        for a, w, p in zip(amps, freqs, phases):
            out = out + a * np.sin(w * t + p)
        return out

    return RealFunction(fn, f"{f0.name} + wiggle[{fmt_number(bound)}, seed={seed}]", domain=f0.domain)


def gen_span(sys: ChebyshevSystem, seed: int) -> RealFunction:
    rng = _rng(seed, 0)
    a, b = (float(v) for v in rng.uniform(-2.0, 2.0, 2))
    w0, w1 = sys.omega0, sys.omega1
    return RealFunction(lambda t: a * w0(t) + b * w1(t),
                        f"span[{fmt_number(a)}*w0 + {fmt_number(b)}*w1]", domain=sys.domain)


# ---------------------------------------------------------------- cells

def _pair(rng: np.random.Generator, dom: Interval) -> tuple[float, float]:
    gap = MIN_GAP * dom.width
    while True:
        x, y = np.sort(rng.uniform(dom.lo, dom.hi, 2))
        if y - x >= gap:
            return float(x), float(y)


def _cell(theorem: str, system: str, function: str, x, y, lhs, rhs, err, margin, **extra) -> dict:
    out = {"theorem": theorem, "system": system, "function": function, "x": x, "y": y,
           "lhs": lhs, "rhs_main": rhs, "error_term": err, "margin": margin}
    out.update(extra)
    return out


def _segment(f: RealFunction, x: float, y: float) -> RealFunction:
    g = f.fn
    return RealFunction(lambda t: g((1.0 - np.asarray(t, dtype=float)) * x + np.asarray(t, dtype=float) * y),
                        f"{f.name}|[{fmt_number(x)},{fmt_number(y)}]", domain=Interval(0.0, 1.0))


def _error_for(err, f, sys, x, y):
    if isinstance(err, MeasuredSpec):
        return measured_eps(f, sys, err.grid, Interval(x, y), err.exact)
    return err


def _segment_error_for(err, g):
    if isinstance(err, MeasuredSpec):
        return jensen_eta(g, err.grid, err.exact)
    return err


def _specimen(spec: SuiteSpec, sys: ChebyshevSystem, sys_idx: int, spec_idx: int) -> Generated:
    seed = int(np.random.SeedSequence(spec.seed, spawn_key=(sys_idx, spec_idx, 0)).generate_state(1)[0])
    if spec.family == "span":
        return Generated(gen_span(sys, seed), 0)
    gen = gen_omega_convex_detail(sys, spec.h_object(), seed, spec.grid)
    if spec.family == "perturbed":
        return Generated(gen_perturbed(gen.f, spec.perturb, seed), gen.retries)
    return gen


def _specimen_task(args) -> tuple[list[dict], int]:
    spec, sys_idx, spec_idx = args
    sys = spec.system_objects()[sys_idx]
    q = QuadratureConfig(panels=spec.panels)
    gen = _specimen(spec, sys, sys_idx, spec_idx)
    f = gen.f
    err = spec.error_object()
    rho = spec.rho_object()
    mu = spec.measure_object()
    ms = lift_weighted_system(sys, rho, q)
    cells = []
    for pair_idx in range(spec.pairs):
        x, y = _pair(_rng(spec.seed, sys_idx, spec_idx, 1, pair_idx), sys.domain)
        for th in spec.theorems:
            if th in IDENTITY_THEOREMS:
                continue
            if th == "classic":
                cr = classic_bounds(f, sys, rho, x, y, q)
                cells.append(_cell(th, sys.spec, f.name, x, y, cr.lower, cr.integral, 0.0,
                                   min(cr.margin_lower, cr.margin_upper),
                                   upper=cr.upper, margin_lower=cr.margin_lower,
                                   margin_upper=cr.margin_upper))
                continue
            if th in ("thm3", "thm5"):
                eps = _error_for(err, f, sys, x, y)
                fn = lower_bound_thm3 if th == "thm3" else upper_bound_thm5
                rep = fn(f, ms, sys, eps, x, y, q)
            else:
                g = _segment(f, x, y)
                eta = _segment_error_for(err, g)
                s = spec.s
                if th == "thm4":
                    rep = lower_bound_thm4(g, mu, eta, s, q)
                elif th == "thm6":
                    rep = upper_bound_thm6(g, mu, eta, s, q)
                else:
                    rep = lower_bound_cor2hp1(g, eta, s, q)
            cells.append(_cell(th, sys.spec, f.name, x, y, rep.lhs, rep.rhs_main,
                               rep.error_term, rep.margin))
    return cells, gen.retries


def _random_atoms(rng: np.random.Generator, width: int) -> tuple:
    p, qq = rng.uniform(0.0, 3.0, 2)
    c = rng.uniform(0.1, 2.0)
    if width == 3:
        return (float(p), float(qq), float(c))
    return (float(p), float(qq), float(rng.uniform(0.0, 3.0)), float(c))


def _identity_task(args) -> list[dict]:
    spec, th, idx = args
    rng = _rng(spec.seed, 2 ** 31, THEOREMS_INDEX[th], idx)
    s = float(rng.uniform(0.1, 3.0))
    q = QuadratureConfig(panels=spec.panels)
    if th == "identity-cor4c2":
        nu = PowerMeasure2((_random_atoms(rng, 3),))
        lhs = 8.0 * j_functional(nu, lebesgue(), s, q)
        rhs = cor4c2_error(nu, s)
    else:
        nu = PowerMeasure3((_random_atoms(rng, 4),))
        lhs = cor6a_error(nu, lebesgue(), s, q)
        rhs = cor6b_error(nu, s)
    return [_cell(th, "-", nu.spec, None, None, lhs, rhs, 0.0, -abs(lhs - rhs), s=s)]


THEOREMS_INDEX = {name: i for i, name in enumerate(IDENTITY_THEOREMS)}


# ---------------------------------------------------------------- suite

@dataclass(frozen=True)
class SuiteReport:
    suite_id: str
    seed: int
    cells: tuple[dict, ...]
    summary: dict[str, Any]

    @property
    def failed(self) -> bool:
        return self.summary["failures"] > 0

    def to_dict(self) -> dict:
        return {"suite_id": self.suite_id, "seed": self.seed, "rng": RNG_NAME,
                "cells": list(self.cells), "summary": self.summary}

    def to_json(self, indent: int | None = 1) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True, allow_nan=False) + "\n"


def _tolerance(spec: SuiteSpec, theorem: str) -> float:
    return spec.identity_tol if theorem in IDENTITY_THEOREMS else spec.tolerance


def _summarise(spec: SuiteSpec, cells: list[dict], retries: int) -> dict:
    per: dict[str, dict] = {}
    failed_cases = []
    for i, c in enumerate(cells):
        th = c["theorem"]
        entry = per.setdefault(th, {"count": 0, "worst_margin": math.inf, "failures": 0})
        entry["count"] += 1
        entry["worst_margin"] = min(entry["worst_margin"], c["margin"])
        if c["margin"] < -_tolerance(spec, th):
            entry["failures"] += 1
            failed_cases.append(i)
    return {"per_theorem": {k: per[k] for k in sorted(per)},
            "total_cells": len(cells),
            "failures": sum(e["failures"] for e in per.values()),
            "failed_cells": failed_cases,
            "generator_retries": retries,
            "tolerance": spec.tolerance,
            "identity_tolerance": spec.identity_tol}


def expected_cells(spec: SuiteSpec) -> int:
    plain = [t for t in spec.theorems if t not in IDENTITY_THEOREMS]
    n_ident = len(spec.theorems) - len(plain)
    return len(plain) * len(spec.systems) * spec.specimens * spec.pairs + n_ident * spec.identity_samples


def run_suite(spec: SuiteSpec, workers: int = 1) -> SuiteReport:
    """Run every (theorem x system x specimen x pair) cell plus identity cells.

    Results are gathered in task order, so the report is identical for any
    ``workers`` value.
    """
    if workers < 1:
        raise InputError("workers must be >= 1")
    tasks = [(spec, si, k) for si in range(len(spec.systems)) for k in range(spec.specimens)]
    if all(t in IDENTITY_THEOREMS for t in spec.theorems):
        tasks = []
    ident = [(spec, th, i) for th in spec.theorems if th in IDENTITY_THEOREMS
             for i in range(spec.identity_samples)]
    if workers == 1:
        spec_results = [_specimen_task(t) for t in tasks]
        ident_results = [_identity_task(t) for t in ident]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            spec_results = list(pool.map(_specimen_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
            ident_results = list(pool.map(_identity_task, ident, chunksize=max(1, len(ident) // (4 * workers))))
    cells: list[dict] = []
    retries = 0
    for cs, r in spec_results:
        cells.extend(cs)
        retries += r
    for cs in ident_results:
        cells.extend(cs)
    # cell order: task order, then pair, then theorem order in the config
    return SuiteReport(spec.suite_id, spec.seed, tuple(cells), _summarise(spec, cells, retries))

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hhbounds.config import (MeasuredSpec, SuiteSpec, parse_config, parse_config_text, parse_error,
                             parse_function, parse_h, parse_measure, parse_system, serialize)
from hhbounds.errmodel import ZERO, ConstantError, DyadicErrorModel, PowerMeasure2, PowerMeasure3
from hhbounds.errors import ConfigError
from hhbounds.measure import first_moment


def test_parse_system_examples():
    assert parse_system("linear").name == "linear"
    s = parse_system("exp@0,1")
    assert (s.domain.lo, s.domain.hi) == (0.0, 1.0)
    s = parse_system("power:1,2")
    assert s.omega1(2.0) == pytest.approx(4.0)


def test_parse_function_examples():
    f = parse_function("poly:0,0,1")
    assert f(3.0) == pytest.approx(9.0)
    assert parse_function("poly(0,0,1)")(3.0) == pytest.approx(9.0)
    g = parse_function("poly:0,0,1 + 0.05*sin:12")
    assert g(0.5) == pytest.approx(0.25 + 0.05 * np.sin(6.0))
    assert parse_function("exp:1e+0")(1.0) == pytest.approx(np.e)


def test_parse_error_examples():
    e = parse_error("power2:[(1,1,0.5)]")
    assert isinstance(e, PowerMeasure2) and e.atoms == ((1.0, 1.0, 0.5),)
    assert isinstance(parse_error("power3:[(1,1,2,1)]"), PowerMeasure3)
    assert parse_error("zero") is ZERO
    assert parse_error("const:0.2") == ConstantError(0.2)
    d = parse_error("dyadic:alpha=pow(1),n=30")
    assert isinstance(d, DyadicErrorModel) and d.n_terms == 30
    m = parse_error("measured:grid=17,interp")
    assert m == MeasuredSpec(17, False)


def test_parse_measure_examples():
    mu = parse_measure("atoms:[(0,0.5),(1,0.5)]")
    assert mu.is_probability and len(mu.atoms) == 2
    assert first_moment(mu) == pytest.approx(0.5)
    mu = parse_measure("0.5*lebesgue + atoms:[(0.2,0.5)]")
    assert mu.is_probability
    assert first_moment(mu) == pytest.approx(0.35)


def test_parse_h_examples():
    assert parse_h("quadratic").kind == "quadratic"
    h = parse_h("maxaffine:[(1,0),(-1,1)]")
    assert h.pieces == ((1.0, 0.0), (-1.0, 1.0))


@pytest.mark.parametrize("text,line,col", [
    ("system = linear\n", 1, 1),
    ("seed = 1\nbogus = 3\n", 2, 1),
    ("seed = 1\n  seed = 2\n", 2, 3),
    ("theorems = thm3, thm9\n", 1, 18),
    ("error = power2:[(1,1)]\n", 1, None),
    ("pairs = 2.5\n", 1, 9),
    ("pairs =\n", 1, None),
    ("no equals sign\n", 1, 1),
])
def test_config_errors_have_positions(text, line, col):
    with pytest.raises(ConfigError) as exc:
        parse_config_text(text)
    assert exc.value.line == line
    if col is not None:
        assert exc.value.column == col


def test_config_defaults_and_comments():
    spec = parse_config_text("# a suite\nseed = 42   # trailing\n\ntheorems = thm3; thm5\n")
    assert spec.seed == 42 and spec.theorems == ("thm3", "thm5")
    assert spec.systems == SuiteSpec().systems


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(tmp_path / "nope.cfg")


_VALUES = {
    "seed": st.integers(0, 2 ** 64 - 1).map(str),
    "theorems": st.lists(st.sampled_from(["classic", "thm3", "thm4", "thm5", "thm6", "identity-cor6"]),
                         min_size=1, max_size=4, unique=True).map(", ".join),
    "systems": st.lists(st.sampled_from(["linear", "exp", "trig", "power:1,2", "exp@0,1"]),
                        min_size=1, max_size=3).map("; ".join),
    "family": st.sampled_from(["convex", "perturbed", "span"]),
    "h": st.sampled_from(["quadratic", "maxaffine:3", "maxaffine:[(1,0),(-1,1)]"]),
    "pairs": st.integers(1, 100).map(str),
    "perturb": st.floats(0, 1).map(repr),
    "error": st.sampled_from(["zero", "const:0.5", "power2:[(1,1,0.5)]", "measured:grid=9",
                              "dyadic:alpha=pow(1),n=12"]),
    "measure": st.sampled_from(["lebesgue", "atoms:[(0,0.5),(1,0.5)]", "density:poly:0,2"]),
    "rho": st.sampled_from(["const:1", "exp:0.5", "poly:1,1"]),
    "tolerance": st.floats(1e-14, 1e-2).map(repr),
}


@given(st.fixed_dictionaries({}, optional=_VALUES))
def test_round_trip(values):
    spec = parse_config_text("".join(f"{k} = {v}\n" for k, v in values.items()))
    assert parse_config_text(serialize(spec)) == spec


def test_large_seed_is_exact():
    spec = parse_config_text("seed = 18446744073709551615\n")
    assert spec.seed == 2 ** 64 - 1
    with pytest.raises(ConfigError):
        parse_config_text("seed = 18446744073709551616\n")
    assert parse_config_text("pairs = 12\n").pairs == 12

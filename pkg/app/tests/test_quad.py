import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from app.errors import PreconditionError
from app.quad.schemas.quad import Interval, QuadConfig, QuadResult
from app.quad.services.gauss_kronrod import (
    GAUSS_WEIGHTS,
    KRONROD_WEIGHTS,
    NODES,
    RULE_POINTS,
    combine,
    gauss_kronrod_panel,
    integrate_1d,
    integrate_1d_split,
    integrate_2d,
    integrate_2d_split,
)

CFG = QuadConfig()
UNIT = Interval(lo=0.0, hi=1.0)

CATALOG_1D = {
    "poly": lambda u: u ** 3 - 2 * u + 1,
    "sin": np.sin,
    "exp": np.exp,
    "bump": lambda u: 1.0 / (1.0 + 25.0 * u * u),
}


# -----------------------------
# Schemas
# -----------------------------
def test_interval_rejects_empty_and_non_finite():
    with pytest.raises(ValidationError):
        Interval(lo=1.0, hi=1.0)
    with pytest.raises(ValidationError):
        Interval(lo=0.0, hi=math.inf)


def test_quad_config_bounds():
    with pytest.raises(ValidationError):
        QuadConfig(abs_tol=0.0)
    with pytest.raises(ValidationError):
        QuadConfig(max_depth=0)


def test_rule_tables_are_consistent():
    assert RULE_POINTS == 15
    assert math.isclose(float(KRONROD_WEIGHTS.sum()), 2.0, rel_tol=1e-14)
    assert math.isclose(float(GAUSS_WEIGHTS.sum()), 2.0, rel_tol=1e-14)
    np.testing.assert_allclose(NODES, -NODES[::-1], atol=1e-15)


# -----------------------------
# integrate_1d
# -----------------------------
def test_integrate_identity():
    r = integrate_1d(lambda u: u, UNIT, CFG)
    assert r.converged
    assert abs(r.value - 0.5) <= CFG.abs_tol


def test_integrate_sin_over_pi():
    r = integrate_1d(np.sin, Interval(lo=0.0, hi=math.pi), CFG)
    assert abs(r.value - 2.0) <= CFG.abs_tol


def test_integrate_exp():
    r = integrate_1d(np.exp, UNIT, CFG)
    assert abs(r.value - (math.e - 1.0)) <= CFG.abs_tol
    assert r.error_estimate <= max(CFG.abs_tol, CFG.rel_tol * abs(r.value))


@pytest.mark.parametrize("degree", [0, 1, 2, 3])
def test_low_degree_polynomials_need_one_panel(degree):
    r = integrate_1d(lambda u: u ** degree, Interval(lo=-1.0, hi=2.0), CFG)
    exact = (2.0 ** (degree + 1) - (-1.0) ** (degree + 1)) / (degree + 1)
    assert r.evaluations == RULE_POINTS
    assert abs(r.value - exact) <= 1e-13


def test_panel_error_is_kronrod_gauss_gap():
    value, err = gauss_kronrod_panel(lambda u: np.abs(u - 0.3), 0.0, 1.0)
    assert err > 1e-6
    assert abs(value - (0.3 ** 2 + 0.7 ** 2) / 2) < 1e-2


def test_kink_is_handled_by_splitting():
    g = lambda u: np.abs(u - 0.3)
    split = integrate_1d_split(g, UNIT, [0.3], CFG)
    assert split.evaluations == 2 * RULE_POINTS
    assert abs(split.value - 0.29) <= 1e-14


def test_budget_exhaustion_returns_unconverged():
    cfg = QuadConfig(abs_tol=1e-15, rel_tol=0.0, max_depth=2)
    r = integrate_1d(lambda u: np.sqrt(u), UNIT, cfg)
    assert not r.converged
    assert abs(r.value - 2.0 / 3.0) < 1e-3


def test_max_panels_caps_work():
    cfg = QuadConfig(abs_tol=1e-15, rel_tol=0.0, max_panels=4)
    r = integrate_1d(lambda u: np.sqrt(u), UNIT, cfg)
    assert not r.converged
    assert r.evaluations <= 4 * 2 * RULE_POINTS


def test_non_finite_integrand_raises():
    with pytest.raises(PreconditionError):
        integrate_1d(lambda u: np.full_like(u, np.inf), UNIT, CFG)


def test_combine_sums_values_and_flags():
    a = QuadResult(value=1.0, error_estimate=1e-12, evaluations=15, converged=True)
    b = QuadResult(value=2.0, error_estimate=2e-12, evaluations=45, converged=False)
    c = combine([a, b])
    assert c.value == 3.0 and c.evaluations == 60 and not c.converged
    with pytest.raises(PreconditionError):
        combine([])


@settings(deadline=None, max_examples=40)
@given(st.sampled_from(sorted(CATALOG_1D)), st.floats(min_value=0.05, max_value=0.95))
def test_additivity(name, frac):
    g = CATALOG_1D[name]
    a, c = -1.0, 2.0
    b = a + frac * (c - a)
    whole = integrate_1d(g, Interval(lo=a, hi=c), CFG).value
    parts = integrate_1d(g, Interval(lo=a, hi=b), CFG).value + integrate_1d(g, Interval(lo=b, hi=c), CFG).value
    assert abs(whole - parts) <= 2 * CFG.abs_tol + 2 * CFG.rel_tol * abs(whole)


@settings(deadline=None, max_examples=40)
@given(
    st.sampled_from(sorted(CATALOG_1D)),
    st.sampled_from(sorted(CATALOG_1D)),
    st.floats(min_value=-3, max_value=3),
    st.floats(min_value=-3, max_value=3),
)
def test_linearity(gn, hn, alpha, beta):
    g, h = CATALOG_1D[gn], CATALOG_1D[hn]
    iv = Interval(lo=0.0, hi=1.5)
    combo = integrate_1d(lambda u: alpha * g(u) + beta * h(u), iv, CFG).value
    separate = alpha * integrate_1d(g, iv, CFG).value + beta * integrate_1d(h, iv, CFG).value
    scale = max(1.0, abs(alpha) + abs(beta))
    assert abs(combo - separate) <= 2 * CFG.abs_tol * scale + 4 * CFG.rel_tol * scale * 10


# -----------------------------
# integrate_2d
# -----------------------------
def test_integrate_2d_product():
    r = integrate_2d(lambda t, s: t * s, UNIT, UNIT, CFG)
    assert r.converged
    assert abs(r.value - 0.25) <= CFG.abs_tol


def test_integrate_2d_area():
    r = integrate_2d(lambda t, s: np.ones_like(s), UNIT, UNIT, CFG)
    assert abs(r.value - 1.0) <= CFG.abs_tol


def test_integrate_2d_square_of_product():
    iv = Interval(lo=0.0, hi=2.0)
    r = integrate_2d(lambda t, s: (t * s) * (t * s), iv, iv, CFG)
    assert abs(r.value - (8.0 / 3.0) ** 2) <= 1e-9


def test_integrate_2d_split_on_kink_lines():
    g = lambda t, s: np.abs(t - 0.3) * np.abs(s - 0.6)
    r = integrate_2d_split(g, UNIT, UNIT, [0.3], [0.6], CFG)
    assert r.converged
    assert abs(r.value - 0.29 * 0.26) <= 1e-13

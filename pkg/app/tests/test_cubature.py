import logging

import numpy as np
import pytest

from app.cubature.services.cubature_service import bisect, build_cell, cell_error_bound, cell_rule, integrate
from app.errors import PreconditionError
from app.expr.services.evaluator import compile_expr
from app.expr.services.parser import parse
from app.ostrowski.schemas.ostrowski import EvalPoint, Rect, SubRect
from app.ostrowski.services.bound_service import domain_hull
from app.quad.schemas.quad import QuadConfig
from app.quad.services.gauss_kronrod import integrate_2d
from app.weight.services.weight_service import build_weight, evaluate_weight

TS = {"t", "s"}
UNIT = Rect.from_bounds(0.0, 1.0, 0.0, 1.0)
UNIT_SUB = UNIT.as_subrect()
CENTER = EvalPoint(x=0.5, y=0.5)


def f_(text):
    return parse(text, TS)


def w_(selector, rect=UNIT):
    return build_weight(selector, domain_hull(rect))


def oracle(text, selector, rect):
    """∫∫ w(t) w(s) f(t,s) by plain adaptive quadrature."""
    F = compile_expr(f_(text), ("t", "s"))
    w = w_(selector, rect)
    cfg = QuadConfig(abs_tol=1e-13, rel_tol=1e-13)
    return integrate_2d(
        lambda t, s: evaluate_weight(w, t) * evaluate_weight(w, s) * F(t, s), rect.t_iv, rect.s_iv, cfg
    ).value


# -----------------------------
# Local rule and certificate
# -----------------------------
@pytest.mark.parametrize("text, expected", [("1", 1.0), ("t*s", 0.25), ("t^2*s^2", 5.0 / 48.0)])
def test_cell_rule_examples(text, expected):
    r = cell_rule(f_(text), w_("const"), UNIT_SUB, CENTER)
    assert abs(r.value - expected) <= 1e-12


def test_cell_rule_center_outside():
    with pytest.raises(PreconditionError):
        cell_rule(f_("t*s"), w_("const"), SubRect.from_bounds(0.0, 0.4, 0.0, 1.0), CENTER)


def test_cell_error_bound_examples():
    one = w_("const")
    assert cell_error_bound(f_("t+s"), one, UNIT_SUB) == 0.0
    assert abs(cell_error_bound(f_("t*s"), one, UNIT_SUB) - 1.0 / 16.0) <= 1e-12
    assert abs(cell_error_bound(f_("t*s"), one, UNIT_SUB, EvalPoint(x=0.0, y=0.0)) - 0.25) <= 1e-12


def test_bisect_prefers_heavier_side():
    one = w_("const", Rect.from_bounds(0.0, 2.0, 0.0, 2.0))
    wide = build_cell(f_("t*s"), one, SubRect.from_bounds(0.0, 2.0, 0.0, 1.0))
    left, right = bisect(wide)
    assert left.bounds == (0.0, 1.0, 0.0, 1.0) and right.bounds == (1.0, 2.0, 0.0, 1.0)

    tall = build_cell(f_("t*s"), one, SubRect.from_bounds(0.0, 1.0, 0.0, 2.0))
    low, high = bisect(tall)
    assert low.bounds == (0.0, 1.0, 0.0, 1.0) and high.bounds == (0.0, 1.0, 1.0, 2.0)


def test_bisect_splits_t_on_ties():
    cell = build_cell(f_("t*s"), w_("const"), UNIT_SUB)
    left, right = bisect(cell)
    assert left.bounds == (0.0, 0.5, 0.0, 1.0) and right.bounds == (0.5, 1.0, 0.0, 1.0)


@pytest.mark.parametrize("text", ["t*s", "t^2*s^2", "exp(t+s)"])
def test_subdivision_decreases_bound(text):
    f, w = f_(text), w_("const")
    parent = build_cell(f, w, UNIT_SUB)
    children = [build_cell(f, w, part) for part in bisect(parent)]
    assert sum(c.local_bound for c in children) <= parent.local_bound + 1e-12


# -----------------------------
# Adaptive integration
# -----------------------------
def test_affine_integrand_needs_one_cell():
    res = integrate(f_("t+s"), w_("const"), UNIT, 1e-10)
    assert res.cells == 1
    assert res.error_bound == 0.0
    assert res.converged
    assert abs(res.value - 1.0) <= 1e-12


def test_product_on_unit_square():
    res = integrate(f_("t*s"), w_("const"), UNIT, 1e-4)
    assert res.converged
    assert res.error_bound <= 1e-4
    assert abs(res.value - 0.25) <= res.error_bound


def test_product_on_small_square_tight_target():
    rect = Rect.from_bounds(0.0, 0.1, 0.0, 0.1)
    res = integrate(f_("t*s"), w_("const", rect), rect, 1e-6)
    assert res.converged
    assert abs(res.value - 2.5e-5) <= 1e-6


def test_square_of_product():
    res = integrate(f_("t^2*s^2"), w_("const"), UNIT, 1e-3)
    assert res.converged
    assert abs(res.value - 1.0 / 9.0) <= res.error_bound


def test_exponential_with_linear_weight():
    rect = Rect.from_bounds(0.5, 1.0, 0.5, 1.0)
    res = integrate(f_("exp(t+s)"), w_("linear", rect), rect, 1e-4)
    assert res.converged
    assert abs(res.value - oracle("exp(t+s)", "linear", rect)) <= 1e-4


@pytest.mark.parametrize(
    "text, selector, bounds",
    [
        ("sin(t)*exp(s)", "const", (0.0, 1.0, 0.0, 1.0)),
        ("t*s*sin(t+s)", "linear", (0.5, 1.5, 0.5, 1.0)),
        ("t^3*s+t*s^2", "expr:1+u^2", (0.0, 1.0, 0.0, 0.5)),
    ],
)
def test_certificate_is_sound(text, selector, bounds):
    rect = Rect.from_bounds(*bounds)
    res = integrate(f_(text), w_(selector, rect), rect, 1e-3)
    assert abs(res.value - oracle(text, selector, rect)) <= res.error_bound



def test_integration_is_deterministic():
    first = integrate(f_("sin(t)*exp(s)"), w_("const"), UNIT, 1e-3)
    second = integrate(f_("sin(t)*exp(s)"), w_("const"), UNIT, 1e-3)
    assert first == second


def test_budget_exhaustion(caplog):
    with caplog.at_level(logging.WARNING):
        res = integrate(f_("t*s"), w_("const"), UNIT, 1e-8, max_cells=3)
    assert not res.converged
    assert res.cells <= 3
    assert res.error_bound > 1e-8
    assert abs(res.value - 0.25) <= res.error_bound
    assert any("[Cubature]" in rec.message for rec in caplog.records)


def test_evaluations_are_counted():
    res = integrate(f_("t*s"), w_("const"), UNIT, 1e-2)
    assert res.cells > 1
    assert res.evaluations >= 2 * 15 * res.cells


# -----------------------------
# Reference and certified cases
# -----------------------------
def test_product_to_one_in_a_million():
    res = integrate(f_("t*s"), w_("const"), UNIT, 1e-6)
    assert res.converged
    assert abs(res.value - 0.25) <= 1e-6
    assert abs(res.value - 0.25) <= res.error_bound


def test_square_of_product_to_1e4():
    res = integrate(f_("t^2*s^2"), w_("const"), UNIT, 1e-4)
    assert res.converged
    assert abs(res.value - 1.0 / 9.0) <= res.error_bound <= 1e-4


def test_exponential_with_linear_weight_on_unit_square():
    res = integrate(f_("exp(t+s)"), w_("linear"), UNIT, 1e-5)
    assert res.converged
    assert abs(res.value - oracle("exp(t+s)", "linear", UNIT)) <= res.error_bound


CERTIFIED = [
    ("sin(t)*exp(s)", "const", (0.0, 0.5, 0.0, 0.5), 1e-4),
    ("t*s*sin(t+s)", "const", (0.5, 1.0, 0.5, 1.0), 1e-4),
    ("t^3*s+t*s^2", "const", (0.0, 0.5, 0.5, 1.0), 1e-4),
    ("t^4+t^2*s^2+t*s^3", "linear", (0.5, 1.0, 0.5, 1.0), 1e-4),
    ("exp(t+s)", "linear", (0.0, 0.5, 0.0, 0.5), 1e-4),
    ("sin(t)*sin(s)", "linear", (0.5, 1.0, 0.0, 0.5), 1e-4),
    ("t^2*s^2", "linear", (0.5, 1.0, 0.5, 1.0), 1e-4),
    ("sin(t)*exp(s)", "expr:1+u^2", (0.0, 0.5, 0.0, 0.5), 1e-4),
    ("t*s", "expr:1+u^2", (0.5, 1.0, 0.5, 1.0), 1e-4),
    ("exp(t+s)", "expr:1+u^2", (0.0, 0.5, 0.0, 0.5), 1e-4),
    ("t*s", "const", (0.0, 0.2, 0.0, 0.2), 1e-6),
    ("t^2*s^2", "const", (0.8, 1.0, 0.8, 1.0), 1e-6),
    ("sin(t)*exp(s)", "const", (0.4, 0.6, 0.4, 0.6), 1e-6),
    ("exp(t+s)", "const", (0.0, 0.2, 0.8, 1.0), 1e-6),
    ("t*s*sin(t+s)", "linear", (0.8, 1.0, 0.8, 1.0), 1e-6),
    ("t^3*s+t*s^2", "linear", (0.4, 0.6, 0.4, 0.6), 1e-6),
    ("sin(t)*sin(s)", "linear", (0.2, 0.4, 0.6, 0.8), 1e-6),
    ("t^4+t^2*s^2+t*s^3", "linear", (0.8, 1.0, 0.0, 0.2), 1e-6),
    ("t*s", "expr:1+u^2", (0.8, 1.0, 0.8, 1.0), 1e-6),
    ("sin(t)*exp(s)", "expr:1+u^2", (0.0, 0.2, 0.0, 0.2), 1e-6),
]


@pytest.mark.parametrize("text, selector, bounds, target", CERTIFIED)
def test_certified_cases(text, selector, bounds, target):
    rect = Rect.from_bounds(*bounds)
    res = integrate(f_(text), w_(selector, rect), rect, target)
    assert res.converged
    assert res.error_bound <= target
    assert abs(res.value - oracle(text, selector, rect)) <= res.error_bound


# -----------------------------
# Preconditions
# -----------------------------
@pytest.mark.parametrize("target", [0.0, -1.0, float("nan")])
def test_target_must_be_positive(target):
    with pytest.raises(PreconditionError):
        integrate(f_("t*s"), w_("const"), UNIT, target)


def test_max_cells_must_be_positive():
    with pytest.raises(PreconditionError):
        integrate(f_("t*s"), w_("const"), UNIT, 1e-3, max_cells=0)


def test_weight_domain_must_cover_rectangle():
    w = build_weight("const", Rect.from_bounds(0.0, 0.5, 0.0, 0.5).t_iv)
    with pytest.raises(PreconditionError):
        integrate(f_("t*s"), w, UNIT, 1e-3)


def test_rectangle_grid_sizes_are_reported():
    res = integrate(f_("t*s"), w_("const"), UNIT, 1e-1)
    assert (res.root_grid, res.cell_grid) == (201, 101)
    assert np.isfinite(res.rule_error_estimate)

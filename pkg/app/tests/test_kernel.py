import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from app.errors import PreconditionError
from app.kernel.schemas.kernel import KernelSpec
from app.kernel.services.kernel_service import eval_kernel, kernel_abs_integral, left_branch, right_branch
from app.quad.schemas.quad import Interval
from app.weight.services.weight_service import abs_moment, build_weight, mass

DOMAIN = Interval(lo=0.0, hi=4.0)
ONE = build_weight("const", DOMAIN)
LINEAR = build_weight("linear", DOMAIN)


def _k(w, lo, hi, split):
    return KernelSpec(weight=w, iv=Interval(lo=lo, hi=hi), split=split)


def test_kernel_branches():
    k = _k(ONE, 0.0, 1.0, 0.5)
    assert eval_kernel(k, 0.25) == 0.25
    assert eval_kernel(k, 0.75) == -0.25


def test_split_point_takes_second_branch():
    assert eval_kernel(_k(ONE, 0.0, 1.0, 0.5), 0.5) == -0.5


def test_vectorized_kernel():
    k = _k(ONE, 0.0, 1.0, 0.5)
    np.testing.assert_allclose(eval_kernel(k, np.array([0.0, 0.25, 0.5, 1.0])), [0.0, 0.25, -0.5, 0.0])


def test_kernel_outside_interval():
    with pytest.raises(PreconditionError):
        eval_kernel(_k(ONE, 0.0, 1.0, 0.5), 1.5)


def test_split_must_lie_in_interval():
    with pytest.raises(ValidationError):
        _k(ONE, 0.0, 1.0, 2.0)
    with pytest.raises(ValidationError):
        _k(ONE, 3.0, 5.0, 4.0)


def test_branch_helpers():
    k = _k(LINEAR, 1.0, 3.0, 2.0)
    assert float(left_branch(k, 2.0)) == 1.5
    assert float(right_branch(k, 2.0)) == -2.5


@pytest.mark.parametrize(
    "w, lo, hi, split, expected",
    [(ONE, 0.0, 1.0, 0.5, 0.25), (ONE, 0.0, 2.0, 0.0, 2.0), (LINEAR, 0.0, 2.0, 1.0, 1.0)],
)
def test_kernel_abs_integral_examples(w, lo, hi, split, expected):
    assert abs(kernel_abs_integral(_k(w, lo, hi, split)) - expected) <= 1e-12


@pytest.mark.parametrize("selector", ["const", "linear", "expr:1+u^2"])
def test_sign_structure(selector):
    w = build_weight(selector, DOMAIN)
    k = _k(w, 0.5, 3.0, 1.2)
    left = np.linspace(0.5, 1.2, 101)[:-1]
    right = np.linspace(1.2, 3.0, 100)
    assert np.all(eval_kernel(k, left) >= 0)
    assert np.all(eval_kernel(k, right) <= 0)


@pytest.mark.parametrize("selector", ["const", "linear", "expr:1+u^2"])
def test_jump_at_split_tends_to_mass(selector):
    w = build_weight(selector, DOMAIN)
    k = _k(w, 0.5, 3.0, 1.2)
    m = mass(w, k.iv)
    at_split = eval_kernel(k, 1.2)
    gaps = [abs(eval_kernel(k, 1.2 - eps) - at_split - m) for eps in (1e-6, 1e-8)]
    assert gaps[1] <= gaps[0] + 1e-10
    assert gaps[1] <= 1e-6


@settings(deadline=None, max_examples=25)
@given(
    st.sampled_from(["const", "linear", "expr:1+u^2"]),
    st.floats(min_value=0.0, max_value=1.5),
    st.floats(min_value=2.0, max_value=4.0),
    st.floats(min_value=0.0, max_value=1.0),
)
def test_abs_integral_equals_abs_moment(selector, lo, hi, frac):
    w = build_weight(selector, DOMAIN)
    split = min(hi, lo + frac * (hi - lo))
    k = _k(w, lo, hi, split)
    assert abs(kernel_abs_integral(k) - abs_moment(w, k.iv, split)) <= 1e-9

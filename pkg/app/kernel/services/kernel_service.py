# app/kernel/services/kernel_service.py
from __future__ import annotations

from typing import Optional

import numpy as np

from app.errors import PreconditionError
from app.kernel.schemas.kernel import KernelSpec
from app.quad.schemas.quad import Interval, QuadConfig
from app.quad.services.gauss_kronrod import integrate_1d_split
from app.weight.services.weight_service import cumulative_mass


def left_branch(k: KernelSpec, t, cfg: Optional[QuadConfig] = None) -> np.ndarray:
    """∫_{α₁}^t w(u) du, used on α₁ <= t < split (nonnegative)."""
    return cumulative_mass(k.weight, k.iv.lo, t, cfg)


def right_branch(k: KernelSpec, t, cfg: Optional[QuadConfig] = None) -> np.ndarray:
    """∫_{α₂}^t w(u) du, used on split <= t <= α₂ (nonpositive)."""
    return cumulative_mass(k.weight, k.iv.hi, t, cfg)


def eval_kernel(k: KernelSpec, t, cfg: Optional[QuadConfig] = None):
    scalar = np.ndim(t) == 0
    t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    if np.any(t_arr < k.iv.lo) or np.any(t_arr > k.iv.hi):
        raise PreconditionError(f"t outside the kernel interval [{k.iv.lo}, {k.iv.hi}]")
    # t == split belongs to the second branch
    left = t_arr < k.split
    out = np.empty(t_arr.shape, dtype=np.float64)
    if np.any(left):
        out[left] = left_branch(k, t_arr[left], cfg)
    if np.any(~left):
        out[~left] = right_branch(k, t_arr[~left], cfg)
    return float(out[0]) if scalar else out


def kernel_abs_integral(k: KernelSpec, cfg: Optional[QuadConfig] = None) -> float:
    """∫ |kernel(t)| dt over k.iv, integrated piecewise on each side of the kink."""
    kinks = k.weight.breakpoints
    total = 0.0
    if k.split > k.iv.lo:
        total += integrate_1d_split(
            lambda t: np.abs(left_branch(k, t, cfg)), Interval(lo=k.iv.lo, hi=k.split), kinks, cfg
        ).value
    if k.split < k.iv.hi:
        total += integrate_1d_split(
            lambda t: np.abs(right_branch(k, t, cfg)), Interval(lo=k.split, hi=k.iv.hi), kinks, cfg
        ).value
    return total

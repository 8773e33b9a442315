"""Pure-numpy gain kernels, used when the compiled extension is unavailable.

Mirrors ``_gains.pyx`` expression-for-expression so both backends evaluate the
same arithmetic in the same order.  Kind ids match ``shrinkage._KIND_ID``.
"""

import math

import numpy as np

MSE, WE, LOG_MSE, IS, IS_II, COSH, WCOSH = range(7)


def gain_scalar(kind: int, xi: float, alpha: float) -> float:
    if not xi > 0.0:
        return 0.0
    xi_eff = xi / alpha
    if xi_eff == 0.0:
        return 0.0
    u = 1.0 / xi_eff
    if math.isinf(u):
        return 0.0
    if kind == MSE:
        v = 1.0 - u
        return v if v > 0.0 else 0.0
    if kind == WE:
        return 1.0 / ((((360.0 * u + 48.0) * u - 1.0) * u + 1.0) * u + 1.0)
    if kind == LOG_MSE:
        t = ((((-210.0 * u - 10.0) * u - 0.75) * u + 0.5) * u)
        return math.exp(t) if t < 0.0 else 1.0
    if kind == IS:
        return 1.0 / ((840.0 * u + 60.0) * u * u * u + 1.0)
    if kind == IS_II:
        r = (((4200.0 * u + 360.0) * u - 3.0) * u + 1.0) * u + 1.0
        return 1.0 if r <= 1.0 else 1.0 / math.sqrt(r)
    if kind == COSH:
        r = (1.0 + u) / ((840.0 * u + 60.0) * u * u * u + 1.0)
        return 1.0 if r >= 1.0 else math.sqrt(r)
    if kind == WCOSH:
        r = (((8400.0 * u + 420.0) * u + 3.0) * u - 1.0) * u + 1.0
        return 1.0 if r <= 1.0 else 1.0 / math.sqrt(r)
    raise ValueError(f"unknown kind id {kind}")


def gain_into(kind: int, xi: np.ndarray, alpha: float, out: np.ndarray) -> None:
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        u = 1.0 / (xi / alpha)
        if kind == MSE:
            g = np.maximum(1.0 - u, 0.0)
        elif kind == WE:
            g = 1.0 / ((((360.0 * u + 48.0) * u - 1.0) * u + 1.0) * u + 1.0)
        elif kind == LOG_MSE:
            t = ((((-210.0 * u - 10.0) * u - 0.75) * u + 0.5) * u)
            g = np.where(t < 0.0, np.exp(np.minimum(t, 0.0)), 1.0)
        elif kind == IS:
            g = 1.0 / ((840.0 * u + 60.0) * u * u * u + 1.0)
        elif kind == IS_II:
            r = (((4200.0 * u + 360.0) * u - 3.0) * u + 1.0) * u + 1.0
            g = np.where(r <= 1.0, 1.0, 1.0 / np.sqrt(np.maximum(r, 1.0)))
        elif kind == COSH:
            r = (1.0 + u) / ((840.0 * u + 60.0) * u * u * u + 1.0)
            g = np.where(r >= 1.0, 1.0, np.sqrt(np.abs(r)))
        elif kind == WCOSH:
            r = (((8400.0 * u + 420.0) * u + 3.0) * u - 1.0) * u + 1.0
            g = np.where(r <= 1.0, 1.0, 1.0 / np.sqrt(np.maximum(r, 1.0)))
        else:
            raise ValueError(f"unknown kind id {kind}")
        # xi <= 0 and underflowed 1/xi_eff both shrink fully
        np.copyto(out, np.where((xi > 0.0) & np.isfinite(u), g, 0.0))

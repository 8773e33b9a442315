"""Risk-optimal shrinkage gains for the seven supported distortion measures.

Each measure maps an a-posteriori SNR ``xi = X**2 / sigma**2`` to a gain in
``[0, 1]`` applied multiplicatively to the DCT coefficient.  The parametric
refinement divides ``xi`` by ``alpha`` before evaluating the unit-alpha
formula, so ``gain(kind, xi, alpha) == gain(kind, xi / alpha, 1.0)`` exactly.

The kernels have two interchangeable backends: a compiled extension
(``riskshrink._gains``) and a numpy fallback (``riskshrink._gains_py``).
Whichever is importable wins; ``BACKEND`` records the choice.
"""

import enum

import numpy as np

from . import _gains_py

try:
    from . import _gains as _impl

    BACKEND = "compiled"
except ImportError:  # extension not built; numpy fallback
    _impl = _gains_py
    BACKEND = "python"


class ShrinkageKind(enum.Enum):
    """Distortion measure selecting the gain formula and risk estimate."""

    MSE = "mse"
    WE = "we"
    LOG_MSE = "log_mse"
    IS = "is"
    IS_II = "is_ii"
    COSH = "cosh"
    WCOSH = "wcosh"


_KIND_ID = {
    ShrinkageKind.MSE: _gains_py.MSE,
    ShrinkageKind.WE: _gains_py.WE,
    ShrinkageKind.LOG_MSE: _gains_py.LOG_MSE,
    ShrinkageKind.IS: _gains_py.IS,
    ShrinkageKind.IS_II: _gains_py.IS_II,
    ShrinkageKind.COSH: _gains_py.COSH,
    ShrinkageKind.WCOSH: _gains_py.WCOSH,
}


def _check_alpha(alpha: float) -> None:
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")


def gain(kind: ShrinkageKind, xi: float, alpha: float = 1.0) -> float:
    """Gain in [0, 1] for a single a-posteriori SNR value.

    ``xi = 0`` returns 0 for every measure: the coefficient carries no signal
    evidence and several formulas are singular there.
    """
    _check_alpha(alpha)
    if xi < 0.0:
        raise ValueError(f"xi must be nonnegative, got {xi}")
    return float(_impl.gain_scalar(_KIND_ID[kind], float(xi), float(alpha)))


def gain_array(kind: ShrinkageKind, xi: np.ndarray, alpha: float = 1.0) -> np.ndarray:
    """Vectorized :func:`gain` over an array of a-posteriori SNRs."""
    _check_alpha(alpha)
    xi = np.ascontiguousarray(xi, dtype=np.float64)
    if xi.size and np.nanmin(xi) < 0.0:
        raise ValueError("xi must be nonnegative")
    out = np.empty_like(xi)
    _impl.gain_into(_KIND_ID[kind], xi.ravel(), float(alpha), out.ravel())
    return out


def apply_shrinkage(
    coeffs: np.ndarray,
    xi_per_bin: np.ndarray,
    kind: ShrinkageKind,
    alpha: float = 1.0,
) -> np.ndarray:
    """Shrink DCT coefficients bin-wise: ``out[k] = gain(xi[k]) * coeffs[k]``."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    xi_per_bin = np.asarray(xi_per_bin, dtype=np.float64)
    if coeffs.shape != xi_per_bin.shape:
        raise ValueError(
            f"coeffs shape {coeffs.shape} does not match xi shape {xi_per_bin.shape}"
        )
    return gain_array(kind, xi_per_bin, alpha) * coeffs

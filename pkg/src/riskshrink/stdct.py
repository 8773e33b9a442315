"""Short-time analysis/synthesis: framing, windowing, orthonormal DCT, weighted
overlap-add.

The transform is the orthonormal DCT-II, so every analyzed frame satisfies
Parseval (sum of squares preserved) and i.i.d. time-domain noise of variance
``sigma**2`` keeps that variance per coefficient.  Synthesis applies the
analysis window a second time and normalizes by the summed squared window,
which reconstructs the interior of the signal exactly for any window/hop pair.
"""

from dataclasses import dataclass

import numpy as np
import scipy.fft

# Overlap-add positions where the summed squared window falls below this are
# emitted as zero instead of dividing.
_OLA_EPS = 1e-12


@dataclass(frozen=True)
class FrameGrid:
    """Frame layout of a signal: ``num_frames`` frames of ``frame_len`` samples,
    ``hop`` samples apart, covering ``padded_len`` samples."""

    frame_len: int
    hop: int
    num_frames: int
    padded_len: int


def make_frame_grid(signal_len: int, frame_len: int, hop: int) -> FrameGrid:
    """Lay out analysis frames over a signal of ``signal_len`` samples.

    ``padded_len`` is the smallest length >= ``signal_len`` such that
    ``padded_len - frame_len`` is a nonnegative multiple of ``hop``; a
    zero-length signal yields zero frames.
    """
    if frame_len <= 0:
        raise ValueError(f"frame_len must be positive, got {frame_len}")
    if hop <= 0 or hop > frame_len:
        raise ValueError(f"hop must satisfy 0 < hop <= frame_len, got {hop}")
    if signal_len <= 0:
        return FrameGrid(frame_len, hop, 0, 0)
    n_hops = max(0, -(-(signal_len - frame_len) // hop))  # ceil division
    padded_len = frame_len + n_hops * hop
    return FrameGrid(frame_len, hop, n_hops + 1, padded_len)


def hamming_window(frame_len: int) -> np.ndarray:
    """Periodic Hamming window, ``0.54 - 0.46*cos(2*pi*n/frame_len)``."""
    if frame_len <= 0:
        raise ValueError(f"frame_len must be positive, got {frame_len}")
    n = np.arange(frame_len)
    return 0.54 - 0.46 * np.cos(2.0 * np.pi * n / frame_len)


def frame_signal(signal: np.ndarray, grid: FrameGrid) -> np.ndarray:
    """Slice a signal into the grid's frames, zero-padding the tail.

    Returns an array of shape ``(num_frames, frame_len)``.
    """
    signal = np.asarray(signal, dtype=np.float64)
    padded = np.zeros(grid.padded_len)
    padded[: signal.shape[0]] = signal
    if grid.num_frames == 0:
        return np.zeros((0, grid.frame_len))
    idx = grid.hop * np.arange(grid.num_frames)[:, None] + np.arange(grid.frame_len)
    return padded[idx]


def dct_forward(windowed_frame: np.ndarray) -> np.ndarray:
    """Orthonormal DCT-II along the last axis."""
    windowed_frame = np.asarray(windowed_frame, dtype=np.float64)
    if windowed_frame.shape[-1] == 0:
        raise ValueError("cannot transform an empty frame")
    return scipy.fft.dct(windowed_frame, type=2, norm="ortho", axis=-1)


def dct_inverse(coeffs: np.ndarray) -> np.ndarray:
    """Exact inverse of :func:`dct_forward` (orthonormal DCT-III)."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if coeffs.shape[-1] == 0:
        raise ValueError("cannot transform an empty frame")
    return scipy.fft.idct(coeffs, type=2, norm="ortho", axis=-1)


def overlap_add(frames: np.ndarray, grid: FrameGrid, window: np.ndarray) -> np.ndarray:
    """Weighted overlap-add synthesis.

    Each time-domain frame is multiplied by the window and accumulated at its
    grid position; the result is normalized by the accumulated squared window.
    Positions where that normalizer is below ``1e-12`` come out as zero.
    """
    frames = np.asarray(frames, dtype=np.float64)
    window = np.asarray(window, dtype=np.float64)
    if frames.ndim != 2 or frames.shape[0] != grid.num_frames:
        raise ValueError(
            f"expected {grid.num_frames} frames, got shape {frames.shape}"
        )
    if frames.shape[1] != grid.frame_len or window.shape[0] != grid.frame_len:
        raise ValueError(
            f"frame/window length mismatch: frames {frames.shape}, "
            f"window {window.shape}, frame_len {grid.frame_len}"
        )
    out = np.zeros(grid.padded_len)
    norm = np.zeros(grid.padded_len)
    for i in range(grid.num_frames):
        start = i * grid.hop
        out[start : start + grid.frame_len] += frames[i] * window
        norm[start : start + grid.frame_len] += window * window
    covered = norm > _OLA_EPS
    out[covered] /= norm[covered]
    out[~covered] = 0.0
    return out

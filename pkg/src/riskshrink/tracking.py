"""Per-bin noise-variance tracking with a likelihood-ratio VAD gate and the
recursive inverse a-posteriori SNR estimate.

State is a value: every update returns a new ``NoiseTrackerState``.  A single
stream's updates are strictly sequential since each frame's estimate depends
on the previous one.
"""

from dataclasses import dataclass, replace

import numpy as np

# Decision-directed smoothing weight for the VAD-internal prior SNR.
_DD_WEIGHT = 0.98
# A-posteriori SNR cap; protects the statistic when a noise-variance bin is
# zero or vanishingly small.
_GAMMA_CAP = 1e6


@dataclass(frozen=True)
class VadDecision:
    """Outcome of the per-frame likelihood-ratio test.

    ``speech`` is True exactly when ``statistic`` exceeds the threshold.
    ``prior_snr`` is the decision-directed prior used to form the statistic,
    kept so the caller can persist it in the tracker state.
    """

    speech: bool
    statistic: float
    prior_snr: np.ndarray


@dataclass(frozen=True)
class NoiseTrackerState:
    """Per-bin noise variance plus the previous frame's coefficients needed by
    the SNR recursion."""

    noise_var: np.ndarray
    prev_denoised: np.ndarray
    prev_noisy: np.ndarray
    inv_xi: np.ndarray
    frames_seen: int
    prior_snr_vad: np.ndarray


def initialize(first_frames: np.ndarray, init_count: int = 10) -> NoiseTrackerState:
    """Build initial state from leading frames assumed to contain only noise.

    The per-bin variance is the average squared coefficient over the first
    ``init_count`` frames; the inverse SNR starts from the first frame with
    unit smoothing, i.e. ``noise_var / X**2``.
    """
    frames = np.atleast_2d(np.asarray(first_frames, dtype=np.float64))
    if init_count < 1:
        raise ValueError(f"init_count must be at least 1, got {init_count}")
    if frames.shape[0] < init_count:
        raise ValueError(
            f"need {init_count} initialization frames, got {frames.shape[0]}"
        )
    noise_var = np.mean(frames[:init_count] ** 2, axis=0)
    x0_sq = frames[0] ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_xi = np.where(x0_sq > 0.0, noise_var / x0_sq, np.inf)
    n_bins = frames.shape[1]
    return NoiseTrackerState(
        noise_var=noise_var,
        prev_denoised=np.zeros(n_bins),
        prev_noisy=frames[0].copy(),
        inv_xi=inv_xi,
        frames_seen=0,
        prior_snr_vad=np.zeros(n_bins),
    )


def vad(frame: np.ndarray, state: NoiseTrackerState, threshold: float) -> VadDecision:
    """Average per-bin log-likelihood ratio of speech presence.

    Per bin the term is ``gamma * rho / (1 + rho) - log(1 + rho)`` with
    ``gamma`` the a-posteriori SNR and ``rho`` a decision-directed prior SNR
    blending the previous denoised frame with the current observation.
    """
    x_sq = np.asarray(frame, dtype=np.float64) ** 2
    nv = state.noise_var
    with np.errstate(divide="ignore", invalid="ignore"):
        gamma = np.where(nv > 0.0, x_sq / nv, np.where(x_sq > 0.0, _GAMMA_CAP, 0.0))
        gamma = np.minimum(gamma, _GAMMA_CAP)
        dd = np.where(nv > 0.0, _DD_WEIGHT * state.prev_denoised**2 / nv, 0.0)
    rho = np.minimum(dd + (1.0 - _DD_WEIGHT) * np.maximum(gamma - 1.0, 0.0), _GAMMA_CAP)
    statistic = float(np.mean(gamma * rho / (1.0 + rho) - np.log1p(rho)))
    return VadDecision(speech=statistic > threshold, statistic=statistic, prior_snr=rho)


def update_noise(
    frame: np.ndarray,
    decision: VadDecision,
    state: NoiseTrackerState,
    eta: float = 0.98,
) -> NoiseTrackerState:
    """Exponential noise-variance update, frozen during speech frames."""
    if decision.speech:
        return state
    x_sq = np.asarray(frame, dtype=np.float64) ** 2
    return replace(state, noise_var=eta * state.noise_var + (1.0 - eta) * x_sq)


def update_inv_xi(
    frame: np.ndarray, state: NoiseTrackerState, beta: float = 0.98
) -> NoiseTrackerState:
    """Recursive inverse a-posteriori SNR.

    ``1/xi = beta * noise_var/X**2 + (1-beta) * max(1 - S_prev**2/X_prev**2, 0)``;
    the very first processed frame uses unit ``beta``.  Bins with ``X = 0``
    get an infinite inverse SNR, which downstream maps to zero gain.
    """
    x_sq = np.asarray(frame, dtype=np.float64) ** 2
    nv = state.noise_var
    with np.errstate(divide="ignore", invalid="ignore"):
        if state.frames_seen == 0:
            inv = np.where(x_sq > 0.0, nv / x_sq, np.inf)
        else:
            prev_sq = state.prev_noisy**2
            ratio = np.where(prev_sq > 0.0, state.prev_denoised**2 / prev_sq, 0.0)
            residual = np.maximum(1.0 - ratio, 0.0)
            inv = np.where(
                x_sq > 0.0, beta * nv / x_sq + (1.0 - beta) * residual, np.inf
            )
    return replace(state, inv_xi=inv)


def commit_frame(
    state: NoiseTrackerState,
    noisy: np.ndarray,
    denoised: np.ndarray,
    prior_snr: np.ndarray,
) -> NoiseTrackerState:
    """Record a processed frame so the next frame's recursions can see it."""
    return replace(
        state,
        prev_noisy=np.asarray(noisy, dtype=np.float64).copy(),
        prev_denoised=np.asarray(denoised, dtype=np.float64).copy(),
        prior_snr_vad=np.asarray(prior_snr, dtype=np.float64).copy(),
        frames_seen=state.frames_seen + 1,
    )

"""End-to-end frame-by-frame denoiser.

The signal is analyzed on a short-time DCT grid; the leading frames build the
initial noise statistics (they are assumed noise-only), after which every
frame, including those leading ones, is denoised in order: VAD decision,
noise-variance update, inverse-SNR update, per-bin gain, inverse transform,
weighted overlap-add.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import stdct, tracking
from .audio import AudioBuffer, read_wav, write_wav
from .shrinkage import ShrinkageKind, gain_array


@dataclass(frozen=True)
class DenoiserConfig:
    """Every tunable of the denoiser; defaults follow the standard operating
    point (40 ms frames, 75% overlap, smoothing constants 0.98, alpha 1.75)."""

    sample_rate: int = 8000
    frame_ms: float = 40.0
    overlap_fraction: float = 0.75
    kind: ShrinkageKind = ShrinkageKind.MSE
    alpha: float = 1.75
    beta: float = 0.98
    eta: float = 0.98
    init_noise_frames: int = 10
    vad_threshold: float = 0.15
    vad_hangover: int = 2

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        if self.frame_ms <= 0:
            raise ValueError(f"frame_ms must be positive, got {self.frame_ms}")
        raw_len = self.sample_rate * self.frame_ms / 1000.0
        if abs(raw_len - round(raw_len)) > 1e-9 or round(raw_len) < 1:
            raise ValueError(
                f"frame_ms={self.frame_ms} at {self.sample_rate} Hz is not a whole "
                f"number of samples"
            )
        if not 0.0 <= self.overlap_fraction < 1.0:
            raise ValueError(
                f"overlap_fraction must be in [0, 1), got {self.overlap_fraction}"
            )
        raw_hop = round(raw_len) * (1.0 - self.overlap_fraction)
        if abs(raw_hop - round(raw_hop)) > 1e-9 or round(raw_hop) < 1:
            raise ValueError(
                f"overlap_fraction={self.overlap_fraction} does not give a whole "
                f"number of hop samples"
            )
        if not self.alpha > 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        for name in ("beta", "eta"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must be in (0, 1], got {v}")
        if self.init_noise_frames < 1:
            raise ValueError(
                f"init_noise_frames must be at least 1, got {self.init_noise_frames}"
            )
        if self.vad_hangover < 0:
            raise ValueError(f"vad_hangover must be >= 0, got {self.vad_hangover}")

    @property
    def frame_len(self) -> int:
        return round(self.sample_rate * self.frame_ms / 1000.0)

    @property
    def hop(self) -> int:
        return round(self.frame_len * (1.0 - self.overlap_fraction))


@dataclass(frozen=True)
class DenoiseSummary:
    """Per-file run record; ``speech_fraction`` counts hangover-extended
    speech decisions."""

    frames: int
    speech_fraction: float


def _run(noisy: np.ndarray, config: DenoiserConfig, gain_fn=None):
    """Denoise a signal; returns (output, per-frame effective speech flags)."""
    x = np.asarray(noisy, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"expected a mono signal, got shape {x.shape}")
    if x.size and not np.all(np.isfinite(x)):
        raise ValueError("input contains NaN or Inf samples")
    frame_len, hop = config.frame_len, config.hop
    min_len = config.init_noise_frames * hop + frame_len
    if x.size < min_len:
        raise ValueError(
            f"signal too short: {x.size} samples, need at least {min_len} for "
            f"{config.init_noise_frames} initialization frames"
        )

    grid = stdct.make_frame_grid(x.size, frame_len, hop)
    window = stdct.hamming_window(frame_len)
    coeffs = stdct.dct_forward(stdct.frame_signal(x, grid) * window)

    state = tracking.initialize(
        coeffs[: config.init_noise_frames], config.init_noise_frames
    )
    if gain_fn is None:
        def gain_fn(xi):
            return gain_array(config.kind, xi, config.alpha)

    denoised = np.empty_like(coeffs)
    speech_flags = np.zeros(grid.num_frames, dtype=bool)
    hang = 0
    for i in range(grid.num_frames):
        frame = coeffs[i]
        decision = tracking.vad(frame, state, config.vad_threshold)
        if decision.speech:
            effective, hang = True, config.vad_hangover
        elif hang > 0:
            effective, hang = True, hang - 1
        else:
            effective = False
        speech_flags[i] = effective
        state = tracking.update_noise(
            frame, replace(decision, speech=effective), state, config.eta
        )
        state = tracking.update_inv_xi(frame, state, config.beta)
        with np.errstate(divide="ignore"):
            xi = np.where(state.inv_xi > 0.0, 1.0 / state.inv_xi, np.inf)
        shrunk = gain_fn(xi) * frame
        denoised[i] = shrunk
        state = tracking.commit_frame(state, frame, shrunk, decision.prior_snr)

    out = stdct.overlap_add(stdct.dct_inverse(denoised), grid, window)
    return out[: x.size], speech_flags


def denoise(noisy: np.ndarray, config: DenoiserConfig, _gain_fn=None) -> np.ndarray:
    """Denoise a signal, preserving its length exactly.

    ``_gain_fn`` is a test-only hook replacing the per-bin gain computation
    (callable mapping an xi array to a gain array).
    """
    out, _ = _run(noisy, config, _gain_fn)
    return out


def denoise_file(in_path, out_path, config: DenoiserConfig) -> DenoiseSummary:
    """Read a WAV file, denoise it, and write the result.

    The file's sample rate wins over ``config.sample_rate``; frame geometry is
    re-derived from it (and re-validated).
    """
    buf = read_wav(in_path)
    if buf.sample_rate != config.sample_rate:
        config = replace(config, sample_rate=buf.sample_rate)
    out, flags = _run(buf.samples, config)
    write_wav(out_path, AudioBuffer(out, buf.sample_rate))
    return DenoiseSummary(
        frames=int(flags.size),
        speech_fraction=float(np.mean(flags)) if flags.size else 0.0,
    )

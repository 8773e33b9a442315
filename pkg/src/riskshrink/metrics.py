"""Objective quality measures: global SNR, segmental SNR, and their gains."""

from dataclasses import dataclass

import numpy as np

# Returned when the test signal matches the reference (or nearly so).
SNR_CAP_DB = 100.0


@dataclass(frozen=True)
class GainReport:
    input_snr_db: float
    output_snr_db: float
    snr_gain_db: float
    input_ssnr_db: float
    output_ssnr_db: float
    ssnr_gain_db: float


def _check_pair(clean: np.ndarray, test: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    clean = np.asarray(clean, dtype=np.float64)
    test = np.asarray(test, dtype=np.float64)
    if clean.shape != test.shape:
        raise ValueError(f"length mismatch: {clean.shape} vs {test.shape}")
    if not np.any(clean != 0.0):
        raise ValueError("clean signal is identically zero")
    return clean, test


def global_snr_db(clean: np.ndarray, test: np.ndarray) -> float:
    """``10*log10(sum(clean**2) / sum((clean-test)**2))``, capped at +100 dB."""
    clean, test = _check_pair(clean, test)
    p_signal = float(np.sum(clean**2))
    p_error = float(np.sum((clean - test) ** 2))
    if p_error == 0.0:
        return SNR_CAP_DB
    return min(10.0 * np.log10(p_signal / p_error), SNR_CAP_DB)


def segmental_snr_db(
    clean: np.ndarray,
    test: np.ndarray,
    seg_len: int = 320,
    floor_db: float = -10.0,
    ceil_db: float = 35.0,
) -> float:
    """Mean of per-segment SNRs, each clamped to ``[floor_db, ceil_db]``.

    Only complete segments with nonzero clean energy contribute.
    """
    clean, test = _check_pair(clean, test)
    if seg_len <= 0:
        raise ValueError(f"seg_len must be positive, got {seg_len}")
    n_segs = clean.shape[0] // seg_len
    values = []
    for i in range(n_segs):
        s = clean[i * seg_len : (i + 1) * seg_len]
        t = test[i * seg_len : (i + 1) * seg_len]
        p_signal = float(np.sum(s**2))
        if p_signal == 0.0:
            continue
        p_error = float(np.sum((s - t) ** 2))
        if p_error == 0.0:
            values.append(ceil_db)
        else:
            snr = 10.0 * np.log10(p_signal / p_error)
            values.append(min(max(snr, floor_db), ceil_db))
    if not values:
        raise ValueError("no segment has nonzero clean energy")
    return float(np.mean(values))


def gain_report(
    clean: np.ndarray, noisy: np.ndarray, denoised: np.ndarray, seg_len: int = 320
) -> GainReport:
    """SNR/SSNR before and after denoising; gains are exact differences."""
    input_snr = global_snr_db(clean, noisy)
    output_snr = global_snr_db(clean, denoised)
    input_ssnr = segmental_snr_db(clean, noisy, seg_len)
    output_ssnr = segmental_snr_db(clean, denoised, seg_len)
    return GainReport(
        input_snr_db=input_snr,
        output_snr_db=output_snr,
        snr_gain_db=output_snr - input_snr,
        input_ssnr_db=input_ssnr,
        output_ssnr_db=output_ssnr,
        ssnr_gain_db=output_ssnr - input_ssnr,
    )

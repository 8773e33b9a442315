import numpy as np
import pytest

from riskshrink.audio import AudioBuffer


def make_voiced(
    sample_rate: int = 8000,
    duration: float = 3.0,
    f0: float = 120.0,
    silence: float = 0.25,
    level: float = 0.15,
) -> AudioBuffer:
    """Voiced-like test signal: harmonic stack with syllabic amplitude
    modulation and an exactly-silent lead-in for noise initialization."""
    t = np.arange(int(sample_rate * duration)) / sample_rate
    sig = np.zeros_like(t)
    for h in range(1, 13):
        f = f0 * h
        if f > 0.45 * sample_rate:
            break
        sig += np.sin(2.0 * np.pi * f * t + 0.7 * h) / h
    env = 0.5 * (1.0 - np.cos(2.0 * np.pi * 3.0 * t))
    env[t < silence] = 0.0
    sig *= env
    active = sig[sig != 0.0]
    rms = np.sqrt(np.mean(active**2)) if active.size else 1.0
    return AudioBuffer(level * sig / rms, sample_rate)


@pytest.fixture(scope="session")
def voiced_buffer() -> AudioBuffer:
    return make_voiced()

"""Shared numerical primitives: framing, spectra, cepstra, envelopes,
autocorrelation pitch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as sps

from .errors import ConfigError, TooShortError, UnvoicedSignalError
from .io import SampledSignal
from .validation import as_float_vector, check_power_of_two

LOG_FLOOR = 1e-10
VOICING_THRESHOLD = 0.3


@dataclass(frozen=True)
class FrameSeries:
    """Windowed analysis frames: (n_frames, frame_len) matrix plus the
    sample index of each frame center."""

    frames: np.ndarray
    frame_ms: float
    shift_ms: float
    centers: np.ndarray
    fs: float

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def frame_len(self) -> int:
        return self.frames.shape[1]


@dataclass(frozen=True)
class Spectrum:
    magnitudes: np.ndarray
    n_dft: int
    fs: float

    @property
    def bin_hz(self) -> float:
        return self.fs / self.n_dft


def window_function(name: str, length: int) -> np.ndarray:
    if name == "hamming":
        return np.hamming(length)
    if name == "rectangular":
        return np.ones(length)
    raise ConfigError(f"unknown window {name!r}")


def frame_signal(
    sig: SampledSignal,
    frame_ms: float = 25.0,
    shift_ms: float = 5.0,
    window: str = "hamming",
) -> FrameSeries:
    """Slice a signal into windowed frames; a trailing partial frame is
    dropped."""
    x = sig.samples
    frame_len = int(round(frame_ms * sig.fs / 1000.0))
    hop = max(int(round(shift_ms * sig.fs / 1000.0)), 1)
    if len(x) < frame_len or frame_len < 1:
        raise TooShortError(
            f"signal of {len(x)} samples shorter than one {frame_len}-sample frame"
        )
    n_frames = (len(x) - frame_len) // hop + 1
    idx = np.arange(frame_len)[None, :] + hop * np.arange(n_frames)[:, None]
    frames = x[idx] * window_function(window, frame_len)[None, :]
    centers = hop * np.arange(n_frames) + frame_len // 2
    return FrameSeries(frames, frame_ms, shift_ms, centers, sig.fs)


def magnitude_spectrum(frame, n_dft: int, fs: float) -> Spectrum:
    """Zero-padded DFT magnitude over bins 0..n_dft/2."""
    frame = as_float_vector(frame, "frame")
    n_dft = check_power_of_two(n_dft)
    if n_dft < len(frame):
        raise ConfigError(f"n_dft={n_dft} smaller than frame length {len(frame)}")
    return Spectrum(np.abs(np.fft.rfft(frame, n_dft)), n_dft, fs)


def real_cepstrum(frame, n_dft: int) -> np.ndarray:
    """Inverse DFT of log(|X| + floor); silence maps to a constant
    c0 = log(floor) instead of -inf."""
    frame = as_float_vector(frame, "frame")
    n_dft = check_power_of_two(n_dft)
    if n_dft < len(frame):
        raise ConfigError(f"n_dft={n_dft} smaller than frame length {len(frame)}")
    logmag = np.log(np.abs(np.fft.rfft(frame, n_dft)) + LOG_FLOOR)
    return np.fft.irfft(logmag, n_dft)


def hilbert_envelope(x) -> np.ndarray:
    """Magnitude of the analytic signal (one-sided spectrum doubling)."""
    x = as_float_vector(x, "signal")
    if x.size == 0:
        raise TooShortError("empty signal")
    return np.abs(sps.hilbert(x))


def mean_pitch_period(
    sig: SampledSignal, f0_range: tuple[float, float] = (50.0, 500.0)
) -> float:
    """Average pitch period in samples from the normalized autocorrelation
    of the central segment (up to 1 s).

    Raises UnvoicedSignalError when no autocorrelation peak in the lag
    window reaches the voicing threshold.
    """
    f_lo, f_hi = f0_range
    if not 0 < f_lo < f_hi:
        raise ConfigError(f"invalid f0 range {f0_range}")
    x = sig.samples
    seg_len = min(len(x), int(round(sig.fs)))
    start = (len(x) - seg_len) // 2
    seg = x[start : start + seg_len].astype(np.float64)
    seg = seg - seg.mean()
    lag_min = max(int(np.floor(sig.fs / f_hi)), 1)
    lag_max = int(np.ceil(sig.fs / f_lo))
    if len(seg) <= lag_max:
        raise TooShortError("signal shorter than one maximum pitch period")
    n_fft = 1 << int(np.ceil(np.log2(2 * len(seg))))
    spec = np.fft.rfft(seg, n_fft)
    acorr = np.fft.irfft(spec * np.conj(spec), n_fft)[: lag_max + 1]
    if acorr[0] <= 0:
        raise UnvoicedSignalError("zero-energy signal")
    norm = acorr / acorr[0]
    window = norm[lag_min : lag_max + 1]
    peak = int(np.argmax(window))
    if window[peak] < VOICING_THRESHOLD:
        raise UnvoicedSignalError(
            f"max normalized autocorrelation {window[peak]:.3f} below"
            f" voicing threshold {VOICING_THRESHOLD}"
        )
    return float(lag_min + peak)


def harmonic_amplitudes(
    frame, f0: float, fs: float, n_harmonics: int = 10, n_dft: int | None = None
) -> np.ndarray:
    """Harmonic magnitudes H_1..H_K read as spectral maxima within
    +-f0/4 of each k*f0.  Harmonics beyond Nyquist come back as NaN."""
    frame = as_float_vector(frame, "frame")
    if n_dft is None:
        n_dft = 1024 if fs <= 25000 else 2048
    while n_dft < len(frame):
        n_dft *= 2
    mags = np.abs(np.fft.rfft(frame, n_dft))
    bin_hz = fs / n_dft
    out = np.full(n_harmonics, np.nan)
    for k in range(1, n_harmonics + 1):
        lo = (k * f0 - f0 / 4.0) / bin_hz
        hi = (k * f0 + f0 / 4.0) / bin_hz
        lo_i = max(int(np.ceil(lo)), 0)
        hi_i = min(int(np.floor(hi)), len(mags) - 1)
        if lo_i > hi_i or k * f0 + f0 / 4.0 >= fs / 2:
            break
        out[k - 1] = np.max(mags[lo_i : hi_i + 1])
    return out

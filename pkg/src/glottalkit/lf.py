"""Liljencrants-Fant glottal pulse synthesis and full synthetic-voice
generation with ground truth.

One shape parameter (rd) controls the pulse through the Fant '95
regression onto the timing parameters (ra, rk, rg):

    ra = (-1 + 4.8 rd) / 100
    rk = (22.4 + 11.8 rd) / 100
    rg = rk / (4 (0.11 rd / (0.5 + 1.2 rk) - ra))

The pulse is the flow derivative: an exponentially growing sinusoid up to
the main excitation at te, then an exponential return phase to the period
end.  The return-phase constant is solved by bisection, and the growth
constant is solved so the sampled pulse sums to zero (area balance on the
grid it will actually be used on).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import signal as sps

from .errors import ConfigError, SynthesisError
from .io import SampledSignal

RD_MIN = 0.3
RD_MAX = 2.7

# Two vowel-like all-pole tracts used by the built-in oracle corpus.
TRACT_A = ((700.0, 90.0), (1200.0, 110.0), (2600.0, 160.0))
TRACT_B = ((450.0, 80.0), (1700.0, 120.0), (2700.0, 180.0))

NORMAL_LIKE = dict(jitter_pct=0.3, shimmer_pct=1.0, aspiration_snr_db=30.0)
PATHOLOGICAL_LIKE = dict(jitter_pct=2.0, shimmer_pct=8.0, aspiration_snr_db=10.0)


def rd_to_shape(rd: float) -> tuple[float, float, float]:
    """Map the rd shape parameter to (ra, rk, rg)."""
    if not RD_MIN <= rd <= RD_MAX:
        raise ConfigError(f"rd={rd} outside [{RD_MIN}, {RD_MAX}]")
    ra = (-1.0 + 4.8 * rd) / 100.0
    rk = (22.4 + 11.8 * rd) / 100.0
    denom = 0.11 * rd / (0.5 + 1.2 * rk) - ra
    if denom <= 0:
        raise SynthesisError(f"rd={rd} yields no valid rg")
    rg = rk / (4.0 * denom)
    return ra, rk, rg


def rd_to_open_quotient(rd: float) -> float:
    """LF-model open quotient te/T0 implied by rd."""
    _, rk, rg = rd_to_shape(rd)
    return (1.0 + rk) / (2.0 * rg)


@dataclass(frozen=True)
class LfParams:
    f0: float
    ee: float = 1.0
    rd: float = 1.0

    def __post_init__(self):
        if self.f0 <= 0:
            raise ConfigError("f0 must be positive")
        if self.ee <= 0:
            raise ConfigError("ee must be positive")
        rd_to_shape(self.rd)  # validates range and solvability

    @property
    def shape(self) -> tuple[float, float, float]:
        return rd_to_shape(self.rd)


@dataclass(frozen=True)
class SynthSpec:
    lf: LfParams
    formants: tuple[tuple[float, float], ...] = TRACT_A
    duration: float = 1.0
    fs: float = 25000.0
    jitter_pct: float = 0.0
    shimmer_pct: float = 0.0
    aspiration_snr_db: float = math.inf
    seed: int = 0

    def __post_init__(self):
        if self.duration <= 0:
            raise ConfigError("duration must be positive")
        if self.fs <= 0:
            raise ConfigError("fs must be positive")
        for freq, _bw in self.formants:
            if freq >= self.fs / 2:
                raise ConfigError(f"formant {freq} Hz above Nyquist")


@dataclass(frozen=True)
class GroundTruth:
    true_flow: np.ndarray
    true_flow_derivative: np.ndarray
    true_gcis: np.ndarray
    tract_polynomial: np.ndarray


def _solve_epsilon(ta: float, tr: float) -> float:
    """Nonzero root of eps*ta = 1 - exp(-eps*tr), bisected to 1e-12."""
    if ta <= 0 or tr <= 0 or ta >= tr:
        raise SynthesisError(f"degenerate return phase (ta={ta}, tr={tr})")

    def f(eps):
        return eps * ta - 1.0 + math.exp(-eps * tr)

    lo = 1e-12 / ta
    hi = 1.0 / ta
    while f(hi) < 0:
        hi *= 2.0
        if hi > 1e18 / ta:
            raise SynthesisError("return-phase constant did not converge")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12 * hi:
            break
    return 0.5 * (lo + hi)


def lf_pulse(params: LfParams, fs: float, n_samples: int | None = None) -> np.ndarray:
    """One period of the LF flow derivative, sampled at fs.

    The minimum is -ee at the main excitation instant te, and the pulse
    sums to zero on the sample grid.
    """
    t0 = 1.0 / params.f0
    n = int(round(fs * t0)) if n_samples is None else int(n_samples)
    if n < 8:
        raise SynthesisError("period too short to sample")
    actual_t0 = n / fs
    ra, rk, rg = params.shape
    tp = actual_t0 / (2.0 * rg)
    # snap the excitation instant onto the sample grid so the sampled
    # minimum is exactly -ee
    te_idx = int(round(tp * (1.0 + rk) * fs))
    te_idx = min(max(te_idx, int(np.floor(tp * fs)) + 1), n - 2)
    te = te_idx / fs
    ta = ra * actual_t0
    if te >= actual_t0 or te <= tp:
        raise SynthesisError("open phase exceeds the period")
    eps = _solve_epsilon(ta, actual_t0 - te)

    t = np.arange(n) / fs
    open_mask = t <= te
    wg = math.pi / tp
    # open phase, normalized so the value at te is exactly -ee
    sin_ratio = np.sin(wg * t[open_mask]) / math.sin(wg * te)
    t_open = t[open_mask] - te
    ret = t[~open_mask] - te
    e_tail = math.exp(-eps * (actual_t0 - te))
    return_phase = (-params.ee / (eps * ta)) * (np.exp(-eps * ret) - e_tail)
    return_sum = float(np.sum(return_phase))

    def pulse_sum(alpha):
        return float(np.sum(-params.ee * np.exp(alpha * t_open) * sin_ratio)) + return_sum

    lo, hi = -1.0 / te, 1.0 / te
    while pulse_sum(lo) < 0:
        lo *= 2.0
        if lo < -1e9 / te:
            raise SynthesisError("area balance did not converge (low)")
    while pulse_sum(hi) > 0:
        hi *= 2.0
        if hi > 1e9 / te:
            raise SynthesisError("area balance did not converge (high)")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if pulse_sum(mid) > 0:
            lo = mid
        else:
            hi = mid
    alpha = 0.5 * (lo + hi)

    pulse = np.empty(n)
    pulse[open_mask] = -params.ee * np.exp(alpha * t_open) * sin_ratio
    pulse[~open_mask] = return_phase
    # exact discrete balance: spread the leftover over the closed phase
    leftover = pulse.sum()
    closed = np.count_nonzero(~open_mask)
    if closed:
        pulse[~open_mask] -= leftover / closed
    else:
        pulse -= leftover / n
    return pulse


def tract_filter_sos(formants, fs: float) -> np.ndarray:
    """Cascade of two-pole resonators as second-order sections."""
    sections = []
    for freq, bw in formants:
        r = math.exp(-math.pi * bw / fs)
        theta = 2.0 * math.pi * freq / fs
        gain = 1.0 - 2.0 * r * math.cos(theta) + r * r
        sections.append([gain, 0.0, 0.0, 1.0, -2.0 * r * math.cos(theta), r * r])
    return np.array(sections)


def tract_polynomial(formants, fs: float) -> np.ndarray:
    poly = np.array([1.0])
    for freq, bw in formants:
        r = math.exp(-math.pi * bw / fs)
        theta = 2.0 * math.pi * freq / fs
        poly = np.convolve(poly, [1.0, -2.0 * r * math.cos(theta), r * r])
    return poly


def synthesize(spec: SynthSpec) -> tuple[SampledSignal, GroundTruth]:
    """Render a sustained synthetic vowel with per-period jitter and
    shimmer, open-phase-gated aspiration noise, a resonator tract and
    first-difference lip radiation.

    Ground truth (flow, flow derivative, GCIs, tract polynomial) is
    recorded before tract filtering.  Output is deterministic for a fixed
    seed.
    """
    rng = np.random.default_rng(spec.seed)
    fs = spec.fs
    n_total = int(round(spec.duration * fs))
    deriv = np.zeros(n_total)
    open_gate = np.zeros(n_total)
    gcis = []
    pos = 0
    while pos < n_total:
        f0_k = spec.lf.f0
        if spec.jitter_pct > 0:
            f0_k *= 1.0 + spec.jitter_pct / 100.0 * rng.uniform(-1.0, 1.0)
        ee_k = spec.lf.ee
        if spec.shimmer_pct > 0:
            ee_k *= 1.0 + spec.shimmer_pct / 100.0 * rng.uniform(-1.0, 1.0)
        ee_k = max(ee_k, 1e-6)
        pulse = lf_pulse(LfParams(f0_k, ee_k, spec.lf.rd), fs)
        n_k = len(pulse)
        gci = pos + int(np.argmin(pulse))
        take = min(n_k, n_total - pos)
        deriv[pos : pos + take] = pulse[:take]
        open_gate[pos : pos + min(int(np.argmin(pulse)) + 1, take)] = 1.0
        if gci < n_total - 1:
            gcis.append(gci)
        pos += n_k

    flow = np.cumsum(deriv) / fs
    source = flow.copy()
    if math.isfinite(spec.aspiration_snr_db):
        noise = rng.standard_normal(n_total)
        sos = sps.butter(4, 2000.0, btype="highpass", fs=fs, output="sos")
        noise = sps.sosfiltfilt(sos, noise) * open_gate
        p_noise = float(np.mean(noise**2))
        p_flow = float(np.mean((flow - flow.mean()) ** 2))
        if p_noise > 0:
            target = p_flow / (10.0 ** (spec.aspiration_snr_db / 10.0))
            source = flow + noise * math.sqrt(target / p_noise)

    tract_out = sps.sosfilt(tract_filter_sos(spec.formants, fs), source)
    samples = np.empty(n_total)
    samples[0] = 0.0
    samples[1:] = np.diff(tract_out)
    peak = np.max(np.abs(samples))
    if peak > 0:
        samples = samples * (0.5 / peak)

    truth = GroundTruth(
        true_flow=flow,
        true_flow_derivative=deriv,
        true_gcis=np.asarray(gcis, dtype=np.int64),
        tract_polynomial=tract_polynomial(spec.formants, fs),
    )
    return SampledSignal(samples, fs), truth


def oracle_corpus_specs(
    n_per_class: int,
    fs: float = 25000.0,
    duration: float = 1.0,
    seed: int = 42,
) -> list[tuple[str, SynthSpec]]:
    """Two-class synthetic corpus: weak-excitation, breathy, jittery and
    noisy vowels versus strong, clean ones.

    Exists to exercise the pipeline end to end, not to claim clinical
    realism.
    """
    rng = np.random.default_rng(seed)
    items = []
    for label, profile, rd_range, ee_range in (
        ("normal", NORMAL_LIKE, (0.8, 1.4), (0.7, 1.2)),
        ("pathological", PATHOLOGICAL_LIKE, (1.7, 2.5), (0.25, 0.55)),
    ):
        for i in range(n_per_class):
            f0 = float(rng.uniform(100.0, 220.0))
            rd = float(rng.uniform(*rd_range))
            ee = float(rng.uniform(*ee_range))
            tract = TRACT_A if i % 2 == 0 else TRACT_B
            spec = SynthSpec(
                lf=LfParams(f0, ee, rd),
                formants=tract,
                duration=duration,
                fs=fs,
                seed=int(rng.integers(0, 2**31 - 1)),
                **profile,
            )
            items.append((label, spec))
    return items

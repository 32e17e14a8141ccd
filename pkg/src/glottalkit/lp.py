"""Linear prediction: autocorrelation LP, weighted LP, residuals and
inverse filtering with lip-radiation cancellation.

Coefficients follow the predictor convention: the all-pole polynomial is
A(z) = 1 - sum_k a_k z^-k, so an AR process x[n] = 1.5 x[n-1] - 0.7 x[n-2]
+ w[n] has a = [1.5, -0.7].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DegenerateFrameError, SingularSystemError
from .io import SampledSignal
from .validation import as_float_vector


@dataclass(frozen=True)
class LpModel:
    order: int
    coefficients: np.ndarray  # a_1..a_p, predictor convention
    gain: float

    def polynomial(self) -> np.ndarray:
        """FIR coefficients of A(z) = [1, -a_1, ..., -a_p]."""
        return np.concatenate(([1.0], -self.coefficients))


@dataclass(frozen=True)
class LpModelSeries:
    """Per-frame models with their frame-center sample indices."""

    centers: np.ndarray
    models: list[LpModel]
    fallback_mask: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if len(self.centers) != len(self.models):
            raise ConfigError("centers and models length mismatch")
        if self.fallback_mask is None:
            object.__setattr__(
                self, "fallback_mask", np.zeros(len(self.models), dtype=bool)
            )

    def nearest(self, sample: int) -> int:
        """Index of the model whose frame center is closest to `sample`."""
        return int(np.argmin(np.abs(self.centers - sample)))


@dataclass(frozen=True)
class GlottalWaveform:
    """Estimated glottal flow (or approximate source) aligned 1:1 with the
    analyzed signal."""

    flow: np.ndarray
    flow_derivative: np.ndarray
    source_kind: str
    fs: float
    fallback_mask: np.ndarray | None = None


def autocorrelation(x: np.ndarray, max_lag: int) -> np.ndarray:
    n_fft = 1 << int(np.ceil(np.log2(2 * len(x))))
    spec = np.fft.rfft(x, n_fft)
    return np.fft.irfft(spec * np.conj(spec), n_fft)[: max_lag + 1]


def levinson(r: np.ndarray, order: int) -> tuple[np.ndarray, float, np.ndarray]:
    """Levinson-Durbin recursion.

    Returns (predictor coefficients, final error energy, reflection
    coefficients).
    """
    a = np.zeros(order)
    k_all = np.zeros(order)
    err = r[0]
    for i in range(order):
        acc = r[i + 1] - np.dot(a[:i], r[i:0:-1])
        k = acc / err
        if not np.isfinite(k) or abs(k) >= 1.0:
            # fp-degenerate frame (e.g. pure sine at machine precision):
            # retry once with a tiny white-noise ridge
            r = r.copy()
            r[0] *= 1.0 + 1e-9
            return levinson(r, order)
        k_all[i] = k
        a[: i + 1] = np.concatenate((a[:i] - k * a[i - 1 :: -1][:i], [k]))
        err *= 1.0 - k * k
    return a, float(err), k_all


def lp_autocorrelation(frame, order: int) -> LpModel:
    """Autocorrelation-method LP via Levinson-Durbin.

    The gain is sqrt of the mean prediction-error power over the frame.
    """
    frame = as_float_vector(frame, "frame")
    if len(frame) <= order:
        raise ConfigError(f"frame length {len(frame)} must exceed order {order}")
    r = autocorrelation(frame, order)
    if r[0] <= 0.0:
        raise DegenerateFrameError("zero-energy frame")
    a, err, _ = levinson(r, order)
    return LpModel(order, a, float(np.sqrt(max(err, 0.0) / len(frame))))


def _delay_matrix(x: np.ndarray, order: int) -> np.ndarray:
    """Rows n = 0..N+p-1, column j = x delayed by j with zero extension."""
    n_rows = len(x) + order
    cols = np.zeros((n_rows, order + 1))
    for j in range(order + 1):
        cols[j : j + len(x), j] = x
    return cols


def wlp(frame, order: int, weights) -> LpModel:
    """Weighted LP with autocorrelation-style (zero-extended) normal
    equations R_w a = r_w, R_w[i,j] = sum_n w[n] x[n-i] x[n-j].

    `weights` has the frame's length; it is extended over the final
    `order` zero-padded prediction points by repeating its last value, so
    uniform weights reduce exactly to lp_autocorrelation.  A singular
    system gets one diagonal-ridge retry before raising.
    """
    frame = as_float_vector(frame, "frame")
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1:
        raise ConfigError("weights must be one-dimensional")
    if len(frame) <= order:
        raise ConfigError(f"frame length {len(frame)} must exceed order {order}")
    n_ext = len(frame) + order
    if len(w) == len(frame):
        w_ext = np.concatenate((w, np.full(order, w[-1])))
    elif len(w) == n_ext:
        w_ext = w
    else:
        raise ConfigError(
            f"weights length {len(w)} matches neither frame ({len(frame)})"
            f" nor extended range ({n_ext})"
        )
    if np.any(w_ext < 0):
        raise ConfigError("weights must be non-negative")
    if not np.any(w_ext > 0):
        raise ConfigError("weights are identically zero")

    sqrt_w = np.sqrt(w_ext)[:, None]
    xmat = _delay_matrix(frame, order) * sqrt_w
    gram = xmat.T @ xmat
    big_r = gram[1:, 1:]
    rvec = gram[1:, 0]
    a = _solve_normal_equations(big_r, rvec, order)
    err = max(gram[0, 0] - a @ rvec, 0.0)
    return LpModel(order, a, float(np.sqrt(err / np.sum(w_ext))))


def _solve_normal_equations(big_r, rvec, order):
    try:
        a = np.linalg.solve(big_r, rvec)
        if np.all(np.isfinite(a)):
            return a
    except np.linalg.LinAlgError:
        pass
    ridge = 1e-9 * np.trace(big_r) / order
    if ridge <= 0:
        raise SingularSystemError("weighted normal equations have zero trace")
    try:
        a = np.linalg.solve(big_r + ridge * np.eye(order), rvec)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError("rank-deficient after regularization") from exc
    if not np.all(np.isfinite(a)):
        raise SingularSystemError("rank-deficient after regularization")
    return a


def lp_residual(sig: SampledSignal, series: LpModelSeries) -> np.ndarray:
    """Prediction residual using, for each sample, the model whose frame
    center is nearest.  The first `order` samples are zero."""
    x = sig.samples
    out = np.zeros_like(x)
    order = series.models[0].order
    bounds = _segment_bounds(series.centers, len(x))
    for i, model in enumerate(series.models):
        lo, hi = bounds[i]
        if lo >= hi:
            continue
        seg = np.arange(lo, hi)
        acc = x[seg].copy()
        for k in range(1, order + 1):
            valid = seg - k >= 0
            acc[valid] -= model.coefficients[k - 1] * x[seg[valid] - k]
        out[seg] = acc
    out[:order] = 0.0
    return out


def _segment_bounds(centers: np.ndarray, n: int) -> list[tuple[int, int]]:
    """Half-open sample ranges where each frame center is the nearest."""
    edges = [0]
    for i in range(len(centers) - 1):
        edges.append(int((centers[i] + centers[i + 1]) // 2 + 1))
    edges.append(n)
    return [(edges[i], edges[i + 1]) for i in range(len(centers))]


def inverse_filter_integrate(
    sig: SampledSignal,
    series: LpModelSeries,
    lip_radiation_rho: float = 0.99,
    frame_len: int | None = None,
    source_kind: str = "qcp",
) -> GlottalWaveform:
    """Inverse filter with per-frame A(z), cancel lip radiation with a
    leaky integrator 1/(1 - rho z^-1), then remove the integrator's
    residual offset: each nearest-center segment subtracts the flow mean
    over the full analysis-frame span around its center.

    rho = 0 degenerates to the plain residual (no integration, nothing to
    de-trend).
    """
    if not 0.0 <= lip_radiation_rho < 1.0:
        raise ConfigError("lip_radiation_rho must be in [0, 1)")
    residual = lp_residual(sig, series)
    fs = sig.fs
    if lip_radiation_rho == 0.0:
        flow = residual
    else:
        from scipy.signal import lfilter

        flow = lfilter([1.0], [1.0, -lip_radiation_rho], residual)
        if frame_len is None:
            frame_len = int(round(0.025 * fs))
        half = frame_len // 2
        bounds = _segment_bounds(series.centers, len(flow))
        means = np.empty(len(series.centers))
        for i, c in enumerate(series.centers):
            lo = max(int(c) - half, 0)
            hi = min(int(c) + half + 1, len(flow))
            means[i] = flow[lo:hi].mean() if hi > lo else 0.0
        for i, (lo, hi) in enumerate(bounds):
            flow[lo:hi] -= means[i]
    derivative = np.empty_like(flow)
    derivative[0] = 0.0
    derivative[1:] = np.diff(flow)
    return GlottalWaveform(flow, derivative, source_kind, fs, series.fallback_mask)

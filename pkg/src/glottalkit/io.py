"""Audio and manifest loading.

Signals are carried through the toolkit as :class:`SampledSignal`, a mono
float64 waveform in [-1, 1] plus its sampling frequency.  All processing
runs at the file's native rate; :func:`resample` is available when a
common rate is explicitly wanted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np
from scipy import signal as sps
from scipy.io import wavfile

from .errors import (
    ConfigError,
    EmptySignalError,
    FormatError,
    ManifestError,
    UnsupportedCodecError,
)
from .validation import check_positive

_LABEL_ALIASES = {
    "normal": "normal",
    "healthy": "normal",
    "pathological": "pathological",
    "pathology": "pathological",
}
TASKS = ("vowel-a", "vowel-i", "vowel-u", "sentence")


@dataclass(frozen=True)
class SampledSignal:
    """Mono waveform with its sampling frequency in Hz."""

    samples: np.ndarray
    fs: float

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.float64)
        if arr.ndim != 1:
            raise ConfigError("samples must be one-dimensional")
        if arr.size and not np.all(np.isfinite(arr)):
            raise EmptySignalError("signal contains non-finite samples")
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "fs", check_positive(self.fs, "fs"))

    def __len__(self):
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.fs


@dataclass(frozen=True)
class ManifestEntry:
    path: str
    label: str
    speaker: str
    task: str


@dataclass(frozen=True)
class DatasetManifest:
    entries: tuple[ManifestEntry, ...]

    def __len__(self):
        return len(self.entries)

    def class_counts(self) -> tuple[int, int]:
        """(normal, pathological) entry counts."""
        labels = [e.label for e in self.entries]
        return labels.count("normal"), labels.count("pathological")

    def require_both_classes(self):
        n_norm, n_path = self.class_counts()
        if n_norm == 0 or n_path == 0:
            raise ManifestError(
                f"both classes required before training, got {n_norm} normal"
                f" and {n_path} pathological"
            )


def load_wav(path) -> SampledSignal:
    """Read a RIFF/WAVE file into a normalized mono signal.

    PCM16 samples are scaled by 1/32768; IEEE float32 is taken as-is.
    Multichannel files keep channel 0 only.
    """
    try:
        fs, data = wavfile.read(path)
    except FileNotFoundError:
        raise
    except ValueError as exc:
        msg = str(exc)
        if "Unsupported" in msg or "Unknown wave file format" in msg or "bit depth" in msg:
            raise UnsupportedCodecError(f"{path}: {msg}") from exc
        raise FormatError(f"{path}: {msg}") from exc
    except Exception as exc:  # struct errors from truncated headers
        raise FormatError(f"{path}: malformed WAV ({exc})") from exc

    if data.ndim == 2:
        data = data[:, 0]
    if data.size == 0:
        raise EmptySignalError(f"{path}: empty data chunk")

    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype == np.float32 or data.dtype == np.float64:
        samples = data.astype(np.float64)
    else:
        raise UnsupportedCodecError(
            f"{path}: unsupported sample encoding {data.dtype}; "
            "expected PCM16 or IEEE float32"
        )
    return SampledSignal(samples, float(fs))


def write_wav(path, sig: SampledSignal, encoding: str = "pcm16"):
    """Write a signal as PCM16 (default) or float32 WAV."""
    if encoding == "pcm16":
        clipped = np.clip(sig.samples, -1.0, 32767.0 / 32768.0)
        data = np.round(clipped * 32768.0).astype(np.int16)
    elif encoding == "float32":
        data = sig.samples.astype(np.float32)
    else:
        raise ConfigError(f"unknown encoding {encoding!r}")
    wavfile.write(path, int(round(sig.fs)), data)


def load_manifest(path) -> DatasetManifest:
    """Parse a `path,label,speaker,task` CSV into a manifest.

    Labels are case-insensitive ("Healthy" normalizes to "normal");
    lines starting with ``#`` are ignored; duplicate paths are an error.
    """
    import csv

    entries = []
    seen = set()
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise ManifestError(f"{path}: empty manifest")
    header = [c.strip().lower() for c in rows[0]]
    required = ["path", "label", "speaker", "task"]
    for col in required:
        if col not in header:
            raise ManifestError(f"{path}: missing column {col!r}")
    idx = {col: header.index(col) for col in required}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) < len(header):
            raise ManifestError(f"{path}:{lineno}: short row")
        raw_label = row[idx["label"]].strip().lower()
        if raw_label not in _LABEL_ALIASES:
            raise ManifestError(f"{path}:{lineno}: unknown label {row[idx['label']]!r}")
        task = row[idx["task"]].strip().lower()
        if task not in TASKS:
            raise ManifestError(f"{path}:{lineno}: unknown task {row[idx['task']]!r}")
        p = row[idx["path"]].strip()
        if p in seen:
            raise ManifestError(f"{path}:{lineno}: duplicate path {p!r}")
        seen.add(p)
        entries.append(
            ManifestEntry(p, _LABEL_ALIASES[raw_label], row[idx["speaker"]].strip(), task)
        )
    if not entries:
        raise ManifestError(f"{path}: zero data rows")
    return DatasetManifest(tuple(entries))


def _rational_ratio(target_fs: float, fs: float) -> tuple[int, int]:
    """Up/down integers approximating target_fs/fs to within 1e-9 relative."""
    if float(target_fs).is_integer() and float(fs).is_integer():
        ti, fi = int(target_fs), int(fs)
        g = gcd(ti, fi)
        return ti // g, fi // g
    ratio = target_fs / fs
    limit = 1000
    while True:
        frac = Fraction(ratio).limit_denominator(limit)
        if abs(float(frac) - ratio) <= 1e-9 * ratio:
            return frac.numerator, frac.denominator
        limit *= 10


def resample(sig: SampledSignal, target_fs: float) -> SampledSignal:
    """Polyphase rational resampling with anti-alias cutoff at
    0.45 * min(fs, target_fs).  Output length is round(n * target_fs / fs).
    """
    target_fs = check_positive(target_fs, "target_fs")
    if target_fs == sig.fs:
        return SampledSignal(sig.samples.copy(), sig.fs)
    up, down = _rational_ratio(target_fs, sig.fs)
    cutoff = 0.45 * min(sig.fs, target_fs)
    ntaps = 2 * 10 * max(up, down) + 1
    taps = sps.firwin(ntaps, cutoff, fs=sig.fs * up, window=("kaiser", 5.0))
    out = sps.resample_poly(sig.samples, up, down, window=taps * up)
    n_out = int(np.floor(len(sig) * target_fs / sig.fs + 0.5))
    if len(out) > n_out:
        out = out[:n_out]
    elif len(out) < n_out:
        out = np.pad(out, (0, n_out - len(out)), mode="edge")
    return SampledSignal(out, target_fs)

import numpy as np
import pytest

from glottalkit.io import SampledSignal
from glottalkit.lf import LfParams, SynthSpec, synthesize

FS = 25000.0


def make_vowel(f0=150.0, rd=1.0, ee=1.0, fs=FS, duration=1.0, seed=7, **kw):
    spec = SynthSpec(lf=LfParams(f0, ee, rd), fs=fs, duration=duration, seed=seed, **kw)
    return synthesize(spec)


@pytest.fixture(scope="session")
def clean_vowel():
    """Jitter-free, noise-free 150 Hz vowel with ground truth."""
    return make_vowel()


@pytest.fixture(scope="session")
def clean_vowel_low():
    return make_vowel(f0=100.0, seed=11)


def impulse_train(f0, fs=FS, duration=1.0, amplitude=1.0):
    n = int(round(duration * fs))
    x = np.zeros(n)
    period = fs / f0
    idx = np.round(np.arange(period / 2, n - 1, period)).astype(int)
    x[idx] = amplitude
    return SampledSignal(x, fs), idx

"""Input validation helpers shared across the toolkit."""

import numpy as np

from .errors import ConfigError, DataError


def as_float_vector(x, name="x"):
    """Coerce to a 1-D float64 array, rejecting non-finite values."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ConfigError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains non-finite values")
    return arr


def check_positive(value, name):
    if not np.isfinite(value) or value <= 0:
        raise ConfigError(f"{name} must be positive, got {value!r}")
    return float(value)


def check_nonempty(x, name="signal"):
    if len(x) == 0:
        raise DataError(f"{name} is empty")
    return x


def check_matrix(x, name="X"):
    """Coerce to a 2-D float64 array with finite entries."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ConfigError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains non-finite values")
    return arr


def check_power_of_two(n, name="n_dft"):
    n = int(n)
    if n <= 0 or n & (n - 1):
        raise ConfigError(f"{name} must be a power of two, got {n}")
    return n

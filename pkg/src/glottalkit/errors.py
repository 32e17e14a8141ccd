"""Exception hierarchy.

``ConfigError`` maps to CLI exit code 2, ``DataError`` (and subclasses)
to exit code 3.
"""


class GlottalkitError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(GlottalkitError):
    """Invalid configuration, parameters or command-line arguments."""


class DataError(GlottalkitError):
    """Input data cannot be processed."""


class FormatError(DataError):
    """File is not a well-formed RIFF/WAVE container."""


class UnsupportedCodecError(DataError):
    """WAV encoding other than PCM16 or IEEE float32."""


class EmptySignalError(DataError):
    """Audio file contains no samples."""


class ManifestError(DataError):
    """Dataset manifest is malformed or inconsistent."""


class TooShortError(DataError):
    """Signal shorter than the minimum required by an operation."""


class UnvoicedSignalError(DataError):
    """No periodicity found where a voiced signal is required."""


class DegenerateFrameError(DataError):
    """Frame has no energy; linear prediction is undefined."""


class SingularSystemError(DataError):
    """Weighted normal equations are rank deficient beyond repair."""


class InsufficientEpochsError(DataError):
    """Fewer glottal closure instants than the operation needs."""


class AmplitudeQuotientError(DataError):
    """Flow-derivative minimum too small for amplitude quotients."""


class SynthesisError(DataError):
    """Glottal pulse synthesis failed to converge."""

"""Coincidence rates of down-converted photon pairs in absorbing crystals."""

from ._core import (
    ConvergenceError,
    Error,
    ExperimentConfig,
    ParseError,
    ScanResult,
    UsageError,
    ValidationError,
    __version__,
    amplitude,
    emit,
    load_config,
    noise_gain,
    preset_names,
    rate,
    run_preset,
)

__all__ = [
    "ConvergenceError",
    "Error",
    "ExperimentConfig",
    "ParseError",
    "ScanResult",
    "UsageError",
    "ValidationError",
    "__version__",
    "amplitude",
    "emit",
    "load_config",
    "noise_gain",
    "preset_names",
    "rate",
    "run_preset",
]

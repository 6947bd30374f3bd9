"""Exception types raised across sim-doa."""

from __future__ import annotations


class SimDoaError(ValueError):
    """Base class for domain errors."""


class ConfigError(SimDoaError):
    """Invalid or unreadable run configuration."""


class ModelFileError(SimDoaError):
    """Model file is unreadable, corrupted or does not match its geometry."""


class NonPhysicalDirectionError(SimDoaError):
    """Electrical angles that no physical arrival direction can produce."""


class DegenerateResponseError(SimDoaError):
    """SIM response is identically zero, so no scaling factor fits it."""


__all__ = [
    "SimDoaError",
    "ConfigError",
    "ModelFileError",
    "NonPhysicalDirectionError",
    "DegenerateResponseError",
]

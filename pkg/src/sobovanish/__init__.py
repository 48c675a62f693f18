"""Fractional Sobolev norms of radial indicator fields and the short-path
construction behind vanishing H^s geodesic distance on diffeomorphism groups
(0 <= s < 1/2)."""
from ._accel import BACKEND
from .errors import (
    AccuracyError,
    ConfigError,
    ConstructionError,
    DiffeomorphismError,
    DomainError,
    PoleError,
    StiffnessError,
    SupportOverflowError,
    SynthesisError,
)

__version__ = "0.1.0"

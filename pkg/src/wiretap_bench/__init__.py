"""Numerical toolkit for secrecy over the Gaussian wiretap channel when
transmitting above the secrecy capacity."""

__version__ = "0.1.0"

from .channel import (CapacitySummary, RateAssessment, Regime, WiretapChannel,  # noqa: E402
                      assess_rate, capacities, wyner_operating_points)
from .errors import (ConfigError, DomainError, InfeasibleError, NumericError,  # noqa: E402
                     WiretapError)

__all__ = [
    "CapacitySummary", "RateAssessment", "Regime", "WiretapChannel",
    "assess_rate", "capacities", "wyner_operating_points",
    "ConfigError", "DomainError", "InfeasibleError", "NumericError", "WiretapError",
]

"""Gaussian wiretap channel: capacities and rate-regime classification.

All capacities are in bits per channel use.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def awgn_capacity(snr: float) -> float:
    """Shannon capacity 0.5*log2(1+snr) of a real AWGN channel."""
    return 0.5 * math.log2(1.0 + snr)


@dataclass(frozen=True)
class WiretapChannel:
    """Bob sees X + N1, Eve sees X + N2, with E[X^2] <= power."""

    sigma1_sq: float
    sigma2_sq: float
    power: float

    def __post_init__(self):
        if not (self.sigma1_sq > 0 and math.isfinite(self.sigma1_sq)):
            raise DomainError(f"sigma1_sq must be positive, got {self.sigma1_sq}")
        if not (self.sigma2_sq > 0 and math.isfinite(self.sigma2_sq)):
            raise DomainError(f"sigma2_sq must be positive, got {self.sigma2_sq}")
        if not (self.power >= 0 and math.isfinite(self.power)):
            raise DomainError(f"power must be non-negative, got {self.power}")

    @classmethod
    def from_db(cls, sigma1_sq: float, sigma2_sq: float, power_db: float) -> "WiretapChannel":
        return cls(sigma1_sq, sigma2_sq, db_to_linear(power_db))

    @property
    def degraded(self) -> bool:
        """True when Eve's channel is noisier than Bob's."""
        return self.sigma1_sq < self.sigma2_sq

    @property
    def snr_bob(self) -> float:
        return self.power / self.sigma1_sq

    @property
    def snr_eve(self) -> float:
        return self.power / self.sigma2_sq

    def with_power(self, power: float) -> "WiretapChannel":
        return WiretapChannel(self.sigma1_sq, self.sigma2_sq, power)


@dataclass(frozen=True)
class CapacitySummary:
    c1: float
    c2: float
    cs: float
    snr_bob: float
    snr_eve: float


class Regime(str, enum.Enum):
    UNRELIABLE = "UNRELIABLE"
    SECURE_FULL_POWER = "SECURE_FULL_POWER"
    SECURE_REDUCED_POWER = "SECURE_REDUCED_POWER"
    DEGENERATE = "DEGENERATE"


@dataclass(frozen=True)
class RateAssessment:
    rate: float
    regime: Regime
    adjusted_power: float
    # open interval of admissible reduced powers; None outside SECURE_REDUCED_POWER
    power_interval: tuple[float, float] | None = None


def capacities(ch: WiretapChannel) -> CapacitySummary:
    c1 = awgn_capacity(ch.snr_bob)
    c2 = awgn_capacity(ch.snr_eve)
    return CapacitySummary(c1=c1, c2=c2, cs=max(0.0, c1 - c2),
                           snr_bob=ch.snr_bob, snr_eve=ch.snr_eve)


def power_for_rate(rate: float, noise_var: float) -> float:
    """Smallest power at which an AWGN channel of the given noise supports `rate` bits."""
    return noise_var * math.expm1(2.0 * rate * math.log(2.0))


def assess_rate(ch: WiretapChannel, rate: float,
                adjusted_power: float | None = None) -> RateAssessment:
    """Classify `rate` against (C2, C1).

    For 0 < rate <= C2 the transmit power is lowered to some P' with
    C2(P') < rate < C1(P'). Any P' in the open interval
    (sigma1^2 (2^{2R}-1), min(P, sigma2^2 (2^{2R}-1))) works; by default the
    geometric midpoint is used, or `adjusted_power` if given (validated).
    """
    caps = capacities(ch)
    if rate <= 0:
        return RateAssessment(rate, Regime.DEGENERATE, ch.power)
    if rate >= caps.c1:
        return RateAssessment(rate, Regime.UNRELIABLE, ch.power)
    if rate > caps.c2:
        return RateAssessment(rate, Regime.SECURE_FULL_POWER, ch.power)

    # rate <= c2 < c1 implies a degraded channel, so lo < hi
    lo = power_for_rate(rate, ch.sigma1_sq)
    hi = min(ch.power, power_for_rate(rate, ch.sigma2_sq))
    if adjusted_power is None:
        adjusted_power = math.sqrt(lo * hi)
    elif not lo < adjusted_power < hi:
        raise DomainError(
            f"adjusted_power {adjusted_power} outside feasible interval ({lo}, {hi})")
    return RateAssessment(rate, Regime.SECURE_REDUCED_POWER, adjusted_power, (lo, hi))


@dataclass(frozen=True)
class OperatingPoint:
    label: str
    rate: float
    equivocation_rate: float


def wyner_operating_points(ch: WiretapChannel) -> tuple[OperatingPoint, OperatingPoint]:
    """The (rate, equivocation-rate) points favoured by each secrecy criterion.

    A non-degraded channel has zero secrecy capacity; both points collapse
    to rate 0 there.
    """
    caps = capacities(ch)
    if not ch.degraded:
        return (OperatingPoint("probability-of-error view", 0.0, 0.0),
                OperatingPoint("equivocation view", 0.0, 0.0))
    return (OperatingPoint("probability-of-error view", caps.c1, caps.cs),
            OperatingPoint("equivocation view", caps.cs, caps.cs))

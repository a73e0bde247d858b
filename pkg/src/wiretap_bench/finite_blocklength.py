"""Normal-approximation machinery: Gaussian Q-function, Eve's channel
dispersion, the minimum rate that keeps Eve's error above a floor at block
length n, and the minimum block length meeting joint Bob/Eve targets.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy import special

from .channel import WiretapChannel, capacities
from .error_exponents import random_coding_exponent
from .errors import DomainError, InfeasibleError

LOG2E = math.log2(math.e)
MAX_BLOCKLENGTH = 2 ** 40


class DispersionVariant(str, enum.Enum):
    PAPER = "PAPER"  # single log2(e) factor
    SQUARED_LOG = "SQUARED_LOG"  # (log2 e)^2, bits^2 per channel use


@dataclass(frozen=True)
class BlocklengthQuery:
    n: int
    rate: float
    beta1: float
    beta2: float

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        for name in ("beta1", "beta2"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise DomainError(f"{name} must lie in (0, 1), got {v}")


def q_function(x: float) -> float:
    """Standard normal upper tail, 1/sqrt(2 pi) * int_x^inf exp(-t^2/2) dt."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def q_inverse(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise DomainError(f"q_inverse needs p in (0, 1), got {p}")
    return -float(special.ndtri(p))


def dispersion_eve(ch: WiretapChannel,
                   variant: DispersionVariant = DispersionVariant.PAPER) -> float:
    s2 = ch.snr_eve
    base = 0.5 * s2 * (s2 + 2.0) / (s2 + 1.0) ** 2
    if DispersionVariant(variant) is DispersionVariant.SQUARED_LOG:
        return base * LOG2E ** 2
    return base * LOG2E


def min_rate_for_eve_error(ch: WiretapChannel, n: int, beta2: float,
                           variant: DispersionVariant = DispersionVariant.PAPER) -> float:
    """Smallest rate (bits) at which Eve's error stays above beta2 at block length n.

    C2 - sqrt(V/n) Q^{-1}(beta2) + log2(n)/(2n); the last term is the
    per-channel-use form of the (1/2) log n correction.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    c2 = capacities(ch).c2
    v = dispersion_eve(ch, variant)
    return c2 - math.sqrt(v / n) * q_inverse(beta2) + math.log2(n) / (2.0 * n)


def _first_true(pred, start: int) -> int:
    """Smallest n >= start on the doubling/bisection path with pred(n) true."""
    if pred(start):
        return start
    lo, hi = start, max(2 * start, start + 1)
    while not pred(hi):
        lo, hi = hi, 2 * hi
        if hi > MAX_BLOCKLENGTH:
            raise InfeasibleError(f"no block length up to {MAX_BLOCKLENGTH} meets the target")
    # invariant: pred(lo) false, pred(hi) true
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def min_blocklength(ch: WiretapChannel, rate: float, beta1: float, beta2: float,
                    variant: DispersionVariant = DispersionVariant.PAPER) -> int:
    """Smallest n with Bob's random-coding bound <= beta1 and Eve's normal-
    approximation rate threshold <= rate.

    The returned n satisfies both criteria and n - 1 violates at least one.
    """
    BlocklengthQuery(1, rate, beta1, beta2)
    caps = capacities(ch)
    if rate <= 0 or rate >= caps.c1:
        raise InfeasibleError(f"rate {rate} outside (0, C1={caps.c1:.6g})")
    er = random_coding_exponent(ch.snr_bob, rate).exponent_nats
    if er <= 0.0:
        raise InfeasibleError("random-coding exponent is zero at this rate")

    def bob_ok(n: int) -> bool:
        return math.exp(-n * er) <= beta1

    def eve_ok(n: int) -> bool:
        return rate >= min_rate_for_eve_error(ch, n, beta2, variant)

    n_bob = _first_true(bob_ok, 1)
    return _first_true(eve_ok, n_bob)

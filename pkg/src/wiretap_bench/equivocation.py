"""Bounds on the equivocation H(W|Z^n) and H(W|Y^n), in bits."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import WiretapChannel, capacities
from .error_exponents import eve_error_tail
from .errors import DomainError


@dataclass(frozen=True)
class EquivocationBounds:
    fano_upper: float
    trivial_lower_rate: float
    phi_star_lower: float
    # phi* evaluated at the strong-converse lower bound on Eve's error
    phi_star_at_converse: float = 0.0
    converse_pe_lower: float = 0.0


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"binary_entropy needs p in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def fano_upper(pe: float, n: int, rate: float) -> float:
    """Fano's bound H(pe) + pe*n*R on the equivocation."""
    return binary_entropy(pe) + pe * n * rate


def trivial_eve_lower(ch: WiretapChannel, rate: float) -> float:
    """Per-symbol equivocation floor max(0, R - C2), valid for every codebook."""
    return max(0.0, rate - capacities(ch).c2)


def message_count(n: int, rate: float) -> int:
    return max(1, round(2.0 ** (n * rate)))


def phi_star_tail(tail: float, m: int | float) -> float:
    """phi* expressed through the complement t = 1 - pi.

    Near pi = 1 the complement carries all the precision, so callers that
    know t directly (e.g. exp(-n E)) should use this form.
    """
    if m < 1:
        raise DomainError(f"message count must be >= 1, got {m}")
    if not 0.0 <= tail <= 1.0:
        raise DomainError(f"tail must lie in [0, 1], got {tail}")
    # absolute slack covers the rounding of 1 - pi
    if tail < 1.0 / m - 4e-16:
        raise DomainError(f"error probability {1 - tail} exceeds 1 - 1/M for M={m}")
    tail = max(tail, 1.0 / m)
    if tail >= 1.0:
        return 0.0
    # segment between vertices (1-1/k, log2 k) and (1-1/(k+1), log2(k+1))
    k = min(math.floor(1.0 / tail), m)
    if k >= m:
        return math.log2(m)
    frac = (k + 1) * (1.0 - k * tail)
    return math.log2(k) + frac * math.log2(1.0 + 1.0 / k)


def phi_star(pi: float, m: int | float) -> float:
    """Piecewise-linear lower bound on H(W|Z) given MAP error pi among m messages.

    Interpolates the vertices (1 - 1/k, log2 k), k = 1..m.
    """
    if not 0.0 <= pi <= 1.0:
        raise DomainError(f"pi must lie in [0, 1], got {pi}")
    return phi_star_tail(1.0 - pi, m)


def eve_equivocation_report(ch: WiretapChannel, n: int, rate: float,
                            pe_eve: float | None = None) -> EquivocationBounds:
    """Bundle Eve's equivocation bounds for a given (or bounded) error probability.

    With pe_eve None, Eve's error is taken at its strong-converse lower bound,
    evaluated through the exact tail exp(-n E_A) rather than 1 - tail.
    """
    m = message_count(n, rate)
    if m == 1:
        return EquivocationBounds(0.0, 0.0, 0.0, 0.0, 0.0)
    tail = eve_error_tail(ch, n, rate)
    # a MAP error above 1 - 1/M is impossible; clip the bound there
    tail = max(tail, 1.0 / m)
    at_converse = phi_star_tail(tail, m)
    if pe_eve is None:
        pe_eve = 1.0 - tail
        phi_lower = at_converse
    else:
        phi_lower = phi_star(pe_eve, m)
    return EquivocationBounds(
        fano_upper=fano_upper(pe_eve, n, rate),
        trivial_lower_rate=trivial_eve_lower(ch, rate),
        phi_star_lower=phi_lower,
        phi_star_at_converse=at_converse,
        converse_pe_lower=1.0 - tail,
    )

"""Gallager E0 for the AWGN channel with Gaussian input, and the error-exponent
bounds built from it: random coding (reliability at Bob) and the strong
converse lower bound on Eve's error probability.

Exponent arithmetic is in nats; rates enter in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate, optimize

from .channel import WiretapChannel, awgn_capacity
from .errors import DomainError, NumericError
from .optimize import bracketed_max

LN2 = math.log(2.0)
# the strong-converse search never touches the pole of E0 at rho = -1
RHO_MIN_CONVERSE = -1.0 + 1e-6


@dataclass(frozen=True)
class ExponentResult:
    rho_star: float
    exponent_nats: float
    bound_value: float | None = None


class BobBounds(NamedTuple):
    pe_upper: float
    equiv_upper: float  # bits
    rho_star: float


def _check(snr: float, rho: float) -> None:
    if snr < 0:
        raise DomainError(f"snr must be non-negative, got {snr}")
    if not -1.0 < rho <= 1.0:
        raise DomainError(f"rho must lie in (-1, 1], got {rho}")


def e0_gaussian_closed(snr: float, rho: float) -> float:
    """E0(rho) = (rho/2) ln(1 + snr/(1+rho)) for input N(0, P) and snr = P/sigma^2."""
    _check(snr, rho)
    return 0.5 * rho * math.log1p(snr / (1.0 + rho))


def _log_gauss(x, var):
    return -0.5 * (x * x / var + math.log(2.0 * math.pi * var))


def e0_quadrature(snr: float, rho: float, tol: float = 1e-9) -> float:
    """E0 by direct numerical integration of the Gallager function.

    Evaluates -ln int_y ( int_x p(x) p(y|x)^{1/(1+rho)} dx )^{1+rho} dy with
    unit noise variance and input variance `snr`, using nested adaptive
    Gauss-Kronrod quadrature. Independent of the closed form.
    """
    _check(snr, rho)
    s = 1.0 / (1.0 + rho)

    def log_inner(y: float) -> float:
        if snr == 0.0:
            return s * _log_gauss(y, 1.0)

        def logf(x):
            return _log_gauss(x, snr) + s * _log_gauss(y - x, 1.0)

        # log-integrand is concave with its mode between 0 and y
        a, b = min(0.0, y), max(0.0, y)
        if b - a > 0:
            opt = optimize.minimize_scalar(lambda x: -logf(x), bounds=(a, b),
                                           method="bounded", options={"xatol": 1e-10})
            peak = float(opt.x)
        else:
            peak = a
        m = logf(peak)
        w = 40.0 * math.sqrt(min(snr, 1.0 / s))
        val, err = integrate.quad(lambda x: math.exp(logf(x) - m), peak - w, peak + w,
                                  points=[peak], epsabs=0.0, epsrel=1e-12, limit=400)
        if not val > 0:
            raise NumericError(f"inner integral vanished at y={y} (snr={snr}, rho={rho})")
        return m + math.log(val)

    def log_outer_integrand(y: float) -> float:
        return log_inner(y) / s

    # widen the outer range until the integrand is negligible
    ref = log_outer_integrand(0.0)
    ymax = 8.0
    while log_outer_integrand(ymax) - ref > -80.0:
        ymax *= 2.0
        if ymax > 1e9:
            raise NumericError(f"outer integrand does not decay (snr={snr}, rho={rho})")
    val, err = integrate.quad(lambda y: math.exp(log_outer_integrand(y) - ref),
                              -ymax, ymax, points=[0.0], epsabs=0.0,
                              epsrel=tol, limit=400)
    if not val > 0 or err > 1e3 * tol * val:
        raise NumericError(
            f"outer quadrature did not converge: value={val}, error={err} "
            f"(snr={snr}, rho={rho}, range=+-{ymax})")
    return -(ref + math.log(val))


def random_coding_exponent(snr: float, rate: float) -> ExponentResult:
    """Gallager random-coding exponent max_{0<=rho<=1} E0(rho) - rho*R."""
    if rate < 0:
        raise DomainError(f"rate must be non-negative, got {rate}")
    r_nats = rate * LN2
    rho, val = bracketed_max(lambda p: e0_gaussian_closed(snr, p) - p * r_nats, 0.0, 1.0)
    if val <= 0.0:
        return ExponentResult(0.0, 0.0)
    return ExponentResult(rho, val)


def strong_converse_exponent(snr: float, rate: float) -> ExponentResult:
    """Exponent sup_{-1<rho<=0} E0(rho) - rho*R of the strong converse bound.

    Positive exactly when the rate exceeds 0.5*log2(1+snr).
    """
    r_nats = rate * LN2
    rho, val = bracketed_max(lambda p: e0_gaussian_closed(snr, p) - p * r_nats,
                             RHO_MIN_CONVERSE, 0.0)
    if val <= 0.0:
        return ExponentResult(0.0, 0.0)
    return ExponentResult(rho, val)


def bob_bounds(ch: WiretapChannel, n: int, rate: float) -> BobBounds:
    """Random-coding bounds on Bob's error probability and equivocation.

    pe_upper = exp(-n E_r(R)). The equivocation bound
    (1 + 1/rho) exp(-n (E0(rho) - rho R)) is minimized over rho in (0, 1]
    on its own, since the prefactor moves the optimum. Both are clamped:
    pe to [0, 1], equivocation (bits) to [0, nR].
    """
    snr = ch.snr_bob
    cap_bits = n * rate
    er = random_coding_exponent(snr, rate)
    if er.exponent_nats <= 0.0:
        return BobBounds(1.0, cap_bits, 0.0)
    pe = math.exp(-n * er.exponent_nats)

    r_nats = rate * LN2

    def neg_log_bound(p):
        return -(math.log1p(1.0 / p) - n * (e0_gaussian_closed(snr, p) - p * r_nats))

    rho, v = bracketed_max(neg_log_bound, 1e-9, 1.0)
    equiv = math.exp(-v) / LN2
    return BobBounds(min(pe, 1.0), min(max(equiv, 0.0), cap_bits), rho)


def eve_error_tail(ch: WiretapChannel, n: int, rate: float) -> float:
    """exp(-n E_A(R)): the complement of the lower bound on Eve's error."""
    ea = strong_converse_exponent(ch.snr_eve, rate)
    return math.exp(-n * ea.exponent_nats)


def eve_error_lower(ch: WiretapChannel, n: int, rate: float) -> float:
    """Lower bound 1 - exp(-n E_A(R)) on Eve's MAP error probability."""
    ea = strong_converse_exponent(ch.snr_eve, rate)
    return min(max(-math.expm1(-n * ea.exponent_nats), 0.0), 1.0)


def gaussian_mutual_information_nats(snr: float) -> float:
    return awgn_capacity(snr) * LN2

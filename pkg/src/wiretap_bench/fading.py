"""Fading wiretap channel with full CSI: secrecy capacity under the optimal
power policy, and Bob's capacity when transmitting only while q > r with
water-filling on q.

q = |h|^2 and r = |g|^2 are independent exponentials (Rayleigh fading) with
configurable means; both noise variances are 1. Lagrange multipliers are in
nats per unit power; capacities are reported in bits per channel use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, NumericError
from .parallel import ordered_map, substream

_TAG_FADING = 3
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class Integration:
    nodes: int = 128
    tail_quantile: float = 1e-8
    mc_samples: int = 1_000_000
    mc_chunk: int = 1 << 16
    seed: int = 0


@dataclass(frozen=True)
class FadingConfig:
    mean_q: float = 1.0
    mean_r: float = 1.0
    power: float = 1.0
    integration: Integration = field(default_factory=Integration)
    tol_lambda: float = 1e-3

    def __post_init__(self):
        if not self.mean_q > 0 or not self.mean_r > 0:
            raise DomainError("gain means must be positive")
        if not self.power >= 0:
            raise DomainError(f"power must be non-negative, got {self.power}")
        if not 0 < self.tol_lambda < 1:
            raise DomainError(f"tol_lambda must lie in (0, 1), got {self.tol_lambda}")

    def with_power(self, power: float) -> "FadingConfig":
        return replace(self, power=power)


@dataclass(frozen=True)
class FadingCapacityResult:
    capacity: float
    lam: float
    avg_power_used: float
    transmit_probability: float


@dataclass(frozen=True)
class MonteCarloEstimate:
    capacity: float
    capacity_ci: float
    avg_power: float
    avg_power_ci: float
    transmit_probability: float
    transmit_probability_ci: float


def power_alloc_secrecy(q, r, lam):
    """Optimal secrecy power P*(q, r) for multiplier lam (vectorized).

    Closed-form maximizer of ln(1+qP) - ln(1+rP) - lam*P over P >= 0:
    0.5*[sqrt((1/r-1/q)^2 + (4/lam)(1/r-1/q)) - (1/r+1/q)]^+ for q > r, else 0.
    Evaluated in a cancellation-free rearrangement, which also stays finite at r = 0.
    """
    lam = np.asarray(lam, dtype=float)
    if not np.all(lam > 0):
        raise DomainError(f"lambda must be positive, got {lam}")
    q = np.asarray(q, dtype=float)
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        u = r / q
        root = np.sqrt((1.0 - u) ** 2 + 4.0 * r * (1.0 - u) / lam)
        p = 2.0 * (q - r - lam) / (lam * q * (root + 1.0 + u))
    p = np.where(q - r > lam, p, 0.0)
    return p if p.ndim else float(p)


def power_alloc_waterfilling(q, r, lam):
    """(1/lam - 1/q)^+ while q > r, else 0."""
    lam = np.asarray(lam, dtype=float)
    if not np.all(lam > 0):
        raise DomainError(f"lambda must be positive, got {lam}")
    q = np.asarray(q, dtype=float)
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore"):
        p = 1.0 / lam - 1.0 / q
    p = np.where((q > r) & (q > lam), p, 0.0)
    return p if p.ndim else float(p)


def _secrecy_rate(q, r, p):
    return np.where(q > r, np.log2(1.0 + q * p) - np.log2(1.0 + r * p), 0.0)


def _main_rate(q, r, p):
    return np.where(q > r, np.log2(1.0 + q * p), 0.0)


_POLICIES = {
    "secrecy": (power_alloc_secrecy, _secrecy_rate),
    "main": (power_alloc_waterfilling, _main_rate),
}


def _inv_cdf(u, mean):
    return -mean * np.log1p(-u)


def _cdf(x, mean):
    return -np.expm1(-x / mean)


def _quadrature(cfg: FadingConfig, lam: float, kind: str):
    """Expected (power, rate, 1{q>r}) by Gauss-Legendre in CDF coordinates.

    Outer nodes over r's CDF; for each r the inner nodes cover q's CDF from
    the transmit threshold up to the 1 - tail_quantile point, so the kink of
    the policy sits on an interval endpoint rather than inside a panel.
    """
    alloc, rate = _POLICIES[kind]
    k = cfg.integration.nodes
    umax = 1.0 - cfg.integration.tail_quantile
    x, w = np.polynomial.legendre.leggauss(k)
    x01, w01 = 0.5 * (x + 1.0), 0.5 * w

    r = _inv_cdf(x01 * umax, cfg.mean_r)
    wr = w01 * umax
    q_hi = _inv_cdf(umax, cfg.mean_q)

    # transmit region for power: q > r + lam (secrecy) or q > max(r, lam) (main)
    thresh = r + lam if kind == "secrecy" else np.maximum(r, lam)
    u_lo = np.minimum(_cdf(thresh, cfg.mean_q), umax)
    span = umax - u_lo
    uq = u_lo[:, None] + span[:, None] * x01[None, :]
    wq = span[:, None] * w01[None, :]
    qq = _inv_cdf(uq, cfg.mean_q)
    rr = np.broadcast_to(r[:, None], qq.shape)
    pw = alloc(qq, rr, lam)
    avg_power = float(np.sum(wr[:, None] * wq * pw))
    cap = float(np.sum(wr[:, None] * wq * rate(qq, rr, pw)))

    # P(q > r) = E_r[1 - F_q(r)]; integrated on the same outer nodes
    p_tx = float(np.sum(wr * (1.0 - _cdf(r, cfg.mean_q))))
    if not q_hi > 0:
        raise NumericError("degenerate integration domain")
    return avg_power, cap, p_tx


def _solve_lambda(cfg: FadingConfig, kind: str) -> float:
    if not cfg.power > 0:
        raise DomainError("power must be positive to solve for the multiplier")
    target = cfg.power

    def avg_power(lam):
        return _quadrature(cfg, lam, kind)[0]

    # expected power is strictly decreasing in lam; bracket in log space
    lo, hi = 1e-3, 1.0
    for _ in range(200):
        if avg_power(lo) >= target:
            break
        lo /= 4.0
    else:
        raise NumericError(f"could not bracket lambda from below (searched down to {lo})")
    for _ in range(200):
        if avg_power(hi) <= target:
            break
        hi *= 4.0
    else:
        raise NumericError(f"could not bracket lambda from above (searched up to {hi})")

    tol = cfg.tol_lambda * target / 10.0
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        pm = avg_power(mid)
        if abs(pm - target) <= tol:
            return mid
        if pm > target:
            lo = mid
        else:
            hi = mid
    raise NumericError(f"lambda bisection stalled in [{lo}, {hi}]")


def solve_lambda_secrecy(cfg: FadingConfig) -> float:
    return _solve_lambda(cfg, "secrecy")


def solve_lambda_main(cfg: FadingConfig) -> float:
    return _solve_lambda(cfg, "main")


def _capacity(cfg: FadingConfig, kind: str) -> FadingCapacityResult:
    p_tx = cfg.mean_q / (cfg.mean_q + cfg.mean_r)
    if cfg.power == 0:
        return FadingCapacityResult(0.0, math.inf, 0.0, p_tx)
    lam = _solve_lambda(cfg, kind)
    avg_power, cap, p_tx_num = _quadrature(cfg, lam, kind)
    return FadingCapacityResult(cap, lam, avg_power, p_tx_num)


def fading_secrecy_capacity(cfg: FadingConfig) -> FadingCapacityResult:
    """E[(log2(1+qP*) - log2(1+rP*)) 1{q>r}] with P* at the solved multiplier."""
    return _capacity(cfg, "secrecy")


def fading_main_capacity(cfg: FadingConfig) -> FadingCapacityResult:
    """E[log2(1+qP) 1{q>r}] with water-filling on q restricted to q > r."""
    return _capacity(cfg, "main")


def monte_carlo(cfg: FadingConfig, lam: float, kind: str = "secrecy",
                threads: int | None = None) -> MonteCarloEstimate:
    """Seeded sample-mean estimates of rate, power and P(q > r) at a fixed multiplier.

    Samples are drawn in fixed-size chunks, each from its own substream, and
    reduced in chunk order, so the result does not depend on `threads`.
    """
    alloc, rate = _POLICIES[kind]
    integ = cfg.integration
    total = integ.mc_samples
    if total < 2:
        raise DomainError("need at least two Monte Carlo samples")
    chunks = [(i, min(integ.mc_chunk, total - i * integ.mc_chunk))
              for i in range(math.ceil(total / integ.mc_chunk))]

    def work(idx):
        i, size = chunks[idx]
        rng = substream(integ.seed, _TAG_FADING, i)
        q = rng.exponential(cfg.mean_q, size)
        r = rng.exponential(cfg.mean_r, size)
        if math.isinf(lam):
            p = np.zeros(size)
        else:
            p = alloc(q, r, lam)
        c = rate(q, r, p)
        t = (q > r).astype(float)
        return np.array([[c.sum(), (c * c).sum()],
                         [p.sum(), (p * p).sum()],
                         [t.sum(), t.sum()]])

    parts = ordered_map(work, range(len(chunks)), threads)
    acc = np.zeros((3, 2))
    for part in parts:
        acc += part
    means = acc[:, 0] / total
    var = np.maximum(acc[:, 1] / total - means ** 2, 0.0) * total / (total - 1)
    ci = _Z95 * np.sqrt(var / total)
    return MonteCarloEstimate(float(means[0]), float(ci[0]), float(means[1]), float(ci[1]),
                              float(means[2]), float(ci[2]))

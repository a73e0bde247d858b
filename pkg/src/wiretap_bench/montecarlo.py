"""Random Gaussian codebook simulation of the wiretap channel.

Each trial draws a codebook (fresh by default), a uniform message and
independent noises for Bob and Eve, ML-decodes at both receivers and counts
how many other codewords fall inside Eve's typicality sphere of squared
radius n*sigma2^2*(1+delta).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .channel import WiretapChannel, capacities
from .errors import ConfigError
from .parallel import ordered_map, substream

MAX_MESSAGES = 2 ** 26
_CHUNK_ROWS = 1 << 16
_Z95 = 1.959963984540054

_TAG_TRIAL = 1
_TAG_CODEBOOK = 2


@dataclass(frozen=True)
class SimConfig:
    n: int
    rate: float
    channel: WiretapChannel
    trials: int
    seed: int
    delta: float = 0.05
    fresh_codebook_per_trial: bool = True

    @property
    def messages(self) -> int:
        return max(1, round(2.0 ** (self.n * self.rate)))

    def validate(self) -> None:
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if self.trials < 1:
            raise ConfigError(f"trials must be positive, got {self.trials}")
        if self.delta < 0:
            raise ConfigError(f"delta must be non-negative, got {self.delta}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        check_resources(self.n * self.rate)


@dataclass(frozen=True)
class SimResult:
    trials: int
    messages: int
    pe_bob: float
    pe_bob_ci: float
    pe_eve: float
    pe_eve_ci: float
    confusion_mean: float
    confusion_var: float
    predicted_confusion: float
    sphere_estimate: float
    noise_outliers: int

    @property
    def confusion_cv(self) -> float:
        if self.confusion_mean == 0:
            return math.inf
        return math.sqrt(self.confusion_var) / self.confusion_mean

    def as_dict(self) -> dict:
        return asdict(self)


def check_resources(log2_messages: float) -> None:
    if log2_messages > math.log2(MAX_MESSAGES):
        raise ConfigError(
            f"2^{log2_messages:.4g} messages exceeds the guard of 2^{int(math.log2(MAX_MESSAGES))}")


def generate_codebook(n: int, m: int, power: float, rng: np.random.Generator) -> np.ndarray:
    """M x n matrix of i.i.d. N(0, power) entries."""
    if m < 1 or n < 1:
        raise ConfigError(f"codebook needs n >= 1 and M >= 1, got n={n}, M={m}")
    check_resources(math.log2(m))
    return rng.standard_normal((m, n)) * math.sqrt(power)


def squared_distances(codebook: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = np.empty(codebook.shape[0])
    for start in range(0, codebook.shape[0], _CHUNK_ROWS):
        block = codebook[start:start + _CHUNK_ROWS] - v
        np.einsum("ij,ij->i", block, block, out=out[start:start + _CHUNK_ROWS])
    return out


def ml_decode(codebook: np.ndarray, y: np.ndarray) -> int:
    """Minimum-distance decoding; ties go to the smallest index."""
    return int(np.argmin(squared_distances(codebook, np.asarray(y, dtype=float))))


def _count_in_sphere(d: np.ndarray, sent: int, radius_sq: float) -> int:
    inside = int(np.count_nonzero(d <= radius_sq))
    if d[sent] <= radius_sq:
        inside -= 1
    return inside


def confusion_count(codebook: np.ndarray, z: np.ndarray, sent: int,
                    sigma2_sq: float, delta: float) -> int:
    """Number of codewords other than `sent` within squared distance n*sigma2^2*(1+delta) of z."""
    n = codebook.shape[1]
    d = squared_distances(codebook, np.asarray(z, dtype=float))
    return _count_in_sphere(d, sent, n * sigma2_sq * (1.0 + delta))


def _trial(cfg: SimConfig, fixed_codebook: np.ndarray | None, idx: int):
    ch = cfg.channel
    m = cfg.messages
    rng = substream(cfg.seed, _TAG_TRIAL, idx)
    if fixed_codebook is None:
        codebook = generate_codebook(cfg.n, m, ch.power, rng)
    else:
        codebook = fixed_codebook
    sent = int(rng.integers(m))
    n1 = rng.standard_normal(cfg.n) * math.sqrt(ch.sigma1_sq)
    n2 = rng.standard_normal(cfg.n) * math.sqrt(ch.sigma2_sq)
    x = codebook[sent]
    bob_err = ml_decode(codebook, x + n1) != sent
    d_eve = squared_distances(codebook, x + n2)
    eve_err = int(np.argmin(d_eve)) != sent
    count = _count_in_sphere(d_eve, sent, cfg.n * ch.sigma2_sq * (1.0 + cfg.delta))
    noise_power = float(np.mean(n2 * n2))
    return bob_err, eve_err, count, noise_power


def _ci(p: float, trials: int) -> float:
    return _Z95 * math.sqrt(p * (1.0 - p) / trials)


def run_trials(cfg: SimConfig, threads: int | None = None) -> SimResult:
    cfg.validate()
    ch = cfg.channel
    fixed = None
    if not cfg.fresh_codebook_per_trial:
        fixed = generate_codebook(cfg.n, cfg.messages, ch.power,
                                  substream(cfg.seed, _TAG_CODEBOOK, 0))

    rows = ordered_map(lambda i: _trial(cfg, fixed, i), range(cfg.trials), threads)
    bob = np.array([r[0] for r in rows], dtype=np.int64)
    eve = np.array([r[1] for r in rows], dtype=np.int64)
    counts = np.array([r[2] for r in rows], dtype=np.int64)
    noise = np.array([r[3] for r in rows])

    # chi-square: mean of n squared N(0, s^2) has std s^2 * sqrt(2/n)
    noise_sd = ch.sigma2_sq * math.sqrt(2.0 / cfg.n)
    outliers = int(np.count_nonzero(np.abs(noise - ch.sigma2_sq) > 5.0 * noise_sd))

    t = cfg.trials
    pe_bob = int(bob.sum()) / t
    pe_eve = int(eve.sum()) / t
    c2 = capacities(ch).c2
    m = cfg.messages
    return SimResult(
        trials=t,
        messages=m,
        pe_bob=pe_bob,
        pe_bob_ci=_ci(pe_bob, t),
        pe_eve=pe_eve,
        pe_eve_ci=_ci(pe_eve, t),
        confusion_mean=int(counts.sum()) / t,
        confusion_var=float(counts.var(ddof=1)) if t > 1 else 0.0,
        predicted_confusion=(m - 1) * 2.0 ** (-cfg.n * c2),
        sphere_estimate=2.0 ** (cfg.n * (cfg.rate - c2)),
        noise_outliers=outliers,
    )

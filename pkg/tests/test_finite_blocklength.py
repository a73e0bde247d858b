import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from wiretap_bench.channel import WiretapChannel, capacities
from wiretap_bench.error_exponents import bob_bounds, random_coding_exponent
from wiretap_bench.errors import DomainError, InfeasibleError
from wiretap_bench.finite_blocklength import (BlocklengthQuery, DispersionVariant,
                                              dispersion_eve, min_blocklength,
                                              min_rate_for_eve_error, q_function, q_inverse)

LOG2E = 1.4426950408889634


def q_oracle(x):
    """Gaussian tail by adaptive quadrature of the density."""
    val, _ = integrate.quad(lambda t: math.exp(-t * t / 2) / math.sqrt(2 * math.pi),
                            x, math.inf, epsabs=1e-14, epsrel=1e-13)
    return val


def bisect_oracle(p, lo=-10.0, hi=10.0):
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if q_oracle(mid) > p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_q_function_values():
    assert q_function(0.0) == 0.5
    assert q_function(40.0) <= 1e-300
    assert q_function(1.2815515655) == pytest.approx(q_oracle(1.2815515655), rel=1e-10)
    assert q_function(1.2815515655) == pytest.approx(0.10, abs=1e-10)


@pytest.mark.parametrize("x", [-3.0, -0.7, 0.2, 1.0, 2.5, 6.0])
def test_q_function_matches_quadrature(x):
    assert q_function(x) == pytest.approx(q_oracle(x), rel=1e-9)


def test_q_inverse_values():
    assert q_inverse(0.5) == 0.0
    assert q_inverse(0.10) == pytest.approx(bisect_oracle(0.10), abs=1e-9)
    assert q_inverse(0.10) == pytest.approx(1.28155, abs=1e-5)
    assert q_inverse(0.90) == pytest.approx(-q_inverse(0.10), abs=1e-12)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
def test_q_inverse_domain(p):
    with pytest.raises(DomainError):
        q_inverse(p)


@given(st.floats(min_value=-5, max_value=8))
def test_q_roundtrip_and_symmetry(x):
    assert q_inverse(q_function(x)) == pytest.approx(x, abs=1e-10)
    assert q_function(x) + q_function(-x) == pytest.approx(1.0, abs=1e-15)


@given(st.floats(min_value=-8, max_value=-5))
def test_q_roundtrip_negative_tail(x):
    # Q(x) = 1 - Q(-x) is stored with absolute error ~ulp(1); the inverse can
    # only recover x to within that error divided by the density
    pdf = math.exp(-x * x / 2) / math.sqrt(2 * math.pi)
    assert q_inverse(q_function(x)) == pytest.approx(x, abs=1e-10 + 2.3e-16 / pdf)


@given(st.floats(min_value=-5, max_value=8), st.floats(min_value=1e-3, max_value=1))
def test_q_strictly_decreasing(x, h):
    assert q_function(x + h) < q_function(x)


@given(st.floats(min_value=-40, max_value=40), st.floats(min_value=0, max_value=1))
def test_q_non_increasing(x, h):
    assert q_function(x + h) <= q_function(x)


def test_dispersion():
    assert dispersion_eve(WiretapChannel(0.1, 1.0, 0.0)) == 0.0
    ch = WiretapChannel(0.1, 1.0, 1.0)
    assert dispersion_eve(ch) == pytest.approx(0.5 * 0.75 * LOG2E)
    assert dispersion_eve(ch) == pytest.approx(0.54101, abs=1e-5)
    assert dispersion_eve(ch, DispersionVariant.SQUARED_LOG) == pytest.approx(0.375 * LOG2E ** 2)
    big = WiretapChannel(0.1, 1.0, 1e9)
    assert dispersion_eve(big) == pytest.approx(0.72135, abs=1e-5)


def test_min_rate_half(paper_channel):
    c2 = capacities(paper_channel).c2
    for n in (1, 10, 200):
        assert min_rate_for_eve_error(paper_channel, n, 0.5) == c2 + math.log2(n) / (2 * n)


def test_min_rate_signs(paper_channel):
    c2 = capacities(paper_channel).c2
    n = 200
    hi = min_rate_for_eve_error(paper_channel, n, 0.9)
    assert hi > c2 + math.log2(n) / (2 * n)
    lo = min_rate_for_eve_error(paper_channel, n, 0.1)
    assert lo < c2


@given(st.floats(min_value=1e-6, max_value=0.5), st.floats(min_value=1e-3, max_value=0.4))
def test_min_rate_increasing_in_beta2(b, d):
    # a higher floor on Eve's error needs a higher rate
    ch = WiretapChannel(0.1, 1.5, 100.0)
    assert min_rate_for_eve_error(ch, 100, b + d) > min_rate_for_eve_error(ch, 100, b)


def test_min_rate_approaches_c2_from_below(paper_channel):
    c2 = capacities(paper_channel).c2
    vals = [min_rate_for_eve_error(paper_channel, n, 0.1) for n in (10 ** 3, 10 ** 5, 10 ** 7)]
    assert all(v < c2 for v in vals)
    assert vals[0] < vals[1] < vals[2]
    assert c2 - vals[2] < 1e-3


def test_min_blocklength_golden(paper_channel):
    n = min_blocklength(paper_channel, 4.0, 1e-3, 0.5)
    assert n == 21
    er = random_coding_exponent(paper_channel.snr_bob, 4.0).exponent_nats

    def ok(m):
        return (math.exp(-m * er) <= 1e-3
                and 4.0 >= min_rate_for_eve_error(paper_channel, m, 0.5))

    assert ok(n) and not ok(n - 1)
    assert bob_bounds(paper_channel, n, 4.0).pe_upper <= 1e-3


def test_min_blocklength_infeasible(paper_channel):
    c1 = capacities(paper_channel).c1
    for rate in (c1, c1 + 0.1, 0.0, -1.0):
        with pytest.raises(InfeasibleError):
            min_blocklength(paper_channel, rate, 1e-3, 0.5)


def test_min_blocklength_eve_dominated(paper_channel):
    # loose Bob target: the Eve criterion decides
    prev = None
    for beta2 in (0.9, 0.5, 0.1, 1e-3, 1e-9):
        n = min_blocklength(paper_channel, 3.2, 0.999999, beta2)
        if prev is not None:
            assert n <= prev
        prev = n


def test_min_blocklength_monotone_in_beta1_and_gap(paper_channel):
    ns = [min_blocklength(paper_channel, 4.0, b1, 0.5) for b1 in (1e-1, 1e-3, 1e-6, 1e-12)]
    assert ns == sorted(ns)
    ns = [min_blocklength(paper_channel, r, 1e-3, 0.5) for r in (3.5, 4.0, 4.5, 4.9)]
    assert ns == sorted(ns)


def test_blocklength_query_validation():
    BlocklengthQuery(10, 1.0, 0.1, 0.9)
    with pytest.raises(DomainError):
        BlocklengthQuery(0, 1.0, 0.1, 0.9)
    with pytest.raises(DomainError):
        BlocklengthQuery(1, 1.0, 1.0, 0.9)
    with pytest.raises(DomainError):
        min_blocklength(WiretapChannel(0.1, 1.5, 100.0), 4.0, 0.0, 0.5)

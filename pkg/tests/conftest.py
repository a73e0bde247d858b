import pytest

from wiretap_bench.channel import WiretapChannel


@pytest.fixture
def paper_channel():
    # sigma1^2 = 0.1, sigma2^2 = 1.5, P = 20 dB
    return WiretapChannel(0.1, 1.5, 100.0)


@pytest.fixture
def sim_channel():
    return WiretapChannel(0.1, 1.5, 1.0)

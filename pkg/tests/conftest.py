import mpmath as mp
import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

mp.mp.dps = 30


def mp_kernel(k, x, y):
    """E_k(x, y) = e^{xy} 1F1(k; 2k+1; -2xy), in extended precision."""
    u = mp.mpf(x) * mp.mpf(y)
    if k == 0:
        return mp.e**u
    return mp.e**u * mp.hyp1f1(k, 2 * k + 1, -2 * u)


def mp_kernel_osc(k, x, y):
    u = mp.mpf(x) * mp.mpf(y)
    if k == 0:
        return mp.e ** (-1j * u)
    even = mp.hyp0f1(k + 0.5, -(u**2) / 4)
    odd = u / (2 * k + 1) * mp.hyp0f1(k + 1.5, -(u**2) / 4)
    return even - 1j * odd


@pytest.fixture
def rng():
    return np.random.default_rng(20260416)

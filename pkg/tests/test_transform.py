import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dunklkit.core import Gaussian, Intertwined, KernelDecaying, Raw, Scaled, dunkl_kernel, dunkl_kernel_osc
from dunklkit.errors import DomainError, DunklError, EnvelopeError
from dunklkit.quadrature import QuadratureConfig
from dunklkit.transform import (
    FromTransform,
    TransformConfig,
    Transformed,
    Translated,
    dunkl_inverse_transform,
    dunkl_transform,
    dunkl_translate,
    gaussian_transform,
    inverse_intertwine,
    normalization,
    plancherel_sides,
)

HALF = Gaussian(0.5)


@pytest.mark.parametrize("k", [0, 0.5, 1, 2.5, 7])
def test_normalization_matches_mpmath(k):
    ref = 1 / (mp.mpf(2) ** (k + 0.5) * mp.gamma(k + 0.5))
    assert normalization(k) == pytest.approx(float(ref), rel=1e-15)
    cfg = TransformConfig(k)
    assert cfg.c_k == normalization(k)


def test_transform_config_rejects_negative_k():
    with pytest.raises(DomainError):
        TransformConfig(-1.0)


def test_transform_example():
    val = dunkl_transform(1, HALF, 1.0)
    assert abs(val - 0.6065306597126334) < 1e-12


def test_fourier_at_k0():
    # classical transform with 1/sqrt(2 pi): e^{-x^2} -> e^{-xi^2/4}/sqrt(2)
    xi = np.array([0.0, 0.5, 2.0])
    assert np.allclose(dunkl_transform(0, Gaussian(1.0), xi), np.exp(-xi**2 / 4) / math.sqrt(2), atol=1e-13)


@pytest.mark.parametrize("k", [0, 0.5, 1, 2.5])
def test_fixed_point(k):
    xi = np.linspace(-4, 4, 41)
    out = dunkl_transform(k, HALF, xi)
    assert np.max(np.abs(out - np.exp(-xi**2 / 2))) <= 1e-10


@pytest.mark.parametrize("k", [0.3, 1.7])
@pytest.mark.parametrize("p", [0.2, 1.0, 3.0])
def test_gaussian_closed_form(k, p):
    xi = np.linspace(-3, 3, 7)
    assert np.allclose(dunkl_transform(k, Gaussian(p), xi), gaussian_transform(k, p, xi), rtol=1e-10, atol=1e-11)


def test_transform_against_mpmath_oracle():
    # odd part present: f = e^{-x^2} (1 + x)
    k, xi = 0.8, 1.3
    spec = Raw(lambda t: np.exp(-t * t) * (1 + t), declared_envelope=Gaussian(1.0).envelope.__class__(p=1.0, rho=1.0, scale=2.0))
    c = normalization(k)
    re = mp.quad(lambda y: mp.e ** (-y * y) * (1 + y) * mp.re(_mp_osc(k, xi, y)) * abs(y) ** (2 * k), [-mp.inf, 0, mp.inf])
    im = mp.quad(lambda y: mp.e ** (-y * y) * (1 + y) * mp.im(_mp_osc(k, xi, y)) * abs(y) ** (2 * k), [-mp.inf, 0, mp.inf])
    val = dunkl_transform(k, spec, xi)
    assert abs(val - c * complex(re, im)) < 1e-12


def _mp_osc(k, x, y):
    from conftest import mp_kernel_osc

    return mp_kernel_osc(k, x, y)


def test_linearity():
    xi = np.array([-1.0, 0.3, 2.0])
    assert np.allclose(dunkl_transform(1.2, Scaled(Gaussian(0.7), 2.0), xi), 2 * dunkl_transform(1.2, Gaussian(0.7), xi))


def test_missing_envelope_is_rejected():
    with pytest.raises(EnvelopeError):
        dunkl_transform(1, Raw(np.cos), 0.5)


def test_evenness_of_transform():
    xi = np.linspace(0.1, 3, 6)
    spec = Raw(lambda t: np.exp(-t * t) * np.cos(t), parity="even", declared_envelope=Gaussian(1.0).envelope)
    a, b = dunkl_transform(1.4, spec, xi), dunkl_transform(1.4, spec, -xi)
    assert np.max(np.abs(a - b)) <= 1e-10
    assert np.max(np.abs(np.imag(a))) <= 1e-10


@pytest.mark.parametrize("k", [0, 0.5, 2])
def test_round_trip(k):
    x = np.array([0.0, 0.7, 2.0])
    g = Transformed(k, HALF)
    back = dunkl_inverse_transform(k, g, x)
    assert np.max(np.abs(back - np.exp(-x**2 / 2))) <= 1e-8


def test_inverse_at_origin_is_weighted_integral():
    k = 1.5
    val = dunkl_inverse_transform(k, Gaussian(1.0), 0.0)
    ref = 2 * normalization(k) * math.gamma(k + 0.5) / 2
    assert abs(val.imag) < 1e-14
    assert val.real == pytest.approx(ref, rel=1e-12)


def test_transformed_memo_and_k_check():
    t = Transformed(1.0, Gaussian(1.0), closed_form=False)
    a = t.evaluate(1.0, 0.4)
    assert t.evaluate(1.0, 0.4) == a
    assert 0.4 in t._cache
    assert abs(a - gaussian_transform(1.0, 1.0, 0.4)) < 1e-12
    with pytest.raises(DomainError):
        t.evaluate(2.0, 0.4)


# ---------------------------------------------------------------------------
# translation


@pytest.mark.parametrize("k", [0, 1, 2.2])
def test_translate_by_zero(k):
    x = np.array([-1.0, 0.5, 2.0])
    assert np.allclose(dunkl_translate(k, HALF, 0.0, x), np.exp(-x**2 / 2), atol=1e-12)


def test_k0_translation_is_a_shift():
    assert dunkl_translate(0, HALF, 1.0, 1.0) == pytest.approx(math.exp(-2), abs=1e-11)
    assert dunkl_translate(0, HALF, 1.0, 1.0, sign=-1) == pytest.approx(1.0, abs=1e-11)
    assert dunkl_translate(0, HALF, 1.0, 1.0, method="product") == pytest.approx(math.exp(-2), abs=1e-15)


def test_gaussian_product_formula_both_signs():
    # the E_k(x, y) form belongs to sign=-1; sign=+1 gives E_k(-x, y)
    minus = dunkl_translate(1, HALF, 1.0, 1.0, sign=-1)
    plus = dunkl_translate(1, HALF, 1.0, 1.0, sign=1)
    assert minus == pytest.approx(math.exp(-1) * math.cosh(1), abs=1e-12)
    assert minus == pytest.approx(0.5676676416, abs=1e-10)
    assert plus == pytest.approx(math.exp(-1) * dunkl_kernel(1, -1.0, 1.0), abs=1e-12)


@settings(max_examples=15)
@given(st.floats(0, 3), st.floats(-2, 2), st.floats(-2, 2), st.sampled_from([1, -1]))
def test_gaussian_product_formula_property(k, x, y, sign):
    ref = math.exp(-(x * x + y * y) / 2) * dunkl_kernel(k, -sign * x, y)
    for method in ("transform", "product"):
        assert dunkl_translate(k, HALF, y, x, sign=sign, method=method) == pytest.approx(ref, abs=1e-10)


def test_translation_symmetry_in_x_and_y():
    k = 0.9
    a = dunkl_translate(k, Gaussian(0.8), 0.6, -1.1)
    b = dunkl_translate(k, Gaussian(0.8), -1.1, 0.6)
    assert a == pytest.approx(b, abs=1e-12)


def test_translate_broadcasts():
    x = np.linspace(-1, 1, 4)[:, None]
    y = np.array([0.0, 0.5])[None, :]
    out = dunkl_translate(1.0, HALF, y, x)
    assert out.shape == (4, 2)


def test_product_route_requires_even():
    with pytest.raises(DomainError):
        dunkl_translate(1, KernelDecaying(1.0), 0.5, 0.5, method="product")
    with pytest.raises(DomainError):
        dunkl_translate(1, HALF, 0.5, 0.5, sign=2)


def test_realness_is_asserted():
    val = dunkl_translate(1.0, HALF, 0.7, 0.3, real=False)
    assert isinstance(val, complex) and abs(val.imag) < 1e-12
    with pytest.raises(DunklError):
        dunkl_translate(1.0, Gaussian(0.5, scale=1j), 0.7, 0.3)


@pytest.mark.parametrize("k", [1e-300, 1e-12, 1e-6])
def test_product_route_near_k0(k):
    # the V-average must tend to the k = 0 shift without endpoint trouble
    val = dunkl_translate(k, HALF, 0.7, 0.4, method="product")
    assert val == pytest.approx(math.exp(-(0.7**2 + 0.4**2) / 2) * dunkl_kernel(k, -0.4, 0.7), abs=1e-13)


@pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("y", [-0.8, 1.3])
def test_translation_transform_consistency(k, y):
    xi = np.linspace(-3, 3, 21)
    lhs = dunkl_transform(k, Translated(HALF, y, sign=1), xi)
    rhs = dunkl_kernel_osc(k, -y, xi) * np.exp(-xi**2 / 2)
    assert np.max(np.abs(lhs - rhs)) <= 1e-6


def test_translation_of_inverse_algebraic():
    f = FromTransform(lambda t: (1 + np.abs(t)) ** -6.0, power=6.0, name="ia6")
    a = dunkl_translate(0.5, f, 0.4, np.array([0.3]))
    b = dunkl_translate(0.5, f, 0.3, np.array([0.4]))
    assert a[0] == pytest.approx(b[0], rel=1e-9)
    assert f == FromTransform(lambda t: 0 * t, power=6.0, name="ia6")


# ---------------------------------------------------------------------------
# inverse intertwining


def test_w_at_k0_is_identity():
    x = np.array([-0.3, 1.2])
    assert np.allclose(inverse_intertwine(0, HALF, x), np.exp(-x**2 / 2))


@pytest.mark.parametrize("k", [0.5, 1.5])
def test_w_inverts_v(k):
    x = np.linspace(-1, 1, 9)
    back = inverse_intertwine(k, Intertwined(Gaussian(1.0)), x, method="taylor")
    assert np.max(np.abs(back - np.exp(-x**2))) <= 1e-10


@pytest.mark.parametrize("k", [0.5, 1.5])
def test_w_routes_agree(k):
    x = np.array([-0.9, 0.0, 0.4])
    a = inverse_intertwine(k, Gaussian(1.0), x, method="integral")
    b = inverse_intertwine(k, Gaussian(1.0), x, method="taylor")
    assert np.max(np.abs(a - b)) <= 1e-9


def test_w_of_kernel_is_exponential():
    k, a = 1.3, 0.4
    x = np.array([-0.5, 0.8])
    kern = Raw(lambda t: dunkl_kernel(k, t, a) if np.isrealobj(t) else _complex_kernel(k, t, a), parity="none")
    assert np.allclose(inverse_intertwine(k, kern, x, method="taylor"), np.exp(a * x), atol=1e-10)


def _complex_kernel(k, t, a):
    from dunklkit.core import intertwine

    return intertwine(k, lambda s: np.exp(a * s), t)


def test_w_fixes_wide_gaussian_locally():
    k = 1.0
    wide = Gaussian(1e-4)
    x = np.array([-0.5, 0.0, 0.5])
    assert np.allclose(inverse_intertwine(k, wide, x, method="taylor"), 1.0, atol=1e-4)


def test_w_literal_prefactor_breaks_round_trip():
    k = 1.0
    x = np.array([0.3])
    good = inverse_intertwine(k, Gaussian(1.0), x, method="integral")
    lit = inverse_intertwine(k, Gaussian(1.0), x, method="integral", literal_prefactor=True)
    assert lit[0] == pytest.approx(good[0] / normalization(k) ** 2, rel=1e-12)
    assert abs(lit[0] - good[0]) > 1


def test_w_method_validation():
    with pytest.raises(DomainError):
        inverse_intertwine(1.0, HALF, 0.1, method="fft")


# ---------------------------------------------------------------------------
# Plancherel


@pytest.mark.slow
@pytest.mark.parametrize("k", [0.5, 1.5])
def test_plancherel_gaussian_pair(k):
    lhs, rhs = plancherel_sides(k, Gaussian(0.5), Gaussian(2.0, scale=3.0), QuadratureConfig())
    assert abs(lhs - rhs) <= 1e-8 * abs(lhs)
    p, q = 0.5, 2.0
    # closed form: 3 * int (2p)^{-(k+1/2)} e^{-y^2/4p} e^{-q y^2} |y|^{2k} dy
    ref = 3 * (2 * p) ** (-(k + 0.5)) * math.gamma(k + 0.5) * (q + 1 / (4 * p)) ** (-(k + 0.5))
    assert lhs.real == pytest.approx(ref, rel=1e-9)

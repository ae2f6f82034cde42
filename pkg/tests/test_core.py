import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import mp_kernel, mp_kernel_osc
from dunklkit import core
from dunklkit.core import (
    Density,
    Gaussian,
    Intertwined,
    KernelDecaying,
    LaplaceDunkl,
    MeasureSpec,
    NamedClosedForm,
    Raw,
    RawTable,
    Scaled,
    SquaredArgument,
    Sum,
    apply_intertwining,
    dunkl_kernel,
    dunkl_kernel_osc,
    dunkl_operator_numeric,
    dunkl_operator_numeric_power,
    dunkl_operator_power_exact,
    intertwine,
)
from dunklkit.errors import DomainError, ModeError, PositivityError, StructureError

ks = st.floats(0, 3)
coords = st.floats(-5, 5)


def closed_e1(u):
    return math.sinh(u) / u + (u * math.cosh(u) - math.sinh(u)) / u**2


# ---------------------------------------------------------------------------
# kernel


@pytest.mark.parametrize("k", [0, 0.3, 1, 4.5])
def test_kernel_at_origin(k):
    assert dunkl_kernel(k, 0.0, 3.7) == 1.0


def test_kernel_examples():
    assert dunkl_kernel(0, 1, 1) == pytest.approx(math.e, rel=1e-15)
    assert dunkl_kernel(1, 1, 1) == pytest.approx(math.cosh(1.0), rel=1e-15)


@pytest.mark.parametrize("u", [-9.0, -2.5, -0.1, 0.4, 3.0, 12.0])
def test_kernel_k1_closed_form(u):
    assert dunkl_kernel(1, u, 1.0) == pytest.approx(closed_e1(u), rel=1e-12)


@pytest.mark.parametrize("k", [0.3, 1, 2.5, 5])
@pytest.mark.parametrize("u", [-650, -250, -101, -99, -30, -4, -0.2, 0.7, 6, 40, 300])
def test_kernel_against_oracle(k, u):
    ref = float(mp_kernel(k, u, 1))
    assert dunkl_kernel(k, u, 1.0) == pytest.approx(ref, rel=5e-14)


def test_kernel_domain_limit():
    with pytest.raises(DomainError):
        dunkl_kernel(1, 30.0, 30.0)


def test_kernel_rejects_negative_k():
    with pytest.raises(DomainError):
        dunkl_kernel(-0.5, 1.0, 1.0)


def test_kernel_positivity_is_asserted(monkeypatch):
    monkeypatch.setattr(core.specfun, "kummer_1f1_series", lambda a, b, z: -np.ones_like(z))
    with pytest.raises(PositivityError):
        dunkl_kernel(1.0, -1.0, 1.0)


@given(ks, coords, coords)
def test_kernel_symmetric(k, x, y):
    assert dunkl_kernel(k, x, y) == pytest.approx(dunkl_kernel(k, y, x), rel=1e-13)


@given(ks, coords, coords, st.floats(-3, 3))
def test_kernel_homogeneous(k, x, y, lam):
    assert dunkl_kernel(k, lam * x, y) == pytest.approx(dunkl_kernel(k, x, lam * y), rel=1e-12)


@given(ks, coords, coords)
def test_kernel_bounds(k, x, y):
    val = dunkl_kernel(k, x, y)
    assert 0 < val <= math.exp(abs(x) * abs(y)) * (1 + 1e-12)


def test_kernel_broadcasts():
    x = np.linspace(-2, 2, 5)[:, None]
    y = np.array([0.0, 1.0, -3.0])[None, :]
    out = dunkl_kernel(1.5, x, y)
    assert out.shape == (5, 3)
    assert out[2, 1] == 1.0


def test_osc_examples():
    assert dunkl_kernel_osc(2.0, 0.0, 5.0) == 1 + 0j
    assert abs(dunkl_kernel_osc(0, 1, math.pi) - (-1 + 0j)) < 1e-12
    val = dunkl_kernel_osc(1, 1, 1)
    # j_{1/2}(1) = sin 1 and j_{3/2}(1) = 3 (sin 1 - cos 1)
    assert val.real == pytest.approx(math.sin(1.0), rel=1e-15)
    assert val.imag == pytest.approx(-(math.sin(1.0) - math.cos(1.0)), rel=1e-14)
    assert val.imag == pytest.approx(-0.3011686789397567, rel=1e-12)


@given(ks, coords, coords)
def test_osc_against_oracle(k, x, y):
    assert abs(dunkl_kernel_osc(k, x, y) - complex(mp_kernel_osc(k, x, y))) < 1e-13


@given(ks, coords, coords)
def test_osc_bound_and_conjugation(k, x, y):
    val = dunkl_kernel_osc(k, x, y)
    assert abs(val) <= 1 + 1e-10
    other = dunkl_kernel_osc(k, -x, y)
    assert abs(val.real - other.real) <= 1e-13
    assert abs(val.imag + other.imag) <= 1e-13


# ---------------------------------------------------------------------------
# Dunkl operator


@pytest.mark.parametrize("k", [0, 0.5, 2])
@pytest.mark.parametrize("x", [-1.3, 0.0, 1e-7, 0.8])
def test_operator_simple_functions(k, x):
    assert dunkl_operator_numeric(k, np.ones_like, x) == pytest.approx(0.0, abs=1e-12)
    assert dunkl_operator_numeric(k, lambda t: t, x) == pytest.approx(1 + 2 * k, rel=1e-10)


def test_operator_eigen_example():
    k, y, x = 1.0, 2.0, 0.5
    f = KernelDecaying(y).bind(k)
    assert dunkl_operator_numeric(k, f, x) == pytest.approx(-y * dunkl_kernel(k, -x, y), abs=1e-6)


def test_operator_reports_step():
    _, h = dunkl_operator_numeric(0.5, np.sin, 3.0, return_step=True)
    assert h == pytest.approx(np.finfo(float).eps ** (1 / 3) * 3.0)
    val, h = dunkl_operator_numeric(0.5, np.sin, 3.0, step=1e-3, return_step=True)
    assert h == 1e-3


@pytest.mark.parametrize("k", [0.0, 0.7, 2.0])
def test_operator_on_polynomial(k):
    # T_k x^2 = 2x (even), T_k x^3 = (3 + 2k) x^2 (odd)
    x = np.linspace(-2, 2, 9)
    assert np.allclose(dunkl_operator_numeric(k, lambda t: t**2, x), 2 * x, atol=1e-8)
    assert np.allclose(dunkl_operator_numeric(k, lambda t: t**3, x), (3 + 2 * k) * x**2, atol=1e-8)


@given(ks, st.floats(-3, 3), st.floats(0, 3))
def test_eigenrelation_residuals(k, x, y):
    spec = KernelDecaying(y)
    target = -y * dunkl_kernel(k, -x, y)
    assert abs(dunkl_operator_numeric(k, spec.bind(k), x) - target) <= 1e-6 * max(1, abs(target))
    assert abs(dunkl_operator_power_exact(k, spec, 1, x) - target) <= 1e-12 * max(1, abs(target))


def test_power_exact_examples():
    for k in (0, 0.5, 1, 3):
        assert dunkl_operator_power_exact(k, KernelDecaying(2.0), 3, 1.0) == pytest.approx(
            -8 * dunkl_kernel(k, -1.0, 2.0), rel=1e-15
        )
        assert dunkl_operator_power_exact(k, Raw(np.cos), 0, 0.4) == math.cos(0.4)
    atom = LaplaceDunkl(MeasureSpec(atoms=((1.0, 1.0),)))
    assert dunkl_operator_power_exact(0, atom, 2, 0.0) == pytest.approx(1.0, rel=1e-15)


def test_power_exact_rejects_unstructured():
    with pytest.raises(StructureError):
        dunkl_operator_power_exact(1, Raw(np.cos), 2, 0.3)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("k", [0.0, 0.5, 1.5])
def test_numeric_power_tracks_exact(n, k):
    spec = KernelDecaying(1.5)
    x = np.linspace(-1.8, 1.8, 13)
    exact = dunkl_operator_power_exact(k, spec, n, x)
    numeric = dunkl_operator_numeric_power(k, spec.bind(k), n, x)
    assert np.max(np.abs(numeric - exact)) <= 1e-6 * 10**n * max(1, np.max(np.abs(exact)))


def test_numeric_power_order_cap():
    with pytest.raises(ModeError):
        dunkl_operator_numeric_power(1, np.cos, 5, 0.1)


def test_laplace_power_exact_against_mpmath():
    k, p = 0.8, 0.6
    mu = MeasureSpec(atoms=((0.5, 2.0), (1.7, 0.3)), density=Density(p, rho=1.0, scale=0.5))
    spec = LaplaceDunkl(mu)
    for n in (0, 1, 4):
        for x in (-1.5, 0.0, 2.0):
            dens = mp.quad(lambda t: t**n * mp_kernel(k, -x, t) * 0.5 * t * mp.e ** (-p * t * t), [0, mp.inf])
            atoms = sum(w * t**n * mp_kernel(k, -x, t) for t, w in mu.atoms)
            ref = (-1) ** n * float(dens + atoms)
            assert dunkl_operator_power_exact(k, spec, n, x) == pytest.approx(ref, rel=1e-9)


# ---------------------------------------------------------------------------
# specs


def test_measure_validation():
    with pytest.raises(DomainError):
        MeasureSpec(atoms=((-1.0, 1.0),))
    with pytest.raises(DomainError):
        MeasureSpec(atoms=((1.0, -1.0),))
    with pytest.raises(DomainError):
        Density(p=0.0)
    assert MeasureSpec().is_zero
    assert LaplaceDunkl(MeasureSpec()).evaluate(1.0, 0.3) == 0.0


def test_embedded_k_must_match():
    with pytest.raises(DomainError):
        KernelDecaying(2.0, k=1.0).evaluate(0.5, 0.1)
    with pytest.raises(DomainError):
        KernelDecaying(-1.0)


def test_mills_closed_form_is_laplace_transform():
    x = np.linspace(-2, 2, 9)
    lap = LaplaceDunkl(MeasureSpec(density=Density(0.25))).evaluate(0.0, x)
    mills = NamedClosedForm("mills").evaluate(0.0, x)
    assert np.allclose(lap, mills, rtol=1e-10, atol=0)


def test_unknown_closed_form():
    with pytest.raises(DomainError):
        NamedClosedForm("nope")


def test_named_closed_form_params_are_canonical():
    a = NamedClosedForm("psi_kp", (("p", 1.0),))
    b = NamedClosedForm("psi_kp", {"p": 1.0}.items())
    assert a == b


def test_raw_table_spline():
    table = RawTable(points=((2.0, 4.0), (-2.0, -4.0)))
    assert table.points[0] == (-2.0, -4.0)
    assert table.evaluate(0, 0.5) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        RawTable(points=((1.0, 1.0),))


def test_combinators():
    a, b = KernelDecaying(1.0), KernelDecaying(2.5)
    s = Sum((a, Scaled(b, 3.0)))
    x = np.array([-1.0, 0.2])
    assert s.structured
    assert np.allclose(s.evaluate(1, x), a.evaluate(1, x) + 3 * b.evaluate(1, x))
    assert np.allclose(s.power_exact(1, 2, x), a.power_exact(1, 2, x) + 3 * b.power_exact(1, 2, x))
    sq = SquaredArgument(a)
    assert sq.parity == "even"
    assert sq.evaluate(1, -1.5) == pytest.approx(a.evaluate(1, 2.25))
    assert Scaled(Gaussian(1.0), -2.0).envelope.scale == 2.0


# ---------------------------------------------------------------------------
# intertwining operator


@pytest.mark.parametrize("k", [0.2, 1.0, 3.5])
def test_intertwine_examples(k):
    assert intertwine(k, np.ones_like, 2.3) == pytest.approx(1.0, rel=1e-13)
    assert intertwine(k, lambda t: t, 3.0) == pytest.approx(3.0 / (2 * k + 1), rel=1e-13)
    assert intertwine(k, lambda t: np.exp(1.0 * t), 1.0) == pytest.approx(dunkl_kernel(k, 1.0, 1.0), rel=1e-13)
    assert intertwine(1.0, lambda t: np.exp(t), 1.0) == pytest.approx(math.cosh(1.0), rel=1e-14)


def test_intertwine_needs_positive_k():
    with pytest.raises(DomainError):
        intertwine(0.0, np.cos, 1.0)
    assert apply_intertwining(0.0, np.cos, 1.0) == math.cos(1.0)


@pytest.mark.parametrize("n", range(7))
def test_intertwine_monomials(n):
    k = 0.65
    assert intertwine(k, lambda t: t**n, 1.7) == pytest.approx(
        core.intertwiner_monomial_factor(k, n) * 1.7**n, rel=1e-12, abs=1e-15
    )


@given(st.floats(0.05, 3), st.floats(-3, 3), st.floats(0, 3))
def test_intertwine_preserves_positivity(k, x, c):
    assert intertwine(k, lambda t: (t - c) ** 2 * np.exp(-t), x) >= 0


@pytest.mark.parametrize("k", [0.3, 1.0, 2.5])
def test_two_representations_agree(k):
    grid = np.linspace(-2, 2, 9)
    for x in grid:
        for y in grid:
            via_v = intertwine(k, lambda t: np.exp(y * t), x)
            assert via_v == pytest.approx(dunkl_kernel(k, x, y), rel=1e-9)


def test_intertwined_spec_and_complex_argument():
    spec = Intertwined(Gaussian(1.0))
    assert spec.parity == "even"
    val = spec.evaluate(1.0, 0.5 + 0.5j)
    assert isinstance(val, complex)
    assert spec.evaluate(0.0, 0.5) == pytest.approx(math.exp(-0.25))


@pytest.mark.parametrize("k", [1e-300, 1e-12, 1e-5])
def test_intertwine_tends_to_identity(k):
    assert intertwine(k, np.exp, 1.3) == pytest.approx(dunkl_kernel(k, 1.3, 1.0), rel=1e-13)
    assert intertwine(k, np.exp, 1.3) == pytest.approx(math.exp(1.3), rel=1e-4)

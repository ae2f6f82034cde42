"""Rank-one Dunkl kernel, Dunkl operator and intertwining operator.

Everything here is for the reflection group Z_2 acting on the real line with
a nonnegative multiplicity parameter ``k``. At ``k = 0`` all objects reduce
to their classical counterparts and are short-circuited (exponential kernel,
ordinary derivative, identity intertwiner).
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from . import specfun
from .errors import DomainError, ModeError, PositivityError, StructureError
from .quadrature import DEFAULT_CONFIG, Envelope, gauss_jacobi_rule, integrate_semi_infinite

EPS = np.finfo(float).eps
DEFAULT_VK_NODES = 64


def check_multiplicity(k):
    k = float(k)
    if not (k >= 0 and math.isfinite(k)):
        raise DomainError(f"multiplicity parameter must be a finite k >= 0, got {k}")
    return k


# ---------------------------------------------------------------------------
# kernel


def kernel_components(k, u):
    """Even and odd parts of E_k(i u): returns (j_{k-1/2}(u), u/(2k+1) j_{k+1/2}(u)).

    E_k(-ix, y) = even - i*odd and E_k(ix, y) = even + i*odd with u = x*y.
    """
    k = check_multiplicity(k)
    u = np.asarray(u, dtype=float)
    if k == 0:
        return np.cos(u), np.sin(u)
    even = specfun.normalized_bessel(k - 0.5, u)
    odd = u / (2.0 * k + 1.0) * specfun.normalized_bessel(k + 0.5, u)
    return even, odd


KERNEL_MAX_ARG = 700.0
KERNEL_ASYMPTOTIC = 100.0


def _kernel_far_negative(k, u):
    """E_k(u) for u << 0 from the large-z expansion of 1F1(k; 2k+1; z).

    E_k(u) ~ Gamma(2k+1)/Gamma(k) e^{-u} z^{-k-1} sum_s (k+1)_s (1-k)_s / (s! z^s),
    z = -2u. The sum terminates for integer k.
    """
    z = -2.0 * u
    lead = math.exp(math.lgamma(2 * k + 1) - math.lgamma(k))
    term = np.ones_like(z)
    total = term.copy()
    for s in range(60):
        term = term * (k + 1 + s) * (1 - k + s) / ((s + 1) * z)
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return lead * np.exp(-u) * z ** (-k - 1.0) * total


def dunkl_kernel(k, x, y):
    """Real Dunkl kernel E_k(x, y) for real x, y (broadcasting).

    For xy >= 0 the Bessel decomposition
    j_{k-1/2}(ixy) + xy/(2k+1) j_{k+1/2}(ixy) is used. For xy < 0 its two
    terms cancel almost completely, so the equivalent cancellation-free form
    e^{xy} 1F1(k; 2k+1; -2xy) is used instead. Both are sums of positive terms.
    """
    k = check_multiplicity(k)
    u = np.multiply(x, y, dtype=float)
    if np.any(np.abs(u) > KERNEL_MAX_ARG):
        raise DomainError(f"|xy| > {KERNEL_MAX_ARG} overflows double precision")
    if k == 0:
        out = np.exp(u)
    else:
        uu = np.atleast_1d(u)
        res = np.empty_like(uu)
        pos = uu >= 0
        if np.any(pos):
            up = uu[pos]
            res[pos] = specfun.normalized_bessel_i(k - 0.5, up) + up / (
                2.0 * k + 1.0
            ) * specfun.normalized_bessel_i(k + 0.5, up)
        neg = ~pos & (uu >= -KERNEL_ASYMPTOTIC)
        if np.any(neg):
            un = uu[neg]
            res[neg] = np.exp(un) * specfun.kummer_1f1_series(k, 2.0 * k + 1.0, -2.0 * un)
        far = uu < -KERNEL_ASYMPTOTIC
        if np.any(far):
            res[far] = _kernel_far_negative(k, uu[far])
        out = res.reshape(np.shape(u))
    if np.any(~(out > 0)):
        raise PositivityError("computed Dunkl kernel value is not strictly positive")
    return float(out) if np.ndim(out) == 0 else out


def dunkl_kernel_osc(k, x, y):
    """E_k(-ix, y) = j_{k-1/2}(xy) - i xy/(2k+1) j_{k+1/2}(xy); modulus <= 1."""
    u = np.multiply(x, y, dtype=float)
    even, odd = kernel_components(k, u)
    out = even - 1j * odd
    return complex(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# measures and function specifications


@dataclass(frozen=True)
class Density:
    """Density ``scale * e^(-p t^2) t^rho`` on [0, inf)."""

    p: float
    rho: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not self.p > 0:
            raise DomainError("density needs p > 0 for every exponential moment to exist")
        if self.rho < 0 or self.scale < 0:
            raise DomainError("density needs rho >= 0 and scale >= 0")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.scale * np.exp(-self.p * t * t) * t**self.rho


@dataclass(frozen=True)
class MeasureSpec:
    """Nonnegative measure on [0, inf): point masses plus an optional density.

    Both parts have finite exponential moments of every order, so the
    measure belongs to every M_sigma.
    """

    atoms: tuple = ()
    density: Density | None = None

    def __post_init__(self):
        atoms = tuple((float(t), float(w)) for t, w in self.atoms)
        for t, w in atoms:
            if t < 0 or w < 0 or not (math.isfinite(t) and math.isfinite(w)):
                raise DomainError(f"atom ({t}, {w}) needs location >= 0 and mass >= 0")
        object.__setattr__(self, "atoms", atoms)

    @property
    def is_zero(self):
        no_atoms = all(w == 0 for _, w in self.atoms)
        return no_atoms and (self.density is None or self.density.scale == 0)

    def integrate(self, g, sigma, extra_rho=0.0, cfg=DEFAULT_CONFIG):
        """int g(t) dmu(t) for ``|g(t)| <= e^(sigma t) t^extra_rho``; g may be vector-valued."""
        total = 0.0
        for t, w in self.atoms:
            if w:
                total = total + w * np.asarray(g(np.array([t])))[..., 0]
        d = self.density
        if d is not None and d.scale:
            env = Envelope(p=d.p, sigma=sigma, rho=d.rho + extra_rho, scale=d.scale)
            total = total + integrate_semi_infinite(lambda t: g(t) * d(t), env, cfg)
        return total


class FunctionSpec:
    """A test function phi, described structurally where possible.

    Subclasses implement ``evaluate(k, x, cfg)``. ``parity`` is one of
    "even", "odd", "none"; ``envelope`` (if not None) bounds |phi(y)| on
    y >= 0 and marks the function as usable by the transform routes.
    Structured subclasses also implement ``power_exact`` giving T_k^n phi
    without numerical differentiation.
    """

    parity = "none"
    structured = False

    @property
    def envelope(self):
        return None

    def evaluate(self, k, x, cfg=DEFAULT_CONFIG):
        raise NotImplementedError

    def power_exact(self, k, n, x, cfg=DEFAULT_CONFIG):
        raise StructureError(f"{type(self).__name__} has no exact T_k^n")

    def bind(self, k, cfg=DEFAULT_CONFIG):
        return lambda x: self.evaluate(k, x, cfg)


def _check_embedded_k(embedded, k):
    if embedded is not None and float(embedded) != float(k):
        raise DomainError(f"spec was built for k = {embedded} but evaluated with k = {k}")


@dataclass(frozen=True)
class KernelDecaying(FunctionSpec):
    """x -> E_k(-x, y) for a fixed y >= 0."""

    y: float
    k: float | None = None
    structured = True

    def __post_init__(self):
        if self.y < 0:
            raise DomainError("kernel_decaying needs y >= 0")

    def evaluate(self, k, x, cfg=DEFAULT_CONFIG):
        _check_embedded_k(self.k, k)
        return dunkl_kernel(k, np.negative(x), self.y)

    def power_exact(self, k, n, x, cfg=DEFAULT_CONFIG):
        # eigenrelation T_k E_k(-., y) = -y E_k(-., y)
        return (-self.y) ** n * self.evaluate(k, x, cfg)


@dataclass(frozen=True)
class LaplaceDunkl(FunctionSpec):
    """x -> int_0^inf E_k(-x, t) dmu(t)."""

    measure: MeasureSpec
    k: float | None = None
    structured = True

    def evaluate(self, k, x, cfg=DEFAULT_CONFIG):
        return self.power_exact(k, 0, x, cfg)

    def power_exact(self, k, n, x, cfg=DEFAULT_CONFIG):
        """(-1)^n int t^n E_k(-x, t) dmu(t), vectorised over x."""
        _check_embedded_k(self.k, k)
        scalar = np.ndim(x) == 0
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        if self.measure.is_zero:
            out = np.zeros_like(xs)
        else:
            sigma = float(np.max(np.abs(xs)))

            def g(t):
                return t[None, :] ** n * dunkl_kernel(k, -xs[:, None], t[None, :])

            out = (-1.0) ** n * np.atleast_1d(self.measure.integrate(g, sigma, n, cfg))
        return float(out[0]) if scalar else out


@dataclass(frozen=True)
class Gaussian(FunctionSpec):
    """x -> scale * e^(-p x^2); accepts complex x."""

    p: float
    scale: float = 1.0
    parity = "even"

    def __post_init__(self):
        if not self.p > 0:
            raise DomainError("gaussian needs p > 0")

    @property
    def envelope(self):
        return Envelope(p=self.p, scale=abs(self.scale))

    def evaluate(self, k, x, cfg=DEFAULT_CONFIG):
        x = np.asarray(x)
        return self.scale * np.exp(-self.p * x * x)


@dataclass(frozen=True)
class Scaled(FunctionSpec):
    """c * phi for a constant c."""

    inner: FunctionSpec
    factor: float

    @property
    def parity(self):
        return self.inner.parity

    @property
    def structured(self):
        return self.inner.structured

    @property
    def envelope(self):
        env = self.inner.envelope
        if env is None:
            return None
        return Envelope(
            p=env.p, sigma=env.sigma, rho=env.rho, kind=env.kind, power=env.power,
            scale=env.scale * abs(self.factor),
        )

    def evaluate(self, k, x, cfg=DEFAULT_CONFIG):
        return self.factor * self.inner.evaluate(k, x, cfg)

    def power_exact(self, k, n, x, cfg=DEFAULT_CONFIG):
        return self.factor * self.inner.power_exact(k, n, x, cfg)


@dataclass(frozen=True)
class Sum(FunctionSpec):
    """phi_1 + phi_2 + ...; exact T_k^n when every part is structured."""

    parts: tuple

    @property
    def structured(self):
        return all(p.structured for p in self.parts)

    @property
    def parity(self):
        kinds = {p.parity for p in self.parts}
        return kinds.pop() if len(kinds) == 1 else "none"

    def evaluate(self, k, x, cfg=DEFAULT_CONFIG):
        return sum(p.evaluate(k, x, cfg) for p in self.parts)

    def power_exact(self, k, n, x, cfg=DEFAULT_CONFIG):
        return sum(p.power_exact(k, n, x, cfg) for p in self.parts)


@dataclass(frozen=True)
class SquaredArgument(FunctionSpec):
    """x -> inner(x^2); always even."""

    inner: FunctionSpec
    parity = "even"

    def evaluate(self, k, x, cfg=DEFAULT_CONFIG):
        x = np.asarray(x, dtype=float)
        return self.inner.evaluate(k, x * x, cfg)


@dataclass(frozen=True)
class Intertwined(FunctionSpec):
    """x -> (V_k inner)(x)."""

    inner: FunctionSpec
    n_nodes: int = DEFAULT_VK_NODES

    @property
    def parity(self):
        return self.inner.parity

    def evaluate(self, k, x, cfg=DEFAULT_CONFIG):
        return apply_intertwining(k, self.inner.bind(k, cfg), x, self.n_nodes)


@dataclass(frozen=True, eq=False)
class Raw(FunctionSpec):
    """An arbitrary vectorised callable ``func(x)`` (k is ignored)."""

    func: Callable
    parity: str = "none"
    declared_envelope: Envelope | None = None
    name: str = "raw"

    @property
    def envelope(self):
        return self.declared_envelope

    def evaluate(self, k, x, cfg=DEFAULT_CONFIG):
        return self.func(x)


@dataclass(frozen=True)
class RawTable(FunctionSpec):
    """Tabulated values, interpolated by a natural cubic spline."""

    points: tuple
    parity = "none"

    def __post_init__(self):
        pts = tuple(sorted((float(a), float(b)) for a, b in self.points))
        if len(pts) < 2 or len({a for a, _ in pts}) != len(pts):
            raise DomainError("raw-table needs at least two distinct abscissae")
        object.__setattr__(self, "points", pts)

    @cached_property
    def _spline(self):
        from scipy.interpolate import CubicSpline

        xs, ys = zip(*self.points)
        return CubicSpline(xs, ys, bc_type="natural", extrapolate=True)

    def evaluate(self, k, x, cfg=DEFAULT_CONFIG):
        out = self._spline(np.asarray(x, dtype=float))
        return float(out) if np.ndim(out) == 0 else out


_CLOSED_FORMS = {}


def register_closed_form(name, parity="none"):
    """Decorator registering ``func(k, x, **params)`` under ``name``."""

    def deco(func):
        _CLOSED_FORMS[name] = (func, parity)
        return func

    return deco


@register_closed_form("identity", parity="odd")
def _identity(k, x):
    return np.asarray(x, dtype=float)


@register_closed_form("mills")
def _mills(k, x):
    # sqrt(pi) e^{x^2} erfc(x), via scaled erfc to avoid overflow
    from scipy.special import erfcx

    return math.sqrt(math.pi) * erfcx(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class NamedClosedForm(FunctionSpec):
    """A registered closed form with keyword parameters."""

    name: str
    params: tuple = field(default=())

    def __post_init__(self):
        if self.name not in _CLOSED_FORMS:
            from . import kummer  # noqa: F401  registers its closed forms
        if self.name not in _CLOSED_FORMS:
            raise DomainError(f"unknown closed form {self.name!r}")
        object.__setattr__(self, "params", tuple(sorted(dict(self.params).items())))

    @property
    def parity(self):
        return _CLOSED_FORMS[self.name][1]

    def evaluate(self, k, x, cfg=DEFAULT_CONFIG):
        func, _ = _CLOSED_FORMS[self.name]
        return func(k, x, **dict(self.params))


# ---------------------------------------------------------------------------
# Dunkl operator


def _step(x, step, power=1.0 / 3.0):
    if step is not None:
        return np.full_like(x, float(step))
    return EPS**power * np.maximum(1.0, np.abs(x))


def _apply_dunkl(k, f, x, h):
    """One application of T_k to vectorised ``f`` at points x with steps h."""
    pts = np.concatenate([x + h, x - h, x + h / 2, x - h / 2, x, -x, h, -h, 2 * h, -2 * h])
    vals = np.asarray(f(pts), dtype=float)
    fp, fm, fp2, fm2, f0, fneg, fh, fmh, f2h, fm2h = np.split(vals, 10)
    d1 = (fp - fm) / (2 * h)
    d2 = (fp2 - fm2) / h
    deriv = (4.0 * d2 - d1) / 3.0
    if k == 0:
        return deriv
    ax = np.abs(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (f0 - fneg) / x
    # (f(s) - f(-s))/s is even in s; near 0 use g(x) ~ g(h) + (x^2 - h^2) b
    g1 = (fh - fmh) / h
    g2 = (f2h - fm2h) / (2 * h)
    near = g1 + (x * x - h * h) * (g2 - g1) / (3 * h * h)
    diff = np.where(x == 0, 2.0 * deriv, np.where(ax < h, near, direct))
    return deriv + k * diff


def dunkl_operator_numeric(k, f, x, step=None, return_step=False):
    """T_k f(x) = f'(x) + k (f(x) - f(-x))/x by differences.

    f' is a central difference with one Richardson step; the difference
    quotient is exact, and at x = 0 the limit (1 + 2k) f'(0) is used. The
    default step is cbrt(eps) * max(1, |x|).
    """
    k = check_multiplicity(k)
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    h = _step(xs, step)
    out = _apply_dunkl(k, f, xs, h)
    out = float(out[0]) if scalar else out
    if return_step:
        return out, (float(h[0]) if scalar else h)
    return out


MAX_NUMERIC_ORDER = 4


def dunkl_operator_numeric_power(k, f, n, x):
    """T_k^n f(x) by nested numerical application, n <= 4.

    Nested differences amplify rounding noise by 1/h per level, so the step
    grows with n: h = eps^(1/(n+4)) * max(1, max|x|).
    """
    k = check_multiplicity(k)
    if n > MAX_NUMERIC_ORDER:
        raise ModeError(f"numeric T_k^n is limited to n <= {MAX_NUMERIC_ORDER}")
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if n == 0:
        out = np.asarray(f(xs), dtype=float)
    else:
        h = EPS ** (1.0 / (n + 4)) * max(1.0, float(np.max(np.abs(xs))))
        g = f
        for _ in range(n):
            g = (lambda inner: (lambda pts: _apply_dunkl(k, inner, pts, np.full_like(pts, h))))(g)
        out = g(xs)
    return float(out[0]) if scalar else out


def dunkl_operator_power_exact(k, spec, n, x, cfg=DEFAULT_CONFIG):
    """T_k^n phi(x) through the eigenrelation, for structured specs only."""
    k = check_multiplicity(k)
    if n < 0:
        raise DomainError("order n must be >= 0")
    if n == 0:
        return spec.evaluate(k, x, cfg)
    if not spec.structured:
        raise StructureError(f"{type(spec).__name__} does not support exact T_k^n")
    return spec.power_exact(k, n, x, cfg)


# ---------------------------------------------------------------------------
# intertwining operator


def intertwining_constant(k):
    """Gamma(k+1/2) / (Gamma(1/2) Gamma(k)): makes V_k 1 = 1."""
    return math.exp(math.lgamma(k + 0.5) - math.lgamma(0.5) - math.lgamma(k))


def vk_rule(k, n_nodes=DEFAULT_VK_NODES):
    """Nodes t_i and weights w_i with V-averages computed as
    g(1) + sum w_i (g(t_i) - g(1)) / (1 - t_i).

    Splitting off g(1) moves the weight to (1-t)^k (1+t)^k, which stays
    well conditioned as k -> 0 where (1-t)^(k-1) does not.
    """
    rule = gauss_jacobi_rule(n_nodes, k, k)
    return rule.nodes, intertwining_constant(k) * rule.weights / (1.0 - rule.nodes)


def vk_average(k, values, at_one, n_nodes=DEFAULT_VK_NODES):
    """C_k int g (1-t)^(k-1) (1+t)^k dt from ``values`` = g(t_i) (last axis) and ``at_one`` = g(1)."""
    _, w = vk_rule(k, n_nodes)
    at_one = np.asarray(at_one)
    return at_one + np.sum((values - at_one[..., None]) * w, axis=-1)


def intertwine(k, f, x, n_nodes=DEFAULT_VK_NODES):
    """V_k f(x) = C_k int_{-1}^{1} f(xt) (1-t)^(k-1) (1+t)^k dt, k > 0.

    ``f`` is sampled at x, and at x t_i for interior Gauss-Jacobi nodes; see
    ``vk_rule``. ``x`` may be complex.
    """
    k = float(k)
    if not k > 0:
        raise DomainError("intertwine needs k > 0; V_0 is the identity")
    nodes, _ = vk_rule(k, n_nodes)
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x))
    pts = xs[..., None] * nodes
    vals = np.asarray(f(pts.ravel())).reshape(pts.shape)
    out = vk_average(k, vals, np.asarray(f(xs.ravel())).reshape(xs.shape), n_nodes)
    return out[0].item() if scalar else out


def apply_intertwining(k, f, x, n_nodes=DEFAULT_VK_NODES):
    """V_k f(x), with V_0 the identity."""
    k = check_multiplicity(k)
    if k == 0:
        out = f(np.asarray(x))
        return out.item() if np.ndim(out) == 0 else out
    return intertwine(k, f, x, n_nodes)


def intertwiner_monomial_factor(k, n):
    """c_n with V_k(t^n)(x) = c_n x^n."""
    m, odd = divmod(n, 2)
    m += odd
    return math.exp(math.lgamma(0.5 + m) - math.lgamma(0.5) - math.lgamma(k + 0.5 + m) + math.lgamma(k + 0.5))

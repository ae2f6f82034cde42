"""Dunkl transform, its inverse, generalized translation and W_k.

Conventions (rank one, multiplicity k >= 0, weight |x|^{2k}):

    D_k f(xi)  = c_k int f(x) E_k(-i xi, x) |x|^{2k} dx
    D_k^{-1} g = c_k int g(xi) E_k(i x, xi) |xi|^{2k} dxi
    c_k        = 1 / (2^{k+1/2} Gamma(k+1/2))

so that e^{-x^2/2} is a fixed point. Integrals over the line are folded onto
[0, inf) by splitting f into even and odd parts.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    FunctionSpec,
    check_multiplicity,
    intertwiner_monomial_factor,
    kernel_components,
    vk_average,
    vk_rule,
    Gaussian,
    Scaled,
)
from .errors import ConvergenceError, DomainError, DunklError, EnvelopeError
from .quadrature import DEFAULT_CONFIG, Envelope, QuadratureConfig, integrate_semi_infinite

REALNESS_TOL = 1e-8


def normalization(k):
    """c_k = 1 / (2^{k+1/2} Gamma(k+1/2))."""
    k = check_multiplicity(k)
    return math.exp(-(k + 0.5) * math.log(2.0) - math.lgamma(k + 0.5))


@dataclass(frozen=True)
class TransformConfig:
    k: float
    quad: QuadratureConfig = DEFAULT_CONFIG

    def __post_init__(self):
        object.__setattr__(self, "k", check_multiplicity(self.k))

    @property
    def c_k(self):
        return normalization(self.k)


def _quad(cfg):
    if cfg is None:
        return DEFAULT_CONFIG
    if isinstance(cfg, TransformConfig):
        return cfg.quad
    return cfg


def _weighted_envelope(env, k):
    """Envelope for |f(y)| y^{2k} given one for |f(y)|."""
    if env.kind == "algebraic":
        if env.power - 2 * k <= 1:
            raise EnvelopeError("algebraic decay too slow for the weight |y|^{2k}")
        return Envelope.algebraic(env.power - 2 * k, env.scale)
    return Envelope(p=env.p, sigma=env.sigma, rho=env.rho + 2 * k, scale=env.scale)


def _parts(f, parity, y):
    """Even and odd parts of f on y >= 0 (complex allowed)."""
    fy = np.asarray(f(y))
    if parity == "even":
        return fy, None
    if parity == "odd":
        return None, fy
    fm = np.asarray(f(-y))
    return (fy + fm) / 2, (fy - fm) / 2


def _kernel_integral(k, func, parity, envelope, points, sign, cfg):
    """2 c_k int_0^inf [f_e(y) a_e(p y) + sign i f_o(y) a_o(p y)] y^{2k} dy, vectorised in p.

    (a_e, a_o) are the even/odd kernel components; sign = -1 gives D_k and
    sign = +1 gives D_k^{-1}.
    """
    k = check_multiplicity(k)
    if envelope is None:
        raise EnvelopeError("transform needs a declared integrable envelope")
    qcfg = _quad(cfg)
    scalar = np.ndim(points) == 0
    pts = np.atleast_1d(np.asarray(points, dtype=float))

    def integrand(y):
        fe, fo = _parts(func, parity, y)
        u = pts[:, None] * y[None, :]
        ae, ao = kernel_components(k, u)
        w = y ** (2 * k)
        val = 0.0
        if fe is not None:
            val = val + fe[None, :] * ae
        if fo is not None:
            val = val + sign * 1j * fo[None, :] * ao
        val = np.broadcast_to(val * w, u.shape)
        return np.concatenate([val.real, val.imag], axis=0)

    env = _weighted_envelope(envelope, k)
    raw = integrate_semi_infinite(integrand, env, qcfg)
    m = len(pts)
    out = 2.0 * normalization(k) * (raw[:m] + 1j * raw[m:])
    return out[0] if scalar else out


def dunkl_transform(k, f, xi, cfg=None):
    """D_k f at the points xi; ``f`` is a FunctionSpec with an envelope."""
    k = check_multiplicity(k)
    return _kernel_integral(k, f.bind(k, _quad(cfg)), f.parity, f.envelope, xi, -1.0, cfg)


def dunkl_inverse_transform(k, g, x, cfg=None):
    """D_k^{-1} g at the points x; ``g`` is a FunctionSpec with an envelope."""
    k = check_multiplicity(k)
    return _kernel_integral(k, g.bind(k, _quad(cfg)), g.parity, g.envelope, x, 1.0, cfg)


def gaussian_transform(k, p, xi):
    """Closed form D_k(e^{-p x^2})(xi) = (2p)^{-(k+1/2)} e^{-xi^2/(4p)}."""
    xi = np.asarray(xi, dtype=float)
    return (2.0 * p) ** (-(k + 0.5)) * np.exp(-xi * xi / (4.0 * p))


@dataclass(frozen=True, eq=False)
class Transformed(FunctionSpec):
    """xi -> D_k f(xi), memoised per abscissa.

    Gaussians (possibly scaled) are transformed in closed form; anything else
    goes through quadrature and needs ``declared_envelope`` to be used as an
    integrand downstream.
    """

    k: float
    source: FunctionSpec
    cfg: QuadratureConfig = DEFAULT_CONFIG
    declared_envelope: Envelope | None = None
    closed_form: bool = True
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def parity(self):
        return self.source.parity

    def _closed(self):
        if not self.closed_form:
            return None
        src, factor = self.source, 1.0
        if isinstance(src, Scaled) and isinstance(src.inner, Gaussian):
            src, factor = src.inner, src.factor
        if isinstance(src, Gaussian):
            return src.p, factor * src.scale
        return None

    @property
    def envelope(self):
        if self.declared_envelope is not None:
            return self.declared_envelope
        src, factor = self.source, 1.0
        if isinstance(src, Scaled) and isinstance(src.inner, Gaussian):
            src, factor = src.inner, src.factor
        if not isinstance(src, Gaussian):
            return None
        p, scale = src.p, factor * src.scale
        return Envelope(p=1.0 / (4.0 * p), scale=abs(scale) * (2.0 * p) ** (-(self.k + 0.5)))

    def evaluate(self, k, x, cfg=DEFAULT_CONFIG):
        if float(k) != self.k:
            raise DomainError(f"transform was built for k = {self.k}, evaluated with k = {k}")
        closed = self._closed()
        if closed is not None:
            p, scale = closed
            return scale * gaussian_transform(self.k, p, x) + 0j
        scalar = np.ndim(x) == 0
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        missing = np.array(sorted({v for v in xs.tolist() if v not in self._cache}))
        if missing.size:
            vals = np.atleast_1d(dunkl_transform(self.k, self.source, missing, self.cfg))
            self._cache.update(zip(missing.tolist(), vals.tolist()))
        out = np.array([self._cache[v] for v in xs.tolist()], dtype=complex)
        return out[0] if scalar else out


@dataclass(frozen=True, eq=False)
class FromTransform(FunctionSpec):
    """The even function whose Dunkl transform is the given even density.

    ``density`` is a vectorised callable of xi with |density(xi)| <= scale
    (1 + |xi|)^(-power).
    """

    density: object
    power: float
    scale: float = 1.0
    name: str = "from-transform"
    parity = "even"

    # named instances (built by the grammar) compare by name
    def __eq__(self, other):
        if not isinstance(other, FromTransform):
            return NotImplemented
        if self.name == "from-transform" or other.name == "from-transform":
            return self is other
        return self.name == other.name

    def __hash__(self):
        return hash(self.name) if self.name != "from-transform" else id(self)

    def density_spec(self):
        from .core import Raw

        return Raw(self.density, parity="even", declared_envelope=Envelope.algebraic(self.power, self.scale))

    def evaluate(self, k, x, cfg=DEFAULT_CONFIG):
        out = dunkl_inverse_transform(k, self.density_spec(), x, cfg)
        return np.real(out)


def _transform_spec(k, f, cfg):
    """A FunctionSpec for D_k f with a usable envelope."""
    if isinstance(f, FromTransform):
        return f.density_spec()
    if f.envelope is None:
        raise EnvelopeError(f"{type(f).__name__} has no envelope for the transform route")
    ft = Transformed(k, f, _quad(cfg))
    if ft.envelope is None:
        raise EnvelopeError("no envelope is known for the transform of this function")
    return ft


def _real_if_real(out, scale):
    resid = float(np.max(np.abs(np.imag(out)))) if np.size(out) else 0.0
    if resid > REALNESS_TOL * max(1.0, scale):
        raise DunklError(f"imaginary residue {resid:.3e} exceeds the realness tolerance")
    return np.real(out)


# ---------------------------------------------------------------------------
# generalized translation


def _translate_transform(k, f, y, x, cfg, sign):
    """c_k int E_k(ix, xi) E_k(sign*iy, xi) D_k f(xi) |xi|^{2k} dxi."""
    ft = _transform_spec(k, f, cfg)
    qcfg = _quad(cfg)
    g = ft.bind(k, qcfg)

    def integrand(t):
        ax_e, ax_o = kernel_components(k, x[:, None] * t[None, :])
        ay_e, ay_o = kernel_components(k, y[:, None] * t[None, :])
        A = ax_e + 1j * ax_o
        B = ay_e + 1j * sign * ay_o
        gp = np.asarray(g(t))[None, :]
        gm = gp if ft.parity == "even" else np.asarray(g(-t))[None, :]
        val = (A * B * gp + np.conj(A) * np.conj(B) * gm) * t ** (2 * k)
        return np.concatenate([val.real, val.imag], axis=0)

    env = _weighted_envelope(ft.envelope, k)
    raw = integrate_semi_infinite(integrand, env, qcfg)
    m = len(x)
    return normalization(k) * (raw[:m] + 1j * raw[m:])


def _translate_product(k, f, y, x, cfg, sign, n_nodes=64):
    """Product formula for even f: V_k-average of f(sqrt(x^2 + y^2 + 2 sign x y t))."""
    if f.parity != "even":
        raise DomainError("the product-formula route needs an even function")
    qcfg = _quad(cfg)
    if k == 0:
        return np.asarray(f.evaluate(k, x + sign * y, qcfg), dtype=complex)
    nodes, _ = vk_rule(k, n_nodes)
    r2 = x[:, None] ** 2 + y[:, None] ** 2 + 2.0 * sign * (x * y)[:, None] * nodes[None, :]
    vals = np.asarray(f.evaluate(k, np.sqrt(np.maximum(r2, 0.0)).ravel(), qcfg)).reshape(r2.shape)
    at_one = np.asarray(f.evaluate(k, np.abs(x + sign * y), qcfg))
    return vk_average(k, vals, at_one, n_nodes) + 0j


TRANSLATION_METHODS = ("auto", "transform", "product")


def dunkl_translate(k, f, y, x, cfg=None, sign=1, method="auto", real=True):
    """Generalized translation tau_y f(x), broadcast over x and y.

    ``sign=+1`` pairs E_k(ix, xi) with E_k(iy, xi) and reduces to f(x + y)
    at k = 0; ``sign=-1`` uses E_k(-iy, xi) and reduces to f(x - y). The
    transform route needs an envelope for D_k f; the product route needs f
    even. ``auto`` prefers the transform route.
    """
    k = check_multiplicity(k)
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    if method not in TRANSLATION_METHODS:
        raise DomainError(f"unknown translation method {method!r}")
    xb, yb = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    shape = xb.shape
    xs, ys = xb.ravel(), yb.ravel()
    if method == "auto":
        has_env = isinstance(f, FromTransform) or f.envelope is not None
        method = "transform" if has_env else "product"
    if method == "transform":
        out = _translate_transform(k, f, ys, xs, cfg, sign)
    else:
        out = _translate_product(k, f, ys, xs, cfg, sign)
    if real:
        scale = float(np.max(np.abs(out))) if out.size else 1.0
        out = _real_if_real(out, scale)
    out = out.reshape(shape)
    return out.item() if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# inverse intertwining operator W_k


def _w_integral(k, phi, x, cfg, literal_prefactor=False):
    """c_k int e^{ixy} D_k phi(y) |y|^{2k} dy (or 1/c_k in front if literal)."""
    ft = _transform_spec(k, phi, cfg)
    qcfg = _quad(cfg)
    g = ft.bind(k, qcfg)

    def integrand(t):
        ph = x[:, None] * t[None, :]
        gp = np.asarray(g(t))[None, :]
        gm = gp if ft.parity == "even" else np.asarray(g(-t))[None, :]
        val = (np.exp(1j * ph) * gp + np.exp(-1j * ph) * gm) * t ** (2 * k)
        return np.concatenate([val.real, val.imag], axis=0)

    env = _weighted_envelope(ft.envelope, k)
    raw = integrate_semi_infinite(integrand, env, qcfg)
    m = len(x)
    c = normalization(k)
    pref = 1.0 / c if literal_prefactor else c
    return pref * (raw[:m] + 1j * raw[m:])


TAYLOR_POINTS = 256
TAYLOR_TAIL_TOL = 1e-13


def _w_taylor(k, phi, x, cfg):
    """W_k on the Taylor series: sum a_n x^n / c_n with V_k(t^n) = c_n x^n.

    Coefficients come from the FFT of phi on a circle of radius
    1 + max|x|; phi must be entire and accept complex arguments.
    """
    n_pts = TAYLOR_POINTS
    r = 1.0 + float(np.max(np.abs(x)))
    theta = 2.0 * np.pi * np.arange(n_pts) / n_pts
    vals = np.asarray(phi.evaluate(k, r * np.exp(1j * theta), _quad(cfg)), dtype=complex)
    order = np.arange(n_pts // 2)
    coeff = np.fft.fft(vals)[: n_pts // 2] / n_pts / r**order
    factors = np.array([intertwiner_monomial_factor(k, int(n)) for n in order])
    w = coeff / factors
    scale = max(1.0, float(np.max(np.abs(vals))))
    tail = np.max(np.abs(w[-8:]) * r ** order[-8:])
    if tail > TAYLOR_TAIL_TOL * scale:
        raise ConvergenceError(f"Taylor tail {tail:.3e} too large; phi is not entire enough here")
    return np.polynomial.polynomial.polyval(x, w)


W_METHODS = ("auto", "integral", "taylor")


def inverse_intertwine(k, phi, x, cfg=None, method="auto", literal_prefactor=False):
    """W_k phi(x), the inverse of V_k.

    ``integral`` uses c_k int e^{ixy} D_k phi(y) |y|^{2k} dy and needs D_k phi
    to be integrable against |y|^{2k}. ``taylor`` inverts V_k term by term on
    the power series. ``auto`` picks ``integral`` when phi comes with an
    envelope or a known transform, else ``taylor``.
    """
    k = check_multiplicity(k)
    if method not in W_METHODS:
        raise DomainError(f"unknown W_k method {method!r}")
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if k == 0:
        out = np.asarray(phi.evaluate(0.0, xs, _quad(cfg)), dtype=float)
        return float(out[0]) if scalar else out
    if method == "auto":
        has_env = isinstance(phi, FromTransform) or phi.envelope is not None
        method = "integral" if has_env else "taylor"
    if method == "integral":
        out = _w_integral(k, phi, xs, cfg, literal_prefactor)
    else:
        out = _w_taylor(k, phi, xs, cfg)
    out = _real_if_real(out, float(np.max(np.abs(out))))
    return float(out[0]) if scalar else out


@dataclass(frozen=True, eq=False)
class Translated(FunctionSpec):
    """x -> tau_y f(x) for an even Gaussian-type f, via the product formula.

    For f = scale e^{-p x^2} the translate is bounded by
    |scale| e^{-p(|x| - |y|)^2}, which gives the envelope.
    """

    source: FunctionSpec
    y: float
    sign: int = 1
    parity = "none"

    @property
    def envelope(self):
        src = self.source
        if not isinstance(src, Gaussian):
            return None
        y = abs(self.y)
        return Envelope(p=src.p, sigma=2 * src.p * y, scale=abs(src.scale) * math.exp(-src.p * y * y))

    def evaluate(self, k, x, cfg=DEFAULT_CONFIG):
        return dunkl_translate(k, self.source, self.y, x, cfg, sign=self.sign, method="product")


def plancherel_sides(k, f, g, cfg=None):
    """Both sides of int D_k f g |y|^{2k} dy = int f D_k g |y|^{2k} dy.

    The transforms are computed by quadrature (closed forms disabled), and
    the outer integrals use the product of the two envelopes.
    """
    k = check_multiplicity(k)
    qcfg = _quad(cfg)
    sides = []
    for a, b in ((f, g), (g, f)):
        da = Transformed(k, a, qcfg, closed_form=False).bind(k, qcfg)
        fb = b.bind(k, qcfg)

        def integrand(y, da=da, fb=fb):
            val = (da(y) * fb(y) + da(-y) * fb(-y)) * y ** (2 * k)
            return np.stack([val.real, val.imag])

        env_b = b.envelope
        env = Envelope(p=env_b.p, rho=env_b.rho + 2 * k, scale=env_b.scale * _sup_transform(k, a))
        raw = integrate_semi_infinite(integrand, env, qcfg)
        sides.append(complex(raw[0], raw[1]))
    return sides[0], sides[1]


def _sup_transform(k, f):
    # |D_k f| <= c_k int |f| |y|^{2k}, bounded through the envelope
    env = _weighted_envelope(f.envelope, k)
    return 2.0 * normalization(k) * integrate_semi_infinite(env, env)

"""Deterministic numerical integration.

Fixed Gauss rules (Legendre, Jacobi), a vectorised adaptive Simpson rule for
finite intervals and a truncating wrapper for semi-infinite integrals with a
declared envelope. Integrands are called with 1-d arrays of nodes and may
return either an array of the same length or a 2-d array ``(m, len(nodes))``
(vector-valued integrand; all components share one subdivision).
"""

import functools
import math
import os
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConvergenceError, DomainError, EnvelopeError, SubdivisionError

TOL_ENV_VAR = "DUNKLKIT_QUAD_TOL"


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-11
    rel_tol: float = 1e-10
    legendre_order: int = 80
    truncation_radius: float | None = None
    max_subdivisions: int = 60
    # hard cap on the number of live panels; guards runaway refinement
    max_panels: int = 200_000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.legendre_order < 2:
            raise DomainError("legendre_order must be >= 2")
        if self.truncation_radius is not None and self.truncation_radius <= 0:
            raise DomainError("truncation_radius must be positive")

    @classmethod
    def from_env(cls, **overrides):
        """Default config, with ``abs_tol`` taken from DUNKLKIT_QUAD_TOL if set."""
        raw = os.environ.get(TOL_ENV_VAR)
        if raw and "abs_tol" not in overrides:
            overrides["abs_tol"] = float(raw)
        return cls(**overrides)

    def with_(self, **changes):
        return replace(self, **changes)


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    family: str
    params: tuple = field(default=())

    def __post_init__(self):
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("rule nodes must be strictly increasing")
        if np.any(self.weights <= 0):
            raise ValueError("rule weights must be positive")
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self):
        return len(self.nodes)

    def apply(self, f):
        """Sum of ``weights * f(nodes)`` on the reference interval [-1, 1]."""
        return np.sum(self.weights * f(self.nodes), axis=-1)


@functools.lru_cache(maxsize=64)
def gauss_legendre_rule(n):
    if not 2 <= n <= 512:
        raise DomainError(f"Gauss-Legendre order {n} outside [2, 512]")
    x, w = np.polynomial.legendre.leggauss(n)
    return QuadratureRule(np.asarray(x, float), np.asarray(w, float), "legendre", (n,))


def _jacobi_with_previous(n, alpha, beta, x):
    """P_n^{(alpha,beta)}(x) and P_{n-1}^{(alpha,beta)}(x) by the three-term recurrence."""
    p_prev = np.ones_like(x)
    p = 0.5 * ((alpha + beta + 2.0) * x + (alpha - beta))
    if n == 1:
        return p, p_prev
    ab = alpha + beta
    for m in range(2, n + 1):
        c = 2.0 * m + ab
        a1 = 2.0 * m * (m + ab) * (c - 2.0)
        a2 = (c - 1.0) * (alpha * alpha - beta * beta)
        a3 = (c - 2.0) * (c - 1.0) * c
        a4 = 2.0 * (m + alpha - 1.0) * (m + beta - 1.0) * c
        p_prev, p = p, ((a2 + a3 * x) * p - a4 * p_prev) / a1
    return p, p_prev


def _jacobi_derivative(n, alpha, beta, x, p, p_prev):
    c = 2.0 * n + alpha + beta
    num = n * ((alpha - beta) - c * x) * p + 2.0 * (n + alpha) * (n + beta) * p_prev
    return num / (c * (1.0 - x) * (1.0 + x))


def _golub_welsch_seeds(n, alpha, beta):
    """Eigenvalues of the symmetric Jacobi matrix; used only as Newton seeds."""
    m = np.arange(n, dtype=float)
    ab = alpha + beta
    c = 2.0 * m + ab
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = (beta**2 - alpha**2) / (c * (c + 2.0))
    # the m = 0 entry is 0/0 when alpha + beta = 0; use its limit
    diag[0] = (beta - alpha) / (ab + 2.0)
    k = np.arange(1, n, dtype=float)
    ck = 2.0 * k + ab
    # (k + ab) / (ck - 1) is 0/0 at k = 1 when alpha + beta = -1; its limit is 1
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(k == 1, 1.0, (k + ab) / (ck - 1.0))
    off = np.sqrt(4.0 * k * (k + alpha) * (k + beta) * ratio / (ck * ck * (ck + 1.0)))
    mat = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    return np.linalg.eigvalsh(mat)


@functools.lru_cache(maxsize=256)
def gauss_jacobi_rule(n, alpha, beta):
    """Gauss-Jacobi rule for the weight (1-t)^alpha (1+t)^beta on [-1, 1].

    Nodes are the roots of P_n^{(alpha,beta)}, located by Newton iteration on
    the three-term recurrence (all nodes at once, seeded with the Golub-Welsch
    eigenvalues). For alpha or beta close to -1 the weight of the node next
    to the singular endpoint is limited by the absolute accuracy of that node.
    """
    alpha, beta = float(alpha), float(beta)
    if not 1 <= n <= 256:
        raise DomainError(f"Gauss-Jacobi order {n} outside [1, 256]")
    if alpha <= -1 or beta <= -1:
        raise DomainError("Jacobi parameters must exceed -1")
    x = _golub_welsch_seeds(n, alpha, beta)
    for _ in range(100):
        p, p_prev = _jacobi_with_previous(n, alpha, beta, x)
        dp = _jacobi_derivative(n, alpha, beta, x, p, p_prev)
        delta = p / dp
        x = x - delta
        if np.all(np.abs(delta) <= 4e-16 * np.maximum(1.0, np.abs(x))):
            break
    else:
        bad = int(np.argmax(np.abs(delta)))
        raise ConvergenceError(f"Newton iteration stalled at Jacobi node {bad}", index=bad)
    p, p_prev = _jacobi_with_previous(n, alpha, beta, x)
    dp = _jacobi_derivative(n, alpha, beta, x, p, p_prev)
    log_c = (
        (alpha + beta + 1.0) * math.log(2.0)
        + math.lgamma(n + alpha + 1.0)
        + math.lgamma(n + beta + 1.0)
        - math.lgamma(n + alpha + beta + 1.0)
        - math.lgamma(n + 1.0)
    )
    weights = math.exp(log_c) / ((1.0 - x) * (1.0 + x) * dp * dp)
    return QuadratureRule(x, weights, "jacobi", (n, alpha, beta))


def jacobi_weight_total(alpha, beta):
    """int_{-1}^{1} (1-t)^alpha (1+t)^beta dt = 2^(alpha+beta+1) B(alpha+1, beta+1)."""
    return math.exp(
        (alpha + beta + 1.0) * math.log(2.0)
        + math.lgamma(alpha + 1.0)
        + math.lgamma(beta + 1.0)
        - math.lgamma(alpha + beta + 2.0)
    )


def integrate_fixed(f, a, b, cfg=DEFAULT_CONFIG):
    """Gauss-Legendre with ``cfg.legendre_order`` nodes mapped to [a, b]."""
    rule = gauss_legendre_rule(cfg.legendre_order)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    return half * rule.apply(lambda t: f(mid + half * t))


# ---------------------------------------------------------------------------
# adaptive Simpson


def _evaluate(f, x):
    values = np.asarray(f(x))
    if values.dtype.kind == "c":
        raise TypeError("integrands must be real; split complex integrands into parts")
    values = values.astype(float, copy=False)
    if values.ndim == 1:
        values = values[None, :]
    if values.shape[-1] != len(x):
        raise ValueError("integrand returned the wrong number of values")
    if not np.all(np.isfinite(values)):
        raise DomainError("integrand is not finite on the integration interval")
    return values


def integrate_finite(f, a, b, cfg=DEFAULT_CONFIG, full_output=False):
    """Adaptive Simpson quadrature of ``f`` over [a, b].

    Each panel compares Simpson on the whole panel with Simpson on its two
    halves; the difference over 15 is the local error estimate and is also
    added as the Richardson correction. A panel is accepted when its error is
    below its share (by length) of ``max(abs_tol, rel_tol * |I|)``; all
    panels of one refinement level are evaluated in a single call to ``f``.

    Returns the estimate (float, or array for vector-valued ``f``); with
    ``full_output`` returns ``(estimate, error_bound)``.
    """
    a, b = float(a), float(b)
    if a == b:
        shape = _evaluate(f, np.array([a])).shape[0]
        zero = np.zeros(shape)
        result = zero[0] if shape == 1 else zero
        return (result, 0.0) if full_output else result
    if b < a:
        out = integrate_finite(f, b, a, cfg, full_output)
        return (-out[0], out[1]) if full_output else -out

    length = b - a
    # start from 16 panels so symmetric cancellations cannot fool the estimator
    edges = np.linspace(a, b, 17)
    left, right = edges[:-1], edges[1:]
    mids = 0.5 * (left + right)
    fe = _evaluate(f, edges)
    fm = _evaluate(f, mids)
    fl, fr = fe[:, :-1], fe[:, 1:]

    done_val = []
    done_err = []
    done_pos = []
    for depth in range(cfg.max_subdivisions + 1):
        h = right - left
        q1 = left + 0.25 * h
        q3 = left + 0.75 * h
        fq = _evaluate(f, np.concatenate([q1, q3]))
        fq1, fq3 = fq[:, : len(q1)], fq[:, len(q1):]
        coarse = h / 6.0 * (fl + 4.0 * fm + fr)
        fine = h / 12.0 * (fl + 4.0 * fq1 + 2.0 * fm + 4.0 * fq3 + fr)
        err = (fine - coarse) / 15.0
        value = fine + err

        running = np.abs(value.sum(axis=1) + _sum_or_zero(done_val, value.shape[0]))
        budget = np.maximum(cfg.abs_tol, cfg.rel_tol * running)[:, None] * (h / length)
        ok = np.all(np.abs(err) <= budget, axis=0)
        if depth == cfg.max_subdivisions:
            ok = np.ones_like(ok)
            failed = not np.all(np.abs(err) <= budget)
        else:
            failed = False

        done_val.append(value[:, ok])
        done_err.append(np.abs(err[:, ok]))
        done_pos.append(left[ok])
        todo = ~ok
        if not np.any(todo):
            break
        if 2 * np.count_nonzero(todo) > cfg.max_panels:
            failed = True
            done_val.append(value[:, todo])
            done_err.append(np.abs(err[:, todo]))
            done_pos.append(left[todo])
            break
        # split: children reuse the quarter-point values as their midpoints
        l0, r0, m0 = left[todo], right[todo], mids[todo]
        left = np.concatenate([l0, m0])
        right = np.concatenate([m0, r0])
        mids = np.concatenate([q1[todo], q3[todo]])
        fl = np.concatenate([fl[:, todo], fm[:, todo]], axis=1)
        fr = np.concatenate([fm[:, todo], fr[:, todo]], axis=1)
        fm = np.concatenate([fq1[:, todo], fq3[:, todo]], axis=1)

    pos = np.concatenate(done_pos)
    order = np.argsort(pos, kind="stable")
    vals = np.concatenate(done_val, axis=1)[:, order]
    errs = np.concatenate(done_err, axis=1)
    # fixed-order pairwise summation keeps results bitwise reproducible
    total = np.sum(vals, axis=1)
    bound = float(np.max(np.sum(errs, axis=1)))
    result = total[0] if total.shape[0] == 1 else total
    if failed:
        raise SubdivisionError(
            f"adaptive quadrature on [{a}, {b}] exhausted its subdivision budget",
            estimate=result,
            error_bound=bound,
        )
    return (result, bound) if full_output else result


def _sum_or_zero(chunks, rows):
    if not chunks:
        return np.zeros(rows)
    return sum(c.sum(axis=1) for c in chunks)


# ---------------------------------------------------------------------------
# semi-infinite integrals


@dataclass(frozen=True)
class Envelope:
    """Declared bound ``|f(t)| <= scale * e^(sigma t - p t^2) t^rho`` on [0, inf).

    With ``kind="algebraic"`` the bound is ``scale * (1 + t)^(-power)``.
    """

    p: float = 0.0
    sigma: float = 0.0
    rho: float = 0.0
    scale: float = 1.0
    kind: str = "gaussian"
    power: float = 0.0

    def __post_init__(self):
        if self.kind == "gaussian":
            if not self.p > 0:
                raise EnvelopeError(f"Gaussian envelope needs p > 0, got p = {self.p}")
            if self.sigma < 0 or self.rho < 0:
                raise EnvelopeError("envelope needs sigma >= 0 and rho >= 0")
        elif self.kind == "algebraic":
            if not self.power > 1:
                raise EnvelopeError("algebraic envelope needs power > 1")
        else:
            raise EnvelopeError(f"unknown envelope kind {self.kind!r}")
        if self.scale < 0:
            raise EnvelopeError("envelope scale must be nonnegative")

    @classmethod
    def algebraic(cls, power, scale=1.0):
        return cls(kind="algebraic", power=power, scale=scale)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "algebraic":
            return self.scale * (1.0 + t) ** (-self.power)
        return self.scale * np.exp(self.sigma * t - self.p * t * t) * t**self.rho

    def tail_bound(self, T):
        """Upper bound for the integral of the envelope over [T, inf)."""
        if self.kind == "algebraic":
            return self.scale * (1.0 + T) ** (1.0 - self.power) / (self.power - 1.0)
        # log-concave for rho >= 0: e^g(t) <= e^g(T) e^(-lam (t - T)) for t >= T
        lam = 2.0 * self.p * T - self.sigma - (self.rho / T if T > 0 else math.inf)
        if lam <= 0:
            return math.inf
        return float(self(T)) / lam

    def truncation_radius(self, abs_tol):
        target = abs_tol / 10.0
        if self.scale == 0:
            return 1.0
        if self.kind == "algebraic":
            T = (self.scale / ((self.power - 1.0) * target)) ** (1.0 / (self.power - 1.0)) - 1.0
            return max(T, 1.0)
        p, s = self.p, self.sigma
        c = max(self.scale, 1.0)
        T = s / (2 * p) + math.sqrt(max(0.0, s * s / (4 * p * p) + math.log(c / target) / p))
        T = max(T, 1.0)
        while self.tail_bound(T) > target:
            T *= 1.05
        return T


def integrate_semi_infinite(f, envelope, cfg=DEFAULT_CONFIG, full_output=False):
    """Integral of ``f`` over [0, inf) given a declared envelope.

    The interval is truncated at T where the envelope tail is below
    ``abs_tol / 10`` (or at ``cfg.truncation_radius`` if set) and the rest is
    handed to ``integrate_finite``. On [0, 1] the substitution t = s^2
    smooths weights like t^rho with small non-integer rho, which the
    length-proportional error budget cannot otherwise resolve.
    """
    if not isinstance(envelope, Envelope):
        raise EnvelopeError("a declared Envelope is required for semi-infinite integrals")
    T = cfg.truncation_radius or envelope.truncation_radius(cfg.abs_tol)
    a = min(1.0, T)
    half = replace(cfg, abs_tol=cfg.abs_tol / 2.0)

    def head(s):
        s = np.asarray(s, dtype=float)
        return np.asarray(f(s * s)) * (2.0 * s)

    v0, e0 = integrate_finite(head, 0.0, math.sqrt(a), half, full_output=True)
    if T > a:
        v1, e1 = integrate_finite(f, a, T, half, full_output=True)
    else:
        v1, e1 = 0.0, 0.0
    total = v0 + v1
    return (total, e0 + e1) if full_output else total

"""Scalar special functions: gamma, Bessel, normalized Bessel, Kummer 1F1, erf.

All evaluators accept scalars or numpy arrays for the argument ``z``/``x``
(orders and parameters are scalars) and return the same shape. Series are
summed with the term-ratio recurrence and stopped once
``|term| <= 1e-17 * |partial sum|``, with a hard cap of ``SERIES_CAP`` terms.
"""

import math

import numpy as np
from scipy import special as _sp

from .errors import ConvergenceError, DomainError

SERIES_CAP = 500
SERIES_RTOL = 1e-17

# Bessel J regimes: ascending series, Miller backward recurrence, Hankel.
SERIES_LIMIT = 8.0
HANKEL_LIMIT = 25.0
BESSEL_MAX_ARG = 1000.0


def _is_nonpositive_integer(x):
    return x <= 0 and float(x).is_integer()


def gamma_fn(x):
    """Gamma function; raises DomainError at the poles 0, -1, -2, ..."""
    x = float(x)
    if _is_nonpositive_integer(x):
        raise DomainError(f"gamma has a pole at {x}")
    return math.gamma(x)


def _sum_series(first, ratio, shape):
    """Sum ``first + first*r1 + first*r1*r2 + ...`` with ``ratio(m)`` = r_m.

    Works elementwise on arrays; every element must meet the relative stop
    criterion before the loop ends.
    """
    term = np.broadcast_to(np.asarray(first, dtype=float), shape).copy()
    total = term.copy()
    for m in range(1, SERIES_CAP + 1):
        term = term * ratio(m)
        total = total + term
        if np.all(np.abs(term) <= SERIES_RTOL * np.abs(total)):
            return total
    raise ConvergenceError(f"series did not converge within {SERIES_CAP} terms")


def _hyp0f1(b, w):
    """0F1(; b; w) for real w (both signs); b > 0."""
    w = np.asarray(w, dtype=float)
    return _sum_series(1.0, lambda m: w / (m * (b + m - 1.0)), w.shape)


# ---------------------------------------------------------------------------
# Bessel J


def _bessel_series(nu, z):
    half = z / 2.0
    return half**nu / gamma_fn(nu + 1.0) * _hyp0f1(nu + 1.0, -half * half)


def _bessel_hankel(nu, z):
    mu = 4.0 * nu * nu
    p = np.ones_like(z)
    q = np.zeros_like(z)
    a = np.ones_like(z)
    prev = np.full_like(z, np.inf)
    for m in range(1, 200):
        a = a * (mu - (2 * m - 1) ** 2) / (8.0 * m * z)
        mag = np.abs(a)
        if np.all(mag <= SERIES_RTOL) or np.any(mag > prev):
            break
        prev = mag
        sign = -1.0 if (m // 2) % 2 else 1.0
        if m % 2:
            q = q + sign * a
        else:
            p = p + sign * a
    chi = z - (0.5 * nu + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * z)) * (p * np.cos(chi) - q * np.sin(chi))


def _bessel_miller(nu, z):
    """J_nu(z) by backward recurrence normalised with the Neumann sum

    sum_k c_k J_{mu+2k}(z) = (z/2)^mu,  c_0 = Gamma(mu+1),
    c_k = (mu+2k) Gamma(mu+k) / k!.
    """
    # reduce to mu in [0, 1) and an integer offset (may be -1 for nu < 0)
    mu = nu - math.floor(nu)
    offset = int(round(nu - mu))
    need = max(offset, 1) + 1
    top = int(np.max(z)) + 40
    top += top % 2
    j_next = np.zeros_like(z)
    j_cur = np.full_like(z, 1e-30)
    norm = np.zeros_like(z)
    stored = {}
    for n in range(top, 0, -1):
        j_prev = 2.0 * (mu + n) / z * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        m = n - 1
        if m <= need:
            stored[m] = j_cur
        if m % 2 == 0:
            kk = m // 2
            if kk == 0:
                c = math.gamma(mu + 1.0)
            else:
                c = (mu + 2 * kk) * math.exp(math.lgamma(mu + kk) - math.lgamma(kk + 1))
            norm = norm + c * j_cur
        big = np.abs(j_cur) > 1e250
        if np.any(big):
            scale = np.where(big, 1e-250, 1.0)
            j_cur, j_next, norm = j_cur * scale, j_next * scale, norm * scale
            stored = {key: val * scale for key, val in stored.items()}
    factor = (z / 2.0) ** mu / norm
    if offset >= 0:
        return stored[offset] * factor
    # nu in (-1, 0): one step down from mu
    return (2.0 * mu / z * stored[0] - stored[1]) * factor


def bessel_j(nu, z):
    """Bessel function of the first kind J_nu(z) for real nu >= -1.

    Supported range: |z| <= 1000. Negative z is accepted only for integer
    orders (J_n(-z) = (-1)^n J_n(z)); non-integer negative orders are
    singular at z = 0.
    """
    nu = float(nu)
    if nu < -1.0:
        raise DomainError(f"order {nu} < -1 is not supported")
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(np.abs(z) > BESSEL_MAX_ARG):
        raise DomainError(f"|z| > {BESSEL_MAX_ARG} is outside the supported range")
    integer_order = nu.is_integer()
    if np.any(z < 0):
        if not integer_order:
            raise DomainError("negative argument needs an integer order")
    if nu < 0 and integer_order:
        # J_{-n} = (-1)^n J_n
        out = (-1.0) ** int(-nu) * bessel_j(-nu, z)
        return float(out[0]) if scalar else out
    sign = np.ones_like(z)
    if integer_order:
        sign = np.where(z < 0, (-1.0) ** int(nu), 1.0)
    az = np.abs(z)
    if nu < 0 and np.any(az == 0):
        raise DomainError(f"J_{nu} is singular at z = 0")
    out = np.empty_like(az)
    small = az <= SERIES_LIMIT
    large = az >= HANKEL_LIMIT
    mid = ~small & ~large
    if np.any(small):
        out[small] = _bessel_series(nu, az[small])
    if np.any(mid):
        out[mid] = _bessel_miller(nu, az[mid])
    if np.any(large):
        out[large] = _bessel_hankel(nu, az[large])
    out = out * sign
    return float(out[0]) if scalar else out


def normalized_bessel(alpha, z):
    """j_alpha(z) = Gamma(alpha+1) (2/z)^alpha J_alpha(z), with j_alpha(0) = 1.

    Even in z. Evaluated by the series in z^2 near the origin so the
    removable singularity is exact.
    """
    alpha = float(alpha)
    if alpha < -0.5:
        raise DomainError(f"alpha = {alpha} < -1/2")
    scalar = np.ndim(z) == 0
    az = np.abs(np.atleast_1d(np.asarray(z, dtype=float)))
    out = np.empty_like(az)
    small = az <= SERIES_LIMIT
    if np.any(small):
        w = az[small]
        out[small] = _hyp0f1(alpha + 1.0, -w * w / 4.0)
    if np.any(~small):
        w = az[~small]
        out[~small] = gamma_fn(alpha + 1.0) * (2.0 / w) ** alpha * bessel_j(alpha, w)
    return float(out[0]) if scalar else out


def normalized_bessel_i(alpha, z):
    """The real value j_alpha(i z) = sum_m (z^2/4)^m / (m! (alpha+1)_m).

    Every term is positive, so the result is >= 1 and free of cancellation.
    """
    alpha = float(alpha)
    if alpha < -0.5:
        raise DomainError(f"alpha = {alpha} < -1/2")
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=float))
    out = _hyp0f1(alpha + 1.0, z * z / 4.0)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Kummer 1F1


def kummer_1f1_series(a, b, z):
    """Raw Maclaurin series of 1F1(a; b; z), without any transformation.

    Accurate for z >= 0; for large negative z the alternating terms cancel
    and digits are lost, which is why ``kummer_1f1`` never uses it there.
    """
    a, b = float(a), float(b)
    if _is_nonpositive_integer(b):
        raise DomainError(f"1F1 undefined for b = {b}")
    z = np.asarray(z, dtype=float)
    return _sum_series(1.0, lambda m: (a + m - 1.0) / (b + m - 1.0) * z / m, z.shape)


def kummer_1f1(a, b, z):
    """Confluent hypergeometric function 1F1(a; b; z) for real arguments.

    Negative z goes through the Kummer transformation
    1F1(a; b; z) = e^z 1F1(b-a; b; -z).
    """
    a, b = float(a), float(b)
    if _is_nonpositive_integer(b):
        raise DomainError(f"1F1 undefined for b = {b}")
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=float))
    out = np.empty_like(z)
    neg = z < 0
    if np.any(~neg):
        out[~neg] = kummer_1f1_series(a, b, z[~neg])
    if np.any(neg):
        zn = z[neg]
        out[neg] = np.exp(zn) * kummer_1f1_series(b - a, b, -zn)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# error functions


def erf_fn(x):
    return _scalar_or_array(_sp.erf, x)


def erfc_fn(x):
    return _scalar_or_array(_sp.erfc, x)


def lower_incomplete_gamma(a, z):
    """gamma(a, z) = int_0^z t^(a-1) e^(-t) dt for a > 0, z >= 0."""
    if a <= 0:
        raise DomainError(f"lower incomplete gamma needs a > 0, got {a}")
    if np.any(np.asarray(z) < 0):
        raise DomainError("lower incomplete gamma needs z >= 0")
    return _scalar_or_array(lambda t: _sp.gammainc(a, t) * math.gamma(a), z)


def _scalar_or_array(func, x):
    out = func(np.asarray(x, dtype=float))
    return float(out) if np.ndim(out) == 0 else out

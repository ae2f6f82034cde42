"""Verdict engines for Dunkl complete monotonicity and positive definiteness."""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import (
    LaplaceDunkl,
    SquaredArgument,
    apply_intertwining,
    check_multiplicity,
    dunkl_operator_numeric,
    dunkl_operator_numeric_power,
    dunkl_operator_power_exact,
)
from .errors import ConvergenceError, DomainError, ModeError, NonHermitianError, StructureError
from .quadrature import DEFAULT_CONFIG
from .transform import FromTransform, Transformed, dunkl_translate, inverse_intertwine

EXACT_MAX_ORDER = 12
NUMERIC_MAX_ORDER = 4
EXACT_TOL = 1e-10
NUMERIC_TOL = 1e-6
HERM_TOL = 1e-8
PSD_TOL = 1e-8
MAX_GRAM_POINTS = 12
MAX_EIGEN_SIZE = 16


def chebyshev_grid(sigma, size=41):
    """Chebyshev-Lobatto points on [-(sigma - d), sigma - d], d = 1e-3 sigma, plus 0."""
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    if size < 1:
        raise DomainError("grid size must be >= 1")
    half = sigma * (1.0 - 1e-3)
    if size == 1:
        return np.zeros(1)
    pts = half * np.cos(np.pi * np.arange(size) / (size - 1))
    pts[np.abs(pts) < 1e-15 * half] = 0.0
    return np.unique(np.append(pts, 0.0))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


@dataclass
class CMReport:
    k: float
    sigma: float
    orders_checked: int
    grid: list
    per_order_min: list
    tolerances: list
    verdict: str
    first_violation: tuple | None
    mode: str

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_dict(self):
        d = asdict(self)
        if self.first_violation is not None:
            n, x, v = self.first_violation
            d["first_violation"] = {"n": n, "x": x, "value": v}
        return _jsonable(d)


def _order_values(k, phi, n, grid, mode, cfg):
    if mode == "exact":
        vals = dunkl_operator_power_exact(k, phi, n, grid, cfg)
    elif n == 1:
        vals = dunkl_operator_numeric(k, phi.bind(k, cfg), grid)
    else:
        vals = dunkl_operator_numeric_power(k, phi.bind(k, cfg), n, grid)
    return (-1.0) ** n * np.asarray(vals, dtype=float)


def check_dunkl_cm(k, phi, sigma, N, grid_size=41, mode="auto", cfg=DEFAULT_CONFIG, grid=None):
    """Test (-1)^n T_k^n phi >= -tol(n) on a grid in (-sigma, sigma) for n <= N.

    ``exact`` mode uses the eigenrelation on structured specs (N <= 12);
    ``numeric`` mode nests difference quotients (N <= 4).
    """
    k = check_multiplicity(k)
    if mode == "auto":
        mode = "exact" if phi.structured else "numeric"
    if mode == "exact":
        if not phi.structured:
            raise StructureError(f"exact mode needs a structured spec, got {type(phi).__name__}")
        if N > EXACT_MAX_ORDER:
            raise ModeError(f"exact mode supports N <= {EXACT_MAX_ORDER}")
    elif mode == "numeric":
        if N > NUMERIC_MAX_ORDER:
            raise ModeError(f"numeric mode supports N <= {NUMERIC_MAX_ORDER}")
    else:
        raise DomainError(f"unknown mode {mode!r}")
    pts = chebyshev_grid(sigma, grid_size) if grid is None else np.asarray(grid, dtype=float)
    if np.any(np.abs(pts) >= sigma):
        raise DomainError("grid points must lie in the open interval (-sigma, sigma)")
    mins, tols = [], []
    violation = None
    for n in range(N + 1):
        vals = _order_values(k, phi, n, pts, mode, cfg)
        scale = float(np.max(np.abs(vals)))
        base = EXACT_TOL if mode == "exact" else NUMERIC_TOL * 10.0**n
        tol = base * max(1.0, scale)
        i = int(np.argmin(vals))
        mins.append(float(vals[i]))
        tols.append(tol)
        if violation is None and vals[i] < -tol:
            violation = (n, float(pts[i]), float(vals[i]))
    return CMReport(
        k=k,
        sigma=float(sigma),
        orders_checked=N,
        grid=pts.tolist(),
        per_order_min=mins,
        tolerances=tols,
        verdict="fail" if violation else "pass",
        first_violation=violation,
        mode=mode,
    )


# ---------------------------------------------------------------------------
# Hermitian eigenvalues


def _symmetric_jacobi(a, max_sweeps=60):
    """Eigenvalues of a real symmetric matrix by the cyclic Jacobi method."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    norm = np.linalg.norm(a)
    if norm == 0:
        return np.zeros(n)
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= 1e-15 * norm:
            return np.sort(np.diag(a))
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :], a[q, :] = c * rp - s * rq, s * rp + c * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * cp - s * cq, s * cp + c * cq
    raise ConvergenceError("Jacobi eigenvalue iteration did not converge")


def hermitian_defect(m):
    m = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def hermitian_eigenvalues(m, herm_tol=HERM_TOL):
    """Ascending eigenvalues of a Hermitian matrix (n <= 16).

    The complex matrix A + iB is embedded as the real symmetric
    [[A, -B], [B, A]], whose spectrum is that of A + iB with each eigenvalue
    doubled.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError("expected a square matrix")
    n = m.shape[0]
    if n > MAX_EIGEN_SIZE:
        raise DomainError(f"matrix size {n} exceeds {MAX_EIGEN_SIZE}")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if hermitian_defect(m) > herm_tol * scale:
        raise NonHermitianError(f"hermitian defect {hermitian_defect(m):.3e} exceeds tolerance")
    h = (m + m.conj().T) / 2
    a, b = h.real, h.imag
    big = np.block([[a, -b], [b, a]])
    return _symmetric_jacobi(big)[::2]


def hermitian_eigen_min(m, herm_tol=HERM_TOL):
    return float(hermitian_eigenvalues(m, herm_tol)[0])


# ---------------------------------------------------------------------------
# positive definiteness


@dataclass
class GramReport:
    k: float
    points: list
    gram: list
    eigenvalues: list
    min_eigenvalue: float
    max_diagonal: float
    hermitian_defect: float
    verdict: str
    sign: int
    psd_tol: float = PSD_TOL
    herm_tol: float = HERM_TOL

    @property
    def passed(self):
        return self.verdict == "psd"

    def to_dict(self):
        d = asdict(self)
        g = np.asarray(self.gram, dtype=complex)
        d["gram"] = {"re": g.real.tolist(), "im": g.imag.tolist()}
        return _jsonable(d)


def check_dunkl_pd(k, phi, points, cfg=DEFAULT_CONFIG, sign=-1, method="auto", psd_tol=PSD_TOL, herm_tol=HERM_TOL):
    """Gram test G[j, l] = tau_{x_j} phi (x_l) for an even real phi.

    ``sign=-1`` is the translation that reduces to phi(x_l - x_j) at k = 0,
    i.e. the classical Bochner matrix.
    """
    k = check_multiplicity(k)
    pts = np.asarray(points, dtype=float).ravel()
    if not 1 <= pts.size <= MAX_GRAM_POINTS:
        raise DomainError(f"need 1..{MAX_GRAM_POINTS} points")
    if np.unique(pts).size != pts.size:
        raise DomainError("points must be distinct")
    if phi.parity != "even":
        raise DomainError("the PD checker needs an even real function")
    y = pts[:, None]
    x = pts[None, :]
    gram = np.asarray(dunkl_translate(k, phi, y, x, cfg, sign=sign, method=method, real=False), dtype=complex)
    gram = gram.reshape(pts.size, pts.size)
    defect = hermitian_defect(gram)
    h = (gram + gram.conj().T) / 2
    eig = hermitian_eigenvalues(h, herm_tol)
    max_diag = float(np.max(np.real(np.diag(h))))
    ok = eig[0] >= -psd_tol * max(max_diag, 0.0) and defect <= herm_tol
    return GramReport(
        k=k,
        points=pts.tolist(),
        gram=gram.tolist(),
        eigenvalues=eig.tolist(),
        min_eigenvalue=float(eig[0]),
        max_diagonal=max_diag,
        hermitian_defect=defect,
        verdict="psd" if ok else "indefinite",
        sign=sign,
        psd_tol=psd_tol,
        herm_tol=herm_tol,
    )


@dataclass
class SchoenbergReport:
    cm: CMReport
    pd: GramReport

    @property
    def consistent(self):
        return self.cm.passed and self.pd.passed

    def to_dict(self):
        return {"cm": self.cm.to_dict(), "pd": self.pd.to_dict(), "consistent": self.consistent}


def check_schoenberg(k, mu, sigma, N, points, cfg=DEFAULT_CONFIG, grid_size=41):
    """CM of phi = int E_k(-x, t) dmu(t) together with PD of x -> phi(x^2)."""
    phi = LaplaceDunkl(mu)
    cm = check_dunkl_cm(k, phi, sigma, N, grid_size=grid_size, mode="exact", cfg=cfg)
    pd = check_dunkl_pd(k, SquaredArgument(phi), points, cfg, method="product")
    return SchoenbergReport(cm, pd)


# ---------------------------------------------------------------------------
# V_k and complete monotonicity


def exponential_family(c):
    """psi(x) = e^{-c x} with its derivative provider."""

    def psi(x):
        return np.exp(-c * np.asarray(x))

    def derivative(n):
        return lambda x: (-c) ** n * np.exp(-c * np.asarray(x))

    return psi, derivative


def check_vk_preserves_cm(k, psi, derivative, sigma, N, grid_size=41, n_nodes=64):
    """Signs of (-1)^n T_k^n (V_k psi) = (-1)^n V_k(psi^(n)) on (-sigma, sigma).

    ``derivative(n)`` must return the n-th derivative of psi as a callable.
    """
    k = check_multiplicity(k)
    pts = chebyshev_grid(sigma, grid_size)
    mins, tols = [], []
    violation = None
    for n in range(N + 1):
        dn = psi if n == 0 else derivative(n)
        if dn is None:
            raise StructureError(f"no derivative of order {n} was supplied")
        vals = (-1.0) ** n * np.real(np.asarray(apply_intertwining(k, dn, pts, n_nodes), dtype=complex))
        vals = np.broadcast_to(vals, pts.shape)
        tol = EXACT_TOL * max(1.0, float(np.max(np.abs(vals))))
        i = int(np.argmin(vals))
        mins.append(float(vals[i]))
        tols.append(tol)
        if violation is None and vals[i] < -tol:
            violation = (n, float(pts[i]), float(vals[i]))
    return CMReport(
        k=k, sigma=float(sigma), orders_checked=N, grid=pts.tolist(), per_order_min=mins,
        tolerances=tols, verdict="fail" if violation else "pass", first_violation=violation, mode="exact",
    )


# ---------------------------------------------------------------------------
# convexity criterion


@dataclass
class ConvexityReport:
    k: float
    exponent: float
    grid: list
    weighted_transform: list
    min_second_difference: float
    convex: bool
    decays: bool
    status: str
    w_min: float | None = None
    conclusion_positivity: bool | None = None
    conclusion_cm: CMReport | None = None
    conclusion_cm_positive_half: CMReport | None = None
    notes: list = field(default_factory=list)

    def to_dict(self):
        d = asdict(self)
        for key in ("conclusion_cm", "conclusion_cm_positive_half"):
            rep = getattr(self, key)
            d[key] = None if rep is None else rep.to_dict()
        return _jsonable(d)


def _second_divided_differences(x, f):
    h0 = x[1:-1] - x[:-2]
    h1 = x[2:] - x[1:-1]
    return 2.0 * ((f[2:] - f[1:-1]) / h1 - (f[1:-1] - f[:-2]) / h0) / (h0 + h1)


def _transform_values(k, phi, y, cfg):
    if isinstance(phi, FromTransform):
        return np.asarray(phi.density(y), dtype=float)
    return np.real(Transformed(k, phi, cfg).evaluate(k, y))


def check_convexity_theorem(
    k, phi, grid, cfg=DEFAULT_CONFIG, exponent=None, x_grid=None, cm_orders=2, cm_sigma=1.0, cm_grid_size=9
):
    """Convexity criterion for W_k phi >= 0.

    Hypotheses: y -> D_k phi(y) y^exponent is convex on ``grid`` (y >= 0) and
    tends to 0. When they hold, the report records W_k phi >= 0 on
    ``x_grid`` and the CM test of x -> phi(sqrt|x|), on the full interval and
    on its positive half. ``exponent`` defaults to 2k + 1.
    """
    k = check_multiplicity(k)
    if phi.parity != "even":
        raise DomainError("the convexity criterion needs an even real function")
    ys = np.asarray(grid, dtype=float)
    if ys.size < 3 or np.any(ys < 0) or np.any(np.diff(ys) <= 0):
        raise DomainError("grid must be >= 3 increasing nonnegative points")
    expo = 2.0 * k + 1.0 if exponent is None else float(exponent)
    with np.errstate(divide="ignore", invalid="ignore"):
        weighted = _transform_values(k, phi, ys, cfg) * np.where(ys == 0, 0.0 if expo > 0 else 1.0, ys**expo)
    scale = max(float(np.max(np.abs(weighted))), 1e-300)
    d2 = _second_divided_differences(ys, weighted)
    # rounding noise in second divided differences grows like 1/h^2
    tol = 1e-10 * scale / float(np.min(np.diff(ys))) ** 2
    convex = bool(np.min(d2) >= -tol)
    decays = bool(abs(weighted[-1]) <= 1e-3 * scale)
    report = ConvexityReport(
        k=k, exponent=expo, grid=ys.tolist(), weighted_transform=weighted.tolist(),
        min_second_difference=float(np.min(d2)), convex=convex, decays=decays, status="theorem silent",
    )
    if not (convex and decays):
        return report
    xs = ys if x_grid is None else np.asarray(x_grid, dtype=float)
    w = np.asarray(inverse_intertwine(k, phi, xs, cfg, method="integral"), dtype=float)
    w_scale = max(1.0, float(np.max(np.abs(w))))
    report.w_min = float(np.min(w))
    report.conclusion_positivity = bool(report.w_min >= -1e-8 * w_scale)

    from .core import Raw

    def composed(x):
        return phi.evaluate(k, np.sqrt(np.abs(np.asarray(x, dtype=float))), cfg)

    g = Raw(composed, parity="even")
    report.conclusion_cm = check_dunkl_cm(k, g, cm_sigma, cm_orders, cm_grid_size, mode="numeric", cfg=cfg)
    half = chebyshev_grid(cm_sigma, cm_grid_size)
    half = half[half > 0.05 * cm_sigma]
    report.conclusion_cm_positive_half = check_dunkl_cm(
        k, g, cm_sigma, cm_orders, mode="numeric", cfg=cfg, grid=half
    )
    ok = report.conclusion_positivity and report.conclusion_cm.passed
    report.status = "confirmed" if ok else "violated"
    return report

"""Gaussian-weighted Laplace-Dunkl integrals in closed Kummer form.

For the density e^{-p t^2} t^{2k} the integral
int_0^inf E_k(-x, t) e^{-p t^2} t^{2k} dt splits into an even part
I_{k,p}(x) = Gamma(k+1/2) e^{x^2/4p} / (2 p^{k+1/2}) and an odd part
J_{k,p}(x) = Gamma(k+1) x / (2 (2k+1) p^{k+1}) 1F1(k+1; k+3/2; x^2/4p),
so that Psi_{k,p} = I - J. The sum I + J is the same integral at +x.
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import specfun
from .core import Density, LaplaceDunkl, MeasureSpec, check_multiplicity, dunkl_kernel, register_closed_form
from .errors import DomainError
from .quadrature import DEFAULT_CONFIG, Envelope, integrate_semi_infinite

MATCH_TOL = 1e-7


@dataclass(frozen=True)
class KummerParams:
    k: float
    p: float

    def __post_init__(self):
        if not self.k > -1:
            raise DomainError("need k > -1")
        if not self.p > 0:
            raise DomainError("need p > 0")


# ---------------------------------------------------------------------------
# Sonine integral


def sonine_classical(k, p, x):
    """x^k e^{-x^2/4p} / (2p)^{k+1} = int_0^inf J_k(xt) e^{-pt^2} t^{k+1} dt."""
    KummerParams(k, p)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("need x >= 0")
    out = x**k * np.exp(-x * x / (4 * p)) / (2 * p) ** (k + 1)
    return float(out) if out.ndim == 0 else out


def sonine_quadrature(k, p, x, cfg=DEFAULT_CONFIG):
    """The Sonine integral by quadrature.

    J_k(xt) t^{k+1} is rewritten as (x/2)^k / Gamma(k+1) j_k(xt) t^{2k+1}
    so the integrand is smooth at 0 and bounded by the envelope.
    """
    KummerParams(k, p)
    if k < -0.5:
        raise DomainError("quadrature twin needs k >= -1/2")
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs < 0):
        raise DomainError("need x >= 0")
    pref = (xs / 2.0) ** k / math.gamma(k + 1.0)

    def g(t):
        return specfun.normalized_bessel(k, xs[:, None] * t[None, :]) * np.exp(-p * t * t) * t ** (2 * k + 1)

    raw = integrate_semi_infinite(g, Envelope(p=p, rho=2 * k + 1), cfg)
    out = pref * raw
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# closed forms


def i_kp(params, x):
    k, p = params.k, params.p
    if k <= -0.5:
        raise DomainError("I_{k,p} needs k > -1/2")
    x = np.asarray(x, dtype=float)
    out = math.gamma(k + 0.5) * np.exp(x * x / (4 * p)) / (2 * p ** (k + 0.5))
    return float(out) if out.ndim == 0 else out


def j_kp(params, x):
    k, p = params.k, params.p
    x = np.asarray(x, dtype=float)
    lead = math.gamma(k + 1.0) / (2 * (2 * k + 1) * p ** (k + 1))
    out = lead * x * specfun.kummer_1f1(k + 1.0, k + 1.5, x * x / (4 * p))
    return float(out) if out.ndim == 0 else out


def psi_kp(params, x):
    """Psi_{k,p} = I - J = int_0^inf E_k(-x, t) e^{-pt^2} t^{2k} dt."""
    return i_kp(params, x) - j_kp(params, x)


def phi_kp_paper(params, x):
    """I + J, i.e. Psi_{k,p}(-x)."""
    return i_kp(params, x) + j_kp(params, x)


@register_closed_form("psi_kp")
def _psi_named(k, x, p):
    return psi_kp(KummerParams(k, p), x)


@register_closed_form("phi_kp_paper")
def _phi_named(k, x, p):
    return phi_kp_paper(KummerParams(k, p), x)


def erfc_form(x):
    """sqrt(pi) e^{x^2} erfc(x), the k = 0, p = 1/4 case of Psi."""
    from scipy.special import erfcx

    out = math.sqrt(math.pi) * erfcx(np.asarray(x, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def psi_measure(params):
    """The measure e^{-pt^2} t^{2k} dt representing Psi_{k,p}."""
    return MeasureSpec(density=Density(p=params.p, rho=2 * params.k))


# ---------------------------------------------------------------------------
# quadrature oracle and adjudication


def laplace_dunkl_oracle(k, p, rho, sign, x, cfg=DEFAULT_CONFIG, component="full"):
    """int_0^inf E_k(sign x, t) e^{-p t^2} t^rho dt by quadrature.

    ``component="even"`` keeps only j_{k-1/2}(ixt), the even part of the kernel.
    """
    k = check_multiplicity(k)
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    if rho < 0 or not p > 0:
        raise DomainError("need rho >= 0 and p > 0")
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    sigma = float(np.max(np.abs(xs)))

    def g(t):
        u = sign * xs[:, None]
        w = np.exp(-p * t * t) * t**rho
        if component == "even":
            kern = specfun.normalized_bessel_i(k - 0.5, u * t[None, :]) if k > 0 else np.cosh(u * t[None, :])
        else:
            kern = dunkl_kernel(k, u, t[None, :])
        return kern * w[None, :]

    out = np.atleast_1d(integrate_semi_infinite(g, Envelope(p=p, sigma=sigma, rho=rho), cfg))
    return float(out[0]) if scalar else out


@dataclass
class AdjudicationRecord:
    """Errors of one closed form against the oracle for each (rho, sign)."""

    closed_form: str
    rho_tested: list
    sign_tested: list
    max_rel_error: dict
    matched_combination: tuple | None
    matches: list

    def to_dict(self):
        d = asdict(self)
        d["max_rel_error"] = {k: float(v) for k, v in self.max_rel_error.items()}
        d["matched_combination"] = (
            None if self.matched_combination is None
            else {"rho": self.matched_combination[0], "sign": self.matched_combination[1]}
        )
        d["matches"] = [{"rho": r, "sign": s} for r, s in self.matches]
        return d


@dataclass
class AdjudicationReport:
    ks: list
    ps: list
    x_grid: list
    records: list
    cm_verdicts: list = field(default_factory=list)
    erfc_max_error: float | None = None

    @property
    def unique_matches(self):
        return all(len(r.matches) == 1 for r in self.records)

    @property
    def psi_matched_reflected(self):
        rec = next(r for r in self.records if r.closed_form == "psi_kp")
        return rec.matches == [("2k", -1)]

    @property
    def passed(self):
        erfc_ok = self.erfc_max_error is None or self.erfc_max_error <= 1e-10
        return self.unique_matches and self.psi_matched_reflected and all(self.cm_verdicts) and erfc_ok

    def to_dict(self):
        return {
            "ks": self.ks,
            "ps": self.ps,
            "x_grid": [float(v) for v in self.x_grid],
            "records": [r.to_dict() for r in self.records],
            "cm_verdicts": [bool(v) for v in self.cm_verdicts],
            "erfc_max_error": self.erfc_max_error,
            "passed": self.passed,
        }


CLOSED_FORMS = {"psi_kp": psi_kp, "phi_kp_paper": phi_kp_paper}


def adjudicate_theorem6(ks, ps, x_grid, cfg=DEFAULT_CONFIG, cm_sigma=3.0, cm_orders=8, run_cm=True):
    """Compare each closed form with the oracle for rho in {2k, 2k+1}, sign in {-1, +1}.

    One AdjudicationRecord per closed form; errors are maxima over all
    (k, p, x). Optionally runs the exact CM check on Psi's measure.
    """
    from .monotonicity import check_dunkl_cm

    xs = np.asarray(x_grid, dtype=float)
    if not (len(ks) and len(ps) and xs.size):
        raise DomainError("grids must be nonempty")
    combos = [("2k", -1), ("2k", 1), ("2k+1", -1), ("2k+1", 1)]
    oracle = {}
    for k in ks:
        for p in ps:
            for label, sign in combos:
                rho = 2 * k if label == "2k" else 2 * k + 1
                oracle[(k, p, label, sign)] = np.atleast_1d(laplace_dunkl_oracle(k, p, rho, sign, xs, cfg))
    records = []
    for name, func in CLOSED_FORMS.items():
        errs = {}
        for label, sign in combos:
            worst = 0.0
            for k in ks:
                for p in ps:
                    ref = oracle[(k, p, label, sign)]
                    val = np.atleast_1d(func(KummerParams(k, p), xs))
                    worst = max(worst, float(np.max(np.abs(val - ref) / np.abs(ref))))
            errs[f"rho={label},sign={sign:+d}"] = worst
        matches = [(label, sign) for label, sign in combos if errs[f"rho={label},sign={sign:+d}"] <= MATCH_TOL]
        records.append(
            AdjudicationRecord(
                closed_form=name,
                rho_tested=["2k", "2k+1"],
                sign_tested=[-1, 1],
                max_rel_error=errs,
                matched_combination=matches[0] if len(matches) == 1 else None,
                matches=matches,
            )
        )
    report = AdjudicationReport(ks=list(ks), ps=list(ps), x_grid=xs.tolist(), records=records)
    if run_cm:
        for k in ks:
            for p in ps:
                phi = LaplaceDunkl(psi_measure(KummerParams(k, p)))
                report.cm_verdicts.append(check_dunkl_cm(k, phi, cm_sigma, cm_orders, mode="exact", cfg=cfg).passed)
    if 0 in ks or 0.0 in ks:
        sel = xs[np.abs(xs) <= 2]
        if sel.size:
            report.erfc_max_error = float(np.max(np.abs(psi_kp(KummerParams(0.0, 0.25), sel) - erfc_form(sel))))
    return report

"""Brute-force quadrature ground truth.

The wake integral

    F(x, rho, alpha) = int_{-inf}^{inf} exp[-rho/2 cosh(2u - i alpha)]
                       cos(x cosh u) du

and every intermediate integral the expansions approximate are evaluated
here by adaptive Gauss-Kronrod quadrature, so the series machinery can be
checked against something that knows nothing about series.

The integrand of F is the real part of a single complex exponential
combined with its conjugate, which works out to the real, even function

    exp(-rho/2 cos(alpha) cosh 2u) * cos(rho/2 sin(alpha) sinh 2u)
                                   * cos(x cosh u).

The infinite u-range is truncated where the Gaussian-type envelope
guarantees the tail is negligible; close to |alpha| = pi/2 the envelope
dies and the tail is instead integrated as a Fourier integral in the phase
variable (QUADPACK's oscillatory rule with nonlinear phase substitution).

Endpoint square-root singularities of the branch-cut integrals are removed
by the substitution tau = p sin(theta) before any rule sees them.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

from scipy.integrate import IntegrationWarning, quad

from .errors import AccuracyError, DomainError, InternalConsistencyError
from .specfun import upper_inc_gamma

#: Subdivision budget: at most ~1e6 integrand evaluations per integral
#: (21-point Gauss-Kronrod panels).
MAX_SUBDIVISIONS = 47_000

_HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class EvalPoint:
    """Evaluation coordinates (x, rho, alpha) with their derived parameters.

    x     : along-track coordinate, > 0
    rho   : radial coordinate, > 0
    alpha : polar angle in [-pi/2, pi/2]; all derived quantities use |alpha|
            since F is even in alpha.

    Derived: M = x^2/(4 rho), p = 2 rho / x, c = cos(alpha/2),
    s = sin(alpha/2), u0 = c (1 - p^2 tan^2(alpha/2) / 2) and
    xi0 = 2 M u0 / x (the rescaled intercept that ends the Laplace-type
    integral I2).
    """

    x: float
    rho: float
    alpha: float

    def __post_init__(self):
        for name in ("x", "rho", "alpha"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise DomainError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, float(v))
        if self.x <= 0:
            raise DomainError(f"x must be positive, got {self.x}")
        if self.rho <= 0:
            raise DomainError(f"rho must be positive, got {self.rho}")
        if abs(self.alpha) > _HALF_PI + 4e-16:
            raise DomainError(f"|alpha| must not exceed pi/2, got {self.alpha}")

    @property
    def alpha_abs(self) -> float:
        return abs(self.alpha)

    @property
    def M(self) -> float:
        return self.x * self.x / (4.0 * self.rho)

    @property
    def p(self) -> float:
        return 2.0 * self.rho / self.x

    @property
    def c(self) -> float:
        return math.cos(0.5 * self.alpha_abs)

    @property
    def s(self) -> float:
        return math.sin(0.5 * self.alpha_abs)

    @property
    def u0(self) -> float:
        t = math.tan(0.5 * self.alpha_abs)
        return self.c * (1.0 - 0.5 * self.p * self.p * t * t)

    @property
    def xi0(self) -> float:
        return 2.0 * self.M * self.u0 / self.x


@dataclass(frozen=True)
class QuadResult:
    """Quadrature value with its error estimate and bookkeeping.

    abs_error_estimate includes any truncation tail bound;
    truncation_point is the U at which an infinite range was cut (or the
    finite upper limit when no cut was needed).
    """

    value: float
    abs_error_estimate: float
    evaluations: int
    truncation_point: float


def _run_quad(f, a, b, abs_tol, rel_tol, points=None, limit=MAX_SUBDIVISIONS,
              relax=20.0):
    """quad wrapper: QUADPACK may flag roundoff while already at ~1e-14;
    only escalate to AccuracyError when the reported estimate is genuinely
    worse than `relax` times the request.  The estimate itself is always
    passed through unmodified."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        out = quad(f, a, b, epsabs=abs_tol, epsrel=rel_tol, limit=limit,
                   points=points, full_output=1)
    value, err, info = out[0], out[1], out[2]
    neval = int(info.get("neval", 0)) if isinstance(info, dict) else 0
    if len(out) > 3 and err > relax * max(abs_tol, rel_tol * abs(value)):
        raise AccuracyError(f"quadrature stalled: {out[3]}", value=value,
                            error_estimate=err)
    return value, err, neval


def integrate_adaptive(f, a: float, b: float, abs_tol: float = 1e-12,
                       rel_tol: float = 1e-12, singularity: str | None = None,
                       max_evaluations: int = 1_000_000) -> QuadResult:
    """Adaptive quadrature of f over the finite interval [a, b].

    Integrable inverse-square-root endpoint singularities must be declared
    via singularity = 'sqrt-lower' | 'sqrt-upper' | 'sqrt-both'; the
    corresponding sine substitution restores smoothness before the nested
    Gauss-Kronrod rule runs.  Raises AccuracyError (carrying the best
    estimate) once the evaluation budget is exhausted (21 evaluations per
    panel).
    """
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise DomainError(f"need finite a < b, got [{a}, {b}]")
    if max_evaluations < 21:
        raise DomainError("max_evaluations must allow at least one panel")
    w = b - a
    if singularity is None:
        g, lo, hi = f, a, b
    elif singularity == "sqrt-upper":
        def g(theta, _f=f):
            return _f(a + w * math.sin(theta)) * w * math.cos(theta)
        lo, hi = 0.0, _HALF_PI
    elif singularity == "sqrt-lower":
        def g(theta, _f=f):
            return _f(b - w * math.sin(theta)) * w * math.cos(theta)
        lo, hi = 0.0, _HALF_PI
    elif singularity == "sqrt-both":
        def g(theta, _f=f):
            st = math.sin(theta)
            return _f(a + w * st * st) * 2.0 * w * st * math.cos(theta)
        lo, hi = 0.0, _HALF_PI
    else:
        raise DomainError(f"unknown singularity declaration {singularity!r}")
    value, err, neval = _run_quad(g, lo, hi, abs_tol, rel_tol,
                                  limit=max(max_evaluations // 21, 1))
    return QuadResult(value, err, neval, b)


# ---------------------------------------------------------------------------
# the defining integral


def _phase_oscillations(x, rho, alpha, U):
    """Rough count of integrand oscillations on [0, U]."""
    k2 = 0.5 * rho * math.sin(alpha)
    total = k2 * math.sinh(2.0 * U) + x * math.cosh(U)
    return total / (2.0 * math.pi)


def _invert_phase(v, k2, sg, x, lo):
    """Solve k2 sinh 2u + sg x cosh u = v for u >= lo (phase is monotone there)."""
    u = max(lo, 0.5 * math.asinh(max(v, 1.0) / k2)) if k2 > 0 else lo
    for _ in range(100):
        g = k2 * math.sinh(2.0 * u) + sg * x * math.cosh(u) - v
        dg = 2.0 * k2 * math.cosh(2.0 * u) + sg * x * math.sinh(u)
        step = g / dg
        u = min(max(u - step, lo), 90.0)
        if abs(step) <= 1e-15 * max(1.0, abs(u)):
            return u
    return u


def _oscillatory_F(pt: EvalPoint, abs_tol: float):
    """F for |alpha| near pi/2: finite core + Fourier-integral tails.

    Beyond the stationary point of the slow phase, each cosine component
    cos(k2 sinh 2u +/- x cosh u) is rewritten with v = phase(u) so the tail
    becomes int g(v) cos v dv, handled by the QUADPACK Fourier rule.
    """
    x, rho, alpha = pt.x, pt.rho, pt.alpha_abs
    k1 = 0.5 * rho * math.cos(alpha)
    k2 = 0.5 * rho * math.sin(alpha)
    U = math.log(max(x / (2.0 * k2), 1.0) + 2.0) + 1.5
    # the minus-phase must be safely increasing and positive at the cut
    while (2.0 * k2 * math.cosh(2.0 * U) - x * math.sinh(U) < k2 * math.cosh(2.0 * U)
           or k2 * math.sinh(2.0 * U) - x * math.cosh(U) < max(2.0, x)):
        U += 0.25

    def h(u):
        return 0.5 * math.exp(-k1 * math.cosh(2.0 * u))

    def core(u):
        A = k2 * math.sinh(2.0 * u)
        B = x * math.cosh(u)
        return h(u) * (math.cos(A + B) + math.cos(A - B))

    value, err, neval = _run_quad(core, -U, U, 0.25 * abs_tol, 1e-13)

    for sg in (1.0, -1.0):
        phi_u = k2 * math.sinh(2.0 * U) + sg * x * math.cosh(U)

        def g(v, _sg=sg):
            u = _invert_phase(v, k2, _sg, x, U - 1.0)
            dphi = 2.0 * k2 * math.cosh(2.0 * u) + _sg * x * math.sinh(u)
            return h(u) / dphi

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            out = quad(g, phi_u, math.inf, weight="cos", wvar=1.0,
                       epsabs=0.25 * abs_tol, limlst=400, limit=2000,
                       full_output=1)
        tail, terr = out[0], out[1]
        value += 2.0 * tail
        err += 2.0 * terr
        info = out[2] if len(out) > 2 and isinstance(out[2], dict) else {}
        neval += int(info.get("neval", 0))
    return QuadResult(value, err, neval, U)


def oracle_F(pt: EvalPoint, abs_tol: float = 1e-12) -> QuadResult:
    """The wake integral F at pt, to absolute tolerance abs_tol (>= 1e-14).

    The two-sided u-range is truncated at U chosen from the envelope rule
    rho cos(alpha) cosh(2U) / 2 >= ln(1/abs_tol) + 5; the residual tail
    bound is folded into the reported error estimate.  Within 1e-6 of
    |alpha| = pi/2 (or whenever the envelope would demand an impractical
    oscillation count) the Fourier-tail path takes over.
    """
    if abs_tol < 1e-14:
        raise DomainError("oracle_F supports abs_tol >= 1e-14")
    x, rho, alpha = pt.x, pt.rho, pt.alpha_abs
    cos_a = math.cos(alpha)
    target = math.log(1.0 / abs_tol) + 5.0

    if _HALF_PI - alpha <= 1e-6:
        return _oscillatory_F(pt, abs_tol)

    arg = 2.0 * target / (rho * cos_a)
    U = 0.5 * math.acosh(max(arg, 2.0))
    if _phase_oscillations(x, rho, alpha, U) > 20_000:
        return _oscillatory_F(pt, abs_tol)

    k1 = 0.5 * rho * cos_a
    k2 = 0.5 * rho * math.sin(alpha)

    def f(u):
        c2u = math.cosh(2.0 * u)
        return (math.exp(-k1 * c2u) * math.cos(k2 * math.sinh(2.0 * u))
                * math.cos(x * math.cosh(u)))

    value, err, neval = _run_quad(f, -U, U, 0.5 * abs_tol, 1e-13)
    aW = k1 * 0.5 * math.exp(2.0 * U)   # ~ k1 cosh(2U)
    tail_bound = 2.0 * math.exp(-aW) / aW
    return QuadResult(value, err + tail_bound, neval, U)


# ---------------------------------------------------------------------------
# branch-cut and imaginary-axis integrals


def oracle_I1_alpha0(pt: EvalPoint) -> QuadResult:
    """Branch-cut integral at alpha = 0:

        I1 = int_0^p exp(-M tau^2) sin(2 M tau) / sqrt(p^2 - tau^2) dtau.
    """
    if pt.alpha != 0.0:
        raise DomainError("oracle_I1_alpha0 requires alpha = 0")
    M, p = pt.M, pt.p

    def f(tau):
        return math.exp(-M * tau * tau) * math.sin(2.0 * M * tau) / math.sqrt(
            (p - tau) * (p + tau))

    return integrate_adaptive(f, 0.0, p, abs_tol=1e-15, rel_tol=5e-14,
                              singularity="sqrt-upper")


def oracle_I1_alpha(pt: EvalPoint) -> QuadResult:
    """Branch-cut integral for 0 <= alpha <= pi/2:

        I1 = int_0^p exp(-M tau^2) sin(2 M c tau)
             cos(2 M s sqrt(p^2 - tau^2)) / sqrt(p^2 - tau^2) dtau.
    """
    M, p, c, s = pt.M, pt.p, pt.c, pt.s

    def f(tau):
        root = math.sqrt((p - tau) * (p + tau))
        return (math.exp(-M * tau * tau) * math.sin(2.0 * M * c * tau)
                * math.cos(2.0 * M * s * root) / root)

    return integrate_adaptive(f, 0.0, p, abs_tol=1e-15, rel_tol=5e-14,
                              singularity="sqrt-upper")


def oracle_I2(pt: EvalPoint) -> QuadResult:
    """Laplace-type integral along the imaginary axis:

        I2 = int_0^xi0 exp(rho xi^2 - x c xi)
             cos(s x sqrt(1 + xi^2)) / sqrt(1 + xi^2) dxi.
    """
    x, rho, c, s, xi0 = pt.x, pt.rho, pt.c, pt.s, pt.xi0
    if xi0 <= 0:
        raise DomainError(f"xi0 = {xi0} is not positive at this point")

    def f(xi):
        root = math.sqrt(1.0 + xi * xi)
        return math.exp(rho * xi * xi - x * c * xi) * math.cos(s * x * root) / root

    value, err, neval = _run_quad(f, 0.0, xi0, 1e-16, 5e-14)
    return QuadResult(value, err, neval, xi0)


# ---------------------------------------------------------------------------
# coefficient integrals


def _gamma_envelope_tail(power, chi):
    """log of int_chi^inf w^(power-1) e^-w dw, or -inf when utterly negligible."""
    if chi > 690.0:
        return -math.inf
    if power <= 0:
        return -chi - math.log(chi)
    g = upper_inc_gamma(float(power), chi)
    return math.log(g.value) if g.value > 0 else -math.inf


def _envelope_cutoff(power, lam, tail_eps=1e-17):
    """U with int_U^inf t^power e^(-lam t) dt <= tail_eps * full integral."""
    U = (power + 45.0) / lam
    full = math.lgamma(power + 1) - (power + 1) * math.log(lam)
    for _ in range(60):
        logtail = _gamma_envelope_tail(power + 1, lam * U) - (power + 1) * math.log(lam)
        if logtail - full <= math.log(tail_eps):
            return U
        U *= 1.2
    return U


def _ck_xi_form(k, x, c, s, rel_tol):
    """(2/pi) x^{2k} int_0^inf xi^{2k} e^{-xc xi} cos(sx sqrt(1+xi^2))/sqrt(1+xi^2) dxi."""
    lam = x * c
    peak = 2.0 * k / lam if k > 0 else 0.0
    U = _envelope_cutoff(2 * k + 1, lam)

    def f(xi):
        root = math.sqrt(1.0 + xi * xi)
        return xi ** (2 * k) * math.exp(-lam * xi) * math.cos(s * x * root) / root

    pts = [peak] if 0.0 < peak < U else None
    # the oscillatory factor may cancel several orders of magnitude, so the
    # achievable absolute error is set by the envelope integral, not |value|
    env = math.exp(math.lgamma(2 * k + 1) - (2 * k + 1) * math.log(lam))
    value, err, neval = _run_quad(f, 0.0, U, 1e-15 * env, rel_tol, points=pts)
    scale = (2.0 / math.pi) * x ** (2 * k)
    # envelope tail: |cos/sqrt| <= 1
    logtail = _gamma_envelope_tail(2 * k + 1, lam * U) - (2 * k + 1) * math.log(lam)
    tail = scale * math.exp(logtail) if logtail > -700.0 else 0.0
    return scale * value, scale * err + tail, neval, U


def _ck_t_form(k, x, c, s, rel_tol):
    """(2/pi) int_0^inf t^{2k} e^{-ct} cos(s sqrt(x^2+t^2))/sqrt(x^2+t^2) dt."""
    peak = 2.0 * k / c if k > 0 else 0.0
    U = _envelope_cutoff(2 * k + 1, c)

    def f(t):
        root = math.sqrt(x * x + t * t)
        return t ** (2 * k) * math.exp(-c * t) * math.cos(s * root) / root

    pts = [p for p in (x, peak) if 0.0 < p < U] or None
    env = math.exp(math.lgamma(2 * k + 1) - (2 * k + 1) * math.log(c)) / max(x, 1.0)
    value, err, neval = _run_quad(f, 0.0, U, 1e-15 * env, rel_tol, points=pts)
    scale = 2.0 / math.pi
    if k >= 1:
        logtail = _gamma_envelope_tail(2 * k, c * U) - 2 * k * math.log(c)
    else:
        logtail = -c * U - math.log(c * U)
    tail = scale * math.exp(logtail) if logtail > -700.0 else 0.0
    return scale * value, scale * err + tail, neval, U


@lru_cache(maxsize=65536)
def oracle_Ck(k: int, x: float, alpha: float, rel_tol: float = 5e-14) -> QuadResult:
    """Coefficient C_k(x, alpha) of the asymptotic 1/M series, by quadrature.

    Both equivalent integral forms (the xi-form and its t = x*xi
    substitution) are evaluated and must agree to 1e-10 relative; their
    systematic agreement is the internal consistency check on the
    truncation and the rule itself.  Results are cached (pure function).
    """
    if not isinstance(k, int) or k < 0 or k > 30:
        raise DomainError(f"k must be an integer in [0, 30], got {k!r}")
    if not 0.0 <= alpha <= _HALF_PI + 4e-16:
        raise DomainError(f"alpha must lie in [0, pi/2], got {alpha}")
    if x <= 0:
        raise DomainError(f"x must be positive, got {x}")
    c = math.cos(0.5 * alpha)
    s = math.sin(0.5 * alpha)
    v_xi, e_xi, n_xi, U = _ck_xi_form(k, x, c, s, rel_tol)
    v_t, e_t, n_t, _ = _ck_t_form(k, x, c, s, rel_tol)
    scale = max(abs(v_xi), abs(v_t), 1e-300)
    # the forms must agree to 1e-10 relative; only when oscillatory
    # cancellation leaves both rules unable to certify that level do we
    # defer to their own (still tiny) reported uncertainties
    if abs(v_xi - v_t) > 1e-10 * scale and abs(v_xi - v_t) > 30.0 * (e_xi + e_t):
        raise InternalConsistencyError(
            f"C_{k}({x}, {alpha}): xi-form {v_xi!r} and t-form {v_t!r} "
            f"disagree beyond 1e-10 relative")
    return QuadResult(v_xi, e_xi + abs(v_xi - v_t), n_xi + n_t, U)


# ---------------------------------------------------------------------------
# moment identity


def oracle_moment_identity(k: int, mu: float, M: float, p: float):
    """Both sides of the closed-form moment integral

        int_0^p e^{-M tau^2} tau^{2k+1} (p^2-tau^2)^{mu-1} dtau
            = p^{2k+2mu} k! Gamma(mu) / (2 Gamma(k+mu+1))
              * 1F1(k+1; k+mu+1; -M p^2)

    as (lhs_by_quadrature, rhs_by_series).  Test plumbing only.
    """
    if not isinstance(k, int) or k < 0 or k > 20:
        raise DomainError("k must be an integer in [0, 20]")
    if mu <= 0 or M <= 0 or p <= 0:
        raise DomainError("mu, M, p must all be positive")
    from .specfun import kummer_1f1

    rho = M * p * p

    # tau = p sin(theta) turns the weight into sin^{2k+1} cos^{2mu-1}
    def f(theta):
        st = math.sin(theta)
        ct = math.cos(theta)
        return (math.exp(-rho * st * st) * st ** (2 * k + 1)
                * ct ** (2.0 * mu - 1.0))

    value, _err, _n = _run_quad(f, 0.0, _HALF_PI, 1e-16, 5e-15)
    lhs = p ** (2 * k + 2 * mu) * value

    pref = (math.exp(math.lgamma(k + 1) + math.lgamma(mu) - math.lgamma(k + mu + 1))
            / 2.0)
    rhs = p ** (2 * k + 2 * mu) * pref * kummer_1f1(k + 1.0, k + mu + 1.0, -rho).value
    return lhs, rhs

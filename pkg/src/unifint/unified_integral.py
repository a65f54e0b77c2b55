"""Both sides of the unified integral identity and their comparison.

With ``T(x) = x + a + sqrt(x^2 + 2 a x)`` the left side is

    int_0^inf x^(lam-1) T^(-nu) H[y T^(-mu)] S_V^U[z T^(-alpha)] dx

and the right side is the finite sum over K of augmented H-functions
``H^{m, n+2}_{p+2, q+2}`` evaluated at ``y a^(-mu)``.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import quadrature
from .errors import DomainError, InvariantError, SpecError, UnifintError
from .fox_h import HParams, evaluate, evaluate_many
from .gamma_core import log_gamma
from .options import DEFAULT_CONFIG
from .srivastava import PolySpec, coefficient, eval_poly, term_count

log = logging.getLogger(__name__)

_H_TOL_FLOOR = 1e-14


@dataclass(frozen=True)
class IntegralSpec:
    lam: complex
    nu: complex
    alpha: complex
    mu: float
    a: float
    y: complex
    z: complex
    h: HParams
    poly: PolySpec = field(default_factory=lambda: PolySpec(1, 0))

    def __post_init__(self):
        for name in ("lam", "nu", "alpha", "y", "z"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "a", float(self.a))
        if not self.a > 0:
            raise SpecError(f"a must be positive, got {self.a!r}")


class Condition(NamedTuple):
    name: str
    passed: bool
    margin: float
    detail: str


def check_conditions(spec):
    """Diagnostics for the two validity conditions of the identity.

    ``(i)``: mu > 0 and Re(lam), Re(nu), Re(alpha) > 0; the margin is the
    smallest of the four.  ``(ii)``: Re(lam) - Re(nu) - mu min_j Re(b_j/beta_j)
    over the first m lower pairs must be negative; the margin is that value.
    """
    h = spec.h
    positives = {
        "mu": spec.mu,
        "Re(lambda)": spec.lam.real,
        "Re(nu)": spec.nu.real,
        "Re(alpha)": spec.alpha.real,
    }
    worst = min(positives, key=positives.get)
    margin_i = positives[worst]
    cond_i = Condition("(i)", bool(margin_i > 0), float(margin_i),
                       f"mu > 0 and Re(lambda, nu, alpha) > 0; smallest is {worst}={margin_i:g}")
    bmin = min((h.b[j] / h.beta[j]).real for j in range(h.m))
    margin_ii = spec.lam.real - spec.nu.real - spec.mu * bmin
    cond_ii = Condition("(ii)", bool(margin_ii < 0), float(margin_ii),
                        f"Re(lambda) - Re(nu) - mu*min Re(b_j/beta_j) = {margin_ii:g} must be < 0")
    return [cond_i, cond_ii]


def conditions_hold(conditions):
    return all(c.passed for c in conditions)


def lemma_closed_form(zp, nu, a):
    """``2 nu a^-nu (a/2)^zp G(2zp) G(nu-zp) / G(1+nu+zp)`` for 0 < Re zp < Re nu."""
    zp, nu = complex(zp), complex(nu)
    if not (0 < zp.real < nu.real) or not a > 0:
        raise DomainError(f"closed form needs 0 < Re zp < Re nu and a > 0 (zp={zp}, nu={nu}, a={a})")
    logv = (math.log(2) + np.log(nu) - nu * math.log(a) + zp * math.log(a / 2)
            + log_gamma(2 * zp) + log_gamma(nu - zp) - log_gamma(1 + nu + zp))
    return complex(np.exp(logv))


def t_of_x(x, a):
    return x + a + np.sqrt(x * x + 2 * a * x)


def x_of_t(t, a):
    return (t - a) ** 2 / (2 * t)


def transformed_integral(kernel, lam, nu, a, rtol, max_panels=4000):
    """``int_0^inf x^(lam-1) T^(-nu) kernel(a/T) dx`` after ``u = a/T``.

    ``kernel`` receives the array of ``u`` nodes in (0, 1).  The u-range is
    split at 1/2 and the upper half is integrated in ``v = 1 - u`` so that
    both algebraic endpoint singularities stay resolvable in floating point.
    """
    lam, nu = complex(lam), complex(nu)
    # x = a v^2 / (2u),  T = a/u,  dx = a v (1+u) / (2u^2) du
    log_c0 = (lam - 1) * math.log(a / 2) + (1 - nu) * math.log(a) - math.log(2)

    def g(u, v):
        return np.exp(log_c0 + (2 * lam - 1) * np.log(v) + (nu - lam - 1) * np.log(u)) * (1 + u) * kernel(u)

    opts = dict(rtol=rtol, max_panels=max_panels)
    lower = quadrature.integrate(lambda u: g(u, 1 - u), [0, 0.125, 0.25, 0.5], **opts)
    upper = quadrature.integrate(lambda v: g(1 - v, v), [0, 0.125, 0.25, 0.5], **opts)
    return complex(lower.value + upper.value)


def lhs_quadrature(spec, cfg=DEFAULT_CONFIG, methods=None):
    """Left side by quadrature; ``methods`` (a set) collects the H methods used."""
    h_cfg = cfg.with_tol(max(cfg.tol / 10, _H_TOL_FLOOR))
    a = spec.a

    def kernel(u):
        s = u / a
        hv, used = evaluate_many(spec.h, spec.y * s**spec.mu, h_cfg)
        if methods is not None:
            methods.update(used.tolist())
        return hv * eval_poly(spec.poly, spec.z * s**spec.alpha)

    return transformed_integral(kernel, spec.lam, spec.nu, a, rtol=0.5 * cfg.tol,
                                max_panels=cfg.max_panels)


def augmented_h_params(spec, K):
    """The ``H^{m, n+2}_{p+2, q+2}`` block of the K-th right-hand term."""
    if not 0 <= K <= spec.poly.degree:
        raise ValueError(f"K={K} outside 0..{spec.poly.degree}")
    h, lam, nu, mu = spec.h, spec.lam, spec.nu, spec.mu
    shift = nu + spec.alpha * K
    upper = ((-shift, mu), (1 + lam - shift, mu)) + h.upper
    lower = h.lower + ((1 - shift, mu), (-shift - lam, mu))
    try:
        return HParams(h.m, h.n + 2, upper, lower)
    except InvariantError as exc:
        raise InvariantError(f"augmented block for K={K}: {exc}") from exc


class RhsTerm(NamedTuple):
    K: int
    value: complex
    method: str


def rhs_terms(spec, cfg=DEFAULT_CONFIG):
    """Per-K contributions to the right side, prefactor included."""
    a, lam, nu = spec.a, spec.lam, spec.nu
    log_pre = math.log(2) - nu * math.log(a) + lam * math.log(a / 2) + log_gamma(2 * lam)
    prefactor = complex(np.exp(log_pre))
    nterms = term_count(spec.poly)
    h_cfg = cfg.with_tol(max(cfg.tol / (2 * nterms), _H_TOL_FLOOR))
    arg = spec.y * a ** (-spec.mu)
    zk = spec.z * complex(np.exp(-spec.alpha * math.log(a)))
    out = []
    for K in range(nterms):
        c = coefficient(spec.poly, K)
        if c == 0:
            out.append(RhsTerm(K, 0j, "none"))
            continue
        hval = evaluate(augmented_h_params(spec, K), arg, h_cfg)
        out.append(RhsTerm(K, prefactor * complex(c) * zk**K * hval.value, hval.method))
    return out


def rhs_sum(spec, cfg=DEFAULT_CONFIG):
    return sum((t.value for t in rhs_terms(spec, cfg)), 0j)


def relative_error(lhs, rhs):
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


@dataclass
class VerificationReport:
    lhs: complex | None = None
    rhs: complex | None = None
    per_K_terms: list = field(default_factory=list)
    rel_error: float | None = None
    conditions: list = field(default_factory=list)
    lhs_methods: list = field(default_factory=list)
    rhs_methods: list = field(default_factory=list)
    lhs_time: float = 0.0
    rhs_time: float = 0.0
    error: UnifintError | None = None

    @property
    def ok(self):
        return self.error is None and conditions_hold(self.conditions) and self.rel_error is not None

    def diagnostics(self):
        out = [f"condition {c.name} {'pass' if c.passed else 'FAIL'}: {c.detail}" for c in self.conditions]
        if self.error is not None:
            out.append(f"{type(self.error).__name__}: {self.error}")
        return out


def verify_identity(spec, cfg=DEFAULT_CONFIG):
    """Evaluate both sides; failures end up in the report, never raised."""
    report = VerificationReport(conditions=check_conditions(spec))
    if not conditions_hold(report.conditions):
        return report
    try:
        t0 = time.perf_counter()
        used = set()
        report.lhs = lhs_quadrature(spec, cfg, methods=used)
        report.lhs_methods = sorted(used)
        t1 = time.perf_counter()
        terms = rhs_terms(spec, cfg)
        report.rhs_time = time.perf_counter() - t1
        report.lhs_time = t1 - t0
    except UnifintError as exc:
        log.debug("verification failed: %r", exc)
        report.error = exc
        return report
    report.per_K_terms = [t.value for t in terms]
    report.rhs_methods = [t.method for t in terms]
    report.rhs = sum(report.per_K_terms, 0j)
    report.rel_error = relative_error(report.lhs, report.rhs)
    return report

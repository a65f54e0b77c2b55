"""Generalized hypergeometric series and the 2F1 -> 4F3 special case.

The special case integrates ``x^(lam-1) T^(-nu) 2F1(h1, h2; g1; y/T)`` over
(0, inf) and equals a prefactor times

    4F3(h1, h2, nu - lam, nu + 1; g1, nu, nu + lam + 1; y/a).

The hypergeometric tuple is named (h1, h2; g1) so that ``a`` can keep
meaning the constant inside T.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DenominatorPoleError, DivergenceError, NonConvergenceError, SpecError
from .fox_h import HParams
from .gamma_core import is_pole, log_gamma
from .options import DEFAULT_CONFIG
from .unified_integral import transformed_integral


@dataclass(frozen=True)
class PFQParams:
    numerator: tuple
    denominator: tuple

    def __post_init__(self):
        num = tuple(complex(v) for v in self.numerator)
        den = tuple(complex(v) for v in self.denominator)
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)
        if den and is_pole(np.array(den)).any():
            raise DenominatorPoleError(f"denominator parameter at a pole: {den}")

    @property
    def order(self):
        return len(self.numerator), len(self.denominator)

    def reduced(self):
        """Drop numerator/denominator pairs that are exactly equal."""
        num, den = list(self.numerator), list(self.denominator)
        for v in list(num):
            if v in den:
                num.remove(v)
                den.remove(v)
        return PFQParams(tuple(num), tuple(den))


def _terminating_degree(num):
    degs = [int(round(-v.real)) for v in num if is_pole(v)]
    return min(degs) if degs else None


def pfq(params, z, cfg=DEFAULT_CONFIG):
    """``pFq(numerator; denominator; z)`` by direct summation.

    Equal numerator/denominator pairs are cancelled first.  Summation stops
    once three consecutive terms are each below ``cfg.tol`` times the
    partial sum (cap ``cfg.max_terms``); a non-positive integer numerator
    entry makes the series a polynomial that is summed exactly to its
    degree.  ``z`` may be a scalar or an array.

    Raises
    ------
    DivergenceError
        ``p > q + 1``, or ``p == q + 1`` with ``|z| >= 1`` (non-terminating).
    NonConvergenceError
        Term cap reached.
    """
    params = params.reduced()
    p, q = params.order
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    degree = _terminating_degree(params.numerator)
    if degree is None:
        if p > q + 1 and (z != 0).any():
            raise DivergenceError(f"{p}F{q} series diverges for z != 0")
        if p == q + 1 and (np.abs(z) >= 1).any():
            raise DivergenceError(f"{p}F{q} series needs |z| < 1, got max |z| = {np.abs(z).max():g}")
    num = np.array(params.numerator)
    den = np.array(params.denominator)
    limit = cfg.max_terms if degree is None else degree + 1

    term = np.ones(z.shape, dtype=complex)
    total = term.copy()
    streak = np.zeros(z.shape, dtype=int)
    j = 0
    while True:
        if j + 1 >= limit:
            if degree is None:
                raise NonConvergenceError(f"{p}F{q} not converged after {cfg.max_terms} terms")
            break
        term = term * (np.prod(num + j) / np.prod(den + j) / (j + 1)) * z
        total = total + term
        j += 1
        small = np.abs(term) <= cfg.tol * np.abs(total)
        streak = np.where(small, streak + 1, 0)
        if degree is None and (streak >= 3).all():
            break
    return complex(total[0]) if scalar else total


def embed_2f1_as_h(params):
    """``H^{1,2}_{2,2}`` block with ``H(w) = G(h1) G(h2) / G(g1) * 2F1(h1, h2; g1; -w)``."""
    if params.order != (2, 1):
        raise ValueError(f"need a (2, 1) parameter tuple, got {params.order}")
    (h1, h2), (g1,) = params.numerator, params.denominator
    return HParams(1, 2, ((1 - h1, 1), (1 - h2, 1)), ((0, 1), (1 - g1, 1)))


@dataclass(frozen=True)
class SpecialCaseSpec:
    lam: complex
    nu: complex
    a: float
    y: complex
    f: PFQParams

    def __post_init__(self):
        for name in ("lam", "nu", "y"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        object.__setattr__(self, "a", float(self.a))
        if self.f.order != (2, 1):
            raise SpecError(f"f must be a 2F1 tuple, got order {self.f.order}")
        if not self.a > 0:
            raise SpecError(f"a must be positive, got {self.a}")
        if not 0 < self.lam.real < self.nu.real:
            raise SpecError(f"need 0 < Re(lambda) < Re(nu), got lambda={self.lam}, nu={self.nu}")
        if not abs(self.y) < self.a:
            raise SpecError(f"need |y| < a, got |y|={abs(self.y):g}, a={self.a:g}")


def eq31_prefactor(spec):
    lam, nu, a = spec.lam, spec.nu, spec.a
    logv = ((1 - lam) * math.log(2) + np.log(nu) + log_gamma(2 * lam) + (lam - nu) * math.log(a)
            + log_gamma(nu - lam) - log_gamma(nu + lam + 1))
    return complex(np.exp(logv))


def eq31_rhs(spec, cfg=DEFAULT_CONFIG):
    """Closed-form side: prefactor times the augmented 4F3 at ``y/a``."""
    (h1, h2), (g1,) = spec.f.numerator, spec.f.denominator
    lam, nu = spec.lam, spec.nu
    augmented = PFQParams((h1, h2, nu - lam, nu + 1), (g1, nu, nu + lam + 1))
    return eq31_prefactor(spec) * pfq(augmented, spec.y / spec.a, cfg)


def eq31_lhs(spec, cfg=DEFAULT_CONFIG):
    """Integral side, by the same substitution quadrature as the main identity."""
    inner = cfg.with_tol(max(cfg.tol / 10, 1e-15))

    def kernel(u):
        return pfq(spec.f, spec.y * u / spec.a, inner)

    return transformed_integral(kernel, spec.lam, spec.nu, spec.a, rtol=0.5 * cfg.tol,
                                max_panels=cfg.max_panels)

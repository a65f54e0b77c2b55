"""Fox H-function: parameter block, classification and two evaluators.

The H-function is the Mellin-Barnes integral

    H(x) = 1/(2 pi i) * int_L  M(xi) x**xi  d xi,

    M(xi) = prod_{j<=m} G(b_j - beta_j xi) prod_{j<=n} G(1 - a_j + alpha_j xi)
            / prod_{j>m} G(1 - b_j + beta_j xi) prod_{j>n} G(a_j - alpha_j xi)

with L a vertical line separating the poles of the first product (to the
right) from those of the second (to the left).  ``eval_series`` sums the
residues at the right-hand poles; ``eval_contour`` integrates along L.
"""

import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import quadrature
from .errors import (
    CancellationError,
    ContourUnavailableError,
    DivergenceError,
    DomainError,
    HigherOrderPoleError,
    InvariantError,
    NonConvergenceError,
    NumericalError,
    TailBoundError,
    UnsupportedRegimeError,
)
from .gamma_core import is_pole, log_gamma
from .options import DEFAULT_CONFIG, EvalConfig

POLE_SEPARATION_TOL = 1e-10
POLE_SEPARATION_RANGE = 200
_EPS = np.finfo(float).eps


def _pairs(items, name):
    out = []
    for item in items:
        try:
            value, weight = item
        except (TypeError, ValueError):
            raise InvariantError(f"{name} entries must be (value, weight) pairs, got {item!r}")
        weight = float(weight)
        if not weight > 0:
            raise InvariantError(f"{name} weight must be positive, got {weight!r}")
        out.append((complex(value), weight))
    return tuple(out)


@dataclass(frozen=True)
class HParams:
    """Parameter block ``H^{m,n}_{p,q}[(a_j, alpha_j); (b_j, beta_j)]``.

    ``p`` and ``q`` are the lengths of ``upper`` and ``lower``.  The block is
    validated on construction, including pole separation over the first
    ``POLE_SEPARATION_RANGE`` poles of every gamma factor.
    """

    m: int
    n: int
    upper: tuple = ()
    lower: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "upper", _pairs(self.upper, "upper"))
        object.__setattr__(self, "lower", _pairs(self.lower, "lower"))
        if not 1 <= self.m <= self.q:
            raise InvariantError(f"need 1 <= m <= q, got m={self.m}, q={self.q}")
        if not 0 <= self.n <= self.p:
            raise InvariantError(f"need 0 <= n <= p, got n={self.n}, p={self.p}")
        clash = _pole_clash(self)
        if clash is not None:
            raise InvariantError(f"poles of the two gamma groups coincide near xi={clash:.6g}")

    @property
    def p(self):
        return len(self.upper)

    @property
    def q(self):
        return len(self.lower)

    @property
    def a(self):
        return np.array([v for v, _ in self.upper], dtype=complex)

    @property
    def alpha(self):
        return np.array([w for _, w in self.upper])

    @property
    def b(self):
        return np.array([v for v, _ in self.lower], dtype=complex)

    @property
    def beta(self):
        return np.array([w for _, w in self.lower])

    def label(self):
        return f"H^{{{self.m},{self.n}}}_{{{self.p},{self.q}}}"


def exponential_h():
    """``H^{1,0}_{0,1}[x | -; (0,1)] = exp(-x)``."""
    return HParams(1, 0, (), ((0, 1),))


def binomial_h(order=2.0):
    """``H^{1,1}_{1,1}[x | (1-r,1); (0,1)] = Gamma(r) (1+x)^(-r)``."""
    return HParams(1, 1, ((1 - order, 1),), ((0, 1),))


def _right_poles(h, count=POLE_SEPARATION_RANGE + 1):
    # (m, count) grid of (b_j + k) / beta_j
    k = np.arange(count)
    return (h.b[: h.m, None] + k) / h.beta[: h.m, None]


def _pole_clash(h):
    if h.n == 0:
        return None
    l = np.arange(POLE_SEPARATION_RANGE + 1)
    right = _right_poles(h).ravel()
    left = ((h.a[: h.n, None] - 1 - l) / h.alpha[: h.n, None]).ravel()
    diff = np.abs(right[:, None] - left[None, :])
    if diff.min() <= POLE_SEPARATION_TOL:
        i = np.unravel_index(diff.argmin(), diff.shape)[0]
        return right[i].real
    return None


@lru_cache(maxsize=512)
def has_simple_poles(h):
    """True when the right-hand poles (b_j + k)/beta_j are pairwise distinct."""
    poles = _right_poles(h)
    for i in range(h.m):
        for j in range(i + 1, h.m):
            if np.abs(poles[i][:, None] - poles[j][None, :]).min() <= POLE_SEPARATION_TOL:
                return False
    return True


class HClassification(NamedTuple):
    delta: float
    a_star: float
    radius: float
    contour_lo: float
    contour_hi: float

    @property
    def has_contour(self):
        return self.contour_lo < self.contour_hi


def classify(h):
    """Convergence parameters of the block (direct sums over the pairs)."""
    alpha, beta = h.alpha, h.beta
    delta = beta.sum() - alpha.sum()
    a_star = alpha[: h.n].sum() - alpha[h.n:].sum() + beta[: h.m].sum() - beta[h.m:].sum()
    log_radius = (beta * np.log(beta)).sum() - (alpha * np.log(alpha)).sum()
    lo = max(((h.a[: h.n].real - 1) / alpha[: h.n]).tolist(), default=-math.inf)
    hi = float(min((h.b[: h.m].real / beta[: h.m]).tolist()))
    return HClassification(float(delta), float(a_star), math.exp(log_radius), float(lo), hi)


def default_abscissa(cls):
    lo, hi = cls.contour_lo, cls.contour_hi
    if math.isfinite(lo) and math.isfinite(hi):
        return 0.5 * (lo + hi)
    if math.isfinite(hi):
        return hi - 1.0
    return lo + 1.0


def _log_m(h, xi):
    """``(log M(xi), zero_mask)``; zero_mask flags denominator poles."""
    xi = np.asarray(xi, dtype=complex)
    a, alpha, b, beta = h.a, h.alpha, h.b, h.beta
    numer = [b[j] - beta[j] * xi for j in range(h.m)]
    numer += [1 - a[j] + alpha[j] * xi for j in range(h.n)]
    denom = [1 - b[j] + beta[j] * xi for j in range(h.m, h.q)]
    denom += [a[j] - alpha[j] * xi for j in range(h.n, h.p)]
    out = np.zeros(xi.shape, dtype=complex)
    for arg in numer:
        out = out + log_gamma(arg)
    zero = np.zeros(xi.shape, dtype=bool)
    for arg in denom:
        pole = is_pole(arg)
        zero |= pole
        out = out - log_gamma(np.where(pole, 1.0, arg))
    return out, zero


def mb_integrand(h, x, xi):
    """Mellin-Barnes integrand ``M(xi) * x**xi`` (principal-branch power).

    Raises :class:`PoleError` if ``xi`` hits a pole of a numerator gamma.
    """
    logm, zero = _log_m(h, xi)
    val = np.where(zero, 0.0, np.exp(logm + np.asarray(xi) * np.log(complex(x))))
    return complex(val) if np.ndim(val) == 0 else val


# ---------------------------------------------------------------- residues

class _ResidueTable:
    """Lazily grown residue coefficients, one row per right-hand pole family.

    Term ``k`` of family ``j`` is ``sign[j, k] * exp(logc[j, k] + xi[j, k] * log x)``.
    """

    CHUNK = 64

    def __init__(self, h):
        self.h = h
        self.xi = np.empty((h.m, 0), dtype=complex)
        self.logc = np.empty((h.m, 0), dtype=complex)
        self.sign = np.empty((h.m, 0))
        self._lock = threading.Lock()

    def upto(self, kmax):
        with self._lock:
            while self.xi.shape[1] < kmax:
                self._grow()
            return self.xi[:, :kmax], self.logc[:, :kmax], self.sign[:, :kmax]

    def _grow(self):
        h = self.h
        k0 = self.xi.shape[1]
        k = np.arange(k0, k0 + self.CHUNK)
        xi = (h.b[: h.m, None] + k) / h.beta[: h.m, None]
        logc = np.empty(xi.shape, dtype=complex)
        sign = np.empty(xi.shape)
        for j in range(h.m):
            # residue of G(b_j - beta_j xi) at xi_k is -(-1)^k / (k! beta_j);
            # the contour closes clockwise so the sum picks up +(-1)^k/(k! beta_j)
            others = [i for i in range(h.m) if i != j]
            lc = -np.log(h.beta[j]) - np.array([math.lgamma(kk + 1) for kk in k])
            lc = lc.astype(complex)
            for i in others:
                arg = h.b[i] - h.beta[i] * xi[j]
                if is_pole(arg).any():
                    raise HigherOrderPoleError(
                        f"right-hand poles of factors {j} and {i} coincide"
                    )
                lc = lc + log_gamma(arg)
            for i in range(h.n):
                lc = lc + log_gamma(1 - h.a[i] + h.alpha[i] * xi[j])
            zero = np.zeros(k.shape, dtype=bool)
            denom = [1 - h.b[i] + h.beta[i] * xi[j] for i in range(h.m, h.q)]
            denom += [h.a[i] - h.alpha[i] * xi[j] for i in range(h.n, h.p)]
            for arg in denom:
                pole = is_pole(arg)
                zero |= pole
                lc = lc - log_gamma(np.where(pole, 1.0, arg))
            logc[j] = lc
            sign[j] = np.where(zero, 0.0, np.where(k % 2 == 0, 1.0, -1.0))
        self.xi = np.concatenate([self.xi, xi], axis=1)
        self.logc = np.concatenate([self.logc, logc], axis=1)
        self.sign = np.concatenate([self.sign, sign], axis=1)


@lru_cache(maxsize=256)
def _residue_table(h):
    return _ResidueTable(h)


def series_admissible(cls, x):
    """Mask of arguments for which the residue series converges."""
    x = np.asarray(x)
    if cls.delta > 0:
        return np.ones(x.shape, dtype=bool)
    if cls.delta == 0:
        return np.abs(x) < cls.radius
    return np.zeros(x.shape, dtype=bool)


SLOW_SERIES_TERMS = 500


def _series_cheap(cls, x, tol):
    # delta == 0 converges geometrically with ratio |x|/radius; near the
    # circle the contour integral is far cheaper than thousands of terms
    if cls.delta != 0:
        return np.ones(np.shape(x), dtype=bool)
    with np.errstate(divide="ignore"):
        ratio = np.log(np.abs(x) / cls.radius)
        return np.where(ratio < 0, math.log(tol) / np.minimum(ratio, -1e-300), np.inf) <= SLOW_SERIES_TERMS


_OK, _CAPPED, _CANCELLED = 0, 1, 2


def _series_batch(h, xs, cfg):
    """Residue sums for an array of arguments; returns ``(values, status)``.

    A step is the sum over pole families of the k-th term.  An argument is
    done once three consecutive nonzero steps are each at most ``cfg.tol``
    times the running sum.
    """
    xs = np.asarray(xs, dtype=complex)
    logx = np.log(xs)
    table = _residue_table(h)
    total = np.zeros(xs.shape, dtype=complex)
    biggest = np.zeros(xs.shape)
    streak = np.zeros(xs.shape, dtype=int)
    done = np.zeros(xs.shape, dtype=bool)
    k0 = 0
    while k0 < cfg.max_terms and not done.all():
        kmax = min(k0 + _ResidueTable.CHUNK, cfg.max_terms)
        xi, logc, sign = table.upto(kmax)
        keep = (sign[:, k0:] != 0).any(axis=0)
        xi, logc, sign = xi[:, k0:][:, keep], logc[:, k0:][:, keep], sign[:, k0:][:, keep]
        k0 = kmax
        if not keep.any():
            continue
        live = np.flatnonzero(~done)
        with np.errstate(over="ignore", invalid="ignore"):
            terms = sign[:, :, None] * np.exp(logc[:, :, None] + xi[:, :, None] * logx[live])
        step = terms.sum(axis=0)                         # (k, x)
        partial = total[live] + np.cumsum(step, axis=0)
        small = np.abs(step) <= cfg.tol * np.abs(partial)
        carry = np.stack([streak[live] >= 2, streak[live] >= 1])
        flags = np.concatenate([carry, small])
        run = flags[:-2] & flags[1:-1] & flags[2:]       # run[i] ends at step i
        hit = run.any(axis=0)
        stop = np.where(hit, run.argmax(axis=0), step.shape[0] - 1)
        cols = np.arange(live.size)
        total[live] = partial[stop, cols]
        mags = np.abs(step)
        upto = np.arange(step.shape[0])[:, None] <= stop[None, :]
        biggest[live] = np.maximum(biggest[live], np.where(upto, mags, 0).max(axis=0))
        trailing = np.where(small[-1], np.where(small[-2] if len(small) > 1 else carry[1], 2, 1), 0)
        streak[live] = trailing
        done[live] = hit
    status = np.full(xs.shape, _OK)
    status[~done] = _CAPPED
    lost = ~np.isfinite(total) | (10.0 * _EPS * biggest > cfg.tol * np.abs(total))
    status[done & lost] = _CANCELLED
    return total, status


def eval_series(h, x, cfg=DEFAULT_CONFIG):
    """H(x) as the sum of residues at the poles of the first-group gammas.

    Stops once three consecutive steps are each below ``cfg.tol`` times the
    partial sum, or raises after ``cfg.max_terms`` steps.

    Raises
    ------
    DivergenceError
        ``delta < 0``, or ``delta == 0`` with ``|x| >= radius``.
    HigherOrderPoleError
        Two first-group gammas share a pole.
    NonConvergenceError
        Term cap reached; :class:`CancellationError` if the sum lost the
        requested relative accuracy to cancellation.
    """
    if x == 0:
        raise DomainError("H is evaluated at x != 0 only")
    cls = classify(h)
    if not series_admissible(cls, x):
        raise DivergenceError(
            f"residue series diverges: delta={cls.delta:g}, |x|={abs(x):g}, radius={cls.radius:g}"
        )
    if not has_simple_poles(h):
        raise HigherOrderPoleError("first-group gammas share poles; use the contour method")
    value, status = _series_batch(h, np.array([x]), cfg)
    if status[0] == _CAPPED:
        raise NonConvergenceError(f"residue series not converged after {cfg.max_terms} terms")
    if status[0] == _CANCELLED:
        raise CancellationError(f"residue series at x={x!r} lost accuracy to cancellation")
    return complex(value[0])


# ----------------------------------------------------------------- contour

@dataclass(frozen=True)
class ContourSpec:
    """Vertical line ``Re xi = c`` truncated to ``|Im xi| <= t_max``."""

    c: float
    t_max: float = 8.0
    tol: float = 1e-10


def contour_admissible(cls, x):
    x = np.asarray(x, dtype=complex)
    return (cls.a_star > 0) & (np.abs(np.angle(x)) < cls.a_star * np.pi / 2)


def _contour_batch(h, xs, spec, cfg):
    xs = np.asarray(xs, dtype=complex)
    cls = classify(h)
    logx = np.log(xs)
    c = spec.c

    def f(t):
        xi = c + 1j * t
        logm, zero = _log_m(h, xi)
        with np.errstate(over="ignore", under="ignore"):
            vals = np.exp(logm[None, :] + xi[None, :] * logx[:, None]) / (2 * np.pi)
        return np.where(zero[None, :], 0.0, vals)

    # decay rate of |M(c+it) x^(c+it)| in |t|
    rate = cls.a_star * np.pi / 2 - np.abs(np.angle(xs))
    t_max = spec.t_max

    def magnitude_l1(lo, hi):
        return sum(quadrature.gk21(f, a, b)[2] for a, b in zip(*_grid(lo, hi)))

    l1 = magnitude_l1(-t_max, t_max)
    # twice the integrator's roundoff floor
    atol = 100 * _EPS * np.max(l1)
    res = quadrature.integrate(f, np.linspace(-t_max, t_max, 9), rtol=0.5 * spec.tol,
                               atol=atol, max_panels=cfg.max_panels)
    total = res.value
    while True:
        edge = np.abs(f(np.array([-t_max, t_max]))).sum(axis=1)
        tail = edge / rate
        if np.all(tail <= np.maximum(spec.tol * np.abs(total), atol)):
            if np.any(atol > spec.tol * np.abs(total)):
                raise CancellationError(
                    "contour integral cancels below double precision: "
                    f"|H| = {np.min(np.abs(total)):.3e} against integrand mass {np.max(l1):.3e}"
                )
            return total
        if 2 * t_max > cfg.t_max_limit:
            raise TailBoundError(
                f"contour tail {tail.max():.3e} not certified below tolerance by t_max={t_max:g}"
            )
        for lo, hi in ((t_max, 2 * t_max), (-2 * t_max, -t_max)):
            ext = quadrature.integrate(f, np.linspace(lo, hi, 5), rtol=0.5 * spec.tol,
                                       atol=max(atol, 0.25 * spec.tol * float(np.min(np.abs(total)))),
                                       max_panels=cfg.max_panels)
            total = total + ext.value
        t_max *= 2


def _grid(lo, hi, n=8):
    e = np.linspace(lo, hi, n + 1)
    return e[:-1], e[1:]


def _contour_spec(h, cfg, spec=None):
    cls = classify(h)
    if not cls.has_contour:
        raise ContourUnavailableError(
            f"no vertical line separates the poles: ({cls.contour_lo:g}, {cls.contour_hi:g}) is empty"
        )
    if cls.a_star <= 0:
        raise DivergenceError(f"contour integral diverges: a*={cls.a_star:g} <= 0")
    if spec is None:
        c = cfg.contour_c if cfg.contour_c is not None else default_abscissa(cls)
        spec = ContourSpec(c=c, t_max=cfg.t_max, tol=cfg.tol)
    if not cls.contour_lo < spec.c < cls.contour_hi:
        raise ContourUnavailableError(
            f"abscissa c={spec.c:g} outside ({cls.contour_lo:g}, {cls.contour_hi:g})"
        )
    return cls, spec


def eval_contour(h, x, spec=None, cfg=DEFAULT_CONFIG):
    """H(x) by adaptive quadrature along the vertical line ``Re xi = c``.

    ``spec`` defaults to the midpoint abscissa (see :func:`default_abscissa`)
    with ``cfg.t_max`` and ``cfg.tol``.  The truncation height is doubled
    until the exponentially decaying tail is below tolerance.
    """
    if x == 0:
        raise DomainError("H is evaluated at x != 0 only")
    cls, spec = _contour_spec(h, cfg, spec)
    if not contour_admissible(cls, x):
        raise DivergenceError(
            f"|arg x| = {abs(np.angle(complex(x))):g} not below a* pi/2 = {cls.a_star * np.pi / 2:g}"
        )
    return complex(_contour_batch(h, np.array([x]), spec, cfg)[0])


# ---------------------------------------------------------------- dispatch

class HResult(NamedTuple):
    value: complex
    method: str


def evaluate_many(h, xs, cfg=DEFAULT_CONFIG):
    """Vectorised :func:`evaluate`; returns ``(values, methods)`` arrays."""
    xs = np.asarray(xs, dtype=complex)
    shape = xs.shape
    xs = xs.ravel()
    if (xs == 0).any():
        raise DomainError("H is evaluated at x != 0 only")
    cls = classify(h)
    values = np.zeros(xs.shape, dtype=complex)
    methods = np.full(xs.shape, "", dtype=object)
    pending = np.ones(xs.shape, dtype=bool)
    series_err = None

    use_series = series_admissible(cls, xs) & has_simple_poles(h)
    if cls.has_contour and cls.a_star > 0:
        use_series &= _series_cheap(cls, xs, cfg.tol) | ~contour_admissible(cls, xs)
    if use_series.any():
        vals, status = _series_batch(h, xs[use_series], cfg)
        idx = np.flatnonzero(use_series)
        ok = status == _OK
        values[idx[ok]] = vals[ok]
        methods[idx[ok]] = "series"
        pending[idx[ok]] = False
        if (~ok).any():
            series_err = (CancellationError if (status == _CANCELLED).any() else NonConvergenceError)(
                "residue series failed for some arguments"
            )

    if pending.any():
        rest = np.flatnonzero(pending)
        usable = cls.has_contour and cls.a_star > 0 and contour_admissible(cls, xs[rest]).all()
        if not usable:
            if series_err is not None:
                raise series_err
            raise UnsupportedRegimeError(
                f"{h.label()} at x={xs[rest][0]!r}: neither residue series "
                f"(delta={cls.delta:g}, radius={cls.radius:g}) nor contour "
                f"(a*={cls.a_star:g}, interval=({cls.contour_lo:g}, {cls.contour_hi:g})) applies"
            )
        _, spec = _contour_spec(h, cfg)
        values[rest] = _contour_batch(h, xs[rest], spec, cfg)
        methods[rest] = "contour"
    return values.reshape(shape), methods.reshape(shape)


def evaluate(h, x, cfg=DEFAULT_CONFIG):
    """H(x): residue series when it is admissible, else the contour integral.

    With ``delta == 0`` the series is skipped in favour of the contour when
    ``|x|`` is so close to the radius that more than ``SLOW_SERIES_TERMS``
    terms would be needed; a failing series also falls back to the contour.

    Returns
    -------
    HResult
        ``(value, method)`` with method ``"series"`` or ``"contour"``.
    """
    if x == 0:
        raise DomainError("H is evaluated at x != 0 only")
    values, methods = evaluate_many(h, np.array([x]), cfg)
    return HResult(complex(values[0]), methods[0])


__all__ = [
    "ContourSpec",
    "HClassification",
    "HParams",
    "HResult",
    "NumericalError",
    "binomial_h",
    "classify",
    "default_abscissa",
    "eval_contour",
    "eval_series",
    "evaluate",
    "evaluate_many",
    "exponential_h",
    "mb_integrand",
]

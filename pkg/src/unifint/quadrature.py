"""Globally adaptive Gauss-Kronrod (G10/K21) quadrature on finite intervals.

The integrand is called with an array of nodes and may return either an
array of the same length or a 2-D array ``(n_components, n_nodes)``; the
latter lets one pass of panel refinement serve a whole batch of related
integrals (e.g. one Mellin-Barnes integral per argument value).
"""

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import QuadratureError

# QUADPACK qk21 abscissae (positive half) and weights
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208980412195,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(21)
GAUSS_WEIGHTS[1:10:2] = _WG
GAUSS_WEIGHTS[11:20:2] = _WG[::-1]

_EPS = np.finfo(float).eps


@dataclass
class QuadResult:
    value: np.ndarray | complex | float
    error: float
    panels: int


def gk21(f, lo, hi):
    """One G10/K21 panel: ``(kronrod_estimate, error_estimate, abs_estimate)``.

    The error estimate is QUADPACK's rescaled ``|K21 - G10|``.  All three
    come back with the component shape of ``f``.
    """
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    fx = np.asarray(f(center + half * NODES))
    kron = half * (fx @ KRONROD_WEIGHTS)
    gauss = half * (fx @ GAUSS_WEIGHTS)
    resasc = abs(half) * (np.abs(fx - (kron / (hi - lo))[..., None]) @ KRONROD_WEIGHTS)
    err = np.abs(kron - gauss)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc > 0) & np.isfinite(scaled), scaled, err)
    resabs = abs(half) * (np.abs(fx) @ KRONROD_WEIGHTS)
    err = np.maximum(err, 50.0 * _EPS * resabs)
    return kron, err, resabs


def integrate(f, breakpoints, rtol=1e-10, atol=0.0, max_panels=4000):
    """Adaptive integral of ``f`` over the union of consecutive intervals.

    Parameters
    ----------
    f : callable
        Vectorised integrand (see module docstring for the output shape).
    breakpoints : sequence of float
        Initial panel edges, e.g. ``[0, 0.5]`` or ``np.linspace(a, b, 5)``.
    rtol, atol : float
        Stop once the summed error estimate of every component is below
        ``max(atol, rtol * |value|)``.  ``rtol`` is floored at ``100 * eps``.
    max_panels : int
        Raise :class:`QuadratureError` once this many panels exist.

    Returns
    -------
    QuadResult
    """
    rtol = max(rtol, 100.0 * _EPS)
    edges = [float(b) for b in breakpoints]
    initial = [(lo, hi) + gk21(f, lo, hi) for lo, hi in zip(edges[:-1], edges[1:])]
    total = sum(p[2] for p in initial)
    err_total = sum(p[3] for p in initial)
    abs_total = sum(p[4] for p in initial)
    # per-component weights so panels are ranked by relative error
    scale = 1.0 / np.maximum(np.abs(total), max(atol, 1e-300))
    heap = [_Panel.make(lo, hi, val, err, res, scale) for lo, hi, val, err, res in initial]
    heapq.heapify(heap)
    npanels = len(heap)

    while True:
        target = np.maximum(atol, rtol * np.abs(total))
        if np.all(err_total <= target):
            break
        # the per-panel floor 50 eps |f| survives bisection: once it dominates, stop
        floor = 50.0 * _EPS * abs_total
        if np.any((floor > target) & (err_total <= 2.0 * floor)):
            raise QuadratureError(
                f"roundoff floor {np.max(floor):.3e} exceeds target {np.min(target):.3e}; "
                "raise atol or rtol"
            )
        if npanels >= max_panels:
            raise QuadratureError(
                f"adaptive quadrature hit {max_panels} panels; "
                f"error {np.max(err_total):.3e} > target {np.min(target):.3e}"
            )
        worst = heapq.heappop(heap)
        mid = 0.5 * (worst.lo + worst.hi)
        if not worst.lo < mid < worst.hi:
            # panel can no longer be split in floating point
            raise QuadratureError(
                f"roundoff limit reached near {worst.lo!r}; error "
                f"{np.max(err_total):.3e} > target {np.min(target):.3e}"
            )
        left = gk21(f, worst.lo, mid)
        right = gk21(f, mid, worst.hi)
        total = total - worst.value + left[0] + right[0]
        err_total = err_total - worst.error + left[1] + right[1]
        err_total = np.maximum(err_total, 0.0)
        abs_total = abs_total - worst.resabs + left[2] + right[2]
        heapq.heappush(heap, _Panel.make(worst.lo, mid, *left, scale))
        heapq.heappush(heap, _Panel.make(mid, worst.hi, *right, scale))
        npanels += 1

    # re-sum from the panels to shed the drift of incremental updates
    total = sum(p.value for p in heap)
    err_total = sum(p.error for p in heap)
    return QuadResult(total, float(np.max(err_total)), npanels)


@dataclass(order=True)
class _Panel:
    priority: float
    lo: float
    hi: float
    value: object
    error: object
    resabs: object

    @classmethod
    def make(cls, lo, hi, value, error, resabs, scale):
        # largest weighted error first
        return cls(-float(np.max(error * scale)), lo, hi, value, error, resabs)

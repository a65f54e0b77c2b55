"""Complex log-gamma, gamma and Pochhammer primitives.

``log_gamma`` uses the Lanczos approximation with Godfrey's g = 607/128,
fifteen-term coefficient set on ``Re z >= 0.5`` and the reflection formula
elsewhere.  Every function accepts Python scalars or numpy arrays; scalars
come back as Python ``complex`` (or ``float``/``int`` where noted).
"""

import math

import numpy as np

from .errors import PoleError

POLE_TOL = 1e-14

_LANCZOS_G = 607.0 / 128.0
_LANCZOS_COEF = np.array([
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)
_LOG_HALF_I = complex(-math.log(2.0), 0.5 * math.pi)   # log(i/2)


def is_pole(z, tol=POLE_TOL):
    """Boolean mask: ``z`` lies within ``tol`` of 0, -1, -2, ..."""
    z = np.asarray(z, dtype=complex)
    nearest = np.round(z.real)
    return (nearest <= 0) & (np.abs(z - nearest) <= tol)


def _lanczos(z):
    # log Gamma(z) for Re z >= 0.5
    w = z - 1.0
    series = np.full(w.shape, _LANCZOS_COEF[0], dtype=complex)
    for k in range(1, len(_LANCZOS_COEF)):
        series = series + _LANCZOS_COEF[k] / (w + k)
    t = w + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (w + 0.5) * np.log(t) - t + np.log(series)


def _log_sin_pi_upper(z):
    # log sin(pi z) for Im z >= 0, analytic in the upper half plane:
    # sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z})
    r = z - np.round(z.real)
    return _LOG_HALF_I - 1j * np.pi * z + np.log(-np.expm1(2j * np.pi * r))


def _log_gamma_upper(z):
    out = np.empty(z.shape, dtype=complex)
    right = z.real >= 0.5
    if right.any():
        out[right] = _lanczos(z[right])
    left = ~right
    if left.any():
        zl = z[left]
        out[left] = _LOG_PI - _log_sin_pi_upper(zl) - _lanczos(1.0 - zl)
    return out


def log_gamma(z):
    """Log-gamma on the principal branch (cut along the negative real axis).

    This is the branch that is continuous off the cut, so the imaginary part
    is not reduced into (-pi, pi].

    Raises
    ------
    PoleError
        If any ``z`` is within ``POLE_TOL`` of a non-positive integer.
    """
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)
    if is_pole(z).any():
        bad = z[is_pole(z)] if z.ndim else z
        raise PoleError(f"log_gamma evaluated at a pole: {np.ravel(bad)[0]!r}")
    # evaluate on the upper half plane only, so conj symmetry is exact
    lower = z.imag < 0
    zu = np.where(lower, np.conj(z), z)
    res = _log_gamma_upper(np.atleast_1d(zu)).reshape(zu.shape)
    res = np.where(lower, np.conj(res), res)
    return complex(res) if scalar else res


def gamma(z):
    """Gamma function as ``exp(log_gamma(z))``."""
    return np.exp(log_gamma(z)) if np.ndim(z) else complex(np.exp(log_gamma(z)))


def pochhammer(a, j):
    """Rising factorial (a)_j = a (a+1) ... (a+j-1).

    Uses the direct product for ``j <= 64`` (or whenever ``a`` is a
    non-positive integer, where the gamma ratio is undefined) and a
    log-gamma ratio above that.  Real ``a`` gives a ``float``.
    """
    if j < 0 or int(j) != j:
        raise ValueError(f"j must be a nonnegative integer, got {j!r}")
    j = int(j)
    real = not isinstance(a, complex) and np.isrealobj(a)
    if j <= 64 or is_pole(a):
        out = 1.0 if real else complex(1.0)
        for i in range(j):
            out *= a + i
        return out
    ratio = np.exp(log_gamma(a + j) - log_gamma(a))
    return float(ratio.real) if real else complex(ratio)


def pochhammer_neg_int(V, s):
    """Exact integer (-V)_s = (-V)(-V+1)...(-V+s-1); zero once s > V.

    Raises
    ------
    OverflowError
        If the product cannot be represented as a finite double, signalling
        the caller to work in log space.
    """
    if V < 0 or s < 0:
        raise ValueError("V and s must be nonnegative integers")
    if s > V:
        return 0
    out = 1
    for i in range(s):
        out *= -V + i
    if abs(out) > 1.7976931348623157e308:
        raise OverflowError(f"(-{V})_{s} exceeds the double range")
    return out


def log_abs_pochhammer_neg_int(V, s):
    """``(sign, log|(-V)_s|)``; sign is 0 when the product vanishes."""
    if s > V:
        return 0, -math.inf
    return (-1) ** s, math.lgamma(V + 1) - math.lgamma(V - s + 1)

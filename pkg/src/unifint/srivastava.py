"""General class of polynomials ``S_V^U[x] = sum_K (-V)_{UK} A(V,K) x^K / K!``.

The coefficient provider ``A`` is any callable ``(V, K) -> number``.  Three
sources are supported: the constant-one provider, an explicit per-K table,
and named families looked up in :data:`FAMILIES`.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

from .gamma_core import log_abs_pochhammer_neg_int, pochhammer_neg_int


def const1(V, K):
    return 1


@dataclass(frozen=True)
class TableCoefficients:
    """``A(V, K) = values[K]``; the table must cover ``0..floor(V/U)``."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    def __call__(self, V, K):
        try:
            return self.values[K]
        except IndexError:
            raise ValueError(f"coefficient table has {len(self.values)} entries, K={K} requested")


FAMILIES = {"const1": lambda: const1}


def register_family(name, factory):
    """Make ``factory()`` available as the named coefficient family ``name``."""
    FAMILIES[name] = factory


def family(name):
    try:
        return FAMILIES[name]()
    except KeyError:
        raise KeyError(f"unknown coefficient family {name!r}; known: {sorted(FAMILIES)}") from None


@dataclass(frozen=True)
class PolySpec:
    U: int
    V: int
    A: object = field(default=const1)

    def __post_init__(self):
        if int(self.U) != self.U or self.U < 1:
            raise ValueError(f"U must be a positive integer, got {self.U!r}")
        if int(self.V) != self.V or self.V < 0:
            raise ValueError(f"V must be a nonnegative integer, got {self.V!r}")
        if not callable(self.A):
            raise TypeError("A must be callable as A(V, K)")

    @property
    def degree(self):
        return self.V // self.U


def term_count(spec):
    return spec.V // spec.U + 1


def coefficient(spec, K):
    """``(-V)_{UK} A(V,K) / K!``, exact when ``A`` returns a rational."""
    a = spec.A(spec.V, K)
    try:
        c = Fraction(pochhammer_neg_int(spec.V, spec.U * K), math.factorial(K))
    except OverflowError:
        sign, logabs = log_abs_pochhammer_neg_int(spec.V, spec.U * K)
        return sign * math.exp(logabs - math.lgamma(K + 1)) * a
    if isinstance(a, Rational):
        return c * a
    return float(c) * a


def eval_poly(spec, x):
    """Evaluate ``S_V^U`` at ``x``.

    Integer/``Fraction`` arguments with rational coefficients give an exact
    ``Fraction``; floats, complex numbers and numpy arrays use floating point.
    """
    exact = isinstance(x, Rational)
    if not exact:
        x = np.asarray(x, dtype=complex) if np.iscomplexobj(x) else np.asarray(x, dtype=float)
    total = 0
    for K in range(term_count(spec)):
        c = coefficient(spec, K)
        if not exact and isinstance(c, Fraction):
            c = float(c)
        total = total + c * x**K
    if not exact and np.ndim(total) == 0:
        total = total.item() if hasattr(total, "item") else total
    return total

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from unifint.srivastava import (
    FAMILIES,
    PolySpec,
    TableCoefficients,
    coefficient,
    const1,
    eval_poly,
    family,
    register_family,
    term_count,
)

RATIONALS = st.fractions(min_value=-5, max_value=5, max_denominator=50)


@pytest.mark.parametrize("U, V, n", [(1, 2, 3), (2, 2, 2), (3, 2, 1), (1, 0, 1)])
def test_term_count(U, V, n):
    assert term_count(PolySpec(U, V)) == n


@pytest.mark.parametrize("U, V, x, expected", [
    (1, 0, Fraction(7, 3), 1),
    (4, 0, 0.37, 1.0),
    (1, 2, 1, 0),
    (2, 2, Fraction(1, 2), 2),
])
def test_eval_examples(U, V, x, expected):
    assert eval_poly(PolySpec(U, V), x) == expected


@given(st.integers(0, 20), RATIONALS)
def test_binomial_degeneration_exact(V, x):
    val = eval_poly(PolySpec(1, V), x)
    assert isinstance(val, Fraction)
    assert val == (1 - x) ** V


@given(st.integers(1, 4), st.integers(0, 25))
def test_termination(U, V):
    spec = PolySpec(U, V)
    # coefficients beyond the degree vanish exactly
    for K in range(spec.degree + 1, spec.degree + 6):
        assert coefficient(spec, K) == 0
    x = Fraction(3, 7)
    extended = sum(coefficient(spec, K) * x**K for K in range(spec.degree + 6))
    assert extended == eval_poly(spec, x)


@given(st.integers(1, 3), st.integers(0, 12), st.complex_numbers(max_magnitude=5, allow_nan=False))
def test_linearity_in_coefficients(U, V, c):
    base = PolySpec(U, V)
    scaled = PolySpec(U, V, lambda V_, K: c * const1(V_, K))
    x = 0.37 - 0.2j
    assert eval_poly(scaled, x) == pytest.approx(c * eval_poly(base, x), rel=1e-12, abs=1e-12)


def test_table_coefficients():
    spec = PolySpec(1, 2, TableCoefficients([1, Fraction(1, 2), 3]))
    # 1 + (-2)_1 (1/2) x + (-2)_2 (3) x^2 / 2 = 1 - x + 3x^2
    assert eval_poly(spec, Fraction(2)) == 11


def test_table_too_short():
    spec = PolySpec(1, 3, TableCoefficients([1, 1]))
    with pytest.raises(ValueError):
        eval_poly(spec, 0.5)


def test_float_and_array_inputs():
    spec = PolySpec(1, 3)
    xs = np.linspace(-1, 2, 7)
    assert np.allclose(eval_poly(spec, xs), (1 - xs) ** 3, rtol=1e-14, atol=1e-14)
    assert isinstance(eval_poly(spec, 0.25), float)
    assert eval_poly(spec, 0.5 + 0.5j) == pytest.approx((0.5 - 0.5j) ** 3)


def test_large_degree_uses_log_space():
    spec = PolySpec(1, 400)
    assert eval_poly(spec, 1e-3) == pytest.approx(0.999**400, rel=1e-10)


def test_family_registry():
    assert family("const1") is const1
    register_family("twos", lambda: (lambda V, K: 2))
    try:
        assert eval_poly(PolySpec(1, 3, family("twos")), Fraction(1, 3)) == 2 * (1 - Fraction(1, 3)) ** 3
    finally:
        FAMILIES.pop("twos")
    with pytest.raises(KeyError):
        family("nope")


@pytest.mark.parametrize("U, V", [(0, 1), (1.5, 2), (1, -1)])
def test_invalid_spec(U, V):
    with pytest.raises(ValueError):
        PolySpec(U, V)

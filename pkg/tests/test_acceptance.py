"""End-to-end acceptance checks, one group per criterion, each under its time budget.

Reference values are independent oracles (closed forms, elementary series,
mpmath quadrature) computed here, never taken from the code under test.
"""

import itertools
import math
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import mpmath
import numpy as np
import pytest
from click.testing import CliRunner

from unifint.cli import main
from unifint.fox_h import binomial_h, eval_contour, eval_series, exponential_h
from unifint.gamma_core import log_gamma, pochhammer, pochhammer_neg_int
from unifint.hypergeometric import PFQParams, SpecialCaseSpec, eq31_lhs, eq31_rhs
from unifint.options import EvalConfig
from unifint.report import read_jsonl
from unifint.srivastava import PolySpec, coefficient, eval_poly
from unifint.unified_integral import (
    IntegralSpec,
    check_conditions,
    lemma_closed_form,
    transformed_integral,
    verify_identity,
)


@contextmanager
def budget(seconds):
    t0 = time.perf_counter()
    yield
    elapsed = time.perf_counter() - t0
    assert elapsed < seconds, f"took {elapsed:.2f} s, budget {seconds} s"


def _rel(a, b):
    return abs(a - b) / abs(b)


def _exp_oracle():
    return 0.5 * float(mpmath.quad(lambda u: mpmath.exp(-u / 2) * (1 - u * u), [0, 1]))


def _exp_spec(**kw):
    base = dict(lam=1, nu=2, alpha=1, mu=1, a=1, y=0.5, z=0, h=exponential_h(), poly=PolySpec(1, 0))
    base.update(kw)
    return IntegralSpec(**base)


@pytest.mark.criterion(1)
def test_lemma_oracle():
    with budget(5):
        grid = list(itertools.product((0.5, 1.0, 1.5), (2.0, 3.0), (1.0, 2.0))) + [(0.5, 1.0, 2.0)]
        for zp, nu, a in grid:
            quad = transformed_integral(lambda u: np.ones(u.shape), zp, nu, a, rtol=1e-10)
            assert _rel(quad, lemma_closed_form(zp, nu, a)) <= 1e-8, (zp, nu, a)
        assert _rel(lemma_closed_form(1, 2, 1), 1 / 3) <= 1e-8
        assert _rel(lemma_closed_form(0.5, 1, 2), 4 / 3) <= 1e-8
        assert _rel(transformed_integral(lambda u: np.ones(u.shape), 0.5, 1, 2, rtol=1e-10), 4 / 3) <= 1e-8


@pytest.mark.criterion(2)
def test_identity_exponential():
    oracle = _exp_oracle()
    with budget(2):
        report = verify_identity(_exp_spec(), EvalConfig(tol=1e-8))
    assert report.ok
    assert _rel(report.lhs, oracle) <= 1e-6
    assert _rel(report.rhs, oracle) <= 1e-6


@pytest.mark.criterion(3)
def test_identity_polynomial():
    k1 = math.fsum((-0.5) ** j / math.factorial(j) / ((j + 2) * (j + 4)) for j in range(40))
    oracle = _exp_oracle() - 0.3 * k1
    with budget(2):
        report = verify_identity(_exp_spec(z=0.3, poly=PolySpec(1, 1)), EvalConfig(tol=1e-8))
    assert report.ok
    assert len(report.per_K_terms) == 2
    assert _rel(report.lhs, oracle) <= 1e-6
    assert _rel(report.rhs, oracle) <= 1e-6


@pytest.mark.criterion(4)
def test_special_case():
    oracle = math.fsum(0.25**j / ((j + 1) ** 2 * (j + 3)) for j in range(100))
    f = PFQParams((1, 1), (2,))
    cfg = EvalConfig(tol=1e-9)
    with budget(2):
        spec = SpecialCaseSpec(1, 2, 1, 0.25, f)
        assert _rel(eq31_lhs(spec, cfg), oracle) <= 1e-6
        assert _rel(eq31_rhs(spec, cfg), oracle) <= 1e-6
        for lam, nu, a in [(1, 2, 1), (1, 3, 1), (0.5, 1, 2), (1.5, 3, 2)]:
            deg = SpecialCaseSpec(lam, nu, a, 0, f)
            lemma = lemma_closed_form(lam, nu, a)
            assert _rel(eq31_lhs(deg, cfg), lemma) <= 1e-8
            assert _rel(eq31_rhs(deg, cfg), lemma) <= 1e-8


@pytest.mark.criterion(5)
def test_cross_method():
    cfg = EvalConfig(tol=1e-11)
    with budget(10):
        for h in (exponential_h(), binomial_h()):
            for x in (0.1, 0.25, 0.5, 0.9):
                s = eval_series(h, x, cfg)
                c = eval_contour(h, x, cfg=cfg)
                assert _rel(c, s) <= 1e-8, (h.label(), x)
        assert _rel(eval_contour(binomial_h(), 4.0, cfg=cfg), 0.04) <= 1e-7


@pytest.mark.criterion(6)
def test_gamma_properties():
    rng = np.random.default_rng(2024)
    with budget(1):
        r = 19 * np.sqrt(rng.uniform(0, 1, 1000))
        z = r * np.exp(1j * rng.uniform(-np.pi, np.pi, 1000))
        z = np.where((np.abs(z.imag) < 1e-3) & (z.real < 0.5), z + 0.5j, z)
        g1, g0 = np.exp(log_gamma(z + 1)), np.exp(log_gamma(z))
        assert np.max(np.abs(g1 - z * g0) / np.abs(g1)) <= 1e-12

        w = rng.uniform(-10, 10, 1000) + 1j * rng.uniform(-2, 2, 1000)
        w = w[np.abs(w - np.round(w.real)) > 1e-3]
        refl = np.exp(log_gamma(w) + log_gamma(1 - w)) * np.sin(np.pi * w) / np.pi
        assert np.max(np.abs(refl - 1)) <= 1e-11

        assert np.array_equal(log_gamma(np.conj(z)), np.conj(log_gamma(z)))

        for a, j, k in rng.integers(1, 8, size=(200, 3)):
            assert pochhammer(int(a), int(j + k)) == pochhammer(int(a), int(j)) * pochhammer(int(a + j), int(k))
        assert all(pochhammer_neg_int(V, s) == 0 for V in range(30) for s in range(V + 1, V + 10))


@pytest.mark.criterion(7)
def test_polynomial_degenerations():
    xs = [Fraction(p, q) for p in range(-6, 7) for q in (1, 2, 3, 7)]
    with budget(1):
        for V in range(21):
            spec = PolySpec(1, V)
            for x in xs:
                assert eval_poly(spec, x) == (1 - x) ** V
        for U, V in itertools.product((1, 2, 3), range(12)):
            spec = PolySpec(U, V)
            assert all(coefficient(spec, K) == 0 for K in range(V // U + 1, V // U + 5))
            scaled = PolySpec(U, V, lambda V_, K: 2.5 - 1j)
            assert eval_poly(scaled, 0.3) == pytest.approx((2.5 - 1j) * eval_poly(spec, 0.3), rel=1e-14)


_VIOLATING = """\
command: verify
tolerance: 1.0e-6
spec: {lambda: 3, nu: 1, mu: 1, a: 1, y: 0.5, h: {m: 1, n: 0, upper: [], lower: [[0, 1]]}}
"""

_SWEEP = "command: sweep\ntolerance: 1.0e-5\nseed: 20240\nsweep: {count: 20}\n"


@pytest.mark.criterion(8)
def test_condition_gating_and_sweep(tmp_path):
    with budget(60):
        cond = check_conditions(_exp_spec(lam=3, nu=1))
        assert not cond[1].passed and cond[1].margin == 2.0

        cfg = tmp_path / "bad.yaml"
        cfg.write_text(_VIOLATING)
        res = CliRunner().invoke(main, ["verify", "--config", str(cfg), "--out", str(tmp_path / "bad")])
        assert res.exit_code == 2

        cfg = tmp_path / "sweep.yaml"
        cfg.write_text(_SWEEP)
        res = CliRunner().invoke(main, ["sweep", "--config", str(cfg), "--out", str(tmp_path / "sweep")])
        assert res.exit_code == 0, res.output
        recs = read_jsonl(tmp_path / "sweep.jsonl")
        assert len(recs) == 20
        assert all(r["status"] == "ok" and r["rel_error"] <= 1e-5 for r in recs)


@pytest.mark.criterion(9)
def test_determinism(tmp_path):
    cfg = tmp_path / "sweep.yaml"
    cfg.write_text(_SWEEP)
    outputs = []
    for name in ("first", "second"):
        res = CliRunner().invoke(main, ["sweep", "--config", str(cfg), "--out", str(tmp_path / name)])
        assert res.exit_code == 0
        jsonl = Path(f"{tmp_path / name}.jsonl").read_text().splitlines()
        csv = Path(f"{tmp_path / name}.csv").read_text().splitlines()
        # wall_time is the last field in both formats
        outputs.append(([l.rsplit(", \"wall_time\"", 1)[0] for l in jsonl], [l.rsplit(",", 1)[0] for l in csv]))
    assert outputs[0] == outputs[1]
    assert len(outputs[0][0]) == 20

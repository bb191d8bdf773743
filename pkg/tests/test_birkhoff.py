import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kronlab.birkhoff import (
    DecaySpec,
    LogPowerPhi,
    SumTrace,
    birkhoff_sum,
    colzani_alphas,
    colzani_probe,
    default_colzani_series,
    dirichlet_sum,
    discrepancy_1d,
    discrepancy_trace,
    eval_coefficients,
    grid_sup,
    integral_bound_probe,
    integrate_S,
    koksma_probe,
    orbit_coefficients,
    rational_window_bound_probe,
    sidorov_probe,
    theorem5_probe,
    theorem5_trend,
    total_variation,
    weyl_probe,
)
from kronlab.core import PrecisionContext, RealVector, harmonic, zero_function
from kronlab.diophantine import cf_best_approximations, convergent_denominators
from kronlab.errors import BadWindow, DomainError, PhiInadmissible, QuadratureUnstable

CTX = PrecisionContext(256)
SQRT2 = RealVector.sqrt(2)
COS = harmonic("cos", 1)


def brute_discrepancy(values, t: int) -> float:
    """Sup over gamma of |#{k alpha mod 1 < gamma} - t gamma|, checking both sides of every point."""
    with mpmath.workprec(200):
        pts = np.array([float(mpmath.frac(k * values[0])) for k in range(1, t + 1)])
    best = 0.0
    for g in np.append(pts, 1.0):
        best = max(best, abs(np.sum(pts < g) - t * g), abs(np.sum(pts <= g) - t * g))
    return best


class TestSums:
    def test_quarter_rotation_cancels(self):
        assert abs(float(birkhoff_sum(COS, RealVector.of("0.25"), None, 4, CTX).value)) < 1e-60

    def test_zero_function(self):
        assert birkhoff_sum(zero_function(), SQRT2, None, 10**6, CTX).value == 0

    def test_two_terms(self):
        # 1 + cos(2 pi sqrt2) = 1 - 0.858216
        v = float(birkhoff_sum(COS, SQRT2, None, 2, CTX).value)
        assert v == pytest.approx(0.141784, abs=1e-6)
        s = math.sqrt(2)
        assert v == pytest.approx(math.sin(2 * math.pi * s) * math.cos(math.pi * s) / math.sin(math.pi * s))
        assert float(dirichlet_sum((1,), SQRT2, 2, ctx=CTX)) == pytest.approx(v, abs=1e-15)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(0.001, 0.999), st.integers(0, 150), st.floats(0, 1))
    def test_matches_dirichlet_closed_form(self, a, t, x):
        alpha = RealVector.of(a)
        xs = (mpmath.mpf(x),)
        got = birkhoff_sum(COS, alpha, xs, t, CTX).value
        want = dirichlet_sum((1,), alpha, t, x=xs, ctx=CTX)
        with mpmath.workprec(256):
            assert abs(got - want) <= (t + 1) * 1e-28

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.001, 0.999), st.integers(1, 10**4))
    def test_float_coefficients_match(self, a, t):
        alpha = RealVector.of(a)
        coeffs = orbit_coefficients(COS, alpha, t)
        got = eval_coefficients(coeffs, np.array([[0.0], [0.37]]))
        want = [float(dirichlet_sum((1,), alpha, t, x=(x,), ctx=CTX)) for x in (0, mpmath.mpf(0.37))]
        scale = max(1.0, 1 / abs(math.sin(math.pi * a)))
        assert got == pytest.approx(want, abs=1e-9 * scale)

    def test_dimension_guard(self):
        with pytest.raises(DomainError):
            birkhoff_sum(harmonic("cos", (1, 1)), SQRT2, None, 3, CTX)


class TestDiscrepancy:
    def test_hand_values(self):
        assert discrepancy_1d(SQRT2, 1) == pytest.approx(0.585786, abs=1e-6)
        assert discrepancy_1d(SQRT2, 2) == pytest.approx(0.828427, abs=1e-6)
        assert discrepancy_1d(RealVector.of("0.5"), 2) == pytest.approx(1.0)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 9), st.sampled_from([2, 3, 5, 6, 7, 11, 13]), st.integers(1, 9), st.integers(1, 600))
    def test_against_brute_force(self, p, d, q, t):
        a = RealVector.parse(f"({p}+1*sqrt({d}))/{q}")
        assert discrepancy_1d(a, t) == pytest.approx(brute_discrepancy(a.value(200), t), abs=1e-9)

    def test_trace_matches_direct(self):
        tr = discrepancy_trace(RealVector.golden(), 300)
        assert max(abs(tr[t - 1] - discrepancy_1d(RealVector.golden(), t)) for t in range(1, 301)) < 1e-12

    def test_bounded_at_convergent_denominators(self):
        qs = convergent_denominators(SQRT2, 10**8, CTX)[:20]
        assert max(discrepancy_1d(SQRT2, q) for q in qs) <= 3

    def test_guard(self):
        with pytest.raises(DomainError):
            discrepancy_1d(SQRT2, 0)


class TestVariation:
    def test_harmonics(self):
        assert total_variation(COS) == pytest.approx(4, abs=1e-6)
        assert total_variation(harmonic("sin", 1)) == pytest.approx(4, abs=1e-6)
        assert total_variation(COS + COS) == pytest.approx(8, abs=1e-6)
        assert total_variation(harmonic("cos", 5, 0.5, 1.1)) == pytest.approx(10, abs=1e-6)

    def test_against_integral_of_derivative(self):
        f = harmonic("cos", 1, 0.7) + harmonic("sin", 3, 0.4, 0.2)
        xs = np.linspace(0, 1, 400001)
        want = np.trapezoid(np.abs(f.derivative_np(xs)), xs)
        assert total_variation(f) == pytest.approx(want, rel=1e-6)


class TestProbes:
    @pytest.mark.parametrize("alpha", [SQRT2, RealVector.golden()])
    def test_koksma(self, alpha):
        tr = koksma_probe(COS, alpha, 3000, CTX)
        assert tr.passed and len(tr) == 3000
        assert tr.rows[0]["S"] == pytest.approx(math.cos(2 * math.pi * float(alpha.floats()[0])))
        assert np.all(np.diff(tr.column("t")) > 0)

    def test_koksma_zero(self):
        tr = koksma_probe(zero_function(), SQRT2, 50, CTX)
        assert tr.passed and not tr.column("S").any()

    def test_weyl(self):
        tr = weyl_probe(COS, SQRT2, None, [1, 10, 1000, 10**5], CTX)
        assert tr.passed
        assert tr.rows[-1]["S"] <= 1e-4
        assert tr.rows[0]["S"] == pytest.approx(1.0)
        shifted = weyl_probe(COS + harmonic("cos", (0,), 0.5), SQRT2, None, [1, 10, 1000, 10**5], CTX)
        assert shifted.column("S") == pytest.approx(tr.column("S"), abs=1e-12)

    def test_weyl_bound(self):
        tr = weyl_probe(COS, SQRT2, (0.3,), [10**5], CTX)
        assert tr.rows[0]["S"] <= 1 / (2 * 10**5 * math.sin(math.pi * (math.sqrt(2) - 1)))

    def test_sidorov(self):
        ba = cf_best_approximations(SQRT2, 10**5, CTX)
        qs = [b.M for b in ba]
        tr = sidorov_probe(COS, SQRT2, qs, 1024, CTX)
        assert tr.passed
        assert tr.rows[0]["S"] == pytest.approx(1.0)
        for row, b in zip(tr.rows, ba):
            assert row["S"] <= math.pi * float(b.zeta) / math.sin(math.pi * (math.sqrt(2) - 1)) + 1e-12
        assert not sidorov_probe(zero_function(), SQRT2, qs, 64, CTX).column("S").any()

    def test_grid_sup_against_dense_evaluation(self):
        coeffs = orbit_coefficients(harmonic("cos", 3, 1, 0.4) + COS, SQRT2, 37)
        sup, _ = grid_sup(coeffs, 1, 256)
        dense = np.abs(eval_coefficients(coeffs, np.linspace(0, 1, 200001).reshape(-1, 1))).max()
        assert sup == pytest.approx(dense, rel=1e-6)


class TestIntegralProbes:
    @staticmethod
    def closed_1d(lo, hi, t):
        return sum((math.sin(2 * math.pi * k * hi) - math.sin(2 * math.pi * k * lo)) / (2 * math.pi * k) for k in range(1, t + 1))

    def test_full_period(self):
        r = integral_bound_probe(COS, [(0, 1)], 25, ctx=CTX)
        assert abs(r["value"]) < 1e-9 and r["pass"]

    @pytest.mark.parametrize("t", [10, 100, 1000])
    def test_partial_box(self, t):
        r = integral_bound_probe(COS, [(0, 0.3)], t, ctx=CTX)
        assert r["value"] == pytest.approx(self.closed_1d(0, 0.3, t), abs=1e-8)
        assert r["bound"] == pytest.approx(1 + math.log(t), rel=1e-6)
        assert r["pass"]

    def test_square(self):
        r = integral_bound_probe(harmonic("cos", (1, 1)), [(0, 0.3), (0, 0.3)], 10, ctx=CTX)
        want = 0.0
        for k in range(1, 11):
            z = (np.exp(2j * np.pi * k * 0.3) - 1) / (2j * np.pi * k)
            want += (z * z).real
        assert r["value"] == pytest.approx(want, abs=1e-8)
        assert r["bound"] == pytest.approx(2 * (1 + math.log(10)), rel=1e-6)
        assert r["pass"]

    def test_unstable(self):
        with pytest.raises(QuadratureUnstable):
            integrate_S(COS, [(0, 0.3)], 50, max_rounds=0)

    @pytest.mark.parametrize("q, a", [(3, 1), (5, 2)])
    def test_window(self, q, a):
        for t in (10, 100, 1000):
            r = rational_window_bound_probe(COS, a, q, t, CTX)
            assert r["value"] == pytest.approx(self.closed_1d(a / q, (a + 1) / q, t), abs=1e-8)
            assert r["bound"] == pytest.approx(q - 1, rel=1e-6)
            assert r["pass"]

    def test_bad_window(self):
        with pytest.raises(BadWindow):
            rational_window_bound_probe(COS, 1, 2, 10, CTX)


class TestDecayAndSpecialTimes:
    def test_decay_spec(self):
        spec = DecaySpec(1.0, 7.0)
        f = spec.realize(2)
        assert len(f.terms) == 24 and spec.satisfied_by(f)
        assert not DecaySpec(1.0, 9.0).satisfied_by(f)
        assert spec.realize(2) == f
        with pytest.raises(DomainError):
            DecaySpec(0, 1)

    def test_single_frequency_closed_form(self):
        a = RealVector.sqrt(2, 3)
        r = theorem5_probe(harmonic("cos", (1, 0)), a, 1000, 256, CTX, gamma=7, exponents=(2.0, 0.5))
        s2 = math.sqrt(2)
        want = abs(math.sin(math.pi * r["t"] * s2) / math.sin(math.pi * s2))
        # the grid sup approaches the true sup from below
        assert want * (1 - 1e-6) <= r["observed"] <= want * (1 + 1e-12)
        assert not r["warning"]

    def test_warning(self):
        a = RealVector.sqrt(2, 3)
        f = DecaySpec(1.0, 3.0).realize(2)
        r = theorem5_probe(f, a, 100, 64, CTX, gamma=3, exponents=(2.0, 0.5))
        assert r["warning"] and "observed" in r

    def test_trend(self):
        a = RealVector.sqrt(2, 3)
        res = theorem5_trend(DecaySpec(1.0, 7.0).realize(2), a, [10**2, 10**3, 10**4], 256, CTX, gamma=7)
        assert res["monotone"] and res["pass"]


class TestColzani:
    def test_phi_admissibility(self):
        assert LogPowerPhi(1, 1.1).admissible()
        assert not LogPowerPhi(1, 0).admissible()
        assert LogPowerPhi(1, 1.1).tail_exponent() == pytest.approx(1.1, abs=1e-3)
        assert LogPowerPhi(1, 1.1).integral() > 0
        with pytest.raises(PhiInadmissible):
            colzani_probe(COS, [SQRT2], LogPowerPhi(1, 0), 100, CTX)

    def test_seeded_samples(self):
        assert [str(a) for a in colzani_alphas(4)] == [str(a) for a in colzani_alphas(4)]
        assert len({str(a) for a in colzani_alphas(32)}) == 32

    def test_single_harmonic_bound(self):
        phi = LogPowerPhi()
        alphas = colzani_alphas(4)
        res = colzani_probe(COS, alphas, phi, 300, CTX, x_grid=64)
        for a, row in zip(alphas, res["rows"]):
            v = float(a.floats()[0])
            norm = min(v % 1, 1 - v % 1)
            assert row["c_emp"] <= 1 / (2 * norm * float(phi(1.0))) + 1e-9

    def test_default_series_runs(self):
        f = default_colzani_series()
        assert len(f.terms) == 20
        res = colzani_probe(f, colzani_alphas(3), LogPowerPhi(), 200, CTX, x_grid=64)
        assert len(res["rows"]) == 3 and all(r["c_emp"] > 0 for r in res["rows"])


def test_sum_trace_slack():
    tr = SumTrace("demo", slack=0.1)
    tr.add(1, 1.05, 1.0)
    tr.add(2, -1.2, 1.0)
    assert [r["pass"] for r in tr.rows] == [True, False]
    assert not tr.passed and len(tr.failures) == 1

import itertools
import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kronlab.core import PrecisionContext, RealVector
from kronlab.diophantine import (
    ApproxList,
    BestApproximation,
    badly_approximable_margin,
    cf_best_approximations,
    convergent_denominators,
    enumerate_best_approximations,
    estimate_exponents,
    g_n_star,
    jarnik_transfer,
    marnat_polynomial,
    marnat_root,
    minkowski_ok,
    proposition_g,
    psi,
    psi_star,
    simultaneous_best,
)
from kronlab.errors import BudgetExceeded, DomainError, InsufficientData, OutOfRange

CTX = PrecisionContext(256)
SQRT2 = RealVector.sqrt(2)
GOLDEN = RealVector.golden()


def brute_best(values, M_max):
    """Records of min ||m . alpha|| over heights 1..M_max by exhaustive search."""
    n = len(values)
    best = None
    out = []
    with mpmath.workprec(200):
        for H in range(1, M_max + 1):
            cands = []
            for m in itertools.product(range(-H, H + 1), repeat=n):
                if max(abs(c) for c in m) != H or next(c for c in m if c) < 0:
                    continue
                y = mpmath.fsum(c * v for c, v in zip(m, values))
                cands.append((abs(y - mpmath.nint(y)), m))
            z, m = min(cands)
            if best is None or z < best:
                best = z
                out.append((H, m, z))
    return out


def brute_simultaneous(values, Q):
    out, best = [], None
    with mpmath.workprec(200):
        for q in range(1, Q + 1):
            r = max(abs(q * v - mpmath.nint(q * v)) for v in values)
            if best is None or r < best:
                best = r
                out.append((q, r))
    return out


class TestContinuedFractions:
    def test_sqrt2_prefix(self):
        ba = cf_best_approximations(SQRT2, 12, CTX)
        assert [b.M for b in ba] == [1, 2, 5, 12]
        assert [float(b.zeta) for b in ba] == pytest.approx([0.414214, 0.171573, 0.071068, 0.029437], abs=1e-6)

    def test_golden_is_fibonacci(self):
        assert [b.M for b in cf_best_approximations(GOLDEN, 8, CTX)] == [1, 2, 3, 5, 8]

    def test_single_record(self):
        ba = cf_best_approximations(SQRT2, 1, CTX)
        assert len(ba) == 1 and float(ba[0].zeta) == pytest.approx(0.414214, abs=1e-6)

    def test_convergent_denominators(self):
        assert convergent_denominators(SQRT2, 1000, CTX) == [1, 2, 5, 12, 29, 70, 169, 408, 985]

    @pytest.mark.parametrize("alpha", ["sqrt2", "golden", "sqrt5", "sqrt7", "(3+2*sqrt(11))/5"])
    def test_matches_exhaustive_search(self, alpha):
        a = RealVector.parse(alpha)
        want = brute_best(a.value(200), 300)
        got = cf_best_approximations(a, 300, CTX)
        assert [(b.M, float(b.zeta)) for b in got] == [(H, pytest.approx(float(z), abs=1e-30)) for H, _, z in want]

    def test_needs_scalar(self):
        with pytest.raises(DomainError):
            cf_best_approximations(RealVector.sqrt(2, 3), 10, CTX)


class TestEnumeration:
    def test_agrees_with_cf(self):
        for a in (SQRT2, GOLDEN, RealVector.sqrt(5)):
            cf = cf_best_approximations(a, 10**4, CTX)
            en = enumerate_best_approximations(a, 10**4, CTX)
            assert [(b.M, b.zeta) for b in cf] == [(b.M, b.zeta) for b in en]

    def test_pair_height_one(self):
        # (1, 1) gives ||sqrt2 + sqrt3|| = 0.146264 < ||sqrt2 - sqrt3|| = 0.317837
        ba = enumerate_best_approximations(RealVector.sqrt(2, 3), 1, CTX)
        assert len(ba) == 1
        assert ba[0].m == (1, 1)
        assert float(ba[0].zeta) == pytest.approx(0.146264369941972, abs=1e-12)

    @pytest.mark.parametrize("alpha, M", [("sqrt2,sqrt3", 30), ("golden,sqrt7", 25), ("sqrt2,sqrt3,sqrt5", 6)])
    def test_matches_exhaustive_search(self, alpha, M):
        a = RealVector.parse(alpha)
        want = brute_best(a.value(200), M)
        got = enumerate_best_approximations(a, M, CTX)
        assert [(b.M, b.m) for b in got] == [(H, m) for H, m, _ in want]
        with mpmath.workprec(200):
            assert all(abs(b.zeta - z) < 1e-55 for b, (_, _, z) in zip(got, want))

    def test_sequence_invariants(self):
        ba = enumerate_best_approximations(RealVector.sqrt(2, 3), 10**4, CTX)
        assert all(x.M < y.M for x, y in zip(ba, ba[1:]))
        assert all(x.zeta > y.zeta for x, y in zip(ba, ba[1:]))
        assert all(minkowski_ok(ba))
        assert all(next(c for c in b.m if c) > 0 for b in ba)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            enumerate_best_approximations(RealVector.sqrt(2, 3, 5), 2000, CTX)
        assert len(enumerate_best_approximations(RealVector.sqrt(2, 3, 5), 5, CTX, budget=5)) > 0


class TestMeasureFunctions:
    def test_psi_lookup(self):
        ba = cf_best_approximations(SQRT2, 12, CTX)
        assert float(psi(ba, 3)) == pytest.approx(0.171573, abs=1e-6)
        assert float(psi(ba, 12)) == pytest.approx(0.029437, abs=1e-6)
        assert float(psi(ba, 1)) == pytest.approx(0.414214, abs=1e-6)
        with pytest.raises(OutOfRange):
            psi(ba, 13)
        with pytest.raises(OutOfRange):
            psi(ApproxList(), 1)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 2000))
    def test_psi_is_min_over_heights(self, t):
        ba = cf_best_approximations(SQRT2, 2000, CTX)
        with mpmath.workprec(200):
            s = mpmath.sqrt(2)
            want = min(abs(q * s - mpmath.nint(q * s)) for q in range(1, t + 1))
            assert abs(psi(ba, t) - want) < 1e-55

    def test_simultaneous_scalar_matches_convergents(self):
        assert [s.q for s in simultaneous_best(SQRT2, 12, CTX)] == [1, 2, 5, 12]

    def test_simultaneous_first_record(self):
        sa = simultaneous_best(RealVector.sqrt(2, 3), 1, CTX)
        assert len(sa) == 1 and float(sa[0].r) == pytest.approx(0.414214, abs=1e-6)

    def test_simultaneous_matches_brute_force(self):
        a = RealVector.sqrt(2, 3)
        want = brute_simultaneous(a.value(200), 5000)
        got = simultaneous_best(a, 5000, CTX)
        assert [s.q for s in got] == [q for q, _ in want]
        assert [s.q for s in got] == [1, 3, 7, 22, 34, 41, 1183, 1463, 2646, 4109]

    def test_psi_star(self):
        sa = simultaneous_best(RealVector.sqrt(2, 3), 100, CTX)
        assert psi_star(sa, 40) == sa[4].r
        with pytest.raises(OutOfRange):
            psi_star(sa, 0)


class TestExponents:
    @pytest.mark.parametrize("alpha", [SQRT2, GOLDEN])
    def test_badly_approximable_recovery(self, alpha):
        est = estimate_exponents(cf_best_approximations(alpha, 10**6, CTX))
        assert abs(est.omega_est - 1) <= 0.05
        assert abs(est.omega_hat_est - 1) <= 0.05
        assert math.isnan(est.lambda_hat_est)

    def test_synthetic_power_law(self):
        ba = [BestApproximation(k, (2**k,), 2**k, mpmath.mpf(2) ** -k, mpmath.mpf(2) ** -k) for k in range(1, 6)]
        assert estimate_exponents(ba).omega_est == pytest.approx(1.0, abs=1e-12)

    def test_pair_exponents(self):
        a = RealVector.sqrt(2, 3)
        est = estimate_exponents(enumerate_best_approximations(a, 10**4, CTX), simultaneous_best(a, 10**5, CTX))
        assert est.consistent(2, slack=0.1)
        assert 0.4 < est.lambda_hat_est < 0.6

    def test_insufficient(self):
        with pytest.raises(InsufficientData):
            estimate_exponents(cf_best_approximations(SQRT2, 5, CTX))

    @pytest.mark.parametrize("n", range(2, 11))
    def test_marnat_root_degenerate(self, n):
        assert marnat_root(n, n) == pytest.approx(1.0, abs=1e-12)

    def test_marnat_quadratic(self):
        G = marnat_root(3, 4)
        assert G == pytest.approx((-1 + math.sqrt(13)) / 2, abs=1e-9)
        assert abs(marnat_polynomial(3, 4, G)) <= 1e-12
        with pytest.raises(DomainError):
            marnat_root(3, 2.5)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 10), st.floats(0, 50))
    def test_marnat_root_is_root(self, n, extra):
        w = n + extra
        G = marnat_root(n, w)
        assert G >= 1
        assert abs(marnat_polynomial(n, w, G)) <= 1e-12 * max(1.0, w)

    def test_g_star_values(self):
        assert g_n_star(2)[0] == pytest.approx(14 / 9, abs=1e-12)
        assert g_n_star(3)[0] == pytest.approx(19 / 8, abs=1e-12)
        assert 0.85 <= g_n_star(20)[0] / (2**21 / (20 * math.e)) <= 1.15

    @pytest.mark.parametrize("n", range(2, 17))
    def test_g_star_is_g_at_optimum(self, n):
        g_star, g_max, _ = g_n_star(n)
        assert abs(float(proposition_g(n, 2 - 2 / (n + 1))) - g_star) <= 1e-9
        assert g_max >= g_star - 1e-3

    def test_jarnik(self):
        assert jarnik_transfer(2, 2) == pytest.approx(0.5)
        assert jarnik_transfer(3, 3) == pytest.approx(1 / 3)
        assert jarnik_transfer(2, math.inf) == 1.0

    def test_badly_approximable_margin(self):
        assert badly_approximable_margin(cf_best_approximations(SQRT2, 10**4, CTX), 1) >= 0.2
        assert badly_approximable_margin(cf_best_approximations(GOLDEN, 10**4, CTX), 1) >= 0.3
        synth = [BestApproximation(k, (2**k,), 2**k, mpmath.mpf(2) ** -(k + 1), 0) for k in range(5)]
        assert badly_approximable_margin(synth, 1) == pytest.approx(1.0)

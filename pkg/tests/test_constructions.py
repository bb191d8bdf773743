import math

import mpmath
import numpy as np
import pytest

from kronlab.birkhoff import birkhoff_partial_sums
from kronlab.constructions import (
    SigmaSequence,
    build_kochergin,
    build_smooth,
    certify_growth,
    certify_smooth_growth,
    direct_orbit_sum,
    kochergin_f_eval,
    kochergin_sum,
    smooth_orbit_sum,
    smooth_sup_bound,
)
from kronlab.core import PrecisionContext, RealVector, eval_series, series_mean_check, torus_mean
from kronlab.diophantine import cf_best_approximations, enumerate_best_approximations
from kronlab.errors import (
    DepthExceeded,
    DomainError,
    EmptyConstruction,
    InsufficientDepth,
    OutOfRange,
    RangeError,
    TailDiverges,
)

CTX = PrecisionContext(256)
SQRT2 = RealVector.sqrt(2)


@pytest.fixture(scope="module")
def ba():
    return cf_best_approximations(SQRT2, 10**9, CTX)


@pytest.fixture(scope="module")
def koch(ba):
    return build_kochergin(SQRT2, ba, SigmaSequence.parse("power:0.25"), 2, CTX)


@pytest.fixture(scope="module")
def smooth(ba):
    return build_smooth(SQRT2, ba, 1, 16, CTX)


class TestSigma:
    def test_forms(self):
        s = SigmaSequence.parse("power:0.25")
        assert s(16) == pytest.approx(18**-0.25)
        assert SigmaSequence.parse("log_inv")(0) == pytest.approx(1.0)
        t = SigmaSequence.parse("table:1,0.5,0.25")
        assert t(2) == 0.25 and t.validate()
        with pytest.raises(OutOfRange):
            t(3)
        with pytest.raises(DomainError):
            SigmaSequence.parse("cubic:1")

    def test_first_below(self):
        s = SigmaSequence("power", 0.25)
        k = s.first_below(0.25)
        assert s(k) <= 0.25 < s(k - 1)
        assert k == 254

    def test_not_decreasing(self):
        assert not SigmaSequence("custom", table=(1, 2, 0.5)).validate()


class TestKochergin:
    def test_choice(self, koch):
        assert koch.chosen[0] == (1, 4, 16)
        assert koch.t0 == 16
        k, nu, r = koch.chosen[1]
        assert koch.ba[nu - 1].M == 408 and r == 576
        assert koch.sigma(r) <= 0.25

    def test_guards(self, ba):
        sigma = SigmaSequence("power", 0.25)
        with pytest.raises(EmptyConstruction):
            build_kochergin(SQRT2, ba, sigma, 0, CTX)
        with pytest.raises(DepthExceeded):
            build_kochergin(SQRT2, ba[:6], sigma, 2, CTX)

    def test_sum_values(self, koch):
        assert kochergin_sum(koch, 0, CTX).value == 0
        s16 = kochergin_sum(koch, 16, CTX)
        assert s16.value >= 2 * 16 * koch.sigma(16) - s16.tail_bound

    def test_telescoping_matches_direct_sum(self, koch):
        direct = direct_orbit_sum(koch.f, SQRT2, 500, CTX)
        with mpmath.workprec(256):
            worst = max(abs(direct[t] - kochergin_sum(koch, t, CTX).value) for t in range(501))
        assert worst <= 1e-60

    def test_generic_birkhoff_sum_agrees(self, koch):
        sums = birkhoff_partial_sums(koch.f, SQRT2, None, 60, CTX, strict=False)
        with mpmath.workprec(256):
            assert max(abs(sums[t] - kochergin_sum(koch, t, CTX).value) for t in range(61)) <= 1e-60

    def test_f_bounded_and_periodic(self, koch):
        rng = np.random.default_rng(7)
        bound = math.pi + math.pi * 2.0**-koch.k_max
        for x in rng.uniform(0, 1, 200):
            v = kochergin_f_eval(koch, (mpmath.mpf(x),), CTX)
            assert abs(float(v.value)) <= bound
            with mpmath.workprec(256):
                w = kochergin_f_eval(koch, (mpmath.mpf(x) + 1,), CTX)
                assert abs(v.value - w.value) <= 2 * CTX.tol

    def test_f_has_zero_mean(self, koch):
        assert abs(torus_mean(koch.f, CTX)) <= 1e-60

    def test_F_is_only_certified_on_orbit(self, koch):
        with pytest.raises(TailDiverges):
            eval_series(koch.F, (mpmath.mpf("0.3"),), CTX, strict=False)

    def test_growth(self, koch):
        rep = certify_growth(koch, 16, 576, CTX)
        assert rep.passed and len(rep.rows) == 561
        one = certify_growth(koch, 16, 16, CTX)
        assert len(one.rows) == 1
        with pytest.raises(RangeError):
            certify_growth(koch, 16, 577, CTX)

    def test_log_sigma(self, ba):
        c = build_kochergin(SQRT2, ba, SigmaSequence("log_inv"), 1, CTX)
        assert certify_growth(c, c.t0, c.r_last, CTX).passed


class TestSmooth:
    def test_structure(self, ba, smooth):
        assert len(smooth.series.terms) == 16
        assert [t.freq for t in smooth.series.terms] == [r.m for r in ba[:16]]
        assert smooth.series.l1_norm() <= smooth_sup_bound(smooth)
        big_d = build_smooth(SQRT2, ba, 10, 10, CTX)
        assert float(smooth_sup_bound(big_d)) == pytest.approx(math.pi, rel=1e-3)

    def test_margin_near_zero(self, smooth):
        assert abs(smooth.margin) <= 0.1

    def test_depth(self, ba):
        with pytest.raises(InsufficientDepth):
            build_smooth(SQRT2, ba[:5], 1, 10, CTX)
        with pytest.raises(DomainError):
            build_smooth(SQRT2, ba, 0.5, 10, CTX)

    def test_zero_mean(self, smooth):
        assert abs(series_mean_check(smooth.series, CTX)) <= 1e-60

    def test_orbit_sum_paths(self, smooth):
        assert smooth_orbit_sum(smooth, 0, CTX).value == 0
        direct = direct_orbit_sum(smooth.series, SQRT2, 200, CTX)
        with mpmath.workprec(256):
            assert max(abs(direct[t] - smooth_orbit_sum(smooth, t, CTX).value) for t in range(201)) <= 1e-60

    def test_growth_windows(self, smooth):
        rep = certify_smooth_growth(smooth, 2000, CTX)
        assert rep.passed
        assert all(r["min_S"] > 0 for r in rep.rows)

    def test_single_window(self, smooth):
        rep = certify_smooth_growth(smooth, 1, CTX)
        assert len(rep.rows) == 1

    def test_negative_margin_still_reports(self, ba):
        s = build_smooth(SQRT2, ba, 3, 16, CTX)
        rep = certify_smooth_growth(s, 500, CTX)
        assert s.margin < 0 and len(rep.rows) > 0

    def test_pair(self):
        a = RealVector.sqrt(2, 3)
        ba2 = enumerate_best_approximations(a, 10**4, CTX)
        s = build_smooth(a, ba2, 2, 8, CTX)
        direct = direct_orbit_sum(s.series, a, 50, CTX)
        with mpmath.workprec(256):
            assert max(abs(direct[t] - smooth_orbit_sum(s, t, CTX).value) for t in range(51)) <= 1e-60

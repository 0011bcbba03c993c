import math

import pytest

from gedpower.ged import make_params, survival
from gedpower.norming import (
    aux_f_g,
    gumbel_constants,
    hall_constants,
    optimal_constants,
    power_constants,
    solve_bn,
)
from gedpower.specfun import ConvergenceError


class TestGumbelConstants:
    def test_laplace_closed_form(self):
        params = make_params(1.0)
        for n in (10, 10**4, 10**9):
            nm = gumbel_constants(params, n)
            assert nm.scale == pytest.approx(2.0**-0.5, rel=1e-14)
            assert nm.shift == pytest.approx(math.log(n / 2.0) / math.sqrt(2.0), rel=1e-13)

    def test_formula_transcription_normal(self):
        # v = 2, lam = 1: scale = 2^(1/2) / (2 sqrt(log n)),
        # shift = sqrt(2 log n) - scale (log log n / 2 + log(2 Gamma(1/2)))
        params = make_params(2.0)
        n = 10**6
        ln = math.log(n)
        nm = gumbel_constants(params, n)
        lam = params.lam
        scale = 2.0**0.5 * lam / (2.0 * ln**0.5)
        shift = 2.0**0.5 * lam * ln**0.5 - scale * (
            0.5 * math.log(ln) + math.log(2.0 * math.gamma(0.5))
        )
        assert nm.scale == pytest.approx(scale, rel=1e-13)
        assert nm.shift == pytest.approx(shift, rel=1e-13)

    def test_tail_calibration_trend(self):
        # n * survival(scale x + shift) approaches e^-x
        params = make_params(2.0)
        n = 10**6
        nm = gumbel_constants(params, n)
        val = n * survival(params, nm.shift)
        assert val == pytest.approx(1.0, rel=0.10)

    def test_min_n(self):
        with pytest.raises(ValueError):
            gumbel_constants(make_params(2.0), 2)

    def test_log_n_mode_agrees(self):
        params = make_params(0.5)
        a = gumbel_constants(params, 10**6)
        b = gumbel_constants(params, log_n=math.log(10**6))
        assert a.scale == pytest.approx(b.scale, rel=1e-14)
        assert a.shift == pytest.approx(b.shift, rel=1e-14)


class TestPowerConstants:
    def test_reduces_to_gumbel_at_unit_power(self):
        params = make_params(2.0)
        a = power_constants(params, 1.0, 10**5)
        g = gumbel_constants(params, 10**5)
        assert a.scale == pytest.approx(g.scale, rel=1e-14)
        assert a.shift == pytest.approx(g.shift, rel=1e-14)

    def test_laplace_cubed(self):
        # v=1, p=3, n=100: scale = 3 2^(-3/2) (ln 50)^2, shift = (2^(-1/2) ln 50)^3
        nm = power_constants(make_params(1.0), 3.0, 100)
        l50 = math.log(50.0)
        assert nm.scale == pytest.approx(3.0 * 2.0**-1.5 * l50**2, rel=1e-13)
        assert nm.shift == pytest.approx((l50 / math.sqrt(2.0)) ** 3, rel=1e-13)

    def test_laplace_general_power_formula(self):
        # alpha* = p 2^(-p/2) (log n/2)^(p-1)
        p = 2.5
        n = 10**4
        nm = power_constants(make_params(1.0), p, n)
        l = math.log(n / 2.0)
        assert nm.scale == pytest.approx(p * 2.0 ** (-p / 2.0) * l ** (p - 1.0), rel=1e-13)
        assert nm.shift == pytest.approx((l / math.sqrt(2.0)) ** p, rel=1e-13)

    def test_rejects_bad_power(self):
        with pytest.raises(ValueError):
            power_constants(make_params(1.0), 0.0, 100)


class TestSolveBn:
    def test_normal_small_n_vs_bisection(self):
        # sqrt(2 pi) b e^(b^2/2) = 10, bracketing bisection as oracle
        params = make_params(2.0)
        target = 10.0

        def lhs(b):
            return math.sqrt(2.0 * math.pi) * b * math.exp(b * b / 2.0)

        lo, hi = 0.1, 5.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if lhs(mid) < target:
                lo = mid
            else:
                hi = mid
        sol = solve_bn(params, 10)
        assert sol.b_n == pytest.approx(0.5 * (lo + hi), rel=1e-12)

    @pytest.mark.parametrize("v", (0.5, 2.0, 4.0))
    @pytest.mark.parametrize("n", (10**2, 10**4, 10**8, 10**12))
    def test_residual_by_independent_substitution(self, v, n):
        # plug b_n back into the raw calibration equation with libm lgamma
        params = make_params(v)
        sol = solve_bn(params, n)
        lam = params.lam
        log_lhs = (
            math.log(2.0) / v
            + (1.0 - v) * math.log(lam)
            + math.lgamma(1.0 / v)
            + (v - 1.0) * math.log(sol.b_n)
            + sol.b_n**v / (2.0 * lam**v)
        )
        assert abs(math.expm1(log_lhs - math.log(n))) <= 1e-12
        assert abs(sol.residual) <= 1e-12

    def test_leading_asymptotics(self):
        # b_n^v / (2 lam^v log n) -> 1 monotonically from below-ish
        params = make_params(2.0)
        ratios = []
        for e in (2, 4, 8, 16, 32):
            ln = e * math.log(10.0)
            sol = solve_bn(params, log_n=ln)
            ratios.append(sol.b_n**2 / (2.0 * ln))
        assert all(abs(r - 1.0) < 0.5 for r in ratios)
        assert abs(ratios[-1] - 1.0) < abs(ratios[0] - 1.0)

    def test_laplace_closed_form(self):
        # at v = 1 the equation collapses to 2 e^(sqrt(2) b) = n
        params = make_params(1.0)
        for n in (10, 10**6):
            sol = solve_bn(params, n)
            assert sol.b_n == pytest.approx(math.log(n / 2.0) / math.sqrt(2.0), rel=1e-13)

    def test_log_n_mode_agrees_at_1e15(self):
        params = make_params(0.5)
        a = solve_bn(params, 10**15)
        b = solve_bn(params, log_n=15.0 * math.log(10.0))
        assert a.b_n == pytest.approx(b.b_n, rel=1e-12)

    def test_no_root_reported(self):
        # for v < 1 and tiny n the increasing branch never reaches n
        with pytest.raises(ConvergenceError):
            solve_bn(make_params(0.5), 2)

    def test_huge_log_n(self):
        # at log n = 1e6 the log-form itself carries ~log n * eps noise,
        # so the residual floor is ~1e-10 rather than 1e-12
        sol = solve_bn(make_params(4.0), log_n=1e6)
        assert abs(sol.residual) <= 1e-9


class TestHallConstants:
    def test_normal_specialization(self):
        # v = 2, lam = 1: scale = p b^(p-2), shift = b^p
        params = make_params(2.0)
        p = 1.7
        n = 10**5
        b = solve_bn(params, n).b_n
        nm = hall_constants(params, p, n)
        assert nm.scale == pytest.approx(p * b ** (p - 2.0), rel=1e-13)
        assert nm.shift == pytest.approx(b**p, rel=1e-13)

    def test_coincides_with_power_at_laplace(self):
        params = make_params(1.0)
        for p in (1.0, 2.0, 3.5):
            h = hall_constants(params, p, 10**4)
            w = power_constants(params, p, 10**4)
            assert h.scale == pytest.approx(w.scale, rel=1e-12)
            assert h.shift == pytest.approx(w.shift, rel=1e-12)

    def test_power_equals_shape_scale(self):
        # p = v: scale = 2 lam^v exactly, shift = b^v
        params = make_params(4.0)
        nm = hall_constants(params, 4.0, 10**6)
        assert nm.scale == pytest.approx(2.0 * params.lam**4, rel=1e-13)


class TestOptimalConstants:
    def test_hall_normal_forms(self):
        # v = 2: scale = 2 - 2 b^-2, shift = b^2 - 2 b^-2
        params = make_params(2.0)
        for n in (10**4, 10**8, 10**12):
            b = solve_bn(params, n).b_n
            nm = optimal_constants(params, n)
            assert nm.scale == pytest.approx(2.0 - 2.0 / b**2, rel=1e-12)
            assert nm.shift == pytest.approx(b**2 - 2.0 / b**2, rel=1e-12)

    def test_scale_limit(self):
        params = make_params(4.0)
        far = optimal_constants(params, log_n=1e5)
        assert far.scale == pytest.approx(2.0 * params.lam**4, rel=1e-4)

    def test_heavy_shape_positive_correction(self):
        params = make_params(0.5)
        nm = optimal_constants(params, 10**6)
        assert nm.scale > 2.0 * params.lam**0.5

    def test_rejects_laplace(self):
        with pytest.raises(ValueError):
            optimal_constants(make_params(1.0), 10**6)


class TestAuxFG:
    def test_limits(self):
        params = make_params(4.0)
        pair = aux_f_g(params, 1e12)
        assert pair.g == pytest.approx(1.0, abs=1e-12)
        assert pair.f == pytest.approx(2.0 * params.lam**4, rel=1e-10)

    def test_normal_degenerate_point(self):
        # v = 2, lam = 1, t = 1: f = 2 (1 + 2 (1/2 - 1)) = 0
        pair = aux_f_g(make_params(2.0), 1.0)
        assert pair.f == pytest.approx(0.0, abs=1e-12)
        assert pair.degenerate

    def test_substitution_small_shape(self):
        params = make_params(0.5)
        lam_v = params.lam**0.5
        pair = aux_f_g(params, 10.0)
        assert pair.f == pytest.approx(2.0 * lam_v * (1.0 + 0.2 * lam_v), rel=1e-12)
        assert not pair.degenerate

    def test_domain(self):
        with pytest.raises(ValueError):
            aux_f_g(make_params(2.0), 0.0)


def test_mode_exclusivity():
    params = make_params(2.0)
    with pytest.raises(ValueError):
        solve_bn(params, 100, log_n=5.0)
    with pytest.raises(ValueError):
        solve_bn(params)

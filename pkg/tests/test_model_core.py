import math

import numpy as np
import pytest

from growthlab.model_core import (
    HC_PEAK,
    DomainError,
    ModelParams,
    depreciation_rate,
    effective_human_capital,
    output_augmented,
    output_classic,
    output_dynamic,
    split_factor,
    technology_a1,
    technology_a2,
    technology_a3,
)


class TestModelParams:
    def test_defaults(self):
        p = ModelParams()
        assert p.alpha == 0.3333
        assert p.delta == 0.02
        assert p.g == 0.03

    @pytest.mark.parametrize("kwargs", [{"alpha": 0.0}, {"alpha": 1.0}, {"delta": -0.1}, {"g": -1.0}])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            ModelParams(**kwargs)


class TestDepreciationRate:
    def test_at_one(self):
        assert depreciation_rate(1.0) == 0.0

    def test_at_e(self):
        assert depreciation_rate(math.e) == pytest.approx(math.sqrt(1.0 / math.e), rel=1e-12)

    def test_high_schooling(self):
        # H = 12.182 has ln(H) very close to 2.5
        d = depreciation_rate(12.182)
        assert d == pytest.approx(0.45304, abs=5e-4)
        # the exponent on the log scale: d * ln(H)
        assert d * math.log(12.182) == pytest.approx(1.1326, abs=1e-3)

    def test_below_one_rejected(self):
        with pytest.raises(DomainError, match="negative radicand"):
            depreciation_rate(0.5)

    def test_nonpositive_rejected(self):
        with pytest.raises(DomainError):
            depreciation_rate(0.0)
        with pytest.raises(DomainError):
            depreciation_rate(-2.0)

    def test_continuity_near_one(self):
        hs = np.linspace(1.0, 1.001, 50)
        ds = [depreciation_rate(h) for h in hs]
        assert ds[0] == 0.0
        assert max(ds) < 0.04


class TestEffectiveHumanCapital:
    def test_identity_at_one(self):
        assert effective_human_capital(1.0) == 1.0

    def test_small_value(self):
        assert effective_human_capital(1.088) == pytest.approx(1.02376, abs=1e-4)

    def test_peak_location(self):
        # DERIVED: maximizing (ln H)^(3/2) * H^(-1/2) analytically gives H = e^3;
        # confirmed by grid search
        grid = np.linspace(1.01, 60.0, 20000)
        vals = [effective_human_capital(h) for h in grid]
        assert grid[int(np.argmax(vals))] == pytest.approx(HC_PEAK, abs=0.02)

    def test_monotone_both_sides(self):
        up = np.linspace(1.0, HC_PEAK, 500)
        vals = [effective_human_capital(h) for h in up]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        down = np.linspace(HC_PEAK, 100.0, 500)
        vals = [effective_human_capital(h) for h in down]
        assert all(b < a for a, b in zip(vals, vals[1:]))


class TestTechnologyIndices:
    def test_a1(self):
        assert technology_a1(0.0, 3.0, 4.0) == 0.0
        assert technology_a1(1.0, 1.0, 1.0) == 1.0
        assert technology_a1(1000.0, 0.02, 0.5) == pytest.approx(10.0)

    def test_a1_rejects_negative(self):
        with pytest.raises(ValueError):
            technology_a1(-1.0, 1.0, 1.0)

    def test_a2(self):
        assert technology_a2(0.0, 7.0, 9.0) == 1.0
        assert technology_a2(10.0, 0.1, 0.5) == pytest.approx(1.5)

    def test_a3_neutral_without_patents(self):
        assert technology_a3(0.0, 1.0, 1.0, 2.0, 10.0) == 1.0

    def test_a3_sample_values(self):
        assert technology_a3(45.0, 0.01125, 1.8, 1.088, 45.0) == pytest.approx(1.022032, abs=1e-6)
        assert technology_a3(44.0, 0.011, 1.76, 1.0, 44.0) == pytest.approx(1.01936, abs=1e-5)

    def test_a3_zero_labor(self):
        with pytest.raises(ZeroDivisionError):
            technology_a3(1.0, 1.0, 1.0, 1.0, 0.0)

    def test_a3_human_capital_scaling(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            p, lr, kr = rng.uniform(0.0, 10.0, 3)
            h = rng.uniform(1.0, 20.0) + 1e-9
            labor = rng.uniform(0.5, 100.0)
            with_h = technology_a3(p, lr, kr, h, labor)
            without = technology_a3(p, lr, kr, 1.0, labor)
            if p * lr * kr == 0.0:
                assert with_h == without == 1.0
            else:
                assert with_h > without

    def test_a3_floor(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            args = rng.uniform(0.0, 5.0, 4)
            assert technology_a3(*args, labor_total=rng.uniform(0.1, 10.0)) >= 1.0


class TestProductionFunctions:
    def test_classic_units(self):
        assert output_classic(1.0, 1.0, 1.0, 0.42) == 1.0
        assert output_classic(2.0, 1.0, 1.0, 0.42) == 2.0

    def test_classic_exact_powers(self):
        assert output_classic(1.0, 64.0, 27.0, 1.0 / 3.0) == pytest.approx(48.0, rel=1e-12)

    def test_classic_homogeneity(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            a, labor, capital = rng.uniform(0.1, 10.0, 3)
            lam = rng.uniform(0.1, 5.0)
            assert output_classic(a, lam * labor, lam * capital, 0.3333) == pytest.approx(
                lam * output_classic(a, labor, capital, 0.3333), rel=1e-12
            )

    def test_augmented_reduces_to_classic(self):
        assert output_augmented(1.3, 1.0, 5.0, 7.0, 0.25) == pytest.approx(
            output_classic(1.3, 5.0, 7.0, 0.25), rel=1e-12
        )

    def test_augmented_exact(self):
        assert output_augmented(1.0, 8.0, 8.0, 27.0, 1.0 / 3.0) == pytest.approx(48.0, rel=1e-12)

    def test_augmented_doubling_h(self):
        alpha = 0.3333
        base = output_augmented(1.0, 2.0, 3.0, 4.0, alpha)
        assert output_augmented(1.0, 4.0, 3.0, 4.0, alpha) == pytest.approx(
            2 ** (1 - alpha) * base, rel=1e-12
        )


class TestOutputDynamic:
    def test_linear_mode_sample_rows(self):
        y44 = output_dynamic(44.0, 44.0, 44.0, 1.086, 0.00025, 0.04, 0.3333, "linear")
        assert y44 == pytest.approx(2057.0, abs=0.1)
        y65 = output_dynamic(65.0, 65.0, 65.0, 1.128, 0.00025, 0.04, 0.3333, "linear")
        assert y65 == pytest.approx(4767.3, abs=0.1)

    def test_cobb_research_free_reduction(self):
        alpha = 0.3333
        h = 2.5
        y = output_dynamic(0.0, 9.0, 4.0, h, 0.0, 0.0, alpha, "cobb-douglas")
        expected = effective_human_capital(h) * 9.0 ** (1 - alpha) * 4.0 ** alpha
        assert y == pytest.approx(expected, rel=1e-12)

    def test_capital_marginal_matches_analytic(self):
        # perturb production capital with the research quantities held fixed:
        # the finite-difference marginal must equal alpha * Y / (K - K_research)
        alpha = 0.3333
        patents, labor, capital, h = 3.0, 20.0, 15.0, 2.0
        phi_labor, phi_capital = 0.01, 0.05
        labor_research = phi_labor * labor
        capital_research = phi_capital * capital
        a = technology_a3(patents, labor_research, capital_research, h, labor)
        hd = effective_human_capital(h)

        def f(total_capital):
            kp = total_capital - capital_research
            return a * hd * (labor - labor_research) ** (1 - alpha) * kp ** alpha

        eps = 1e-5
        fd = (f(capital + eps) - f(capital - eps)) / (2 * eps)
        y = f(capital)
        assert y == pytest.approx(
            output_dynamic(patents, labor, capital, h, phi_labor, phi_capital, alpha, "cobb-douglas"),
            rel=1e-12,
        )
        analytic = alpha * y / (capital - capital_research)
        assert fd == pytest.approx(analytic, rel=1e-6)

    def test_monotone_in_patents_and_h(self):
        rng = np.random.default_rng(5)
        for mode, h_lo, h_hi in (("linear", 0.0, 30.0), ("cobb-douglas", 1.0, HC_PEAK)):
            for _ in range(200):
                labor, capital = rng.uniform(1.0, 50.0, 2)
                p = rng.uniform(0.0, 20.0)
                h = rng.uniform(h_lo, h_hi)
                y0 = output_dynamic(p, labor, capital, max(h, h_lo), 0.01, 0.04, 0.3333, mode)
                y1 = output_dynamic(p + 1.0, labor, capital, max(h, h_lo), 0.01, 0.04, 0.3333, mode)
                assert y1 >= y0
                h2 = min(h + 0.5, h_hi)
                y2 = output_dynamic(p, labor, capital, h2, 0.01, 0.04, 0.3333, mode)
                assert y2 >= y0 - 1e-12

    def test_invalid_fraction(self):
        with pytest.raises(ValueError):
            output_dynamic(1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.3, "linear")

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            output_dynamic(1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.3, "quadratic")


class TestSplitFactor:
    def test_sample_splits(self):
        s = split_factor(44.0, 0.04)
        assert s.production == pytest.approx(42.24)
        assert s.research == pytest.approx(1.76)
        s = split_factor(44.0, 0.00025)
        assert s.production == pytest.approx(43.989)

    def test_zero_fraction(self):
        s = split_factor(17.0, 0.0)
        assert s.production == 17.0
        assert s.research == 0.0

    def test_complement_exact(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            total = rng.uniform(0.0, 1e6)
            frac = rng.uniform(0.0, 0.999)
            s = split_factor(total, frac)
            assert s.production + s.research == pytest.approx(total, rel=1e-12)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            split_factor(1.0, 1.0)
        with pytest.raises(ValueError):
            split_factor(1.0, -0.1)
        with pytest.raises(ValueError):
            split_factor(-1.0, 0.5)

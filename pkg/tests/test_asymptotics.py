import math

import numpy as np
import pytest
from scipy.special import ndtr, ndtri

import config
from asymptotics import (GaussianSpec, effective_regime, f1_limit, f2_limit, feq_limit, gaussian_overlap,
                         ldn_expand, limit_curve, limit_fidelity, overlap, overlap_quadrature, regime_classify,
                         second_order_rate, solve_threshold, uniform_source_limit, uniform_target_limit)
from asymptotics.limits import threshold_residual
from asymptotics.gaussian import model_pair
from config import RegimeKind, ThresholdKind
from core import FiniteDist, entropy, varentropy
from utils.errors import RegimeError, ThresholdError


def _near_uniform(eps):
    return FiniteDist((0.5 + eps, 0.5 - eps))


class TestRegimes:
    def test_ratio_less(self, biased, mild):
        regime = regime_classify(biased, mild)
        assert regime.kind == RegimeKind.RATIO_LESS
        assert regime.c_pq == pytest.approx(0.0954, abs=1e-3)
        assert regime.rate == pytest.approx(0.743540, abs=1e-6)

    def test_ratio_greater_is_reciprocal(self, biased, mild):
        forward, backward = regime_classify(biased, mild), regime_classify(mild, biased)
        assert backward.kind == RegimeKind.RATIO_GREATER
        assert backward.c_pq == pytest.approx(1.0 / forward.c_pq)

    def test_ratio_equal(self, biased):
        regime = regime_classify(biased, FiniteDist((0.2, 0.8)))
        assert regime.kind == RegimeKind.RATIO_EQUAL

    def test_uniform_ends(self, biased, fair):
        assert regime_classify(biased, fair).kind == RegimeKind.TARGET_UNIFORM
        assert regime_classify(biased, fair).c_pq == 0.0
        assert regime_classify(fair, biased).kind == RegimeKind.SOURCE_UNIFORM
        assert math.isinf(regime_classify(fair, biased).c_pq)

    @pytest.mark.parametrize("source, target", [
        ((0.5, 0.5), (0.25, 0.25, 0.25, 0.25)),
        ((1.0, 0.0), (0.6, 0.4)),
        ((0.6, 0.4), (0.0, 1.0)),
    ])
    def test_rejected_pairs(self, source, target):
        with pytest.raises(RegimeError):
            regime_classify(FiniteDist(source), FiniteDist(target))


class TestGaussianOverlap:
    @pytest.mark.parametrize("first, second", [
        ((0.0, 1.0), (0.0, 1.0)),
        ((0.0, 0.3), (1.2, 2.5)),
        ((-2.0, 0.05), (0.5, 0.4)),
    ])
    def test_closed_form_matches_quadrature(self, first, second):
        g1, g2 = GaussianSpec(*first), GaussianSpec(*second)
        for x in (np.inf, -0.5, 0.0, 1.3):
            assert overlap(g1, g2, x) == pytest.approx(overlap_quadrature(g1, g2, x), abs=1e-9)

    def test_identical_gaussians(self):
        g = GaussianSpec(0.7, 2.0)
        assert overlap(g, g) == pytest.approx(1.0)
        assert overlap(g, g, 0.7) == pytest.approx(0.5)

    def test_rejects_degenerate(self):
        with pytest.raises(ValueError):
            GaussianSpec(0.0, 0.0)

    def test_model_pair(self, biased, mild):
        n_p, n_pqb = model_pair(biased, mild, 1.5)
        assert n_p.mean == 0.0
        assert n_p.variance == pytest.approx(varentropy(biased))
        assert n_pqb.mean == pytest.approx(entropy(mild) * 1.5)
        assert n_pqb.variance == pytest.approx(entropy(biased) / entropy(mild) * varentropy(mild))

    def test_overlap_on_uniform_pair(self, biased, fair):
        with pytest.raises(RegimeError):
            gaussian_overlap(biased, fair, 0.0)


class TestThresholds:
    @pytest.mark.parametrize("b", [-1.5, 0.0, 0.8])
    def test_alpha_solves_equation(self, biased, mild, b):
        alpha = solve_threshold(mild, biased, b, ThresholdKind.ALPHA)
        n_p, n_pqb = model_pair(mild, biased, b)
        assert abs(threshold_residual(n_p, n_pqb, alpha, ThresholdKind.ALPHA)) < 1e-8

    @pytest.mark.parametrize("b", [-1.5, 0.0, 0.8])
    def test_beta_solves_equation(self, biased, mild, b):
        beta = solve_threshold(biased, mild, b, ThresholdKind.BETA)
        n_p, n_pqb = model_pair(biased, mild, b)
        assert abs(threshold_residual(n_p, n_pqb, beta, ThresholdKind.BETA)) < 1e-8

    def test_wrong_regime(self, biased, mild):
        with pytest.raises(RegimeError):
            solve_threshold(biased, mild, 0.0, ThresholdKind.ALPHA)
        with pytest.raises(RegimeError):
            solve_threshold(mild, biased, 0.0, ThresholdKind.BETA)

    def test_unknown_kind(self, biased, mild):
        with pytest.raises(ValueError):
            solve_threshold(biased, mild, 0.0, 'gamma')

    def test_missing_sign_change_reports_diagnostics(self, monkeypatch, biased, mild):
        monkeypatch.setitem(config.ASYMPTOTIC_CONFIG, 'bracket_sigmas', 0.0)
        with pytest.raises(ThresholdError) as info:
            solve_threshold(mild, biased, 0.0, ThresholdKind.ALPHA)
        assert info.value.diagnostics['b'] == 0.0
        assert 'f_lo' in str(info.value)


class TestLimitCurves:
    @pytest.mark.parametrize("source, target", [((0.6, 0.4), (0.8, 0.2)), ((0.8, 0.2), (0.6, 0.4)),
                                                ((0.8, 0.2), (0.5, 0.5)), ((0.5, 0.5), (0.8, 0.2))])
    def test_decreasing_between_zero_and_one(self, source, target):
        source, target = FiniteDist(source), FiniteDist(target)
        values = [limit_curve(source, target, b) for b in np.linspace(-4.0, 4.0, 17)]
        assert all(0.0 <= v <= 1.0 for v in values)
        assert all(b <= a + 1e-10 for a, b in zip(values[:-1], values[1:]))
        assert values[0] > values[-1]

    def test_tails(self, biased, mild):
        assert f1_limit(mild, biased, -10.0) > 0.95
        assert f1_limit(mild, biased, 10.0) < 0.05
        assert f2_limit(biased, mild, -10.0) > 0.95
        assert f2_limit(biased, mild, 10.0) < 0.05

    def test_equal_regime(self, biased):
        mirror = FiniteDist((0.2, 0.8))
        assert feq_limit(biased, mirror, -0.5) == 1.0
        assert feq_limit(biased, mirror, 0.0) == 1.0
        h, v = entropy(biased), varentropy(biased)
        assert feq_limit(biased, mirror, 1.0) == pytest.approx(math.exp(-h * h / (8.0 * v)))

    def test_uniform_closed_forms(self, biased, fair):
        assert uniform_target_limit(biased, fair, 0.0) == pytest.approx(math.sqrt(0.5))
        assert uniform_source_limit(fair, biased, 0.0) == pytest.approx(math.sqrt(0.5))
        expected = math.sqrt(ndtr(-math.log(2.0) * 0.7 / math.sqrt(varentropy(biased))))
        assert uniform_target_limit(biased, fair, 0.7) == pytest.approx(expected)

    def test_named_curves_check_regime(self, biased, mild, fair):
        with pytest.raises(RegimeError):
            f1_limit(biased, mild, 0.0)
        with pytest.raises(RegimeError):
            f2_limit(mild, biased, 0.0)
        with pytest.raises(RegimeError):
            feq_limit(biased, mild, 0.0)
        with pytest.raises(RegimeError):
            uniform_target_limit(fair, biased, 0.0)
        with pytest.raises(RegimeError):
            uniform_source_limit(biased, fair, 0.0)

    def test_off_rate_is_zero_or_one(self, biased, mild):
        rate = entropy(biased) / entropy(mild)
        assert limit_fidelity(biased, mild, rate * 0.99, 100.0) == 1.0
        assert limit_fidelity(biased, mild, rate * 1.01, -100.0) == 0.0
        assert limit_fidelity(biased, mild, rate, 0.0) == pytest.approx(f2_limit(biased, mild, 0.0))
        regime = regime_classify(biased, mild)
        assert effective_regime(regime, rate * 1.01) == RegimeKind.OFF_RATE
        assert effective_regime(regime, rate) == RegimeKind.RATIO_LESS
        with pytest.raises(ValueError):
            limit_fidelity(biased, mild, 0.0, 0.0)

    @pytest.mark.parametrize("b", [-1.0, 0.0, 1.0])
    def test_near_uniform_target_approaches_closed_form(self, biased, fair, b):
        value = f2_limit(biased, _near_uniform(1e-3), b)
        assert value == pytest.approx(uniform_target_limit(biased, fair, b), abs=1e-2)

    @pytest.mark.parametrize("b", [-1.0, 0.0, 1.0])
    def test_near_uniform_source_approaches_closed_form(self, biased, fair, b):
        value = f1_limit(_near_uniform(1e-3), biased, b)
        assert value == pytest.approx(uniform_source_limit(fair, biased, b), abs=1e-2)

    def test_near_uniform_sources_converge_monotonically(self, biased, fair):
        grid = [-2.0, -1.0, 0.0, 1.0, 2.0]
        errors = []
        for eps in (0.1, 0.05, 0.02, 0.01):
            source = _near_uniform(eps)
            errors.append(max(abs(f1_limit(source, biased, b) - uniform_source_limit(fair, biased, b))
                              for b in grid))
        assert all(later < earlier for earlier, later in zip(errors[:-1], errors[1:]))
        assert errors[-1] < 0.05


class TestSecondOrderRate:
    @pytest.mark.parametrize("source, target", [((0.6, 0.4), (0.8, 0.2)), ((0.8, 0.2), (0.6, 0.4))])
    def test_inverts_curve(self, source, target):
        source, target = FiniteDist(source), FiniteDist(target)
        for nu in (0.1, 0.5, 0.9):
            result = second_order_rate(source, target, nu)
            assert limit_curve(source, target, result.r2) == pytest.approx(nu, abs=1e-8)
            assert result.residual < 1e-8
            assert result.threshold is not None

    def test_decreasing_in_nu(self, biased, mild):
        rates = [second_order_rate(biased, mild, nu).r2 for nu in (0.2, 0.5, 0.8, 0.95)]
        assert all(b < a for a, b in zip(rates[:-1], rates[1:]))

    def test_equal_closed_form(self, biased):
        result = second_order_rate(biased, FiniteDist((0.2, 0.8)), 0.9)
        h, v = entropy(biased), varentropy(biased)
        assert result.r2 == pytest.approx(math.sqrt(8.0 * v * math.log(1.0 / 0.9)) / h)
        assert result.r2 > 0.0
        assert result.threshold is None

    def test_uniform_target_in_bits(self, biased, fair):
        result = second_order_rate(biased, fair, 0.8)
        v_bits = varentropy(biased) / math.log(2.0) ** 2
        assert result.r2 == pytest.approx(-math.sqrt(v_bits) * ndtri(0.64), rel=1e-10)
        assert result.a == pytest.approx(entropy(biased) / math.log(2.0))

    def test_uniform_source(self, biased, fair):
        result = second_order_rate(fair, biased, 0.6)
        assert uniform_source_limit(fair, biased, result.r2) == pytest.approx(0.6, abs=1e-10)

    def test_record(self, biased, mild):
        record = second_order_rate(biased, mild, 0.9).to_record()
        assert set(record) == {'a', 'r2', 'regime', 'c_pq', 'threshold', 'residual'}
        assert record['regime'] == RegimeKind.RATIO_LESS

    @pytest.mark.parametrize("nu", [0.0, 1.0, 1.5])
    def test_rejects_nu(self, biased, mild, nu):
        with pytest.raises(ValueError):
            second_order_rate(biased, mild, nu)

    def test_both_uniform(self, fair):
        with pytest.raises(RegimeError):
            second_order_rate(fair, FiniteDist.uniform(4), 0.5)

    def test_ldn_expand(self, biased, mild):
        rate = second_order_rate(biased, mild, 0.9)
        assert ldn_expand(biased, mild, 0.9, 64, rate) == pytest.approx(rate.a * 64 + rate.r2 * 8.0)
        assert ldn_expand(biased, mild, 0.9, 0) == 0.0
        with pytest.raises(ValueError):
            ldn_expand(biased, mild, 0.9, -1)

import numpy as np
import pytest

from asymptotics import (AttainmentSpec, CdfSegment, GaussianSpec, attainment_curve, attainment_fidelity,
                         limit_curve, sample_attainment)
from asymptotics.gaussian import model_pair
from core import FiniteDist
from utils.errors import AttainmentError, RegimeError

PAIRS = [((0.6, 0.4), (0.8, 0.2)), ((0.8, 0.2), (0.6, 0.4)), ((0.8, 0.2), (0.2, 0.8)),
         ((0.7, 0.2, 0.1), (0.5, 0.3, 0.2))]


@pytest.mark.parametrize("source, target", PAIRS)
@pytest.mark.parametrize("b", [-1.2, 0.0, 0.9])
def test_integral_equals_limit_curve(source, target, b):
    source, target = FiniteDist(source), FiniteDist(target)
    spec = attainment_curve(source, target, b)
    assert attainment_fidelity(spec, source, target, b) == pytest.approx(
        limit_curve(source, target, b), abs=1e-8)


@pytest.mark.parametrize("source, target", PAIRS)
def test_curve_is_a_distribution_function(source, target):
    source, target = FiniteDist(source), FiniteDist(target)
    spec = attainment_curve(source, target, 0.4)
    xs = np.linspace(-30.0, 30.0, 2001)
    values = spec(xs)
    assert np.all(np.diff(values) >= -1e-12)
    assert values[0] == pytest.approx(0.0, abs=1e-9)
    assert values[-1] == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("source, target", PAIRS[:2])
def test_curve_dominates_source_cdf(source, target):
    source, target = FiniteDist(source), FiniteDist(target)
    spec = attainment_curve(source, target, 0.3)
    n_p, _ = model_pair(source, target, 0.3)
    xs = np.linspace(-8.0, 8.0, 801)
    assert np.all(spec(xs) >= n_p.cdf(xs) - 1e-9)


def test_equal_regime_picks_side(biased):
    mirror = FiniteDist((0.2, 0.8))
    n_p, n_pqb = model_pair(biased, mirror, -0.5)
    assert attainment_curve(biased, mirror, -0.5).segments[0].gaussian == n_pqb
    n_p, _ = model_pair(biased, mirror, 0.5)
    assert attainment_curve(biased, mirror, 0.5).segments[0].gaussian == n_p


def test_uniform_regimes_have_no_curve(biased, fair):
    with pytest.raises(RegimeError):
        attainment_curve(biased, fair, 0.0)
    with pytest.raises(RegimeError):
        attainment_fidelity(AttainmentSpec.gaussian_cdf(GaussianSpec(0.0, 1.0)), fair, biased, 0.0)


def test_sample_rows(biased, mild):
    spec = attainment_curve(biased, mild, 0.0)
    rows = sample_attainment(spec, biased, mild, 0.0, [-1.0, 0.0, 1.0])
    assert [row[0] for row in rows] == [-1.0, 0.0, 1.0]
    assert all(len(row) == 4 for row in rows)
    assert all(0.0 <= value <= 1.0 for row in rows for value in row[1:])


class TestAttainmentSpec:
    def test_single_gaussian(self):
        spec = AttainmentSpec.gaussian_cdf(GaussianSpec(0.0, 1.0))
        assert spec(0.0)[0] == pytest.approx(0.5)

    def test_step_with_constant_segment(self):
        g = GaussianSpec(0.0, 1.0)
        scale = 0.5 / float(g.sf(1.0))
        spec = AttainmentSpec((
            CdfSegment(-np.inf, 0.0, 0.0, 1.0, g),
            CdfSegment(0.0, 1.0, 0.5),
            CdfSegment(1.0, np.inf, 1.0 - scale, scale, g),
        ))
        assert spec(0.5)[0] == pytest.approx(0.5)
        assert spec(50.0)[0] == pytest.approx(1.0)

    def test_rejects_gap(self):
        g = GaussianSpec(0.0, 1.0)
        with pytest.raises(AttainmentError):
            AttainmentSpec((CdfSegment(-np.inf, 0.0, 0.0, 1.0, g), CdfSegment(1.0, np.inf, 0.0, 1.0, g)))

    def test_rejects_jump(self):
        g = GaussianSpec(0.0, 1.0)
        with pytest.raises(AttainmentError):
            AttainmentSpec((CdfSegment(-np.inf, 0.0, 0.0, 1.0, g), CdfSegment(0.0, np.inf, 1.0)))

    def test_rejects_wrong_limits(self):
        with pytest.raises(AttainmentError):
            AttainmentSpec((CdfSegment(-np.inf, np.inf, 0.0, 0.5, GaussianSpec(0.0, 1.0)),))

    def test_rejects_empty(self):
        with pytest.raises(AttainmentError):
            AttainmentSpec(())

    def test_rejects_negative_scale(self):
        with pytest.raises(AttainmentError):
            AttainmentSpec((CdfSegment(-np.inf, np.inf, 1.0, -1.0, GaussianSpec(0.0, 1.0)),))

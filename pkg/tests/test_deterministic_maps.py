import math

import numpy as np
import pytest

import config
from converters import (DetMap, DeterministicConverter, fm_L_n, fm_L_n_search, majorizes,
                        max_fidelity_det, max_fidelity_major, oneshot_L, pushforward)
from converters.deterministic_maps import scan_upper_limit
from core import FiniteDist
from utils.errors import SearchSpaceError


class TestDetMap:
    def test_pushforward(self):
        image = pushforward(DetMap((0, 1, 0)), FiniteDist((0.5, 0.3, 0.2)))
        assert image.probs == pytest.approx((0.7, 0.3))

    def test_pushforward_pads_target(self, biased):
        image = pushforward(DetMap.constant(2, 1), biased, target_size=3)
        assert image.probs == pytest.approx((0.0, 1.0, 0.0))

    def test_pushforward_size_mismatch(self, biased):
        with pytest.raises(ValueError):
            pushforward(DetMap.identity(3), biased)

    @pytest.mark.parametrize("assignment", [(), (0, -1)])
    def test_rejects_invalid(self, assignment):
        with pytest.raises(ValueError):
            DetMap(assignment)

    def test_image_majorizes_source(self, rng):
        for _ in range(30):
            source = FiniteDist.from_weights(rng.dirichlet(np.ones(4)))
            mapping = DetMap(tuple(rng.integers(0, 3, size=4)))
            assert majorizes(source, pushforward(mapping, source, 3))


class TestMaxFidelityDet:
    def test_exact_split(self):
        value, mapping = max_fidelity_det(FiniteDist((0.5, 0.3, 0.2)), FiniteDist((0.7, 0.3)))
        assert value == pytest.approx(1.0)
        assert mapping.assignment == (0, 1, 0)

    def test_identity_is_lexicographically_first(self, fair):
        value, mapping = max_fidelity_det(fair, fair)
        assert value == pytest.approx(1.0)
        assert mapping.assignment == (0, 1)

    def test_bounded_by_major(self, rng):
        for _ in range(40):
            source = FiniteDist.from_weights(rng.dirichlet(np.ones(int(rng.integers(1, 5)))))
            target = FiniteDist.from_weights(rng.dirichlet(np.ones(int(rng.integers(2, 4)))))
            fd, mapping = max_fidelity_det(source, target)
            assert fd <= max_fidelity_major(source, target).fidelity + 1e-9
            image = pushforward(mapping, source, target.size)
            assert fd == pytest.approx(float(np.sum(np.sqrt(image.array * target.array))), abs=1e-12)

    def test_threads_and_chunks_do_not_change_result(self, monkeypatch, rng):
        source = FiniteDist.from_weights(rng.dirichlet(np.ones(6)))
        target = FiniteDist.from_weights(rng.dirichlet(np.ones(3)))
        expected = max_fidelity_det(source, target)
        monkeypatch.setitem(config.SEARCH_CONFIG, 'chunk_size', 37)
        monkeypatch.setenv(config.THREADS_ENV_VAR, '4')
        value, mapping = max_fidelity_det(source, target)
        assert value == pytest.approx(expected[0], abs=1e-15)
        assert mapping == expected[1]

    def test_local_search_never_beats_exhaustive(self, rng):
        def value_of(assignment, source, target):
            image = pushforward(DetMap(tuple(assignment)), source, target.size)
            return float(np.sum(np.sqrt(image.array * target.array)))

        for _ in range(20):
            source = FiniteDist.from_weights(rng.dirichlet(np.ones(3)))
            target = FiniteDist.from_weights(rng.dirichlet(np.ones(3)))
            best, _ = max_fidelity_det(source, target)
            assignment = list(rng.integers(0, 3, size=3))
            current = value_of(assignment, source, target)
            for _ in range(30):
                x, y = int(rng.integers(0, 3)), int(rng.integers(0, 3))
                trial = assignment.copy()
                trial[x] = y
                value = value_of(trial, source, target)
                if value > current:
                    assignment, current = trial, value
                assert current <= best + 1e-12

    def test_refuses_large_space(self):
        with pytest.raises(SearchSpaceError):
            max_fidelity_det(FiniteDist.uniform(24), FiniteDist.uniform(2))

    def test_converter_counts_maps(self, biased):
        converter = DeterministicConverter()
        converter.max_fidelity(FiniteDist((0.5, 0.3, 0.2)), biased)
        assert converter.get_info()['maps_evaluated'] == 8


class TestOneshotL:
    def test_exact_uniform(self):
        assert oneshot_L(FiniteDist.uniform(4), FiniteDist.uniform(2), 1.0) == 2

    def test_relaxed_nu(self):
        # U_4 -> U_8 达到 sqrt(1/2)
        assert oneshot_L(FiniteDist.uniform(4), FiniteDist.uniform(2), 0.7) == 3

    @pytest.mark.parametrize("nu, expected", [(0.9, 1), (0.7, 2)])
    def test_fair_coin_to_fair_coins(self, fair, nu, expected):
        # U_2 -> U_4 最多 sqrt(1/2)
        assert oneshot_L(fair, fair, nu) == expected

    def test_non_increasing_in_nu(self):
        source, target = FiniteDist((0.5, 0.3, 0.2)), FiniteDist((0.7, 0.3))
        lengths = [oneshot_L(source, target, nu) for nu in (0.55, 0.7, 0.85, 0.95, 1.0)]
        assert all(b <= a for a, b in zip(lengths[:-1], lengths[1:]))
        assert lengths[-1] >= 1

    def test_zero_when_nothing_fits(self):
        assert oneshot_L(FiniteDist((1.0,)), FiniteDist.uniform(2), 0.9) == 0

    def test_point_mass_target(self, biased):
        with pytest.raises(SearchSpaceError):
            oneshot_L(biased, FiniteDist((1.0, 0.0)), 0.9)

    @pytest.mark.parametrize("nu", [0.0, 1.5, -0.1])
    def test_rejects_nu(self, biased, mild, nu):
        with pytest.raises(ValueError):
            oneshot_L(biased, mild, nu)


class TestFmLn:
    def test_uniform_to_uniform(self, fair):
        assert fm_L_n(fair, fair, 10, 0.9) == 10
        assert fm_L_n(fair, fair, 10, 0.7) == 11

    def test_search_record(self, fair):
        result = fm_L_n_search(fair, fair, 10, 0.9)
        assert result.monotone
        assert not result.fallback
        assert not result.sentinel_hit
        assert result.upper_limit == scan_upper_limit(fair, fair, 10) == 46
        assert result.evaluations[10] == pytest.approx(1.0)
        assert result.evaluations[11] == pytest.approx(math.sqrt(0.5))

    def test_monotone_in_nu(self, biased, mild):
        strict = fm_L_n(biased, mild, 20, 0.95)
        loose = fm_L_n(biased, mild, 20, 0.5)
        assert strict <= loose

    def test_point_mass_target(self, biased):
        with pytest.raises(SearchSpaceError):
            fm_L_n(biased, FiniteDist((1.0,)), 10, 0.9)

    @pytest.mark.parametrize("n, nu", [(0, 0.5), (10, 0.0), (10, 1.2)])
    def test_rejects_arguments(self, biased, mild, n, nu):
        with pytest.raises(ValueError):
            fm_L_n(biased, mild, n, nu)

import numpy as np
import pytest

from egtsim import EnsembleState, ValidationError
from egtsim.thermalization import run, step


class TestStep:
    def test_symmetric_pair_meets_in_the_middle_and_merges(self):
        # each neighbor update moves by kappa * w/(w+w) = 1/4 of the gap, so
        # the pair approaches its midpoint geometrically and merges there
        state = EnsembleState([300.0, 200.0], [1.0, 1.0])
        state = step(state, kappa=0.5, merge_eps=1e-3)
        np.testing.assert_allclose(state.temperatures, [275.0, 225.0], atol=1e-12)
        for _ in range(100):
            state = step(state, kappa=0.5, merge_eps=1e-3)
            if state.count == 1:
                break
        assert state.count == 1
        assert state.temperatures[0] == pytest.approx(250.0, rel=1e-12)
        assert state.weights[0] == pytest.approx(2.0)

    def test_single_cluster_is_unchanged(self):
        state = EnsembleState([42.0], [3.0])
        new = step(state, kappa=0.3, merge_eps=1e-3)
        assert new.count == 1
        assert new.temperatures[0] == 42.0

    def test_three_clusters_converge_to_conserved_mean(self):
        state = EnsembleState([1.0, 2.0, 3.0], [1.0, 1.0, 1.0])
        for _ in range(10_000):
            state = step(state, kappa=0.3, merge_eps=1e-6)
            if state.count == 1:
                break
        assert state.count == 1
        assert state.temperatures[0] == pytest.approx(2.0, rel=1e-9)

    def test_kappa_zero_freezes_temperatures(self):
        state = EnsembleState([1.0, 2.0, 5.0], [1.0, 2.0, 1.0])
        new = step(state, kappa=0.0, merge_eps=1e-3)
        np.testing.assert_array_equal(new.temperatures, state.temperatures)
        assert new.count == 3

    def test_kappa_zero_still_merges_close_neighbors(self):
        state = EnsembleState([1.0, 1.0 + 1e-6], [1.0, 1.0])
        new = step(state, kappa=0.0, merge_eps=1e-3)
        assert new.count == 1

    def test_weighted_mean_conserved(self):
        rng = np.random.default_rng(50)
        for _ in range(50):
            k = int(rng.integers(2, 17))
            state = EnsembleState(rng.uniform(0, 100, k), rng.uniform(0.5, 2.0, k))
            mean0 = state.weighted_mean
            for _ in range(20):
                state = step(state, kappa=0.4, merge_eps=1e-3)
            assert state.weighted_mean == pytest.approx(mean0, rel=1e-9)

    def test_range_contracts(self):
        rng = np.random.default_rng(51)
        for kappa in (0.1, 0.3, 0.5):
            state = EnsembleState(rng.uniform(0, 100, 12), rng.uniform(0.5, 2.0, 12))
            spread = state.temperatures.max() - state.temperatures.min()
            for _ in range(50):
                state = step(state, kappa=kappa, merge_eps=1e-6)
                new_spread = state.temperatures.max() - state.temperatures.min()
                assert new_spread <= spread + 1e-12
                spread = new_spread

    def test_parameter_validation(self):
        state = EnsembleState([1.0, 2.0], [1.0, 1.0])
        with pytest.raises(ValidationError):
            step(state, kappa=0.6, merge_eps=1e-3)
        with pytest.raises(ValidationError):
            step(state, kappa=-0.1, merge_eps=1e-3)
        with pytest.raises(ValidationError):
            step(state, kappa=0.3, merge_eps=0.0)


class TestEnsembleState:
    def test_rejects_non_positive_weight(self):
        with pytest.raises(ValidationError, match="non-positive weight"):
            EnsembleState([1.0, 2.0], [1.0, 0.0])

    def test_rejects_mismatched_lengths(self):
        with pytest.raises(ValidationError):
            EnsembleState([1.0, 2.0], [1.0])

    def test_rejects_empty(self):
        with pytest.raises(ValidationError):
            EnsembleState([], [])


class TestRun:
    def test_coarsens_to_single_cluster(self):
        rng = np.random.default_rng(52)
        state = EnsembleState(rng.uniform(0, 100, 8), rng.uniform(0.5, 2.0, 8))
        result = run(state, kappa=0.3, merge_eps=1e-3, max_steps=100_000)
        counts = result.cluster_counts
        assert result.final.count == 1
        assert np.all(np.diff(counts) <= 0)
        assert result.final.temperatures[0] == pytest.approx(
            state.weighted_mean, rel=1e-9)

    def test_uniform_start_merges_immediately(self):
        state = EnsembleState([7.0, 7.0, 7.0, 7.0], [1.0, 1.0, 1.0, 1.0])
        result = run(state, kappa=0.3, merge_eps=1e-3)
        assert result.final.count == 1
        assert len(result.states) == 2

    def test_frozen_dynamics_hits_step_cap(self):
        state = EnsembleState([0.0, 50.0, 100.0], [1.0, 1.0, 1.0])
        result = run(state, kappa=0.0, merge_eps=1e-3, max_steps=25)
        assert result.final.count == 3
        assert len(result.states) == 26

    def test_csv_layout(self, tmp_path):
        state = EnsembleState([10.0, 0.0], [1.0, 3.0])
        result = run(state, kappa=0.25, merge_eps=1e-3)
        path = tmp_path / "run.csv"
        result.to_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "step,cluster_count,t_min,t_max,t_mean"
        assert len(lines) == len(result.states) + 1
        first = lines[1].split(",")
        assert first[0] == "0"
        assert first[1] == "2"
        assert float(first[4]) == pytest.approx(2.5)

    def test_csv_values_round_trip_exactly(self, tmp_path):
        rng = np.random.default_rng(53)
        state = EnsembleState(rng.uniform(0, 100, 6), rng.uniform(0.5, 2.0, 6))
        result = run(state, kappa=0.3, merge_eps=1e-3)
        path = tmp_path / "run.csv"
        result.to_csv(path)
        for line, s in zip(path.read_text().splitlines()[1:], result.states):
            _, _, t_min, t_max, t_mean = line.split(",")
            assert float(t_min) == s.temperatures.min()
            assert float(t_max) == s.temperatures.max()
            assert float(t_mean) == s.weighted_mean

import itertools
import json

import numpy as np
import pytest

from egtsim import (PayoffMatrix, ValidationError, enumerate_symmetric_nash,
                    expected_payoff, is_ess, is_nash, load_game)
from conftest import random_game


def grid_strategies(n, steps=20):
    """All simplex points with coordinates in multiples of 1/steps."""
    out = []
    for combo in itertools.product(range(steps + 1), repeat=n - 1):
        if sum(combo) <= steps:
            x = list(combo) + [steps - sum(combo)]
            out.append(np.array(x) / steps)
    return out


def is_nash_grid(m, p, tol):
    """Brute-force oracle: check every mixed deviation on a dense grid."""
    value = float(p @ m @ p)
    return all(float(r @ m @ p) <= value + tol for r in grid_strategies(len(p)))


class TestExpectedPayoff:
    def test_identity_pure(self):
        assert expected_payoff(np.eye(2), [1, 0], [1, 0]) == 1.0

    def test_pd_defect_vs_defect(self, pd):
        assert expected_payoff(pd, [0, 1], [0, 1]) == pytest.approx(1.0, abs=1e-12)

    def test_hawk_dove_uniform(self, hawk_dove):
        half = [0.5, 0.5]
        assert expected_payoff(hawk_dove, half, half) == pytest.approx(0.5, abs=1e-12)

    def test_bilinear_in_first_argument(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            n = int(rng.integers(2, 5))
            m = random_game(rng, n)
            p, p2, q = rng.dirichlet(np.ones(n), size=3)
            for alpha in (0.0, 0.25, 0.5, 0.9, 1.0):
                mix = alpha * p + (1 - alpha) * p2
                expected = (alpha * expected_payoff(m, p, q)
                            + (1 - alpha) * expected_payoff(m, p2, q))
                assert expected_payoff(m, mix, q) == pytest.approx(expected, abs=1e-12)

    def test_dimension_mismatch(self, pd):
        with pytest.raises(ValidationError):
            expected_payoff(pd, [1, 0, 0], [1, 0])
        with pytest.raises(ValidationError):
            expected_payoff(pd, [1, 0], [1, 0, 0])

    def test_rejects_non_simplex(self, pd):
        with pytest.raises(ValidationError):
            expected_payoff(pd, [0.5, 0.6], [1, 0])


class TestIsNash:
    def test_pd_defection_is_nash(self, pd):
        assert is_nash(pd, [0, 1], 1e-9)

    def test_pd_cooperation_is_not(self, pd):
        assert not is_nash(pd, [1, 0], 1e-9)

    def test_hawk_dove_mixed(self, hawk_dove):
        assert is_nash(hawk_dove, [0.5, 0.5], 1e-9)

    def test_rejects_non_positive_tol(self, pd):
        with pytest.raises(ValidationError):
            is_nash(pd, [0, 1], 0.0)

    def test_agrees_with_grid_oracle(self):
        rng = np.random.default_rng(2)
        tol = 1e-9
        for _ in range(40):
            n = int(rng.integers(2, 4))
            m = random_game(rng, n)
            candidates = [r.strategy for r in enumerate_symmetric_nash(m, tol)]
            candidates += list(np.eye(n))
            candidates += list(rng.dirichlet(np.ones(n), size=5))
            for p in candidates:
                assert is_nash(m, p, tol) == is_nash_grid(m, np.asarray(p), tol)


class TestIsEss:
    def test_hawk_dove_mixed_is_ess(self, hawk_dove):
        assert is_ess(hawk_dove, [0.5, 0.5])

    def test_pd_strict_equilibrium_is_ess(self, pd):
        assert is_ess(pd, [0, 1])

    def test_rps_center_is_not_ess(self, rps):
        assert not is_ess(rps, [1 / 3, 1 / 3, 1 / 3])

    def test_ess_implies_nash(self):
        rng = np.random.default_rng(3)
        checked = 0
        for _ in range(120):
            n = int(rng.integers(2, 4))
            m = random_game(rng, n)
            for p in list(np.eye(n)) + list(rng.dirichlet(np.ones(n), size=3)):
                if is_ess(m, p):
                    assert is_nash(m, p, 1e-9)
                    checked += 1
        assert checked > 10

    def test_negative_samples_rejected(self, pd):
        with pytest.raises(ValidationError):
            is_ess(pd, [0, 1], mutant_samples=-1)


class TestEnumerate:
    def test_pd_unique_defection(self, pd):
        reports = enumerate_symmetric_nash(pd)
        assert len(reports) == 1
        np.testing.assert_allclose(reports[0].strategy, [0.0, 1.0], atol=1e-12)
        assert reports[0].is_strict
        assert reports[0].is_ess
        assert reports[0].support == (1,)

    def test_hawk_dove_unique_mixed(self, hawk_dove):
        reports = enumerate_symmetric_nash(hawk_dove)
        assert len(reports) == 1
        np.testing.assert_allclose(reports[0].strategy, [0.5, 0.5], atol=1e-9)
        assert reports[0].is_ess
        assert not reports[0].is_strict

    def test_rps_unique_center(self, rps):
        reports = enumerate_symmetric_nash(rps)
        assert len(reports) == 1
        np.testing.assert_allclose(reports[0].strategy, np.full(3, 1 / 3), atol=1e-12)
        assert not reports[0].is_ess

    def test_every_report_is_nash(self):
        rng = np.random.default_rng(4)
        tol = 1e-9
        found_any = False
        for _ in range(60):
            n = int(rng.integers(2, 5))
            m = random_game(rng, n)
            for report in enumerate_symmetric_nash(m, tol):
                assert is_nash(m, report.strategy, tol)
                assert report.residual <= tol
                found_any = True
        assert found_any

    def test_singular_supports_are_skipped(self):
        # constant payoffs make the full-support system singular; the pure
        # supports still come out
        reports = enumerate_symmetric_nash(np.ones((2, 2)))
        assert len(reports) == 2

    def test_too_many_strategies(self):
        with pytest.raises(ValidationError):
            enumerate_symmetric_nash(np.zeros((7, 7)))


class TestPayoffMatrix:
    def test_rejects_non_square(self):
        with pytest.raises(ValidationError):
            PayoffMatrix(np.zeros((2, 3)))

    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError):
            PayoffMatrix([[np.inf, 0], [0, 1]])

    def test_rejects_bad_labels(self):
        with pytest.raises(ValidationError):
            PayoffMatrix(np.eye(2), labels=["only-one"])

    def test_matrix_is_read_only(self, pd):
        game = PayoffMatrix(pd)
        with pytest.raises(ValueError):
            game.matrix[0, 0] = 99.0

    def test_round_trip_dict(self):
        game = PayoffMatrix([[0, -1, 1], [1, 0, -1], [-1, 1, 0]], labels=["R", "P", "S"])
        again = PayoffMatrix.from_dict(game.to_dict())
        np.testing.assert_array_equal(again.matrix, game.matrix)
        assert again.labels == ["R", "P", "S"]


class TestLoadGame:
    def test_parses_plain_game(self, pd_game_file):
        game = load_game(pd_game_file)
        assert game.n == 2
        np.testing.assert_array_equal(game.matrix, [[3, 0], [5, 1]])

    def test_parses_labels(self, tmp_path):
        path = tmp_path / "rps.json"
        path.write_text(json.dumps({
            "n": 3,
            "payoff": [[0, -1, 1], [1, 0, -1], [-1, 1, 0]],
            "labels": ["R", "P", "S"],
        }))
        game = load_game(path)
        assert game.labels == ["R", "P", "S"]
        assert game.n == 3

    def test_ragged_rows_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"n": 2, "payoff": [[3, 0], [5]]}))
        with pytest.raises(ValidationError, match="row 1"):
            load_game(path)

    def test_malformed_json_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ValidationError, match="malformed"):
            load_game(path)

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(ValidationError, match="cannot read"):
            load_game(tmp_path / "nope.json")

    def test_missing_n_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"payoff": [[1]]}))
        with pytest.raises(ValidationError, match="'n'"):
            load_game(path)

import json

import numpy as np
import pytest

# canonical 2x2 / 3x3 fixtures used throughout the suite
PD = np.array([[3.0, 0.0], [5.0, 1.0]])
HAWK_DOVE = np.array([[-1.0, 2.0], [0.0, 1.0]])
RPS = np.array([[0.0, -1.0, 1.0], [1.0, 0.0, -1.0], [-1.0, 1.0, 0.0]])


@pytest.fixture
def pd():
    return PD.copy()


@pytest.fixture
def hawk_dove():
    return HAWK_DOVE.copy()


@pytest.fixture
def rps():
    return RPS.copy()


@pytest.fixture
def pd_game_file(tmp_path):
    path = tmp_path / "pd.json"
    path.write_text(json.dumps({"n": 2, "payoff": [[3, 0], [5, 1]]}))
    return path


@pytest.fixture
def hawk_dove_game_file(tmp_path):
    path = tmp_path / "hawkdove.json"
    path.write_text(json.dumps({"n": 2, "payoff": [[-1, 2], [0, 1]]}))
    return path


def random_game(rng, n, scale=5.0):
    return rng.uniform(-scale, scale, size=(n, n))


def random_interior(rng, n, floor=0.2):
    return (1.0 - floor) * rng.dirichlet(np.ones(n)) + floor / n

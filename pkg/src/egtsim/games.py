"""Payoff evaluation and equilibrium analysis for finite symmetric two-player games.

A game is given by the row player's payoff matrix ``A``; by symmetry the
column player receives the transpose, so only ``A`` is ever stored.  All
functions accept either a :class:`PayoffMatrix` or a plain square array.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .simplex import as_distribution

#: tolerance for equilibrium arithmetic (double-precision linear solves)
DEFAULT_TOL = 1e-9
#: weights below this are treated as outside the support
SUPPORT_TOL = 1e-8
#: equilibria closer than this in L-inf are duplicates
DEDUP_TOL = 1e-7
#: mutants closer than this to the incumbent are not distinct invaders
MUTANT_EXCLUSION = 1e-3
#: support enumeration visits 2^n - 1 supports; keep n small
MAX_ENUM_STRATEGIES = 6


@dataclass
class PayoffMatrix:
    """Square payoff matrix with optional strategy labels.

    ``matrix[i, j]`` is the payoff to a player using strategy ``i`` against an
    opponent using strategy ``j``.  The array is stored read-only so instances
    are safe to share across threads.
    """

    matrix: np.ndarray
    labels: list[str] | None = None

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"payoff matrix must be square, got shape {m.shape}")
        if m.shape[0] < 1:
            raise ValidationError("payoff matrix needs at least one strategy")
        if not np.all(np.isfinite(m)):
            raise ValidationError("payoff matrix entries must be finite")
        if self.labels is not None:
            labels = [str(s) for s in self.labels]
            if len(labels) != m.shape[0]:
                raise ValidationError(
                    f"expected {m.shape[0]} labels, got {len(labels)}")
            self.labels = labels
        m.flags.writeable = False
        self.matrix = m

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_dict(cls, obj) -> "PayoffMatrix":
        """Build from the game-file schema ``{"n": int, "payoff": [[...]], "labels": [...]}``."""
        if not isinstance(obj, dict):
            raise ValidationError("game file must contain a JSON object")
        if "n" not in obj:
            raise ValidationError("game file: missing field 'n'")
        if "payoff" not in obj:
            raise ValidationError("game file: missing field 'payoff'")
        n = obj["n"]
        if not isinstance(n, int) or n < 1:
            raise ValidationError(f"game file: 'n' must be a positive integer, got {n!r}")
        payoff = obj["payoff"]
        if not isinstance(payoff, list) or len(payoff) != n:
            raise ValidationError(f"game file: 'payoff' must be a list of {n} rows")
        for i, row in enumerate(payoff):
            if not isinstance(row, list) or len(row) != n:
                got = len(row) if isinstance(row, list) else type(row).__name__
                raise ValidationError(f"game file: payoff row {i} has {got} entries, expected {n}")
        return cls(np.array(payoff, dtype=float), obj.get("labels"))

    def to_dict(self) -> dict:
        out = {"n": self.n, "payoff": [[float(v) for v in row] for row in self.matrix]}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out


def load_game(path) -> PayoffMatrix:
    """Read a game JSON file, validating shape and finiteness."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read game file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON in game file {path}: {exc}") from exc
    return PayoffMatrix.from_dict(obj)


def payoff_array(A) -> np.ndarray:
    """Coerce a :class:`PayoffMatrix` or array-like to a validated square array."""
    if isinstance(A, PayoffMatrix):
        return A.matrix
    return PayoffMatrix(A).matrix


def expected_payoff(A, p, q) -> float:
    """Expected payoff ``sum_ij p_i a_ij q_j`` of mixed strategy ``p`` against ``q``."""
    m = payoff_array(A)
    pv = as_distribution(p, m.shape[0], name="p")
    qv = as_distribution(q, m.shape[0], name="q")
    return float(pv @ m @ qv)


def is_nash(A, p, tol: float = DEFAULT_TOL) -> bool:
    """True iff no deviation from ``p`` gains more than ``tol`` against ``p``.

    Checking pure deviations suffices: the payoff is linear in the deviating
    strategy, so any mixed reply is a convex combination of pure ones.
    """
    if tol <= 0:
        raise ValidationError("tol must be positive")
    m = payoff_array(A)
    pv = as_distribution(p, m.shape[0], name="p")
    pay = m @ pv
    return bool(pay.max() <= float(pv @ pay) + tol)


def is_ess(A, p, tol: float = DEFAULT_TOL, mutant_samples: int = 1000, *,
           seed: int = 0, exclusion: float = MUTANT_EXCLUSION) -> bool:
    """Evolutionary stability of ``p`` against pure and sampled mixed mutants.

    For every candidate mutant ``r`` the incumbent must either beat it
    strictly against itself, or tie and beat it in the mutant's own
    population.  All pure mutants are checked, plus ``mutant_samples``
    mixed mutants drawn uniformly from the simplex with the given seed;
    exhaustive certainty over all mixed mutants is not attempted.  Mutants
    within ``exclusion`` (L-inf) of ``p`` are skipped: they are not distinct
    invaders, and the tie-breaking margin vanishes quadratically as
    ``r -> p``, below any fixed tolerance.
    """
    m = payoff_array(A)
    n = m.shape[0]
    pv = as_distribution(p, n, name="p")
    if mutant_samples < 0:
        raise ValidationError("mutant_samples must be >= 0")
    mutants = list(np.eye(n))
    if mutant_samples:
        rng = np.random.default_rng(seed)
        mutants.extend(rng.dirichlet(np.ones(n), size=mutant_samples))
    ap = m @ pv
    epp = float(pv @ ap)
    for r in mutants:
        if np.abs(r - pv).max() < exclusion:
            continue
        erp = float(r @ ap)
        if epp > erp + tol:
            continue
        if abs(epp - erp) <= tol:
            ar = m @ r
            if float(pv @ ar) > float(r @ ar) + tol:
                continue
        return False
    return True


@dataclass
class EquilibriumReport:
    """A symmetric Nash equilibrium with stability annotations."""

    strategy: np.ndarray
    is_strict: bool
    is_ess: bool
    support: tuple[int, ...]
    residual: float

    def to_dict(self, labels: list[str] | None = None) -> dict:
        out = {
            "strategy": [float(v) for v in self.strategy],
            "is_strict": self.is_strict,
            "is_ess": self.is_ess,
            "support": list(self.support),
            "residual": float(self.residual),
        }
        if labels is not None:
            out["support_labels"] = [labels[i] for i in self.support]
        return out


def _support_solution(m: np.ndarray, support: tuple[int, ...],
                      tol: float) -> np.ndarray | None:
    """Solve the indifference system on ``support``; None if infeasible.

    Unknowns are the support weights plus the common payoff ``v``:
    equal payoff rows on the support, and weights summing to one.  The
    returned vector lives on the full simplex with zeros off support.
    """
    k = len(support)
    idx = np.array(support)
    sys_matrix = np.zeros((k + 1, k + 1))
    sys_matrix[:k, :k] = m[np.ix_(idx, idx)]
    sys_matrix[:k, k] = -1.0
    sys_matrix[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    try:
        sol = np.linalg.solve(sys_matrix, rhs)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(sol)):
        return None
    w = sol[:k]
    if w.min() < -tol:
        return None
    w = np.clip(w, 0.0, None)
    total = w.sum()
    if total <= 0.0:
        return None
    x = np.zeros(m.shape[0])
    x[idx] = w / total
    return x


def enumerate_symmetric_nash(A, tol: float = DEFAULT_TOL, *,
                             support_tol: float = SUPPORT_TOL,
                             seed: int = 0) -> list[EquilibriumReport]:
    """All symmetric Nash equilibria by exhaustive support enumeration.

    For each nonempty support the indifference system is solved; solutions
    with nonnegative weights and no profitable deviation off support are
    kept.  Singular systems are skipped.  Duplicates arising from nested
    supports are removed by L-inf distance.  Limited to ``n <= 6``.
    """
    m = payoff_array(A)
    n = m.shape[0]
    if n > MAX_ENUM_STRATEGIES:
        raise ValidationError(
            f"support enumeration is limited to n <= {MAX_ENUM_STRATEGIES}, got {n}")
    if tol <= 0:
        raise ValidationError("tol must be positive")
    equilibria: list[np.ndarray] = []
    for size in range(1, n + 1):
        for support in itertools.combinations(range(n), size):
            x = _support_solution(m, support, tol)
            if x is None:
                continue
            pay = m @ x
            value = float(x @ pay)
            if pay.max() > value + tol:
                continue
            if any(np.abs(x - y).max() < DEDUP_TOL for y in equilibria):
                continue
            equilibria.append(x)
    reports = []
    for x in equilibria:
        pay = m @ x
        value = float(x @ pay)
        support = tuple(int(i) for i in np.flatnonzero(x > support_tol))
        strict = len(support) == 1 and all(
            pay[j] < value - tol for j in range(n) if j != support[0])
        reports.append(EquilibriumReport(
            strategy=x,
            is_strict=bool(strict),
            is_ess=is_ess(m, x, tol, seed=seed),
            support=support,
            residual=max(0.0, float(pay.max()) - value),
        ))
    reports.sort(key=lambda r: (len(r.support), r.support,
                                tuple(np.round(r.strategy, 12))))
    return reports

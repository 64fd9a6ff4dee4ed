"""Toy coarsening model: weighted clusters on a chain equilibrate and merge.

This module is a qualitative illustration only.  Clusters sit on a line,
exchange "temperature" with their nearest neighbors through a weighted heat
rule, and merge once adjacent temperatures agree; the weighted mean
temperature is conserved throughout and the cluster count can only fall.
Nothing here models any empirical system.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass
class EnsembleState:
    """Cluster temperatures and positive weights, ordered along a chain."""

    temperatures: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        t = np.array(self.temperatures, dtype=float)
        w = np.array(self.weights, dtype=float)
        if t.ndim != 1 or w.ndim != 1 or t.shape != w.shape:
            raise ValidationError("temperatures and weights must be 1-d and equal length")
        if t.shape[0] < 1:
            raise ValidationError("need at least one cluster")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(w))):
            raise ValidationError("temperatures and weights must be finite")
        if w.min() <= 0.0:
            raise ValidationError(f"non-positive weight {float(w.min())!r}")
        self.temperatures = t
        self.weights = w

    @property
    def count(self) -> int:
        return self.temperatures.shape[0]

    @property
    def weighted_mean(self) -> float:
        return float(self.temperatures @ self.weights / self.weights.sum())


def _check_params(kappa: float, merge_eps: float) -> None:
    if not 0.0 <= kappa <= 0.5:
        raise ValidationError(f"kappa must be in [0, 1/2], got {kappa!r}")
    if merge_eps <= 0.0:
        raise ValidationError("merge_eps must be positive")


def step(state: EnsembleState, kappa: float, merge_eps: float) -> EnsembleState:
    """One synchronous heat exchange followed by merging of agreeing neighbors.

    Each cluster moves toward its neighbors by ``kappa * w_j/(w_i+w_j) *
    (T_j - T_i)``; the pairwise updates cancel in the weighted sum, so the
    weighted mean is conserved exactly.  ``kappa <= 1/2`` keeps every update a
    convex combination, so the temperature range contracts.  Adjacent runs of
    clusters within ``merge_eps`` of each other collapse into one cluster at
    their weighted mean.
    """
    _check_params(kappa, merge_eps)
    t = state.temperatures
    w = state.weights
    k = state.count
    new_t = t.copy()
    if k > 1 and kappa > 0.0:
        flow = t[1:] - t[:-1]
        pair_w = w[:-1] + w[1:]
        new_t[:-1] += kappa * (w[1:] / pair_w) * flow
        new_t[1:] -= kappa * (w[:-1] / pair_w) * flow
    merged_t: list[float] = []
    merged_w: list[float] = []
    i = 0
    while i < k:
        j = i
        while j + 1 < k and abs(new_t[j + 1] - new_t[j]) < merge_eps:
            j += 1
        if j == i:
            merged_t.append(float(new_t[i]))
            merged_w.append(float(w[i]))
        else:
            chunk_w = w[i:j + 1]
            merged_t.append(float(new_t[i:j + 1] @ chunk_w / chunk_w.sum()))
            merged_w.append(float(chunk_w.sum()))
        i = j + 1
    return EnsembleState(np.array(merged_t), np.array(merged_w))


@dataclass
class CoarseningRun:
    """States of a full run; index 0 is the initial state."""

    states: list[EnsembleState]

    @property
    def cluster_counts(self) -> np.ndarray:
        return np.array([s.count for s in self.states])

    @property
    def final(self) -> EnsembleState:
        return self.states[-1]

    def to_csv(self, path) -> None:
        # t_mean is the weighted mean, the conserved quantity
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("step,cluster_count,t_min,t_max,t_mean\n")
            for k, s in enumerate(self.states):
                fh.write(",".join([
                    str(k),
                    str(s.count),
                    format(float(s.temperatures.min()), ".17g"),
                    format(float(s.temperatures.max()), ".17g"),
                    format(s.weighted_mean, ".17g"),
                ]) + "\n")


def run(state: EnsembleState, kappa: float, merge_eps: float,
        max_steps: int = 100_000) -> CoarseningRun:
    """Iterate :func:`step` until one cluster remains or ``max_steps`` is hit."""
    _check_params(kappa, merge_eps)
    if max_steps < 1:
        raise ValidationError("max_steps must be >= 1")
    states = [state]
    while states[-1].count > 1 and len(states) - 1 < max_steps:
        states.append(step(states[-1], kappa, merge_eps))
    return CoarseningRun(states)

"""Cross-form consistency: run all three representations and measure agreement."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lax import integrate_lax
from .quantum import integrate_von_neumann
from .replicator import integrate
from .trajectory import Trajectory


@dataclass
class FormComparison:
    """Trajectories of the three forms plus their pairwise diagonal divergences.

    Divergences are L-inf over the shared recording grid; drift maxima are
    taken from each trajectory's per-step invariant monitors.
    """

    vector: Trajectory
    lax: Trajectory
    quantum: Trajectory
    divergences: dict[str, float]
    drift: dict[str, float]

    @property
    def max_divergence(self) -> float:
        return max(self.divergences.values())


def compare_forms(A, x0, t_end: float, dt: float, *, hbar: float = 1.0,
                  stride: int = 1) -> FormComparison:
    """Integrate the same start under all three forms and compare diagonals."""
    vec = integrate(A, x0, t_end, dt, stride=stride)
    lax_traj = integrate_lax(A, x0, t_end, dt, stride=stride)
    op_traj = integrate_von_neumann(A, x0, t_end, dt, hbar=hbar, stride=stride)
    dv = vec.states
    dl = lax_traj.diagonal().states
    dq = op_traj.diagonal().states
    divergences = {
        "vector_vs_lax": float(np.abs(dv - dl).max()),
        "vector_vs_quantum": float(np.abs(dv - dq).max()),
        "lax_vs_quantum": float(np.abs(dl - dq).max()),
    }
    drift = {}
    for traj in (vec, lax_traj, op_traj):
        form = traj.meta["form"]
        for key, value in traj.meta.items():
            if key.startswith(("max_", "min_")):
                drift[f"{form}.{key}"] = value
    return FormComparison(vec, lax_traj, op_traj, divergences, drift)

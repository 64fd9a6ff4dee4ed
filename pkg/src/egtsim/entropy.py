"""Shannon and von Neumann entropy, pointwise and along trajectories.

Everything is in nats.  No monotonicity along trajectories is asserted
anywhere: flows into a pure equilibrium strictly *decrease* Shannon entropy,
and the operator image of a population mix is a pure state whose von Neumann
entropy stays at zero while the diagonal's Shannon entropy does not.  The
two quantities are reported side by side without reconciliation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .quantum import PSD_TOL, check_density_operator
from .simplex import as_distribution
from .trajectory import Trajectory


def shannon(x) -> float:
    """Shannon entropy ``-sum x_i ln x_i`` with the convention ``0 ln 0 = 0``."""
    xv = as_distribution(x, name="x")
    pos = xv[xv > 0.0]
    return float(-(pos * np.log(pos)).sum()) + 0.0  # avoid -0.0


def _eigvals_as_distribution(eigs: np.ndarray) -> np.ndarray:
    low = eigs.min(axis=-1)
    if np.any(low < -PSD_TOL):
        raise ValidationError(
            f"eigenvalue {float(low.min()):.3e} below -{PSD_TOL:g}; not a state")
    eigs = np.clip(eigs, 0.0, None)
    return eigs / eigs.sum(axis=-1, keepdims=True)


def von_neumann_entropy(rho) -> float:
    """Spectral entropy ``-sum lam_k ln lam_k`` of a density operator.

    Eigenvalues in ``[-1e-10, 0)`` are clamped to zero and the spectrum
    renormalized; anything lower is rejected.
    """
    arr = check_density_operator(rho)
    lam = _eigvals_as_distribution(np.linalg.eigvalsh(arr))
    pos = lam[lam > 0.0]
    return float(-(pos * np.log(pos)).sum()) + 0.0


@dataclass
class EntropySeries:
    """Entropy observables along one trajectory; von Neumann only for matrix states."""

    times: np.ndarray
    shannon: np.ndarray
    von_neumann: np.ndarray | None = None

    def to_csv(self, path) -> None:
        header = "t,shannon" + (",von_neumann" if self.von_neumann is not None else "")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(header + "\n")
            for k in range(len(self.times)):
                row = [format(self.times[k], ".17g"), format(self.shannon[k], ".17g")]
                if self.von_neumann is not None:
                    row.append(format(self.von_neumann[k], ".17g"))
                fh.write(",".join(row) + "\n")

    @classmethod
    def from_csv(cls, path) -> "EntropySeries":
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
        if not lines or lines[0] not in ("t,shannon", "t,shannon,von_neumann"):
            raise ValidationError(f"entropy file {path}: unrecognized header")
        data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
        has_vn = lines[0].endswith("von_neumann")
        return cls(data[:, 0], data[:, 1], data[:, 2] if has_vn else None)


def _shannon_rows(rows: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    # trajectory rows satisfy the simplex constraints only up to integrator
    # drift; clean them instead of re-validating each one
    if rows.min() < -tol:
        raise ValidationError(
            f"trajectory state has component {float(rows.min()):.3e} below -{tol:g}")
    clean = np.clip(rows, 0.0, None)
    clean = clean / clean.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(clean > 0.0, clean * np.log(clean), 0.0)
    return -terms.sum(axis=1) + 0.0


def entropy_series(traj: Trajectory) -> EntropySeries:
    """Per-step Shannon entropy of the carried distribution.

    Matrix and operator trajectories additionally get the von Neumann entropy
    of the full state (both satisfy the density-operator invariants along a
    healthy run).
    """
    diag = traj.diagonal().states
    sh = _shannon_rows(np.asarray(diag, dtype=float))
    vn = None
    if traj.kind in ("matrix", "operator"):
        states = traj.states.astype(np.complex128)
        states = 0.5 * (states + np.conj(np.swapaxes(states, 1, 2)))
        eigs = np.linalg.eigvalsh(states)
        lam = _eigvals_as_distribution(eigs)
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(lam > 0.0, lam * np.log(lam), 0.0)
        vn = -terms.sum(axis=1) + 0.0
    return EntropySeries(traj.times.copy(), sh, vn)

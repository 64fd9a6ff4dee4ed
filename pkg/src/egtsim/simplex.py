"""Probability-simplex helpers shared by the game and dynamics modules."""
from __future__ import annotations

import numpy as np

from .errors import ValidationError

#: tolerance for membership checks on the simplex
SIMPLEX_TOL = 1e-12


def as_distribution(x, n: int | None = None, *, tol: float = SIMPLEX_TOL,
                    name: str = "strategy") -> np.ndarray:
    """Validate ``x`` as a probability vector and return it as a float64 copy.

    ``name`` is used in error messages so callers (notably the CLI) can point
    at the offending field.
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ValidationError(f"{name}: expected a 1-d vector, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise ValidationError(f"{name}: must have at least one entry")
    if n is not None and arr.shape[0] != n:
        raise ValidationError(f"{name}: expected length {n}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name}: entries must be finite")
    lo, hi = float(arr.min()), float(arr.max())
    if lo < -tol or hi > 1.0 + tol:
        bad = lo if lo < -tol else hi
        raise ValidationError(f"{name}: weight {bad!r} lies outside [0, 1]")
    total = float(arr.sum())
    if abs(total - 1.0) > tol:
        raise ValidationError(f"{name}: weights sum to {total!r}, expected 1 within {tol:g}")
    return arr.copy()


def random_distributions(rng: np.random.Generator, n: int, size: int | None = None) -> np.ndarray:
    """Uniform samples from the simplex (flat Dirichlet)."""
    return rng.dirichlet(np.ones(n), size=size)


def tangent_basis(n: int) -> np.ndarray:
    """Orthonormal basis, as columns, of the sum-zero subspace of R^n.

    The simplex lies in the affine hyperplane ``sum(x) == 1``; restricting a
    Jacobian to this basis yields the spectrum of the flow on that hyperplane.
    """
    basis = np.zeros((n, n - 1))
    for k in range(1, n):
        basis[:k, k - 1] = 1.0
        basis[k, k - 1] = -float(k)
        basis[:, k - 1] /= np.sqrt(k * (k + 1.0))
    return basis

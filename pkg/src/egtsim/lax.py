"""Matrix form of the replicator dynamics: the frequency matrix and its commutator flow.

The frequency matrix ``X`` with entries ``sqrt(x_i x_j)`` is a symmetric
trace-one rank-one projector.  Its evolution ``dX/dt = [Lambda, X]`` with an
antisymmetric generator reproduces the vector flow on the diagonal while
preserving the spectrum of ``X``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import NumericalAbort, ValidationError
from .games import payoff_array
from .replicator import _check_stride, _resolve_steps
from .simplex import as_distribution
from .trajectory import Trajectory

#: invariant drift past this aborts a matrix integration
DRIFT_TOL = 1e-6


def frequency_matrix(x) -> np.ndarray:
    """Symmetric rank-one matrix with entries ``sqrt(x_i x_j)``; diagonal is ``x``."""
    xv = as_distribution(x, name="x")
    root = np.sqrt(np.clip(xv, 0.0, None))
    return np.outer(root, root)


def check_frequency_matrix(X, *, sym_tol: float = 1e-12, trace_tol: float = 1e-12,
                           projector_tol: float = 1e-10) -> np.ndarray:
    """Validate symmetry, unit trace and idempotency; return a float64 copy."""
    arr = np.array(X, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"frequency matrix must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("frequency matrix entries must be finite")
    sym = np.abs(arr - arr.T).max()
    if sym > sym_tol:
        raise ValidationError(f"frequency matrix symmetry defect {sym:.3e} exceeds {sym_tol:g}")
    trace_defect = abs(np.trace(arr) - 1.0)
    if trace_defect > trace_tol:
        raise ValidationError(f"frequency matrix trace defect {trace_defect:.3e} exceeds {trace_tol:g}")
    proj = np.abs(arr @ arr - arr).max()
    if proj > projector_tol:
        raise ValidationError(f"frequency matrix projector defect {proj:.3e} exceeds {projector_tol:g}")
    return arr


@dataclass
class LaxPair:
    """Generator pair: diagonal ``q`` (half the fitness) and antisymmetric ``lam``."""

    q: np.ndarray
    lam: np.ndarray


def lax_pair(A, x) -> LaxPair:
    """Build ``q = diag(f/2)`` and ``lam_ij = sqrt(x_i x_j) (q_i - q_j)``."""
    m = payoff_array(A)
    xv = as_distribution(x, m.shape[0], name="x")
    f = m @ xv
    half_f = 0.5 * f
    X = frequency_matrix(xv)
    lam = X * (half_f[:, None] - half_f[None, :])
    # the expanded two-term form must agree with the compact one above;
    # guards transcription errors in either expression
    literal = 0.5 * (f[:, None] * X - X.T * f[None, :])
    assert np.abs(lam - literal).max() <= 1e-12
    return LaxPair(np.diag(half_f), lam)


def gsym_matrix(A, x) -> np.ndarray:
    """Symmetrized growth matrix; its diagonal equals the vector field.

    Entry ``(i, j)`` is ``x_ij (f_i/2 + f_j/2 - mean)`` written out as the
    three-term sum it comes from.
    """
    m = payoff_array(A)
    xv = as_distribution(x, m.shape[0], name="x")
    f = m @ xv
    mean = float(xv @ f)
    X = frequency_matrix(xv)
    return 0.5 * f[:, None] * X + 0.5 * X.T * f[None, :] - mean * X


def lax_field(A, X) -> np.ndarray:
    """Commutator ``[lam, X]`` with the generator built from ``diag(X)``.

    Equals :func:`gsym_matrix` whenever ``X`` is a valid frequency matrix:
    the result is symmetric and traceless.
    """
    m = payoff_array(A)
    Xv = check_frequency_matrix(X)
    if m.shape[0] != Xv.shape[0]:
        raise ValidationError(
            f"dimension mismatch: payoff is {m.shape[0]}x{m.shape[0]}, "
            f"state is {Xv.shape[0]}x{Xv.shape[0]}")
    q = 0.5 * (m @ np.diag(Xv).copy())
    lam = Xv * (q[:, None] - q[None, :])
    return lam @ Xv - Xv @ lam


def integrate_lax(A, x0, t_end: float, dt: float, *, stride: int = 1) -> Trajectory:
    """Fixed-step RK4 on the matrix commutator flow from ``X0 = frequency_matrix(x0)``.

    Each step re-symmetrizes and trace-renormalizes the state; the projector
    defect is monitored and aborts the run past 1e-6, but is never projected
    away.  Use ``.diagonal()`` on the result for the carried vector trajectory.
    """
    m = payoff_array(A)
    xv = as_distribution(x0, m.shape[0], name="x0")
    X0 = frequency_matrix(xv)
    n_steps = _resolve_steps(t_end, dt)
    stride = _check_stride(stride)
    times, states, rec, stats, status, fail_step = _kernels.rk4_lax(
        m, X0, n_steps, float(dt), stride, DRIFT_TOL)
    if status == _kernels.STATUS_NON_FINITE:
        raise NumericalAbort(
            f"matrix integration hit a non-finite state at step {fail_step} "
            f"(t={fail_step * dt:.6g})")
    if status == _kernels.STATUS_DRIFT:
        raise NumericalAbort(
            f"matrix integration invariant drift exceeded {DRIFT_TOL:g} at step "
            f"{fail_step} (t={fail_step * dt:.6g}): trace defect {stats[0]:.3e}, "
            f"symmetry defect {stats[1]:.3e}, projector defect {stats[2]:.3e}")
    meta = {
        "form": "lax",
        "dt": float(dt),
        "t_end": n_steps * float(dt),
        "stride": stride,
        "max_trace_defect": float(stats[0]),
        "max_symmetry_defect": float(stats[1]),
        "max_projector_defect": float(stats[2]),
    }
    return Trajectory(times[:rec].copy(), states[:rec].copy(), "matrix", meta)

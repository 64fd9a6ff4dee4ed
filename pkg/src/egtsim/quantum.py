"""Density-operator form: quantization of a population state and its evolution.

A population mix maps to the pure state ``rho_ij = sqrt(x_i x_j)``; the
antisymmetric generator of the matrix flow maps to a Hamiltonian via
``H = i * hbar * lam``, under which the commutator evolution
``i hbar drho/dt = [H, rho]`` reproduces the matrix flow.  ``hbar`` is a
dimensionless scale constant here, not a physical claim.
"""
from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import NumericalAbort, ValidationError
from .games import payoff_array
from .lax import frequency_matrix
from .replicator import _check_stride, _resolve_steps
from .simplex import as_distribution
from .trajectory import Trajectory

#: invariant drift past this aborts an operator integration
DRIFT_TOL = 1e-6
#: eigenvalues of a state may dip this far below zero before rejection
PSD_TOL = 1e-10


def quantize(x) -> np.ndarray:
    """Rank-one density operator whose diagonal is ``x``; purity is one."""
    return frequency_matrix(x).astype(np.complex128)


def check_density_operator(rho, *, herm_tol: float = 1e-12, trace_tol: float = 1e-12,
                           psd_tol: float = PSD_TOL,
                           purity_tol: float = 1e-12) -> np.ndarray:
    """Validate Hermiticity, unit trace, positivity and purity <= 1; return a complex copy."""
    arr = np.array(rho, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"density operator must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValidationError("density operator entries must be finite")
    herm = np.abs(arr - arr.conj().T).max()
    if herm > herm_tol:
        raise ValidationError(f"density operator hermiticity defect {herm:.3e} exceeds {herm_tol:g}")
    trace_defect = abs(arr.trace().real - 1.0)
    if trace_defect > trace_tol:
        raise ValidationError(f"density operator trace defect {trace_defect:.3e} exceeds {trace_tol:g}")
    min_eig = float(np.linalg.eigvalsh(arr).min())
    if min_eig < -psd_tol:
        raise ValidationError(
            f"density operator eigenvalue {min_eig:.3e} below -{psd_tol:g}; not a state")
    p = float(np.vdot(arr, arr).real)
    if p > 1.0 + purity_tol:
        raise ValidationError(f"density operator purity {p!r} exceeds 1")
    return arr


def purity(rho) -> float:
    """Trace of ``rho^2``: one for pure states, down to ``1/n`` when maximally mixed."""
    arr = check_density_operator(rho)
    return float(np.vdot(arr, arr).real)


def hamiltonian_from_lambda(lam, hbar: float = 1.0) -> np.ndarray:
    """Hermitian ``H = i * hbar * lam`` from a real antisymmetric generator.

    Commutation with ``H`` scaled by ``1/(i hbar)`` acts identically to
    commutation with ``lam``.
    """
    if hbar <= 0:
        raise ValidationError("hbar must be positive")
    arr = np.array(lam, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"generator must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("generator entries must be finite")
    skew = np.abs(arr + arr.T).max()
    if skew > 1e-10:
        raise ValidationError(f"generator antisymmetry defect {skew:.3e} exceeds 1e-10")
    return 1j * hbar * arr


def integrate_von_neumann(A, x0, t_end: float, dt: float, *, hbar: float = 1.0,
                          stride: int = 1, fixed_hamiltonian=None,
                          rho0=None) -> Trajectory:
    """Evolve ``rho(0) = quantize(x0)`` under the commutator flow in complex arithmetic.

    The Hamiltonian is state-dependent by default: it is rebuilt at every RK4
    stage from the current diagonal (a self-consistent field); only under that
    reading does the operator flow track the matrix flow.  Pass
    ``fixed_hamiltonian`` to freeze ``H`` instead (test mode), optionally with
    an explicit Hermitian ``rho0``.  Each step Hermitizes and
    trace-renormalizes the state; purity drift past 1e-6 aborts.  Use
    ``.diagonal()`` on the result for the carried (real) vector trajectory.
    """
    if hbar <= 0:
        raise ValidationError("hbar must be positive")
    m = payoff_array(A)
    xv = as_distribution(x0, m.shape[0], name="x0")
    if rho0 is None:
        rho = quantize(xv)
    else:
        rho = check_density_operator(rho0, trace_tol=1e-9, purity_tol=1e-9)
        if rho.shape[0] != m.shape[0]:
            raise ValidationError("rho0 dimension does not match the payoff matrix")
    n_steps = _resolve_steps(t_end, dt)
    stride = _check_stride(stride)
    use_fixed = fixed_hamiltonian is not None
    if use_fixed:
        ham = np.array(fixed_hamiltonian, dtype=np.complex128)
        if ham.shape != rho.shape:
            raise ValidationError("fixed Hamiltonian dimension does not match the state")
        herm = np.abs(ham - ham.conj().T).max()
        if herm > 1e-10:
            raise ValidationError(f"fixed Hamiltonian hermiticity defect {herm:.3e} exceeds 1e-10")
    else:
        ham = np.zeros_like(rho)
    times, states, rec, stats, status, fail_step = _kernels.rk4_operator(
        m, rho, n_steps, float(dt), stride, float(hbar), DRIFT_TOL, ham, use_fixed)
    if status == _kernels.STATUS_NON_FINITE:
        raise NumericalAbort(
            f"operator integration hit a non-finite state at step {fail_step} "
            f"(t={fail_step * dt:.6g})")
    if status == _kernels.STATUS_DRIFT:
        raise NumericalAbort(
            f"operator integration invariant drift exceeded {DRIFT_TOL:g} at step "
            f"{fail_step} (t={fail_step * dt:.6g}): trace defect {stats[0]:.3e}, "
            f"hermiticity defect {stats[1]:.3e}, purity defect {stats[2]:.3e}")
    meta = {
        "form": "quantum",
        "dt": float(dt),
        "t_end": n_steps * float(dt),
        "stride": stride,
        "hbar": float(hbar),
        "fixed_hamiltonian": bool(use_fixed),
        "max_trace_defect": float(stats[0]),
        "max_hermiticity_defect": float(stats[1]),
        "max_purity_defect": float(stats[2]),
        "max_imag_diag": float(stats[3]),
    }
    return Trajectory(times[:rec].copy(), states[:rec].copy(), "operator", meta)

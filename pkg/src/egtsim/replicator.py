"""Vector-form replicator dynamics: fields, integration, rest points, stability.

The flow lives on the probability simplex: each component grows in
proportion to its fitness excess over the population mean.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import NumericalAbort, ValidationError
from .games import _support_solution, payoff_array
from .simplex import as_distribution, tangent_basis
from .trajectory import Trajectory

#: a point is accepted as a rest point if the field is below this (L-inf)
REST_POINT_TOL = 1e-7
#: classification tolerance on eigenvalue real parts
CLASSIFICATION_TOL = 1e-6
#: per-step clamp-and-renormalize corrections must stay below this
STEP_CORRECTION_LIMIT = 1e-9
#: default finite-difference step for the Jacobian
FD_STEP = 1e-6


def _field(m: np.ndarray, x: np.ndarray) -> np.ndarray:
    f = m @ x
    return (f - x @ f) * x


def fitness_stats(A, x) -> tuple[np.ndarray, float]:
    """Per-strategy fitness ``f_i = sum_j a_ij x_j`` and the population mean.

    The mean equals both the quadratic form ``x.A.x`` and ``sum_i x_i f_i``.
    """
    m = payoff_array(A)
    xv = as_distribution(x, m.shape[0], name="x")
    f = m @ xv
    return f, float(xv @ f)


def replicator_field(A, x) -> np.ndarray:
    """Time derivative ``dx_i/dt = (f_i - mean) x_i``; components sum to zero."""
    m = payoff_array(A)
    xv = as_distribution(x, m.shape[0], name="x")
    return _field(m, xv)


def _resolve_steps(t_end: float, dt: float) -> int:
    if dt <= 0:
        raise ValidationError("dt must be positive")
    if t_end <= 0:
        raise ValidationError("t_end must be positive")
    n_steps = int(round(t_end / dt))
    if n_steps < 1:
        raise ValidationError(f"t_end={t_end} is shorter than half a step of dt={dt}")
    return n_steps


def _check_stride(stride: int) -> int:
    stride = int(stride)
    if stride < 1:
        raise ValidationError("stride must be >= 1")
    return stride


def integrate(A, x0, t_end: float, dt: float, *, stride: int = 1) -> Trajectory:
    """Fixed-step RK4 on the replicator field, recorded every ``stride`` steps.

    After each step negative components are clamped to zero and the state is
    renormalized to sum one; the correction applied must stay below 1e-9 per
    step or the run aborts.  Fixed stepping keeps repeated runs bit-identical.
    """
    m = payoff_array(A)
    xv = as_distribution(x0, m.shape[0], name="x0")
    n_steps = _resolve_steps(t_end, dt)
    stride = _check_stride(stride)
    times, states, rec, stats, status, fail_step = _kernels.rk4_vector(
        m, xv, n_steps, float(dt), stride)
    if status == _kernels.STATUS_NON_FINITE:
        raise NumericalAbort(
            f"vector integration hit a non-finite state at step {fail_step} "
            f"(t={fail_step * dt:.6g}); check the payoff scale or reduce dt")
    if stats[2] > STEP_CORRECTION_LIMIT:
        raise NumericalAbort(
            f"simplex drift correction {stats[2]:.3e} exceeded "
            f"{STEP_CORRECTION_LIMIT:g} per step; reduce dt")
    meta = {
        "form": "vector",
        "dt": float(dt),
        "t_end": n_steps * float(dt),
        "stride": stride,
        "max_sum_defect": float(stats[0]),
        "min_component": float(stats[1]),
        "max_step_correction": float(stats[2]),
    }
    return Trajectory(times[:rec].copy(), states[:rec].copy(), "vector", meta)


@dataclass
class StabilityVerdict:
    """Linearization of the flow at a rest point, restricted to the simplex.

    ``kind`` is ``stable`` when every tangent eigenvalue has real part below
    ``-CLASSIFICATION_TOL``, ``unstable`` when some real part exceeds
    ``+CLASSIFICATION_TOL``, and ``neutral`` otherwise (non-hyperbolic cases
    are left unresolved rather than called stable).
    """

    kind: str
    eigenvalues: np.ndarray
    rest_point: np.ndarray


def _field_jacobian(m: np.ndarray, x: np.ndarray) -> np.ndarray:
    # d/dx_j of (f_i - x.A.x) x_i, valid off the simplex too
    f = m @ x
    phi = x @ f
    g = m.T @ x
    return np.diag(f - phi) + x[:, None] * (m - f[None, :] - g[None, :])


def _fd_jacobian(m: np.ndarray, x: np.ndarray, h: float) -> np.ndarray:
    n = x.shape[0]
    jac = np.empty((n, n))
    for j in range(n):
        xp = x.copy()
        xm = x.copy()
        xp[j] += h
        xm[j] -= h
        jac[:, j] = (_field(m, xp) - _field(m, xm)) / (2.0 * h)
    return jac


def classify_rest_point(A, xstar, h: float = FD_STEP) -> StabilityVerdict:
    """Classify a rest point from the finite-difference Jacobian spectrum.

    The Jacobian is computed by central differences with step ``h`` and
    projected onto the sum-zero tangent space of the simplex before its
    eigenvalues are read.
    """
    if h <= 0:
        raise ValidationError("h must be positive")
    m = payoff_array(A)
    xv = as_distribution(xstar, m.shape[0], name="xstar")
    residual = np.abs(_field(m, xv)).max()
    if residual > REST_POINT_TOL:
        raise ValidationError(
            f"xstar is not a rest point: field L-inf norm {residual:.3e} "
            f"exceeds {REST_POINT_TOL:g}")
    n = m.shape[0]
    if n == 1:
        return StabilityVerdict("stable", np.empty(0, dtype=complex), xv)
    basis = tangent_basis(n)
    tangent_jac = basis.T @ _fd_jacobian(m, xv, h) @ basis
    eig = np.linalg.eigvals(tangent_jac)
    eig = eig[np.lexsort((eig.imag, eig.real))]
    real = eig.real
    if np.all(real < -CLASSIFICATION_TOL):
        kind = "stable"
    elif np.any(real > CLASSIFICATION_TOL):
        kind = "unstable"
    else:
        kind = "neutral"
    return StabilityVerdict(kind, eig, xv)


def _newton_polish(m: np.ndarray, x0: np.ndarray, max_iter: int = 50,
                   tol: float = 1e-13) -> np.ndarray:
    """Newton iteration on (field, sum-1) via least squares; returns best iterate."""
    n = m.shape[0]
    x = np.asarray(x0, dtype=float).copy()
    ones = np.ones((1, n))
    best = x.copy()
    best_res = np.inf
    for _ in range(max_iter):
        f = _field(m, x)
        c = x.sum() - 1.0
        res = max(np.abs(f).max(), abs(c))
        if res < best_res:
            best = x.copy()
            best_res = res
        if res < tol:
            break
        stacked = np.vstack([_field_jacobian(m, x), ones])
        rhs = -np.concatenate([f, [c]])
        delta = np.linalg.lstsq(stacked, rhs, rcond=None)[0]
        if not np.all(np.isfinite(delta)):
            break
        step = np.abs(delta).max()
        if step > 0.5:
            delta *= 0.5 / step
        if step < 1e-16:
            break
        x = x + delta
    return best


def find_rest_points(A, *, seed: int = 0, n_starts: int = 3, t_end: float = 50.0,
                     dt: float = 1e-3, residual_tol: float = REST_POINT_TOL,
                     dedup_tol: float = 1e-7) -> list[np.ndarray]:
    """Rest points of the flow, deduplicated and Newton-polished.

    Candidates come from two sources: indifference solutions on every support
    (rest points need not be equilibria) and the endpoints of a few seeded
    trajectories from random interior starts.  Candidates that fail to polish
    below ``residual_tol`` are dropped.
    """
    m = payoff_array(A)
    n = m.shape[0]
    candidates: list[np.ndarray] = []
    for size in range(1, n + 1):
        for support in itertools.combinations(range(n), size):
            sol = _support_solution(m, support, 1e-9)
            if sol is not None:
                candidates.append(sol)
    rng = np.random.default_rng(seed)
    for _ in range(n_starts):
        x0 = rng.dirichlet(np.ones(n))
        n_steps = _resolve_steps(t_end, dt)
        traj = integrate(m, x0, t_end, dt, stride=n_steps)
        candidates.append(traj.final_state)
    found: list[np.ndarray] = []
    for cand in candidates:
        x = _newton_polish(m, cand)
        if x.min() < -1e-9 or not np.all(np.isfinite(x)):
            continue
        x = np.clip(x, 0.0, None)
        total = x.sum()
        if total <= 0.0:
            continue
        x = x / total
        if np.abs(_field(m, x)).max() > residual_tol:
            continue
        if any(np.abs(x - y).max() < dedup_tol for y in found):
            continue
        found.append(x)
    found.sort(key=lambda v: tuple(np.round(v, 12)))
    return found

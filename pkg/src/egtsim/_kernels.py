"""Numba-compiled fixed-step RK4 kernels for the three dynamical forms.

The kernels are loop-based on purpose: states are tiny (n <= 16), so BLAS
dispatch would dominate, and explicit loops keep the time loop allocation
free.  Each kernel records states at a configurable stride, monitors its
invariant defects *before* the per-step correction, and returns the running
maxima so callers can report drift without storing every step.

Status codes: 0 ok, 1 non-finite state, 2 invariant drift past tolerance.
"""
from __future__ import annotations

import numpy as np
from numba import njit

STATUS_OK = 0
STATUS_NON_FINITE = 1
STATUS_DRIFT = 2

#: diagonal entries below this are treated as exactly zero before sqrt
SQRT_CLAMP = 1e-14


@njit(cache=True)
def _replicator_rhs(m, x, out):
    n = x.shape[0]
    mean = 0.0
    for i in range(n):
        acc = 0.0
        for j in range(n):
            acc += m[i, j] * x[j]
        out[i] = acc
    for i in range(n):
        mean += x[i] * out[i]
    for i in range(n):
        out[i] = (out[i] - mean) * x[i]


@njit(cache=True)
def rk4_vector(m, x0, n_steps, dt, stride):
    """Simplex-vector flow: growth proportional to fitness excess.

    After each step, negative components are clamped to zero and the vector
    renormalized to sum one; the applied correction is monitored.
    """
    n = x0.shape[0]
    extra = 1 if n_steps % stride != 0 else 0
    n_rec = n_steps // stride + 1 + extra
    times = np.empty(n_rec)
    states = np.empty((n_rec, n))
    x = x0.copy()
    raw = np.empty(n)
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    stage = np.empty(n)
    times[0] = 0.0
    for i in range(n):
        states[0, i] = x[i]
    rec = 1
    max_sum_defect = 0.0
    min_component = 0.0
    max_correction = 0.0
    status = STATUS_OK
    fail_step = 0
    for step in range(1, n_steps + 1):
        _replicator_rhs(m, x, k1)
        for i in range(n):
            stage[i] = x[i] + 0.5 * dt * k1[i]
        _replicator_rhs(m, stage, k2)
        for i in range(n):
            stage[i] = x[i] + 0.5 * dt * k2[i]
        _replicator_rhs(m, stage, k3)
        for i in range(n):
            stage[i] = x[i] + dt * k3[i]
        _replicator_rhs(m, stage, k4)
        finite = True
        for i in range(n):
            v = x[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            raw[i] = v
            if not np.isfinite(v):
                finite = False
        if not finite:
            status = STATUS_NON_FINITE
            fail_step = step
            break
        total = 0.0
        for i in range(n):
            if raw[i] < min_component:
                min_component = raw[i]
            total += raw[i]
        defect = abs(total - 1.0)
        if defect > max_sum_defect:
            max_sum_defect = defect
        clamped_sum = 0.0
        for i in range(n):
            v = raw[i]
            if v < 0.0:
                v = 0.0
            x[i] = v
            clamped_sum += v
        if clamped_sum <= 0.0:
            status = STATUS_NON_FINITE
            fail_step = step
            break
        for i in range(n):
            v = x[i] / clamped_sum
            x[i] = v
            corr = abs(v - raw[i])
            if corr > max_correction:
                max_correction = corr
        if step % stride == 0 or step == n_steps:
            times[rec] = step * dt
            for i in range(n):
                states[rec, i] = x[i]
            rec += 1
    stats = np.empty(3)
    stats[0] = max_sum_defect
    stats[1] = min_component
    stats[2] = max_correction
    return times, states, rec, stats, status, fail_step


@njit(cache=True)
def _lax_rhs(m, X, q, lam, out):
    n = X.shape[0]
    for i in range(n):
        acc = 0.0
        for k in range(n):
            acc += m[i, k] * X[k, k]
        q[i] = 0.5 * acc
    for i in range(n):
        for j in range(n):
            lam[i, j] = X[i, j] * (q[i] - q[j])
    for i in range(n):
        for j in range(n):
            acc = 0.0
            for k in range(n):
                acc += lam[i, k] * X[k, j] - X[i, k] * lam[k, j]
            out[i, j] = acc


@njit(cache=True)
def rk4_lax(m, X0, n_steps, dt, stride, drift_tol):
    """Commutator flow of the frequency matrix.

    After each step the state is re-symmetrized and trace-renormalized; the
    projector defect max|X^2 - X| is only monitored, never corrected.
    """
    n = X0.shape[0]
    extra = 1 if n_steps % stride != 0 else 0
    n_rec = n_steps // stride + 1 + extra
    times = np.empty(n_rec)
    states = np.empty((n_rec, n, n))
    X = X0.copy()
    raw = np.empty((n, n))
    k1 = np.empty((n, n))
    k2 = np.empty((n, n))
    k3 = np.empty((n, n))
    k4 = np.empty((n, n))
    stage = np.empty((n, n))
    q = np.empty(n)
    lam = np.empty((n, n))
    times[0] = 0.0
    for i in range(n):
        for j in range(n):
            states[0, i, j] = X[i, j]
    rec = 1
    max_trace_defect = 0.0
    max_symmetry_defect = 0.0
    max_projector_defect = 0.0
    status = STATUS_OK
    fail_step = 0
    for step in range(1, n_steps + 1):
        _lax_rhs(m, X, q, lam, k1)
        for i in range(n):
            for j in range(n):
                stage[i, j] = X[i, j] + 0.5 * dt * k1[i, j]
        _lax_rhs(m, stage, q, lam, k2)
        for i in range(n):
            for j in range(n):
                stage[i, j] = X[i, j] + 0.5 * dt * k2[i, j]
        _lax_rhs(m, stage, q, lam, k3)
        for i in range(n):
            for j in range(n):
                stage[i, j] = X[i, j] + dt * k3[i, j]
        _lax_rhs(m, stage, q, lam, k4)
        finite = True
        for i in range(n):
            for j in range(n):
                v = X[i, j] + (dt / 6.0) * (
                    k1[i, j] + 2.0 * k2[i, j] + 2.0 * k3[i, j] + k4[i, j])
                raw[i, j] = v
                if not np.isfinite(v):
                    finite = False
        if not finite:
            status = STATUS_NON_FINITE
            fail_step = step
            break
        sym = 0.0
        trace = 0.0
        for i in range(n):
            trace += raw[i, i]
            for j in range(i + 1, n):
                d = abs(raw[i, j] - raw[j, i])
                if d > sym:
                    sym = d
        if sym > max_symmetry_defect:
            max_symmetry_defect = sym
        trace_defect = abs(trace - 1.0)
        if trace_defect > max_trace_defect:
            max_trace_defect = trace_defect
        if trace_defect > drift_tol or sym > drift_tol:
            status = STATUS_DRIFT
            fail_step = step
            break
        for i in range(n):
            for j in range(n):
                X[i, j] = 0.5 * (raw[i, j] + raw[j, i]) / trace
        proj = 0.0
        for i in range(n):
            for j in range(n):
                acc = 0.0
                for k in range(n):
                    acc += X[i, k] * X[k, j]
                d = abs(acc - X[i, j])
                if d > proj:
                    proj = d
        if proj > max_projector_defect:
            max_projector_defect = proj
        if proj > drift_tol:
            status = STATUS_DRIFT
            fail_step = step
            break
        if step % stride == 0 or step == n_steps:
            times[rec] = step * dt
            for i in range(n):
                for j in range(n):
                    states[rec, i, j] = X[i, j]
            rec += 1
    stats = np.empty(3)
    stats[0] = max_trace_defect
    stats[1] = max_symmetry_defect
    stats[2] = max_projector_defect
    return times, states, rec, stats, status, fail_step


@njit(cache=True)
def _vn_rhs(m, rho, hbar, x, q, ham, out):
    # state-dependent generator rebuilt from the current diagonal
    n = rho.shape[0]
    for i in range(n):
        xi = rho[i, i].real
        if xi < SQRT_CLAMP:
            xi = 0.0
        x[i] = xi
    for i in range(n):
        acc = 0.0
        for k in range(n):
            acc += m[i, k] * x[k]
        q[i] = 0.5 * acc
    for i in range(n):
        for j in range(n):
            ham[i, j] = 1j * hbar * (np.sqrt(x[i] * x[j]) * (q[i] - q[j]))
    c = 1.0 / (1j * hbar)
    for i in range(n):
        for j in range(n):
            acc = 0.0 + 0.0j
            for k in range(n):
                acc += ham[i, k] * rho[k, j] - rho[i, k] * ham[k, j]
            out[i, j] = c * acc


@njit(cache=True)
def _fixed_h_rhs(ham, rho, hbar, out):
    n = rho.shape[0]
    c = 1.0 / (1j * hbar)
    for i in range(n):
        for j in range(n):
            acc = 0.0 + 0.0j
            for k in range(n):
                acc += ham[i, k] * rho[k, j] - rho[i, k] * ham[k, j]
            out[i, j] = c * acc


@njit(cache=True)
def rk4_operator(m, rho0, n_steps, dt, stride, hbar, drift_tol, fixed_ham, use_fixed):
    """Density-operator flow, self-consistent by default.

    With ``use_fixed`` the supplied Hamiltonian is used unchanged at every
    stage (test mode).  After each step the state is Hermitized and
    trace-renormalized; purity is monitored against its initial value.
    """
    n = rho0.shape[0]
    extra = 1 if n_steps % stride != 0 else 0
    n_rec = n_steps // stride + 1 + extra
    times = np.empty(n_rec)
    states = np.empty((n_rec, n, n), dtype=np.complex128)
    rho = rho0.copy()
    raw = np.empty((n, n), dtype=np.complex128)
    k1 = np.empty((n, n), dtype=np.complex128)
    k2 = np.empty((n, n), dtype=np.complex128)
    k3 = np.empty((n, n), dtype=np.complex128)
    k4 = np.empty((n, n), dtype=np.complex128)
    stage = np.empty((n, n), dtype=np.complex128)
    x = np.empty(n)
    q = np.empty(n)
    ham = np.empty((n, n), dtype=np.complex128)
    purity0 = 0.0
    for i in range(n):
        for j in range(n):
            v = rho[i, j]
            purity0 += v.real * v.real + v.imag * v.imag
    times[0] = 0.0
    for i in range(n):
        for j in range(n):
            states[0, i, j] = rho[i, j]
    rec = 1
    max_trace_defect = 0.0
    max_herm_defect = 0.0
    max_purity_defect = 0.0
    max_imag_diag = 0.0
    status = STATUS_OK
    fail_step = 0
    for step in range(1, n_steps + 1):
        if use_fixed:
            _fixed_h_rhs(fixed_ham, rho, hbar, k1)
        else:
            _vn_rhs(m, rho, hbar, x, q, ham, k1)
        for i in range(n):
            for j in range(n):
                stage[i, j] = rho[i, j] + 0.5 * dt * k1[i, j]
        if use_fixed:
            _fixed_h_rhs(fixed_ham, stage, hbar, k2)
        else:
            _vn_rhs(m, stage, hbar, x, q, ham, k2)
        for i in range(n):
            for j in range(n):
                stage[i, j] = rho[i, j] + 0.5 * dt * k2[i, j]
        if use_fixed:
            _fixed_h_rhs(fixed_ham, stage, hbar, k3)
        else:
            _vn_rhs(m, stage, hbar, x, q, ham, k3)
        for i in range(n):
            for j in range(n):
                stage[i, j] = rho[i, j] + dt * k3[i, j]
        if use_fixed:
            _fixed_h_rhs(fixed_ham, stage, hbar, k4)
        else:
            _vn_rhs(m, stage, hbar, x, q, ham, k4)
        finite = True
        for i in range(n):
            for j in range(n):
                v = rho[i, j] + (dt / 6.0) * (
                    k1[i, j] + 2.0 * k2[i, j] + 2.0 * k3[i, j] + k4[i, j])
                raw[i, j] = v
                if not (np.isfinite(v.real) and np.isfinite(v.imag)):
                    finite = False
        if not finite:
            status = STATUS_NON_FINITE
            fail_step = step
            break
        herm = 0.0
        trace = 0.0
        imag_diag = 0.0
        for i in range(n):
            trace += raw[i, i].real
            d = abs(raw[i, i].imag)
            if d > imag_diag:
                imag_diag = d
            for j in range(i, n):
                dr = raw[i, j] - np.conj(raw[j, i])
                mag = np.sqrt(dr.real * dr.real + dr.imag * dr.imag)
                if mag > herm:
                    herm = mag
        if herm > max_herm_defect:
            max_herm_defect = herm
        if imag_diag > max_imag_diag:
            max_imag_diag = imag_diag
        trace_defect = abs(trace - 1.0)
        if trace_defect > max_trace_defect:
            max_trace_defect = trace_defect
        if trace_defect > drift_tol or herm > drift_tol:
            status = STATUS_DRIFT
            fail_step = step
            break
        for i in range(n):
            for j in range(n):
                rho[i, j] = 0.5 * (raw[i, j] + np.conj(raw[j, i])) / trace
        purity = 0.0
        for i in range(n):
            for j in range(n):
                v = rho[i, j]
                purity += v.real * v.real + v.imag * v.imag
        purity_defect = abs(purity - purity0)
        if purity_defect > max_purity_defect:
            max_purity_defect = purity_defect
        if purity_defect > drift_tol:
            status = STATUS_DRIFT
            fail_step = step
            break
        if step % stride == 0 or step == n_steps:
            times[rec] = step * dt
            for i in range(n):
                for j in range(n):
                    states[rec, i, j] = rho[i, j]
            rec += 1
    stats = np.empty(4)
    stats[0] = max_trace_defect
    stats[1] = max_herm_defect
    stats[2] = max_purity_defect
    stats[3] = max_imag_diag
    return times, states, rec, stats, status, fail_step

"""Small dense linear-algebra and ODE helpers."""

from __future__ import annotations

from typing import Callable

import numpy as np


def hermiticity_defect(m: np.ndarray) -> float:
    """max |m - m^dag| over all entries."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def _check_hermitian(m, tol: float) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m))))
    if hermiticity_defect(m) > tol * scale:
        raise ValueError(f"matrix is not Hermitian (defect {hermiticity_defect(m):.3e})")
    return 0.5 * (m + m.conj().T)


def hermitian_eigenvalues(m, tol: float = 1e-10) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix (LAPACK ``heevd``)."""
    return np.linalg.eigvalsh(_check_hermitian(m, tol))


def jacobi_eigenvalues(m, tol: float = 1e-10, max_sweeps: int = 64) -> np.ndarray:
    """Ascending eigenvalues by cyclic complex Jacobi rotations.

    Independent of LAPACK; used to cross-check :func:`hermitian_eigenvalues`
    on the small matrices that decide the negativity.
    """
    a = _check_hermitian(m, tol).copy()
    dim = a.shape[0]
    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return np.zeros(dim)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(np.triu(a, 1)) ** 2))
        if off <= 1e-17 * scale:
            break
        for p in range(dim - 1):
            for q in range(p + 1, dim):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.eye(dim, dtype=complex)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s * phase
                rot[q, p] = -s * np.conj(phase)
                a = rot.conj().T @ a @ rot
                a[p, q] = a[q, p] = 0.0
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    return np.sort(np.diag(a).real)


def rk4_step(state, rhs: Callable[[np.ndarray], np.ndarray], dt: float) -> np.ndarray:
    """One classical fourth-order Runge-Kutta step of ``d state/dt = rhs(state)``."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    k1 = rhs(state)
    k2 = rhs(state + 0.5 * dt * k1)
    k3 = rhs(state + 0.5 * dt * k2)
    k4 = rhs(state + dt * k3)
    return state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

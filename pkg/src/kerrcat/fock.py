"""Brute-force reference: truncated Fock-space master equation for a two-level
control coupled to a damped oscillator by a cross-Kerr term.

The control basis is ``{|0_L>, |1_L>}``; only ``|1_L>`` couples to the
oscillator, with ``H = chi |1_L><1_L| (x) a^dag a`` applied as ``exp(+i H t)``
so that ``|1_L>|alpha> -> |1_L>|alpha e^{i chi t}>``.  Oscillator loss follows
the usual ``gamma (a rho a^dag - {a^dag a, rho}/2)`` dissipator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .cat import CatState, EntangledCat, partial_transpose
from .coherent import CoherentDyad
from .errors import DomainError, IntegrationError, UnnormalizableStateError
from .lossy_kerr import EvolutionParams
from .numerics import hermiticity_defect, rk4_step

MAX_ORACLE_ALPHA = 4.0


@dataclass(frozen=True)
class FockOperators:
    cutoff: int
    a: np.ndarray
    a_dag: np.ndarray
    n_op: np.ndarray


def fock_operators(cutoff: int) -> FockOperators:
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    a = np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1).astype(complex)
    a_dag = a.conj().T
    return FockOperators(cutoff, a, a_dag, a_dag @ a)


def choose_cutoff(alpha: float) -> int:
    """Smallest photon cutoff with Poisson tail below 1e-12, and at least
    ``ceil(alpha^2 + 8 alpha + 10)``."""
    alpha = abs(alpha)
    if alpha > MAX_ORACLE_ALPHA:
        raise DomainError(f"Fock oracle only supports |alpha| <= {MAX_ORACLE_ALPHA}, got {alpha}")
    n = math.ceil(alpha**2 + 8 * alpha + 10)
    mean = alpha**2
    if mean > 0:
        while stats.poisson.sf(n, mean) >= 1e-12:
            n += 1
    return n


def coherent_vector(alpha: complex, cutoff: int, tol: float = 1e-10) -> np.ndarray:
    """Fock amplitudes ``exp(-|alpha|^2/2) alpha^n / sqrt(n!)`` for ``n <= cutoff``."""
    alpha = complex(alpha)
    vec = np.empty(cutoff + 1, dtype=complex)
    vec[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, cutoff + 1):
        vec[n] = vec[n - 1] * alpha / math.sqrt(n)
    missing = 1.0 - float(np.vdot(vec, vec).real)
    if missing > tol:
        raise DomainError(
            f"cutoff {cutoff} too small for alpha={alpha}: norm deficit {missing:.2e}"
        )
    return vec


def dyads_to_fock(terms, cutoff: int) -> np.ndarray:
    """Render ``sum coeff |a><b|`` as a Fock-basis matrix."""
    rho = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    for d in terms:
        rho += d.coeff * np.outer(coherent_vector(d.ket_amp, cutoff), coherent_vector(d.bra_amp, cutoff).conj())
    return rho


def cat_to_fock(cat: CatState, cutoff: int) -> np.ndarray:
    return dyads_to_fock(cat.terms, cutoff)


def entangled_to_fock(e: EntangledCat, cutoff: int) -> np.ndarray:
    """Two-mode density matrix, mode 1 as the slow index."""
    dim = (cutoff + 1) ** 2
    rho = np.zeros((dim, dim), dtype=complex)
    for d1, d2 in e.terms():
        ket = np.kron(coherent_vector(d1.ket_amp, cutoff), coherent_vector(d2.ket_amp, cutoff))
        bra = np.kron(coherent_vector(d1.bra_amp, cutoff), coherent_vector(d2.bra_amp, cutoff))
        rho += d1.coeff * d2.coeff * np.outer(ket, bra.conj())
    return rho


def fock_negativity(rho: np.ndarray, cutoff: int) -> tuple[float, float]:
    """``(lambda_min, E)`` of the partial transpose of a two-mode Fock matrix."""
    d = cutoff + 1
    pt = partial_transpose(rho, (d, d))
    evals = np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))
    lam = float(evals[0])
    return lam, -2.0 * min(lam, 0.0)


@dataclass(frozen=True)
class JointState:
    """Control (x) oscillator density matrix, control index slow."""

    rho: np.ndarray
    cutoff: int
    t: float = 0.0
    steps: int = 0
    max_trace_error: float = 0.0
    max_hermiticity_error: float = 0.0
    min_eigenvalue: float = 0.0

    def block(self, i: int, j: int) -> np.ndarray:
        d = self.cutoff + 1
        return self.rho[i * d : (i + 1) * d, j * d : (j + 1) * d]


def initial_joint_state(alpha: complex, cutoff: int) -> JointState:
    """``1/2 (|0_L> + |1_L>)(<0_L| + <1_L|) (x) |alpha><alpha|``."""
    vec = coherent_vector(alpha, cutoff)
    control = np.full((2, 2), 0.5, dtype=complex)
    return JointState(np.kron(control, np.outer(vec, vec.conj())), cutoff)


def _generator(levels: int, cutoff: int, chi: float, gamma: float):
    """Return ``f(rho) = d rho / dt`` for ``levels`` control levels (1 or 2)."""
    d = cutoff + 1
    n = np.arange(d, dtype=float)
    excitation = np.arange(levels, dtype=float)  # control level 1 carries the photon
    kerr = np.add.outer(excitation, np.zeros(d))[:, :, None, None] * n[None, :, None, None]
    kerr = kerr - (np.add.outer(excitation, np.zeros(d)) * n)[None, None, :, :]
    diag = 1j * chi * kerr - 0.5 * gamma * (n[None, :, None, None] + n[None, None, None, :])
    jump = gamma * np.sqrt(np.outer(n[1:], n[1:]))
    dim = levels * d

    def rhs(rho: np.ndarray) -> np.ndarray:
        r = rho.reshape(levels, d, levels, d)
        out = diag * r
        out[:, :-1, :, :-1] += jump[None, :, None, :] * r[:, 1:, :, 1:]
        return out.reshape(dim, dim)

    return rhs


def lindblad_rhs(rho: np.ndarray, chi: float, gamma: float) -> np.ndarray:
    """Right-hand side of the joint master equation (Kerr commutator plus
    oscillator damping) for a ``2 (cutoff + 1)``-dimensional state."""
    dim = rho.shape[0]
    if dim % 2:
        raise ValueError("joint state dimension must be even")
    return _generator(2, dim // 2 - 1, chi, gamma)(rho)


def default_time_step(chi: float, gamma: float, cutoff: int) -> float:
    """``min(0.0025/gamma, 0.01/(chi cutoff))``; the damping bound keeps the RK4
    positivity defect below 1e-10 for the desk-scale runs."""
    limits = []
    if gamma > 0:
        limits.append(0.0025 / gamma)
    if chi > 0:
        limits.append(0.01 / (chi * cutoff))
    if not limits:
        raise ValueError("at least one of chi, gamma must be positive")
    return min(limits)


def _is_psd(rho: np.ndarray, tol: float) -> bool:
    """True when ``rho + tol I`` admits a Cholesky factorization (``lambda_min > -tol``)."""
    try:
        np.linalg.cholesky(0.5 * (rho + rho.conj().T) + tol * np.eye(rho.shape[0]))
    except np.linalg.LinAlgError:
        return False
    return True


def _min_eigenvalue(rho: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])


_FLUSH_BELOW = 1e-200
_FLUSH_EVERY = 50


def _integrate(rho, rhs, t, dt, check_every, psd_tol, fail_tol, eig_every=200):
    steps = max(1, math.ceil(t / dt - 1e-9)) if t > 0 else 0
    h = t / steps if steps else 0.0
    max_tr = max_herm = 0.0
    min_eig = _min_eigenvalue(rho) if check_every else 0.0
    for k in range(1, steps + 1):
        rho = rk4_step(rho, rhs, h)
        if k % _FLUSH_EVERY == 0:
            # decayed high-photon entries otherwise end up subnormal and stall the arithmetic
            rho[np.abs(rho) < _FLUSH_BELOW] = 0.0
        if not check_every or (k % check_every and k != steps):
            continue
        tr_err = abs(np.trace(rho) - 1.0)
        herm = hermiticity_defect(rho)
        max_tr = max(max_tr, tr_err)
        max_herm = max(max_herm, herm)
        if k % eig_every == 0 or k == steps:
            min_eig = min(min_eig, _min_eigenvalue(rho))
        lam = 0.0
        if not _is_psd(rho, psd_tol):
            lam = _min_eigenvalue(rho)
            min_eig = min(min_eig, lam)
        if tr_err > fail_tol or herm > fail_tol or lam < -fail_tol:
            raise IntegrationError(
                f"invariant violated at step {k}/{steps}: trace error {tr_err:.2e}, "
                f"hermiticity {herm:.2e}, min eigenvalue {lam:.2e}"
            )
    return rho, steps, max_tr, max_herm, min_eig


def evolve_master(
    p: EvolutionParams,
    cutoff: int | None = None,
    dt: float | None = None,
    check_every: int = 1,
    fail_tol: float = 1e-6,
) -> JointState:
    """Integrate the joint master equation with RK4 up to ``p.t``.

    State invariants (trace, Hermiticity, positivity) are checked every
    ``check_every`` steps; a violation beyond ``fail_tol`` raises
    :class:`IntegrationError`.
    """
    if p.alpha > MAX_ORACLE_ALPHA:
        raise DomainError(f"Fock oracle only supports alpha <= {MAX_ORACLE_ALPHA}, got {p.alpha}")
    cutoff = choose_cutoff(p.alpha) if cutoff is None else cutoff
    state = initial_joint_state(p.alpha, cutoff)
    h = default_time_step(p.chi, p.gamma, cutoff) if dt is None else dt
    rhs = _generator(2, cutoff, p.chi, p.gamma)
    rho, steps, tr, herm, eig = _integrate(state.rho, rhs, p.t, h, check_every, 1e-10, fail_tol)
    return JointState(rho, cutoff, p.t, steps, tr, herm, eig)


def evolve_damping(rho: np.ndarray, gamma: float, t: float, dt: float | None = None) -> np.ndarray:
    """Oscillator-only damping of an arbitrary (not necessarily Hermitian) operator."""
    cutoff = rho.shape[0] - 1
    h = 0.01 / gamma if dt is None else dt
    rhs = _generator(1, cutoff, 0.0, gamma)
    out, *_ = _integrate(rho, rhs, t, h, 0, 0.0, math.inf)
    return out


def damping_factor_oracle(d: CoherentDyad, gamma: float, t: float, cutoff: int) -> complex:
    """Coefficient ``f`` in ``D_t(coeff |a><b|) = f |A a><A b|`` measured in Fock space."""
    op = d.coeff * np.outer(coherent_vector(d.ket_amp, cutoff), coherent_vector(d.bra_amp, cutoff).conj())
    out = evolve_damping(op, gamma, t)
    shrink = math.exp(-0.5 * gamma * t)
    ket = coherent_vector(d.ket_amp * shrink, cutoff)
    bra = coherent_vector(d.bra_amp * shrink, cutoff)
    return complex(ket.conj() @ out @ bra)


def herald_project(s: JointState, sign: str) -> tuple[float, np.ndarray]:
    """Project the control on ``(|0_L> +- |1_L>)/sqrt(2)`` and trace it out."""
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    sv = 1.0 if sign == "+" else -1.0
    unnorm = 0.5 * (s.block(0, 0) + sv * s.block(0, 1) + sv * s.block(1, 0) + s.block(1, 1))
    prob = float(np.trace(unnorm).real)
    if prob < 1e-12:
        raise UnnormalizableStateError(f"herald outcome '{sign}' has probability {prob:.3e}")
    return prob, unnorm / prob


def coherence_from_joint(s: JointState, A: float, alpha: float, theta: float) -> complex:
    """Read ``C`` off the ``|0_L><1_L|`` block, which should be
    ``C/2 |A alpha><A alpha e^{i theta}|``."""
    ket = coherent_vector(A * alpha, s.cutoff)
    bra = coherent_vector(A * alpha * np.exp(1j * theta), s.cutoff)
    return complex(2.0 * (ket.conj() @ s.block(0, 1) @ bra))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    evals = np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))
    return 0.5 * float(np.sum(np.abs(evals)))


def purity(rho: np.ndarray) -> float:
    return float(np.trace(rho @ rho).real)


def fidelity_pure(rho: np.ndarray, psi: np.ndarray) -> float:
    """``<psi|rho|psi>`` for a normalized pure reference."""
    return float((psi.conj() @ rho @ psi).real)


@dataclass(frozen=True)
class OracleComparison:
    alpha: float
    alpha0: float
    Gamma: float
    cutoff: int
    sign: str
    trace_distance: float
    abs_C_closed: float
    abs_C_oracle: float
    prob_closed: float
    prob_oracle: float
    state: JointState

    @property
    def C_error(self) -> float:
        return abs(self.abs_C_closed - self.abs_C_oracle)

    def passed(self, tol: float = 1e-3) -> bool:
        return self.trace_distance < tol and self.C_error < tol


def compare_with_closed_form(
    p: EvolutionParams, sign: str = "+", cutoff: int | None = None, check_every: int = 1
) -> OracleComparison:
    """Heralded oracle state versus the dyad pipeline at the same parameters."""
    from .cat import build_cat, herald_probabilities
    from .lossy_kerr import evolve_closed_form

    state = evolve_master(p, cutoff=cutoff, check_every=check_every)
    r = evolve_closed_form(p)
    prob, rho_osc = herald_project(state, sign)
    cat = build_cat(r, p.alpha, sign)
    dist = trace_distance(rho_osc, cat_to_fock(cat, state.cutoff))
    C_oracle = coherence_from_joint(state, r.A, p.alpha, r.theta)
    probs = herald_probabilities(r, p.alpha)
    return OracleComparison(
        alpha=p.alpha,
        alpha0=p.alpha0 if p.alpha0 is not None else float("nan"),
        Gamma=p.Gamma,
        cutoff=state.cutoff,
        sign=sign,
        trace_distance=dist,
        abs_C_closed=abs(r.C),
        abs_C_oracle=abs(C_oracle),
        prob_closed=probs[0] if sign == "+" else probs[1],
        prob_oracle=prob,
        state=state,
    )

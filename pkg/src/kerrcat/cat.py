"""Heralded cat states, the beam-splitter entangled pair and its negativity."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .coherent import (
    CoherentDyad,
    coherent_overlap,
    displace_dyad,
    dyad_trace,
    mixture_purity,
)
from .errors import DegenerateBasisError, UnnormalizableStateError
from .lossy_kerr import EvolutionResult
from .numerics import hermitian_eigenvalues

Sign = Literal["+", "-"]

_UNNORMALIZABLE = 1e-300
_DEGENERATE_M_MINUS = 1e-150


def _sign_value(sign: str) -> int:
    if sign == "+":
        return 1
    if sign == "-":
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def cat_norms(amp: complex) -> tuple[float, float]:
    """``(M+, M-) = 2 +- 2 exp(-2|amp|^2)``, the squared norms of ``|amp> +- |-amp>``."""
    x = 2.0 * abs(amp) ** 2
    return 2.0 + 2.0 * math.exp(-x), -2.0 * math.expm1(-x)


@dataclass(frozen=True)
class CatState:
    """Single-mode heralded state ``N (|a><a| +- C|a><b| +- C*|b><a| + |b><b|)``
    with ``a = A alpha`` and ``b = A alpha e^{i theta}``."""

    A: float
    alpha: float
    theta: float
    C: complex
    sign: str
    norm_factor: float = field(init=False)

    def __post_init__(self):
        s = _sign_value(self.sign)
        ov = coherent_overlap(self.bra_amp, self.ket_amp)
        unnormalized = 2.0 + 2.0 * s * (self.C * ov).real
        if unnormalized < _UNNORMALIZABLE:
            raise UnnormalizableStateError(
                f"the '{self.sign}' branch has vanishing weight ({unnormalized:.3e})"
            )
        object.__setattr__(self, "norm_factor", 1.0 / unnormalized)

    @property
    def ket_amp(self) -> complex:
        return complex(self.A * self.alpha)

    @property
    def bra_amp(self) -> complex:
        return self.A * self.alpha * cmath.exp(1j * self.theta)

    @property
    def effective_amplitude(self) -> float:
        return self.A * self.alpha * math.sin(0.5 * self.theta)

    @property
    def M_plus(self) -> float:
        return cat_norms(self.effective_amplitude)[0]

    @property
    def M_minus(self) -> float:
        return cat_norms(self.effective_amplitude)[1]

    @property
    def terms(self) -> list[CoherentDyad]:
        s = _sign_value(self.sign)
        n = self.norm_factor
        a, b = self.ket_amp, self.bra_amp
        return [
            CoherentDyad(n, a, a),
            CoherentDyad(s * n * self.C, a, b),
            CoherentDyad(s * n * self.C.conjugate(), b, a),
            CoherentDyad(n, b, b),
        ]

    def trace(self) -> complex:
        return dyad_trace(self.terms)

    def purity(self) -> float:
        return mixture_purity(self.terms)


def build_cat(r: EvolutionResult, alpha: float, sign: Sign = "+") -> CatState:
    """Project the control onto ``(|0_L> +- |1_L>)/sqrt(2)`` and normalize."""
    return CatState(A=r.A, alpha=alpha, theta=r.theta, C=r.C, sign=sign)


def herald_probabilities(r: EvolutionResult, alpha: float) -> tuple[float, float]:
    """Click probabilities for the ``+`` and ``-`` outcomes.

    Each branch has unnormalized trace ``(1 +- Re[C <b|a>]) / 2``.
    """
    ov = coherent_overlap(r.A * alpha * cmath.exp(1j * r.theta), r.A * alpha)
    x = (r.C * ov).real
    return 0.5 * (1.0 + x), 0.5 * (1.0 - x)


@dataclass(frozen=True)
class EntangledCat:
    """Two-mode state ``N (|b,b><b,b| +- C|b,b><b',b'| + h.c. + |b',b'><b',b'|)``.

    After :func:`symmetrize` ``beta = delta``, ``beta_prime = -delta`` and ``C``
    holds the displaced coherence ``C'``.
    """

    beta: complex
    beta_prime: complex
    C: complex
    sign: str
    symmetric: bool = False

    @property
    def delta(self) -> complex:
        return 0.5 * (self.beta - self.beta_prime)

    @property
    def C_prime(self) -> complex:
        if not self.symmetric:
            raise ValueError("C' is only defined for the symmetrized state")
        return self.C

    @property
    def norm_factor(self) -> float:
        s = _sign_value(self.sign)
        ov = coherent_overlap(self.beta_prime, self.beta) ** 2
        return 1.0 / (2.0 + 2.0 * s * (self.C * ov).real)

    def terms(self) -> list[tuple[CoherentDyad, CoherentDyad]]:
        """Product dyads ``(mode 1, mode 2)``; the weight of a term is the
        product of the two coefficients."""
        s = _sign_value(self.sign)
        n = self.norm_factor
        b, bp = self.beta, self.beta_prime
        return [
            (CoherentDyad(n, b, b), CoherentDyad(1.0, b, b)),
            (CoherentDyad(s * n * self.C, b, bp), CoherentDyad(1.0, b, bp)),
            (CoherentDyad(s * n * self.C.conjugate(), bp, b), CoherentDyad(1.0, bp, b)),
            (CoherentDyad(n, bp, bp), CoherentDyad(1.0, bp, bp)),
        ]

    def trace(self) -> complex:
        return sum((dyad_trace([d1]) * dyad_trace([d2]) for d1, d2 in self.terms()), 0j)


def two_mode_trace(terms) -> complex:
    return sum((dyad_trace([d1]) * dyad_trace([d2]) for d1, d2 in terms), 0j)


def beamsplit(c: CatState) -> EntangledCat:
    """50:50 beam splitter with vacuum: ``|mu> -> |mu/sqrt2>|mu/sqrt2>``."""
    root = math.sqrt(0.5)
    return EntangledCat(
        beta=c.ket_amp * root,
        beta_prime=c.bra_amp * root,
        C=c.C,
        sign=c.sign,
    )


def symmetrize(e: EntangledCat) -> EntangledCat:
    """Displace both modes by ``x = -(beta + beta')/2`` so the components sit at ``+-delta``."""
    x = -0.5 * (e.beta + e.beta_prime)
    _, (off1, off2), _, _ = e.terms()
    d1 = displace_dyad(off1, x)
    d2 = displace_dyad(off2, x)
    s = _sign_value(e.sign)
    # the diagonal terms pick up no phase; the off-diagonal one carries C'
    c_prime = d1.coeff * d2.coeff / (s * e.norm_factor)
    return EntangledCat(beta=d1.ket_amp, beta_prime=d1.bra_amp, C=c_prime, sign=e.sign, symmetric=True)


def displaced_coherence(C: complex, A: float, alpha: float, theta: float) -> complex:
    """``C'`` in closed form: ``C exp(-i A^2 alpha^2 sin(theta))``.

    The two unit displacements contribute ``2 * (Im(x b*) - Im(x b'*)) =
    -2 Im(b' b*) = -A^2 alpha^2 sin(theta)``.
    """
    return C * cmath.exp(-1j * (A * alpha) ** 2 * math.sin(theta))


@dataclass(frozen=True)
class CatBasisMatrix:
    """Density matrix in the basis ``|Phi+Phi+>, |Phi+Phi->, |Phi-Phi+>, |Phi-Phi->``."""

    entries: np.ndarray
    M_plus: float
    M_minus: float


def to_cat_basis(e: EntangledCat) -> CatBasisMatrix:
    """Rewrite the symmetric state in the orthonormal even/odd cat basis.

    Uses ``|+-delta> = (sqrt(M+) |Phi+> +- sqrt(M-) |Phi->) / 2`` in each mode.
    """
    if not e.symmetric:
        raise ValueError("to_cat_basis needs the symmetrized state; call symmetrize first")
    delta = e.delta
    m_plus, m_minus = cat_norms(delta)
    if m_minus < _DEGENERATE_M_MINUS:
        raise DegenerateBasisError(f"M- = {m_minus:.3e} at delta = {delta!r}")
    rp, rm = math.sqrt(m_plus), math.sqrt(m_minus)
    plus = np.array([rp, rm]) / 2.0
    minus = np.array([rp, -rm]) / 2.0
    u = np.kron(plus, plus).astype(complex)
    v = np.kron(minus, minus).astype(complex)
    s = _sign_value(e.sign)
    c = e.C
    rho = (
        np.outer(u, u.conj())
        + s * c * np.outer(u, v.conj())
        + s * np.conj(c) * np.outer(v, u.conj())
        + np.outer(v, v.conj())
    )
    rho /= np.trace(rho).real
    return CatBasisMatrix(entries=rho, M_plus=m_plus, M_minus=m_minus)


@dataclass(frozen=True)
class NegativityResult:
    lambda_min: float
    E: float
    eigenvalues: tuple[float, ...]

    @property
    def negative_count(self) -> int:
        return sum(1 for x in self.eigenvalues if x < -1e-12)


def partial_transpose(rho: np.ndarray, dims: tuple[int, int] = (2, 2)) -> np.ndarray:
    """Transpose the second tensor factor: ``(i k, j l) -> (i l, j k)``."""
    d1, d2 = dims
    r = np.asarray(rho).reshape(d1, d2, d1, d2)
    return r.transpose(0, 3, 2, 1).reshape(d1 * d2, d1 * d2)


def negativity(m: CatBasisMatrix) -> NegativityResult:
    """``E = -2 min(lambda_min, 0)`` for the partial transpose of ``m``."""
    evals = hermitian_eigenvalues(partial_transpose(m.entries))
    lam = float(evals[0])
    return NegativityResult(lambda_min=lam, E=-2.0 * min(lam, 0.0), eigenvalues=tuple(float(x) for x in evals))


def entanglement_of(r: EvolutionResult, alpha: float, sign: Sign = "+") -> tuple[EntangledCat, NegativityResult]:
    """Full pipeline from an evolution result to the negativity of the entangled pair."""
    sym = symmetrize(beamsplit(build_cat(r, alpha, sign)))
    return sym, negativity(to_cat_basis(sym))

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kerrcat.cat import (
    CatState,
    EntangledCat,
    beamsplit,
    build_cat,
    cat_norms,
    displaced_coherence,
    entanglement_of,
    herald_probabilities,
    negativity,
    partial_transpose,
    symmetrize,
    to_cat_basis,
)
from kerrcat.coherent import coherent_overlap
from kerrcat.errors import DegenerateBasisError, UnnormalizableStateError
from kerrcat.fock import cat_to_fock
from kerrcat.lossy_kerr import EvolutionParams, EvolutionResult, evolve_closed_form
from kerrcat.numerics import jacobi_eigenvalues

SWEEP_ALPHAS = (3.0, 30.0, 300.0, 3000.0, 30000.0)


def result(A, C, theta, alpha=1.0):
    return EvolutionResult(
        A=A, C=complex(C), theta=theta, effective_amplitude=A * alpha * math.sin(theta / 2),
        log_A=math.log(A) if A > 0 else -math.inf, log_C=cmath.log(C) if C else complex(-math.inf),
        t=0.0, steps=1,
    )


def reference_run(alpha):
    return evolve_closed_form(EvolutionParams.from_ratio(alpha, 3.0, 0.0125))


def symmetric(delta, c_prime, sign="+"):
    return EntangledCat(delta, -delta, complex(c_prime), sign, symmetric=True)


def kvdrwz_matrix(c, m_plus, m_minus):
    """The K, V, D, R, W, Z pattern written out directly."""
    s = math.sqrt(m_plus * m_minus)
    re2 = c + np.conj(c)
    im2 = c - np.conj(c)
    K = m_plus**2 * (2 + re2)
    V = -m_plus * s * im2
    D = m_plus * m_minus * (2 + re2)
    R = m_plus * m_minus * (2 - re2)
    W = m_minus * s * im2
    Z = m_minus**2 * (2 + re2)
    m = np.array([[K, V, V, D], [-V, R, R, W], [-V, R, R, W], [D, -W, -W, Z]])
    return m / (K + 2 * R + Z)


# --- heralded cat -------------------------------------------------------------

def test_pure_even_cat():
    cat = build_cat(result(1.0, 1.0, math.pi), alpha=2.0, sign="+")
    assert cat.trace() == pytest.approx(1)
    assert cat.purity() == pytest.approx(1, abs=1e-12)
    assert cat.norm_factor == pytest.approx(1 / (2 + 2 * math.exp(-8)))


@pytest.mark.parametrize("alpha", [0.7, 1.5, 4.0])
def test_incoherent_mixture_purity(alpha):
    cat = build_cat(result(1.0, 0.0, 2.0), alpha=alpha)
    ov = coherent_overlap(cat.bra_amp, cat.ket_amp)
    expected = (1 + abs(ov) ** 2) / 2
    assert cat.purity() == pytest.approx(expected, rel=1e-12)
    rho = cat_to_fock(cat, 50)
    assert np.trace(rho @ rho).real == pytest.approx(expected, rel=1e-9)
    if alpha == 4.0:
        assert cat.purity() == pytest.approx(0.5, abs=1e-6)


@settings(deadline=None)
@given(st.floats(0.05, 1.0), st.floats(0.0, 1.0), st.floats(-math.pi, math.pi), st.floats(0.1, math.pi),
       st.floats(0.5, 5.0), st.sampled_from(["+", "-"]))
def test_cat_invariants(A, abs_c, arg_c, theta, alpha, sign):
    c = abs_c * cmath.exp(1j * arg_c)
    cat = build_cat(result(A, c, theta), alpha, sign)
    terms = cat.terms
    assert abs(cat.trace() - 1) < 1e-12
    assert terms[1].coeff == pytest.approx(terms[2].coeff.conjugate())
    assert terms[1].ket_amp == terms[2].bra_amp
    assert 0 < cat.purity() <= 1 + 1e-12
    if abs_c < 0.999:
        assert cat.purity() < 1 - 1e-9


def test_worked_cat_values():
    r = reference_run(3000.0)
    cat = build_cat(r, 3000.0)
    assert cat.effective_amplitude == pytest.approx(2.76, abs=0.02)
    assert abs(cat.C) == pytest.approx(0.43, abs=0.01)
    m_plus, m_minus = cat_norms(cat.effective_amplitude)
    assert (cat.M_plus, cat.M_minus) == (m_plus, m_minus)


def test_unnormalizable_odd_branch():
    with pytest.raises(UnnormalizableStateError):
        build_cat(result(1.0, 1.0, 1.0), alpha=0.0, sign="-")


def test_herald_probabilities():
    p, m = herald_probabilities(result(1.0, 0.3, math.pi), alpha=20.0)
    assert (p, m) == pytest.approx((0.5, 0.5), abs=1e-12)
    assert herald_probabilities(result(1.0, 1.0, 0.7), alpha=0.0) == pytest.approx((1.0, 0.0))
    p, m = herald_probabilities(result(1.0, 1.0, math.pi), alpha=1.0)
    assert m == pytest.approx((1 - math.exp(-2)) / 2, rel=1e-14)
    assert p + m == pytest.approx(1, abs=1e-15)


# --- beam splitter and displacement ---------------------------------------------

def test_beamsplit_amplitudes_and_trace():
    r = reference_run(3000.0)
    cat = build_cat(r, 3000.0)
    e = beamsplit(cat)
    assert e.beta == pytest.approx(r.A * 3000 / math.sqrt(2))
    assert e.beta_prime == pytest.approx(r.A * 3000 * cmath.exp(1j * r.theta) / math.sqrt(2))
    assert abs(e.trace() - cat.trace()) < 1e-12


def test_beamsplit_vacuum_has_no_entanglement():
    e = beamsplit(build_cat(result(0.0, 0.9, 1.0), alpha=3.0))
    assert e.beta == 0 and e.beta_prime == 0
    sym = symmetrize(e)
    with pytest.raises(DegenerateBasisError):
        to_cat_basis(sym)


def test_symmetrize_at_pi_is_identity():
    e = beamsplit(build_cat(result(0.8, 0.6 + 0.3j, math.pi), alpha=2.0))
    sym = symmetrize(e)
    assert sym.C_prime == pytest.approx(e.C, abs=1e-14)
    assert sym.delta == pytest.approx(e.beta)


def test_symmetrize_small_angle():
    e = beamsplit(build_cat(result(0.9, 0.5j, 1e-9), alpha=2.0))
    sym = symmetrize(e)
    assert abs(sym.delta) < 1e-8
    assert sym.C_prime == pytest.approx(0.5j, abs=1e-8)


@pytest.mark.parametrize("alpha", [300.0, 3000.0, 30000.0])
def test_symmetrize_phase_bookkeeping(alpha):
    r = reference_run(alpha)
    sym = symmetrize(beamsplit(build_cat(r, alpha)))
    assert abs(sym.C_prime) == pytest.approx(abs(r.C), rel=1e-12)
    assert sym.beta == pytest.approx(-sym.beta_prime)
    expected = displaced_coherence(r.C, r.A, alpha, r.theta)
    assert abs(sym.C_prime - expected) / abs(expected) < 1e-10
    if alpha == 300.0:
        assert abs(sym.C_prime) == pytest.approx(0.047, abs=0.005)


def test_c_prime_requires_symmetric_form():
    with pytest.raises(ValueError):
        EntangledCat(1, -1, 0.5, "+").C_prime
    with pytest.raises(ValueError):
        to_cat_basis(EntangledCat(1, 0.5, 0.5, "+"))


# --- cat basis ----------------------------------------------------------------

@settings(deadline=None)
@given(st.floats(0.05, 4.0), st.floats(0.0, 1.0), st.floats(-math.pi, math.pi))
def test_cat_basis_entry_pattern(delta, abs_c, arg_c):
    c = abs_c * cmath.exp(1j * arg_c)
    m = to_cat_basis(symmetric(delta, c))
    expected = kvdrwz_matrix(c, *cat_norms(delta))
    assert np.max(np.abs(m.entries - expected)) <= 1e-10 * np.max(np.abs(expected))


@settings(deadline=None)
@given(st.complex_numbers(min_magnitude=0.01, max_magnitude=4, allow_nan=False),
       st.floats(0.0, 1.0), st.floats(-math.pi, math.pi), st.sampled_from(["+", "-"]))
def test_cat_basis_matrix_is_a_state(delta, abs_c, arg_c, sign):
    m = to_cat_basis(symmetric(delta, abs_c * cmath.exp(1j * arg_c), sign)).entries
    assert np.max(np.abs(m - m.conj().T)) < 1e-12
    assert abs(np.trace(m) - 1) < 1e-12
    assert np.linalg.eigvalsh(m)[0] > -1e-10
    assert np.allclose(m[1], m[2], atol=1e-15) and np.allclose(m[:, 1], m[:, 2], atol=1e-15)


def test_real_coherence_has_no_v_w_entries():
    m = to_cat_basis(symmetric(1.2, 0.6)).entries
    assert m[0, 1] == 0 and m[1, 3] == 0 and m[0, 2] == 0


def test_pure_coherence_is_bell_like():
    m_plus, m_minus = cat_norms(4.0)
    psi = np.array([m_plus, 0, 0, m_minus])
    psi = psi / np.linalg.norm(psi)
    m = to_cat_basis(symmetric(4.0, 1.0)).entries
    assert np.allclose(m, np.outer(psi, psi), atol=1e-12)


def test_worked_large_amplitude_trace():
    r = reference_run(30000.0)
    sym, _ = entanglement_of(r, 30000.0)
    assert abs(np.trace(to_cat_basis(sym).entries) - 1) < 1e-12


def test_degenerate_basis():
    with pytest.raises(DegenerateBasisError):
        to_cat_basis(symmetric(1e-80, 1.0))


# --- negativity -----------------------------------------------------------------

@pytest.mark.parametrize("delta", [0.3, 1.0, 3.0])
def test_no_coherence_no_entanglement(delta):
    assert negativity(to_cat_basis(symmetric(delta, 0.0))).E == pytest.approx(0, abs=1e-10)


def test_maximal_entanglement():
    assert negativity(to_cat_basis(symmetric(3.0, 1.0))).E == pytest.approx(1, abs=1e-6)


def test_entanglement_grows_along_alpha_sweep():
    values = [entanglement_of(reference_run(a), a)[1].E for a in SWEEP_ALPHAS]
    assert all(b >= a - 1e-10 for a, b in zip(values, values[1:]))
    assert values[-1] > values[-2] > values[-3]


@pytest.mark.parametrize("abs_c", [0.0, 0.25, 0.5, 0.75, 1.0])
@pytest.mark.parametrize("arg_c", [0.0, 1.0, 2.5])
def test_sign_invariance_for_separated_components(abs_c, arg_c):
    c = abs_c * cmath.exp(1j * arg_c)
    plus = negativity(to_cat_basis(symmetric(3.0, c, "+"))).E
    minus = negativity(to_cat_basis(symmetric(3.0, c, "-"))).E
    assert plus == pytest.approx(minus, abs=1e-10)


@pytest.mark.parametrize("delta", [0.5, 1.0])
def test_sign_matters_for_overlapping_components(delta):
    m_plus, m_minus = cat_norms(delta)
    plus = negativity(to_cat_basis(symmetric(delta, 1.0, "+"))).E
    minus = negativity(to_cat_basis(symmetric(delta, 1.0, "-"))).E
    # |d,d> - |-d,-d> is exactly (|Phi+ Phi-> + |Phi- Phi+>)/sqrt2
    assert minus == pytest.approx(1.0, abs=1e-12)
    assert plus == pytest.approx(2 * m_plus * m_minus / (m_plus**2 + m_minus**2), abs=1e-12)


@pytest.mark.parametrize("delta", [0.5, 1.0, 3.0])
def test_entanglement_monotone_in_coherence(delta):
    values = [negativity(to_cat_basis(symmetric(delta, c))).E for c in (0, 0.25, 0.5, 0.75, 1.0)]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


@settings(deadline=None)
@given(st.floats(0.05, 4.0), st.floats(0.0, 1.0), st.floats(-math.pi, math.pi), st.sampled_from(["+", "-"]))
def test_negativity_self_check(delta, abs_c, arg_c, sign):
    m = to_cat_basis(symmetric(delta, abs_c * cmath.exp(1j * arg_c), sign))
    res = negativity(m)
    jac = jacobi_eigenvalues(partial_transpose(m.entries))
    assert abs(jac[0] - res.lambda_min) < 1e-10
    assert res.negative_count <= 1
    assert res.E == pytest.approx(-2 * min(res.lambda_min, 0.0))
    assert 0 <= res.E <= 1 + 1e-12

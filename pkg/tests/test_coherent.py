import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from kerrcat.coherent import (
    CoherentDyad,
    coherent_overlap,
    displace_dyad,
    dyad_trace,
    mixture_purity,
)
from kerrcat.fock import coherent_vector, dyads_to_fock, fock_operators

amp = st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False)
small_amp = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)


def test_overlap_identity():
    assert coherent_overlap(1.3 - 0.2j, 1.3 - 0.2j) == 1


def test_overlap_opposite_amplitudes():
    assert coherent_overlap(3, -3) == pytest.approx(math.exp(-18), rel=1e-14)
    assert coherent_overlap(3, -3) == pytest.approx(1.523e-8, rel=1e-3)


def test_overlap_matches_fock_inner_product():
    # <2i|2> = exp(-4 - 4i)
    expected = cmath.exp(-4 - 4j)
    assert abs(coherent_overlap(2j, 2) - expected) < 1e-14
    fock = np.vdot(coherent_vector(2j, 40), coherent_vector(2, 40))
    assert abs(fock - expected) < 1e-10


@given(amp, amp)
def test_overlap_modulus_law(a, b):
    assert abs(coherent_overlap(b, a)) == pytest.approx(math.exp(-abs(a - b) ** 2 / 2), rel=1e-12, abs=1e-300)
    assert abs(coherent_overlap(b, a)) <= 1.0


@settings(max_examples=30, deadline=None)
@given(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_overlap_agrees_with_fock(a, b):
    fock = np.vdot(coherent_vector(b, 45), coherent_vector(a, 45))
    assert abs(fock - coherent_overlap(b, a)) < 1e-10


def test_dyad_trace_examples():
    assert dyad_trace([CoherentDyad(1, 0.7, 0.7)]) == pytest.approx(1)
    assert dyad_trace([]) == 0
    a = 3.0
    even = [CoherentDyad(1, x, y) for x in (a, -a) for y in (a, -a)]
    assert dyad_trace(even).real == pytest.approx(2 + 2 * math.exp(-18), rel=1e-15)


def test_displacement_zero_is_identity():
    d = CoherentDyad(0.3 + 0.1j, 1 + 1j, -0.5)
    assert displace_dyad(d, 0) == d


@given(amp, small_amp)
def test_displacement_of_projector(a, x):
    d = displace_dyad(CoherentDyad(1, a, a), x)
    assert abs(d.coeff) == pytest.approx(1, abs=1e-15)
    assert d.ket_amp == pytest.approx(a + x)
    assert abs(dyad_trace([d]) - 1) < 1e-12


@given(st.lists(st.tuples(small_amp, small_amp, small_amp), min_size=1, max_size=4), small_amp)
def test_displacement_preserves_trace(terms, x):
    mix = [CoherentDyad(c, k, b) for c, k, b in terms]
    moved = [displace_dyad(d, x) for d in mix]
    assert abs(dyad_trace(moved) - dyad_trace(mix)) < 1e-12


@pytest.mark.parametrize("x", [0.4 - 0.3j, -1.1 + 0.2j])
def test_displacement_phase_matches_unitary(x):
    # D(x) = exp(x a^dag - x^* a) built in a generous Fock space
    ops = fock_operators(60)
    D = expm(x * ops.a_dag - np.conj(x) * ops.a)
    d = CoherentDyad(0.5 + 0.2j, 0.8 + 0.3j, -0.6j)
    cut = 30
    before = dyads_to_fock([d], 60)
    after = (D @ before @ D.conj().T)[: cut + 1, : cut + 1]
    expected = dyads_to_fock([displace_dyad(d, x)], cut)
    assert np.max(np.abs(after - expected)) < 1e-10


def test_mixture_purity_pure_projector():
    assert mixture_purity([CoherentDyad(1, 2 - 1j, 2 - 1j)]) == pytest.approx(1)


def test_adjoint_and_scaling():
    d = CoherentDyad(1j, 1, 2)
    assert d.adjoint() == CoherentDyad(-1j, 2, 1)
    assert d.scaled(2).coeff == 2j

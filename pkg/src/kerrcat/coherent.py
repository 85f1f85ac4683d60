"""Coherent-state amplitudes, overlaps and weighted dyads ``c |a><b|``."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, replace
from typing import Iterable


@dataclass(frozen=True)
class CoherentDyad:
    """The operator ``coeff * |ket_amp><bra_amp|`` between two coherent states."""

    coeff: complex
    ket_amp: complex
    bra_amp: complex

    def __post_init__(self):
        object.__setattr__(self, "coeff", complex(self.coeff))
        object.__setattr__(self, "ket_amp", complex(self.ket_amp))
        object.__setattr__(self, "bra_amp", complex(self.bra_amp))

    def scaled(self, factor: complex) -> "CoherentDyad":
        return replace(self, coeff=self.coeff * factor)

    def adjoint(self) -> "CoherentDyad":
        return CoherentDyad(self.coeff.conjugate(), self.bra_amp, self.ket_amp)


# A density operator written as a sum of dyads.
DyadMixture = list[CoherentDyad]


def log_coherent_overlap(bra: complex, ket: complex) -> complex:
    """Natural log of <bra|ket>.

    Uses ``-|ket - bra|^2 / 2 + i Im(conj(bra) ket)``, which equals the textbook
    ``-(|ket|^2 + |bra|^2)/2 + conj(bra) ket`` but does not cancel for nearby
    amplitudes.
    """
    bra = complex(bra)
    ket = complex(ket)
    d = ket - bra
    return complex(-0.5 * (d.real * d.real + d.imag * d.imag), (bra.conjugate() * ket).imag)


def coherent_overlap(bra: complex, ket: complex) -> complex:
    """Inner product <bra|ket> of two normalized coherent states."""
    return cmath.exp(log_coherent_overlap(bra, ket))


def dyad_trace(m: Iterable[CoherentDyad]) -> complex:
    return sum((d.coeff * coherent_overlap(d.bra_amp, d.ket_amp) for d in m), 0j)


def dyad_product_trace(x: CoherentDyad, y: CoherentDyad) -> complex:
    """Tr(x y) = coeff_x coeff_y <x.bra|y.ket> <y.bra|x.ket>."""
    return (
        x.coeff
        * y.coeff
        * coherent_overlap(x.bra_amp, y.ket_amp)
        * coherent_overlap(y.bra_amp, x.ket_amp)
    )


def mixture_purity(m: Iterable[CoherentDyad]) -> float:
    """Tr(rho^2) for a Hermitian dyad mixture."""
    terms = list(m)
    total = sum((dyad_product_trace(x, y) for x in terms for y in terms), 0j)
    return total.real


def normalize_mixture(m: Iterable[CoherentDyad]) -> DyadMixture:
    terms = list(m)
    tr = dyad_trace(terms)
    return [d.scaled(1.0 / tr) for d in terms]


def displacement_phase(x: complex, amp: complex) -> float:
    """Phase picked up by D(x)|amp> = exp(i Im(x conj(amp))) |amp + x>."""
    x = complex(x)
    amp = complex(amp)
    return (x * amp.conjugate()).imag


def displace_dyad(d: CoherentDyad, x: complex) -> CoherentDyad:
    """Conjugate a dyad by the unitary displacement ``D(x) = exp(x a^dag - x^* a)``.

    The amplitudes move by ``x``; the resulting phase is carried in ``coeff``.
    """
    x = complex(x)
    if x == 0:
        return d
    phase = displacement_phase(x, d.ket_amp) - displacement_phase(x, d.bra_amp)
    return CoherentDyad(d.coeff * cmath.exp(1j * phase), d.ket_amp + x, d.bra_amp + x)

"""Cat states and entanglement from a weak cross-Kerr interaction under photon loss."""

from .cat import (
    CatBasisMatrix,
    CatState,
    EntangledCat,
    NegativityResult,
    beamsplit,
    build_cat,
    displaced_coherence,
    entanglement_of,
    herald_probabilities,
    negativity,
    symmetrize,
    to_cat_basis,
)
from .coherent import CoherentDyad, coherent_overlap, displace_dyad, dyad_trace
from .errors import (
    DegenerateBasisError,
    DomainError,
    IntegrationError,
    KerrCatError,
    UnnormalizableStateError,
)
from .lossy_kerr import (
    EvolutionParams,
    EvolutionResult,
    amplitude_factor,
    coherence_closed_form,
    damp_dyad,
    evolve,
    evolve_closed_form,
    kerr_step,
    loss_db_per_km_to_gamma,
    required_theta,
    required_time,
)

__version__ = "0.1.0"

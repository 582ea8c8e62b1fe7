"""Exact spin-boson dynamics on truncated Fock spaces.

The parity operator solves the Riccati equation of the block Hamiltonian
``[[H_+, alpha], [alpha, H_-]]`` when ``beta = 0``, which yields a closed-form
propagator built from two dressed ``N x N`` Hamiltonians. Everything is
cross-checked against brute-force diagonalization of the full Hamiltonian.
"""

from .fock import (
    FockSpace,
    annihilation,
    creation,
    displacement,
    multimode_displacement,
    number,
    parity,
    phase_operator,
)
from .model import (
    BlockHamiltonian,
    Mode,
    ModelParams,
    RiccatiError,
    ValidationError,
    assemble_block,
    assemble_total,
    parity_constant_of_motion,
    rescale_reference,
    riccati_residual,
    similarity_transform,
    spectral_obstruction_check,
)
from .propagator import (
    ClosedFormError,
    DressedSpectrum,
    Propagator,
    closed_form_propagator,
    dressed_spectrum,
    oracle_propagator,
    propagate_state,
    propagator,
)
from .dynamics import (
    BathState,
    EvolutionResult,
    QubitState,
    coherent_state,
    fock_state,
    parity_expectation_series,
    partial_trace,
    reduced_dynamics,
    thermal_state,
    uniform_grid,
    vacuum_state,
)

__version__ = "0.1.0"

"""Bosonic two-body N-representability at desk scale.

Fock sectors and ladder operators, the Schwinger map from 2-local qubit
Hamiltonians to boson Hamiltonians, two-body RDMs in an observable basis, a
projection-based membership/separation oracle, an ellipsoid optimizer driven
by it, a simulated qudit verifier and the diagonal (Ising) reduction.
"""
from .diag import ClassicalIsing, DiagonalData, diagonal_of, ising_energy_via_diag
from .ellipsoid import CutSpec, EllipsoidState, ellipsoid_update, ground_energy_via_oracle, minimize_energy, solve_boson
from .fock import (
    BosonHamiltonian,
    FockBasis,
    SectorOperator,
    enumerate_basis,
    ground_state,
    ladder_operator,
    lift_hamiltonian,
)
from .nrep import (
    KnPointCloud,
    MembershipVerdict,
    SeparationOracle,
    decide_membership,
    extremal_alpha_points,
    inner_ball_estimate,
    nearest_representable,
)
from .rdm import (
    EnergyFunctional,
    ObservableBasis,
    TwoBodyRDM,
    alpha_from_rdm,
    energy_functional,
    observable_basis,
    one_rdm_from_two,
    random_state,
    rdm_from_alpha,
    two_rdm,
)
from .spin_boson import (
    DualRailEncoding,
    PauliTerm,
    QubitHamiltonian,
    assemble_and_verify,
    bose_hamiltonian,
    penalty_hamiltonian,
    penalty_weight,
    random_two_local,
    schwinger_map,
)
from .verifier import (
    QuditRegister,
    VerifierConfig,
    VerifierTranscript,
    honest_witness,
    hp_ladder,
    lift_to_qudits,
    run_verifier,
)

__version__ = "0.1.0"

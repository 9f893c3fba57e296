"""Fock-space toolkit: (M, N-M) Schmidt-like decompositions, M-body reduced
density matrices, symmetry-blocked expansions, measurement monotonicity
checks, and an exact pairing-model testbed for bosons and fermions."""

from .fock import (
    BasisCapExceeded,
    FockBasis,
    OccupationVector,
    Statistics,
    basis_dimension,
    enumerate_basis,
    merge_occupations,
)
from .states import (
    PureState,
    SpUnitary,
    apply_annihilation_product,
    apply_annihilator,
    apply_creator,
    apply_sp_unitary,
    basis_state,
    compose_product_state,
    load_state,
    make_state,
    random_state,
    save_state,
)
from .bipartite import (
    GammaMatrix,
    SchmidtDecomposition,
    build_gamma,
    fidelity,
    normal_mode_state,
    overlap,
    reconstruct,
    schmidt_decompose,
    schmidt_of_state,
)
from .rdm import (
    ReducedDensityMatrix,
    entanglement_entropy,
    fock_rdm_spectrum,
    rdm,
    reduce,
)
from .blocks import (
    CollectivePairBlock,
    ModeSubspace,
    SectorBlock,
    bipartite_entanglement,
    blocked_rdm,
    collective_pair_block,
    pair_expansion,
    sector_gamma,
    sector_number,
    sector_reconstruct,
)
from .measure import (
    MeasurementEnsemble,
    annihilation_measurement,
    check_majorization,
    normal_measurement,
    particle_transfer,
    verify_mixture_identity,
)
from .pairing import (
    PairAmplitudes,
    PairingModel,
    default_g_grid,
    dominance_bounds,
    embed_paired_state,
    ground_state,
    paired_basis,
    pairing_hamiltonian,
    projected_bcs_state,
    sweep,
    uniform_paired_state,
)
from .numerics import Spectrum, entropy, hermitian_eigen, majorization_compare, svd

__version__ = "0.1.0"

__all__ = [
    "BasisCapExceeded",
    "CollectivePairBlock",
    "FockBasis",
    "GammaMatrix",
    "MeasurementEnsemble",
    "ModeSubspace",
    "OccupationVector",
    "PairAmplitudes",
    "PairingModel",
    "PureState",
    "ReducedDensityMatrix",
    "SchmidtDecomposition",
    "SectorBlock",
    "Spectrum",
    "SpUnitary",
    "Statistics",
    "annihilation_measurement",
    "apply_annihilation_product",
    "apply_annihilator",
    "apply_creator",
    "apply_sp_unitary",
    "basis_dimension",
    "basis_state",
    "bipartite_entanglement",
    "blocked_rdm",
    "build_gamma",
    "check_majorization",
    "collective_pair_block",
    "compose_product_state",
    "default_g_grid",
    "dominance_bounds",
    "embed_paired_state",
    "entanglement_entropy",
    "entropy",
    "enumerate_basis",
    "fidelity",
    "fock_rdm_spectrum",
    "ground_state",
    "hermitian_eigen",
    "load_state",
    "majorization_compare",
    "make_state",
    "merge_occupations",
    "normal_measurement",
    "normal_mode_state",
    "overlap",
    "pair_expansion",
    "paired_basis",
    "pairing_hamiltonian",
    "particle_transfer",
    "projected_bcs_state",
    "random_state",
    "rdm",
    "reconstruct",
    "reduce",
    "save_state",
    "schmidt_decompose",
    "schmidt_of_state",
    "sector_gamma",
    "sector_number",
    "sector_reconstruct",
    "svd",
    "sweep",
    "uniform_paired_state",
    "verify_mixture_identity",
]

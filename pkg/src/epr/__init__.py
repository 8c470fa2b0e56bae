"""Approximation pipeline for the EPR Hamiltonian ground-energy problem.

Solve the fractional matching LP exactly, round its matching-plus-odd-cycles
decomposition into a product of small entangled blocks, and certify that
every edge achieves at least α = (1+√5)/4 of its energy budget. Includes
desk-scale exact diagonalization oracles and an inequality verification
suite for all the guarantees the construction relies on.
"""

from .constants import ALPHA, GAMMA, THETA, AlgorithmConstants, constants_block
from .cyclestates import (
    SynthesisFailed,
    VerificationReport,
    cycle_state,
    shift_averaged_cycle,
    synth_psi,
    synth_small_cycle,
    verify_lemma5,
    verify_psi,
)
from .graphs import (
    Bipartition,
    InstanceError,
    QubitFrame,
    WeightedGraph,
    detect_bipartition,
    generate,
    load_instance,
    parse_edgelist,
    qmc_to_epr,
)
from .lp import (
    HalfIntegralSolution,
    LpEnergies,
    lp_energies,
    normalize,
    solve_lp,
    star_bound_check,
    upper_bound,
)
from .mixtures import MixtureProductState
from .oracle import (
    DenseHamiltonian,
    brute_force_lp,
    brute_force_matching,
    build_hamiltonian,
    lambda_max,
    measure_ratio,
)
from .quantum import (
    DensityBlock,
    Ket,
    conjugate_by_y,
    epr_ket,
    epr_projector,
    pair_energy,
    partial_trace,
    singlet_projector,
    tensor_blocks,
    tilted_epr,
    tilted_marginal,
)
from .rounding import Certificate, RoundedState, baseline_34, certify, edge_energy, round_solution

__version__ = "1.0.0"

__all__ = [
    "ALPHA",
    "GAMMA",
    "THETA",
    "AlgorithmConstants",
    "Bipartition",
    "Certificate",
    "DenseHamiltonian",
    "DensityBlock",
    "HalfIntegralSolution",
    "InstanceError",
    "Ket",
    "LpEnergies",
    "MixtureProductState",
    "QubitFrame",
    "RoundedState",
    "SynthesisFailed",
    "VerificationReport",
    "WeightedGraph",
    "baseline_34",
    "brute_force_lp",
    "brute_force_matching",
    "build_hamiltonian",
    "certify",
    "conjugate_by_y",
    "constants_block",
    "cycle_state",
    "detect_bipartition",
    "edge_energy",
    "epr_ket",
    "epr_projector",
    "generate",
    "lambda_max",
    "load_instance",
    "lp_energies",
    "measure_ratio",
    "normalize",
    "pair_energy",
    "parse_edgelist",
    "partial_trace",
    "qmc_to_epr",
    "round_solution",
    "shift_averaged_cycle",
    "singlet_projector",
    "solve_lp",
    "star_bound_check",
    "synth_psi",
    "synth_small_cycle",
    "tensor_blocks",
    "tilted_epr",
    "tilted_marginal",
    "upper_bound",
    "verify_lemma5",
    "verify_psi",
]

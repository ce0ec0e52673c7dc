"""Ramanujan graphs and friends for distributed consensus and detection.

The package builds six graph families at matched size and degree (regular
ring lattices, Watts-Strogatz rewirings, Erdos-Renyi graphs, the two
Lubotzky-Phillips-Sarnak Ramanujan constructions, and random rewirings of
ring lattices), measures their Laplacian spectra, runs average consensus
and consensus-based detection on them, and compares families through a
reproducible experiment harness.
"""

from .consensus import (
    ConsensusConfig,
    ConsensusRun,
    convergence_time,
    optimal_alpha,
    run_consensus,
    weight_matrix,
)
from .detection import (
    DetectionModel,
    PeCurve,
    StoppingAnalysis,
    analytic_state_moments,
    detection_convergence_time,
    empirical_pe_curve,
    local_llr,
    optimal_stopping,
    optimal_stopping_for_graph,
    parallel_fusion_pe,
    pe_curve_analytic,
    q_function,
    state_variance_profile,
    stopping_objective,
    variance_upper_bound,
)
from .experiments import (
    CompetitorSpec,
    DetectionSettings,
    Envelope,
    ExperimentResult,
    ExperimentSpec,
    FamilyResult,
    PointResult,
    SweepSpec,
    derive_seed,
    load_result,
    parse_experiment_spec,
    run_experiment,
    serialize_result,
)
from .generators import (
    GeneratorParams,
    LpsBuild,
    build_graph,
    gen_er,
    gen_lps1,
    gen_lps2,
    gen_r3l,
    gen_rrl,
    gen_ws1,
    lps1_build,
    lps2_build,
    lps_generator_set,
    lps_parameter_check,
)
from .graph import DegreeProfile, Graph, read_edge_list, write_edge_list
from .numtheory import (
    PslElement,
    QuaternionSolution,
    is_prime,
    jacobi_solutions,
    legendre_symbol,
    lft_apply,
    psl_canonicalize,
    psl_group_elements,
    sqrt_minus_one,
)
from .spectral import (
    AsymptoticGammaBounds,
    EigensolveError,
    RamanujanCertificate,
    SpectralSummary,
    asymptotic_gamma_upper_bounds,
    extreme_laplacian_eigenvalues,
    ramanujan_certificate,
    ramanujan_gamma_lower_bound,
    spectral_summary,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # graph
    "Graph",
    "DegreeProfile",
    "read_edge_list",
    "write_edge_list",
    # number theory
    "is_prime",
    "legendre_symbol",
    "sqrt_minus_one",
    "jacobi_solutions",
    "QuaternionSolution",
    "PslElement",
    "psl_canonicalize",
    "psl_group_elements",
    "lft_apply",
    # spectral
    "SpectralSummary",
    "spectral_summary",
    "extreme_laplacian_eigenvalues",
    "RamanujanCertificate",
    "ramanujan_certificate",
    "ramanujan_gamma_lower_bound",
    "AsymptoticGammaBounds",
    "asymptotic_gamma_upper_bounds",
    "EigensolveError",
    # generators
    "GeneratorParams",
    "build_graph",
    "gen_rrl",
    "gen_ws1",
    "gen_er",
    "gen_r3l",
    "gen_lps1",
    "gen_lps2",
    "lps_parameter_check",
    "lps_generator_set",
    "lps1_build",
    "lps2_build",
    "LpsBuild",
    # consensus
    "ConsensusConfig",
    "ConsensusRun",
    "run_consensus",
    "optimal_alpha",
    "weight_matrix",
    "convergence_time",
    # detection
    "DetectionModel",
    "q_function",
    "local_llr",
    "parallel_fusion_pe",
    "analytic_state_moments",
    "state_variance_profile",
    "variance_upper_bound",
    "pe_curve_analytic",
    "PeCurve",
    "empirical_pe_curve",
    "detection_convergence_time",
    "stopping_objective",
    "StoppingAnalysis",
    "optimal_stopping",
    "optimal_stopping_for_graph",
    # experiments
    "ExperimentSpec",
    "CompetitorSpec",
    "SweepSpec",
    "DetectionSettings",
    "Envelope",
    "FamilyResult",
    "PointResult",
    "ExperimentResult",
    "derive_seed",
    "parse_experiment_spec",
    "run_experiment",
    "serialize_result",
    "load_result",
]

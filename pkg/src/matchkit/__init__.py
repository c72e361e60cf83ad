"""One-way matching of feature-aligned datasets with low-rank signals.

Estimate the hidden row correspondence between two datasets that share a
low-rank signal: project both onto an estimated singular subspace, solve an
exact linear assignment, and compare the result against closed-form error-rate
predictions. Ships a generative sampler, a seeded simulation harness, and a
CLI (``matchkit simulate|match|theory|evaluate``).
"""

from .assignment import (BRUTE_FORCE_LIMIT, assignment_objective, brute_force_solve,
                         build_cost, solve)
from .evaluation import (ConfusionTable, MatchReport, cycle_decompose,
                         label_confusion, mismatch_loss, score_match)
from .io import (ParseError, read_labels_csv, read_matrix_csv, read_permutation_csv,
                 write_labels_csv, write_matrix_csv, write_permutation_csv)
from .linalg import (NumericalError, SvdResult, frobenius_inner, project,
                     subspace_distance, truncated_svd)
from .matching import (BASIS_SOURCES, LAPSMatcher, NaiveMatcher, detect_less_noisy,
                       laps_match, naive_match)
from .model import (ConstructionError, DatasetPair, LatticeSignal, ModelParams,
                    make_lattice_params, make_signal_sweep_params,
                    sample_haar_orthonormal, sample_pair)
from .permutation import (invert_permutation, matrix_to_permutation,
                          permutation_matrix, random_permutation)
from .rng import make_generator, stream_generator
from .simulate import (AXES, CSV_HEADER, METHODS, SweepCell, SweepResult, SweepSpec,
                       params_for_value, run_sweep)
from .theory import (C6, RATE_CSV_FIELDS, RateBundle, SeparationProfile,
                     SymmetryDiagnostics, ck_constant, e_loco, e_unif, gaussian_cdf,
                     incoherence_mu, minimax_lower_bound, minimax_lower_bound_exp,
                     minimax_rate_exp, omega_n, poly_rate, rate_bundle,
                     separation_profile, symmetry_diagnostics, upper_rate_c6)

__version__ = "0.1.0"

__all__ = [
    "AXES", "BASIS_SOURCES", "BRUTE_FORCE_LIMIT", "C6", "CSV_HEADER",
    "ConfusionTable", "ConstructionError", "DatasetPair", "LAPSMatcher",
    "LatticeSignal", "METHODS", "MatchReport", "ModelParams", "NaiveMatcher",
    "NumericalError", "ParseError", "RATE_CSV_FIELDS", "RateBundle",
    "SeparationProfile", "SvdResult", "SweepCell", "SweepResult", "SweepSpec",
    "SymmetryDiagnostics", "assignment_objective", "brute_force_solve",
    "build_cost", "ck_constant", "cycle_decompose", "detect_less_noisy",
    "e_loco", "e_unif", "frobenius_inner", "gaussian_cdf", "incoherence_mu",
    "invert_permutation", "label_confusion", "laps_match", "make_generator",
    "make_lattice_params", "make_signal_sweep_params", "matrix_to_permutation",
    "minimax_lower_bound", "minimax_lower_bound_exp", "minimax_rate_exp",
    "mismatch_loss", "naive_match", "omega_n", "params_for_value",
    "permutation_matrix", "poly_rate", "project", "random_permutation",
    "rate_bundle", "read_labels_csv", "read_matrix_csv", "read_permutation_csv",
    "run_sweep", "sample_haar_orthonormal", "sample_pair", "score_match",
    "separation_profile", "solve", "stream_generator", "subspace_distance",
    "symmetry_diagnostics", "truncated_svd", "upper_rate_c6",
    "write_labels_csv", "write_matrix_csv", "write_permutation_csv",
]

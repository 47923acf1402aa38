"""Sparse signal recovery by minimizing the squared l1/l2 norm ratio."""

__version__ = "0.1.0"

from .linalg import (ConvergenceError, SparsityReport, dinkelbach_value,
                     effective_sparsity, largest_gram_eigenvalue,
                     least_norm_solution, norm_l0, norm_l1, norm_l2,
                     ratio_map, ratio_sq, sparsity_report)
from .prox import project_ball, prox_l1_squared, soft_threshold
from .sensing import (MatrixSpec, NoiseSpec, SignalSpec, generate_matrix,
                      generate_signal, mutual_coherence, rng_stream,
                      synthesize_measurements)
from .solver import (RecoveryProblem, SolverConfig, SolverResult,
                     dinkelbach_solve, feasible_initial_point, l1_solve,
                     solve_subproblem)
from .quadform import (KernelModel, RatioQuadraticForm, SphericalCheck,
                       SpectrumCheck, dct2_matrix, expected_spectrum,
                       kernel_model, line_kernel_instance, min_kernel_ratio,
                       min_kernel_ratio_sampled, mixing_matrix,
                       parametric_infimum, plane_kernel_instance,
                       ratio_infimum, spherical_section_check, split_signs,
                       verify_spectrum)
from .qpexport import QpExport, export_qp, load_qp, save_qp
from .experiments import (ExperimentSpec, SignalCell, TrialRecord,
                          load_spec, run_experiment, run_trial, summarize)
from .verify import CheckResult, run_checks

__all__ = [
    "__version__",
    "ConvergenceError", "SparsityReport", "dinkelbach_value",
    "effective_sparsity", "largest_gram_eigenvalue", "least_norm_solution",
    "norm_l0", "norm_l1", "norm_l2", "ratio_map", "ratio_sq",
    "sparsity_report",
    "project_ball", "prox_l1_squared", "soft_threshold",
    "MatrixSpec", "NoiseSpec", "SignalSpec", "generate_matrix",
    "generate_signal", "mutual_coherence", "rng_stream",
    "synthesize_measurements",
    "RecoveryProblem", "SolverConfig", "SolverResult", "dinkelbach_solve",
    "feasible_initial_point", "l1_solve", "solve_subproblem",
    "KernelModel", "RatioQuadraticForm", "SphericalCheck", "SpectrumCheck",
    "dct2_matrix", "expected_spectrum", "kernel_model",
    "line_kernel_instance", "min_kernel_ratio", "min_kernel_ratio_sampled",
    "mixing_matrix", "parametric_infimum", "plane_kernel_instance",
    "ratio_infimum", "spherical_section_check", "split_signs",
    "verify_spectrum",
    "QpExport", "export_qp", "load_qp", "save_qp",
    "ExperimentSpec", "SignalCell", "TrialRecord", "load_spec",
    "run_experiment", "run_trial", "summarize",
    "CheckResult", "run_checks",
]

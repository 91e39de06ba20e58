"""Logical entanglement distribution between two 2D arrays of qubits.

Bell pairs generated at random sites are gathered by SWAPs into a planar
surface-code cell, decoded with matching, and post-selected on the weight
of the estimated correction.
"""
__version__ = "0.1.0"

from .config import ConfigError, ExperimentConfig, parse_config  # noqa: E402
from .decode_select import build_decoding_graphs, decode, logical_verdict, post_select  # noqa: E402
from .experiment import SimulationParams, SweepRecord, TrialOutcome, run_batch, run_trial, sweep  # noqa: E402
from .lattice_gen import EntanglementPattern, GridSpec, sample_entanglement_pattern  # noqa: E402
from .pauli_noise import PauliFrame, compose_depolarizing, effective_swap_rate  # noqa: E402
from .rates import bandwidth, generation_success, post_distillation, required_duration  # noqa: E402
from .rearrange import assign_qubits, plan_schedule, select_placement  # noqa: E402
from .surface_code import CodeLayout, InsufficientEntanglement, build_layout, choose_code_distance, syndrome  # noqa: E402

__all__ = [
    "ConfigError", "ExperimentConfig", "parse_config",
    "build_decoding_graphs", "decode", "logical_verdict", "post_select",
    "SimulationParams", "SweepRecord", "TrialOutcome", "run_batch", "run_trial", "sweep",
    "EntanglementPattern", "GridSpec", "sample_entanglement_pattern",
    "PauliFrame", "compose_depolarizing", "effective_swap_rate",
    "bandwidth", "generation_success", "post_distillation", "required_duration",
    "assign_qubits", "plan_schedule", "select_placement",
    "CodeLayout", "InsufficientEntanglement", "build_layout", "choose_code_distance", "syndrome",
]

"""Iterative beam search for SALBP-2 (fixed station count, minimise cycle time)."""
from __future__ import annotations

from .instance import (
    CycleDetected,
    BadArcEndpoint,
    Instance,
    InstanceError,
    InstanceSyntaxError,
    NonPositiveTime,
    ProblemSpec,
    export_ip_model,
    parse_instance,
    reverse_instance,
    starting_cycle_time,
    transitive_successors,
)
from .solution import PartialSolution, Solution, cycle_time, reverse_solution, validate_solution
from .greedy import GreedyTable, GreedyWeights, choose_task, eta_values, gamma_values
from .beam import BsOutcome, BsParams, beam_search
from .ibs import IbsConfig, IbsResult, run_ibs, run_ibs_hp

__all__ = [
    "BadArcEndpoint",
    "BsOutcome",
    "BsParams",
    "CycleDetected",
    "GreedyTable",
    "GreedyWeights",
    "IbsConfig",
    "IbsResult",
    "Instance",
    "InstanceError",
    "InstanceSyntaxError",
    "NonPositiveTime",
    "PartialSolution",
    "ProblemSpec",
    "Solution",
    "beam_search",
    "choose_task",
    "cycle_time",
    "eta_values",
    "export_ip_model",
    "gamma_values",
    "parse_instance",
    "reverse_instance",
    "reverse_solution",
    "run_ibs",
    "run_ibs_hp",
    "starting_cycle_time",
    "transitive_successors",
    "validate_solution",
]

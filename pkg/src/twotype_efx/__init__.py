"""Complete EFX allocations of indivisible items when every agent has one of
two additive valuations."""

from .checker import Mode, brute_force_complete_efx, check_improvement, is_efx
from .engine import Case, greedy_identical, improvement_step, solve
from .model import ALPHA, BETA, AgentType, Allocation, Instance

__all__ = [
    "ALPHA", "BETA", "AgentType", "Allocation", "Case", "Instance", "Mode",
    "brute_force_complete_efx", "check_improvement", "greedy_identical",
    "improvement_step", "is_efx", "solve",
]

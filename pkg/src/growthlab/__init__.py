"""Dynamic technology-augmented growth modeling toolkit.

Library plus batch CLI: growth-model formulas, a two-track research
simulator, pooled OLS diagnostics, K-means country clustering, and a panel
construction pipeline.
"""

from .model_core import (
    ModelParams,
    FactorSplit,
    depreciation_rate,
    effective_human_capital,
    output_augmented,
    output_classic,
    output_dynamic,
    split_factor,
    technology_a1,
    technology_a2,
    technology_a3,
)
from .simulate import ScenarioConfig, TrajectoryPoint, find_breakeven, run_scenario

__all__ = [
    "ModelParams",
    "FactorSplit",
    "ScenarioConfig",
    "TrajectoryPoint",
    "depreciation_rate",
    "effective_human_capital",
    "find_breakeven",
    "output_augmented",
    "output_classic",
    "output_dynamic",
    "run_scenario",
    "split_factor",
    "technology_a1",
    "technology_a2",
    "technology_a3",
]

__version__ = "0.1.0"

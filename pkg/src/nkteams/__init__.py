"""Multi-level adaptation of self-organising teams on NK landscapes."""

from .config import ScenarioConfig, parse_config
from .engine import run_grid, run_scenario, run_single
from .landscape import Landscape, build_interaction_matrix, generate_landscape

__all__ = [
    "Landscape",
    "ScenarioConfig",
    "build_interaction_matrix",
    "generate_landscape",
    "parse_config",
    "run_grid",
    "run_scenario",
    "run_single",
]

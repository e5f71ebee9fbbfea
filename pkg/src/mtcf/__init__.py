from .version import __version__
from .cli import main as cli_main
from .algebra import CycloNum, CycloMatrix, FinAbGroup, QuadraticForm, GroupAutomorphism, InvolutiveMetricGroup
from .category import (
    FusionRing, ModularData, GIInput, GILabel, LevelWeight,
    build_gi_data, validate_modular, verlinde_fusion, enumerate_small, rank28_input,
    psu3_component, psu3_data, find_ring_iso, match_modular_data,
)
from .pipelines import run_pipeline_theorem, run_pipeline_sixteen
from .system.param import Settings

__all__ = [
    "CycloNum", "CycloMatrix",
    "FinAbGroup", "QuadraticForm", "GroupAutomorphism", "InvolutiveMetricGroup",
    "FusionRing", "ModularData", "GIInput", "GILabel", "LevelWeight",
    "build_gi_data", "validate_modular", "verlinde_fusion", "enumerate_small", "rank28_input",
    "psu3_component", "psu3_data", "find_ring_iso", "match_modular_data",
    "run_pipeline_theorem", "run_pipeline_sixteen",
    "Settings",
    "__version__",
]

def main():
    cli_main()

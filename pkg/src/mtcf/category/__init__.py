from .fusion import FusionRing
from .modular import ModularData, NotModularError, validate_modular, verlinde_fusion, central_charge
from .gidata import GIInput, GILabel, GIConditionError, build_gi_data, enumerate_small, rank28_input
from .condense import CondensationReport, NoSolutionError, SearchBudgetExceeded
from .su3k import LevelWeight, su3_simples, su3_fusion, psu3_component, psu3_data
from .rings import find_ring_iso, match_modular_data

__all__ = [
    "FusionRing",
    "ModularData", "NotModularError", "validate_modular", "verlinde_fusion", "central_charge",
    "GIInput", "GILabel", "GIConditionError", "build_gi_data", "enumerate_small", "rank28_input",
    "CondensationReport", "NoSolutionError", "SearchBudgetExceeded",
    "LevelWeight", "su3_simples", "su3_fusion", "psu3_component", "psu3_data",
    "find_ring_iso", "match_modular_data",
]

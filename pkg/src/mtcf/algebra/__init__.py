from .cyclo import CycloNum, root_of_unity, root_of_unity_at, galois_apply, conjugate, sqrt_int, format_cyclo
from .matrix import CycloMatrix
from .premetric import (
    FinAbGroup, QuadraticForm, GroupAutomorphism, InvolutiveMetricGroup,
    bicharacter, gauss_sum, nondegenerate, premetric_iso,
)

__all__ = [
    "CycloNum", "root_of_unity", "root_of_unity_at", "galois_apply", "conjugate", "sqrt_int", "format_cyclo",
    "CycloMatrix",
    "FinAbGroup", "QuadraticForm", "GroupAutomorphism", "InvolutiveMetricGroup",
    "bicharacter", "gauss_sum", "nondegenerate", "premetric_iso",
]

"""Non-binary covering codes for low-access quantized linear computation."""

from .complexity import (
    APDecomposition,
    CoefficientSet,
    lemma1_construction,
    p_complexity,
    universal_protocol,
    verify_decomposition,
)
from .constructions import ReducedCode, catalog, feasible_pair, reduce_code
from .gf_codes import (
    CoveringCode,
    FpVector,
    amalgamated_direct_sum,
    covering_radius,
    hamming_distance,
    is_acceptable,
    is_normal,
    norm,
)
from .protocol import (
    AccessPlan,
    Progression,
    StorageSystem,
    binary_baseline,
    encode,
    execute_plan,
    generic_protocol,
    plan_access,
    shift_protocol,
)

__all__ = [
    "APDecomposition", "AccessPlan", "CoefficientSet", "CoveringCode", "FpVector", "Progression",
    "ReducedCode", "StorageSystem", "amalgamated_direct_sum", "binary_baseline", "catalog",
    "covering_radius", "encode", "execute_plan", "feasible_pair", "generic_protocol",
    "hamming_distance", "is_acceptable", "is_normal", "lemma1_construction", "norm",
    "p_complexity", "plan_access", "reduce_code", "shift_protocol", "universal_protocol",
    "verify_decomposition",
]

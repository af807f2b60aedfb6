from .complete_edge import CompleteEdgeResult, complete_edge_reduction, is_complete_edge
from .delay import DelayResult, delay, linkage_class
from .product import product
from .reduction import (
    HrReport,
    ReductionResult,
    check_hr,
    is_reducible,
    is_stationary,
    neighborhood,
    reduce,
)

__all__ = [
    "CompleteEdgeResult",
    "DelayResult",
    "HrReport",
    "ReductionResult",
    "check_hr",
    "complete_edge_reduction",
    "delay",
    "is_complete_edge",
    "is_reducible",
    "is_stationary",
    "linkage_class",
    "neighborhood",
    "product",
    "reduce",
]

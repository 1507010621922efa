"""Balanced crown decompositions of vertex-weighted graphs and their applications."""
from .applications import (BcepSolution, BcpSolution, EdgeWeightedGraph, KernelResult, maxmin_bcep, maxmin_bcp,
                           minmax_bcp, wpack_approx, wpack_kernel, wsep_kernel)
from .engine import BalancedCrownDecomposition, CapHit, Completed, find_bcd, outer_index_cvp, validate_bcd
from .expansion import BipartiteWeighted, balanced_expansion, fractional_balanced_expansion, weighted_expansion
from .graph import ConnectedPartition, WeightedGraph, connected_components, induced_weight, spanning_tree
from .netflow import CostFlowNetwork, FlowNetwork, max_flow, min_cost_flow
from .oracle import oracle_maxmin, oracle_minmax, oracle_wpack, oracle_wsep, verify_result
from .partition import biconnected_split, divide_or_cut, st_ordering, validate_cvp

__version__ = "0.1.0"

__all__ = [
    "BalancedCrownDecomposition", "BcepSolution", "BcpSolution", "BipartiteWeighted", "CapHit", "Completed",
    "ConnectedPartition", "CostFlowNetwork", "EdgeWeightedGraph", "FlowNetwork", "KernelResult", "WeightedGraph",
    "balanced_expansion", "biconnected_split", "connected_components", "divide_or_cut", "find_bcd",
    "fractional_balanced_expansion", "induced_weight", "max_flow", "maxmin_bcep", "maxmin_bcp", "min_cost_flow",
    "minmax_bcp", "oracle_maxmin", "oracle_minmax", "oracle_wpack", "oracle_wsep", "outer_index_cvp",
    "spanning_tree", "st_ordering", "validate_bcd", "validate_cvp", "verify_result", "weighted_expansion",
    "wpack_approx", "wpack_kernel", "wsep_kernel",
]

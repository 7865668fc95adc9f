"""Structural analyses of game graphs: cuts, robustness, percolation statistics, bounds."""
from .bounds import (DensityReport, IsolatedVertexBound, WelfareBoundCheck, density_report,
                     isolated_vertex_bound, welfare_bound_check, welfare_lower_bound)
from .mincut import CutDecomposition, CutNode, MinCut, global_min_cut, min_cut_decompose
from .percolation import (ComponentSizeTail, component_size_tail, connectivity_probability,
                          expected_largest_component, infection_certainty, percolation_labels)
from .robustness import RobustnessCertificate, edge_robustness, robust_edge_exists

__all__ = [
    "ComponentSizeTail", "CutDecomposition", "CutNode", "DensityReport", "IsolatedVertexBound",
    "MinCut", "RobustnessCertificate", "WelfareBoundCheck", "component_size_tail",
    "connectivity_probability", "density_report", "edge_robustness", "expected_largest_component",
    "global_min_cut", "infection_certainty", "isolated_vertex_bound", "min_cut_decompose",
    "percolation_labels", "robust_edge_exists", "welfare_bound_check", "welfare_lower_bound",
]

"""Pisot beta-numeration tilings."""

from .boundary import build_boundary_graph, decide_tiling, export_dot, pruned_quadratic_graph
from .dynamics import parry_data, t_preimages, t_step
from .errors import BetaTilesError
from .field import FieldElement, make_beta
from .natext import covering_degree_estimate, domain_slices, nat_ext_contains
from .periodicity import (
    check_W,
    exclusive_point,
    gamma_lower_bound_thm5,
    gamma_quadratic,
    gamma_scan,
    is_purely_periodic,
    pur_set_integral,
)
from .tiles import hausdorff_defect, integral_cloud, periodic_patch, rauzy_cloud

__all__ = [
    "BetaTilesError",
    "FieldElement",
    "build_boundary_graph",
    "check_W",
    "covering_degree_estimate",
    "decide_tiling",
    "domain_slices",
    "exclusive_point",
    "export_dot",
    "gamma_lower_bound_thm5",
    "gamma_quadratic",
    "gamma_scan",
    "hausdorff_defect",
    "integral_cloud",
    "is_purely_periodic",
    "make_beta",
    "nat_ext_contains",
    "parry_data",
    "periodic_patch",
    "pruned_quadratic_graph",
    "pur_set_integral",
    "rauzy_cloud",
    "t_preimages",
    "t_step",
]

"""Colin de Verdiere matrices of convex polytopes from the Hessian of volume."""

from .cdv import check_cdv, gap_bound, kernel_match, spectrum
from .errors import CdvError
from .generate import box, crosspolytope, cube, generate, random_hull, simplex, suite_instances
from .graph import Graph
from .hessian import cdv_matrix, hessian_fd, volume_gradient, volume_hessian
from .lovasz import compare_lovasz_hessian, lovasz_matrix, rigidity_check
from .mixed import minkowski_check, mixed_volumes, refines
from .polytope import HPolytope, build_polytope, codim2_volume, facet_volume, polar_from_points, volume
from .reconstruct import assemble, nullspace_normals, roundtrip_check

__version__ = "0.1.0"

__all__ = [
    "CdvError", "Graph", "HPolytope",
    "assemble", "box", "build_polytope", "cdv_matrix", "check_cdv", "codim2_volume",
    "compare_lovasz_hessian", "crosspolytope", "cube", "facet_volume", "gap_bound",
    "generate", "hessian_fd", "kernel_match", "lovasz_matrix", "minkowski_check",
    "mixed_volumes", "nullspace_normals", "polar_from_points", "random_hull", "refines",
    "rigidity_check", "roundtrip_check", "simplex", "spectrum", "suite_instances",
    "volume", "volume_gradient", "volume_hessian",
]

"""Tolerances and backend selection, overridable from the environment.

``CDV_TOL_GEOM`` and ``CDV_TOL_RANK`` replace the relative factors of the
geometric and rank tolerances. ``CDV_NUMBA=0`` forces the pure-numpy kernels.
"""

import os


def _env_float(name, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    return float(raw)


TOL_GEOM_FACTOR = _env_float("CDV_TOL_GEOM", 1e-9)
TOL_RANK_FACTOR = _env_float("CDV_TOL_RANK", 1e-8)

USE_NUMBA = os.environ.get("CDV_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


def tol_geom(normals, support):
    """Absolute tolerance in length units, scaled by the largest facet distance."""
    import numpy as np

    h = np.abs(support) / np.linalg.norm(normals, axis=1)
    return TOL_GEOM_FACTOR * (1.0 + float(h.max(initial=0.0)))


def tolerances():
    return {"tolGeomFactor": TOL_GEOM_FACTOR, "tolRankFactor": TOL_RANK_FACTOR}

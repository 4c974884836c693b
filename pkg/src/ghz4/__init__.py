"""GHZ-symmetric four-qubit states, SLOCC class regions and their verification."""

from __future__ import annotations

from .symstate import (ParamPoint, SymmetricState, alphas_from_yz, from_point, hs_distance,
                       is_physical, make_state, mirror_conjugate, to_density, to_point, twirl,
                       vertices)
from .slocc import (ClassParams, LocalOp, SloccClass, UnsupportedClassError, apply_local,
                    degenerate_representative, representative)
from .boundaries import (BoundaryResult, effective_xmax, xmax_l031031, xmax_la2031, xmax_la2b2,
                         xmax_la4, xmax_labc2)
from .oracle import OptimConfig, OracleResult, maximize_x, residuals_la2031, stationarity_check_la2b2
from .region import (Hull, InclusionReport, SurfaceGrid, check_hierarchy, convex_hull,
                     hull_contains, sample_surface, yz_grid)

__version__ = "0.1.0"

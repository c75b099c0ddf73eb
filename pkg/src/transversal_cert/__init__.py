"""Certified campaigns bounding the three-set transversal blow-up of disks.

The package establishes, by exhaustive pruning over angle cubes with
explicit margins, that every finite family of unit disks in which any
three members have a common line transversal admits a line meeting all
members once each disk is inflated by a factor of at most 1.645; a
pentagon witness shows the factor cannot beat the golden ratio.
"""
from .geom import (
    DELTA_FP,
    GOLDEN_RATIO,
    AffineMap,
    DegenerateInput,
    Ellipse,
    Point2,
    PointSet,
    convex_hull,
    ellipse_points,
    min_area_ellipse,
    satisfies_T,
    satisfies_T3,
    width,
)
from .john import (
    AngleTuple,
    F,
    NotOrdered,
    TriState,
    delta_determinant,
    five_point_values,
    four_point_john_residual,
    is_john_five,
    max_arc_gap,
    simplex_condition,
)
from .region import (
    OuterApprox,
    RegionQuery,
    RegionStatus,
    outer_approx,
    region_satisfies_T,
    region_width_upper_bound,
)
from .search import (
    AngleCube,
    CampaignConfig,
    Certificate,
    ConfigError,
    PruneReason,
    initial_cubes,
    prune_grid_b,
    prune_lemma15,
    run_campaign,
    subdivide,
)
from .certify import (
    BoundReport,
    InconsistentInputs,
    PairGrid,
    assemble_bound,
    enumerate_pair_grid,
    pentagon_lower_bound,
    verify_part_a,
)

__version__ = "0.1.0"

__all__ = [
    "DELTA_FP",
    "GOLDEN_RATIO",
    "AffineMap",
    "AngleCube",
    "AngleTuple",
    "BoundReport",
    "CampaignConfig",
    "Certificate",
    "ConfigError",
    "DegenerateInput",
    "Ellipse",
    "F",
    "InconsistentInputs",
    "NotOrdered",
    "OuterApprox",
    "PairGrid",
    "Point2",
    "PointSet",
    "PruneReason",
    "RegionQuery",
    "RegionStatus",
    "TriState",
    "assemble_bound",
    "convex_hull",
    "delta_determinant",
    "ellipse_points",
    "enumerate_pair_grid",
    "five_point_values",
    "four_point_john_residual",
    "initial_cubes",
    "is_john_five",
    "max_arc_gap",
    "min_area_ellipse",
    "outer_approx",
    "pentagon_lower_bound",
    "prune_grid_b",
    "prune_lemma15",
    "region_satisfies_T",
    "region_width_upper_bound",
    "run_campaign",
    "satisfies_T",
    "satisfies_T3",
    "simplex_condition",
    "subdivide",
    "verify_part_a",
    "width",
]

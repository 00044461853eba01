"""Exact distributions and rearrangement-invariant norms of discrepancy functions."""
from .discrepancy import Region
from .distribution import DistributionProfile, dist_D, dist_Dtilde, grid_profile_D, grid_profile_Dtilde
from .piecewise import M1, PiecewisePoly, bspline
from .pointset import GridKind, PointSet, centered_grid, classify, random_set, translated_grid

__all__ = [
    "DistributionProfile",
    "GridKind",
    "M1",
    "PiecewisePoly",
    "PointSet",
    "Region",
    "bspline",
    "centered_grid",
    "classify",
    "dist_D",
    "dist_Dtilde",
    "grid_profile_D",
    "grid_profile_Dtilde",
    "random_set",
    "translated_grid",
]

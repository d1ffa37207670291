"""Physical systems assembled from the tractor machinery: mass/weight
calculators, wave systems for spins 0 through s, the fermionic systems, and
the conformal-isometry (Killing) tractors."""

from .masses import (
    bf_bound,
    classify_weight,
    depth_mass,
    mass_from_weight,
    residual_gauge_weights,
)

__all__ = [
    "mass_from_weight",
    "bf_bound",
    "classify_weight",
    "depth_mass",
    "residual_gauge_weights",
]

"""
Dual-graph combinatorics - pointed dual and spanning-forest weights.
"""

from .forest_oracle import (
    PointedDual,
    SubgraphFamilyWeight,
    enumerate_family_h1,
    enumerate_family_h2,
    gram_inverse_combinatorial,
    iota,
    pointed_dual,
    stationary_from_forests,
)

__all__ = [
    "PointedDual",
    "SubgraphFamilyWeight",
    "pointed_dual",
    "enumerate_family_h1",
    "enumerate_family_h2",
    "iota",
    "gram_inverse_combinatorial",
    "stationary_from_forests",
]

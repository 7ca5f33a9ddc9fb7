"""Uniform covering spaces of finite scale towers.

A scale tower is a finite point set with a nested chain of entourages.
The package computes fundamental groups of the level Rips complexes, the
truncated Čech group, covers GP(X, x₀)/H for finite-index subgroups, and
checks the covering-map axioms on concrete maps.
"""

__version__ = "0.1.0"

from .core import (Chain, Entourage, ScaleTower, TowerError, dump_tower, from_metric,
                   loads_tower, make_chain)
from .cover import (CoverSpace, TowerMap, are_covers_equivalent, build_cover, image_subgroup,
                    lift_chain, lift_thread)
from .gp import CechGroup, SubgroupSpec, Thread, cech_group, closure_member, make_thread

__all__ = [
    "CechGroup", "Chain", "CoverSpace", "Entourage", "ScaleTower", "SubgroupSpec", "Thread",
    "TowerError", "TowerMap", "are_covers_equivalent", "build_cover", "cech_group",
    "closure_member", "dump_tower", "from_metric", "image_subgroup", "lift_chain",
    "lift_thread", "loads_tower", "make_chain", "make_thread", "__version__",
]

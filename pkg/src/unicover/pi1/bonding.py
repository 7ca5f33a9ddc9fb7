"""Inclusion-induced maps between level fundamental groups."""

from __future__ import annotations

from dataclasses import dataclass

from ..core import ScaleTower, TowerError, build_skeleton
from .engine import DEFAULT_BUDGET, Decision, LevelGroup
from .presentation import Presentation, present_pi1, seq_word
from .words import Word, substitute


@dataclass(frozen=True)
class BondingHom:
    """φ: π₁(R(X, E_fine)) → π₁(R(X, E_coarse)) on generators.

    Fine generator (u, v) goes to the coarse word of the chain
    root→u, v→root, where the root paths are those of the fine forest.
    """

    from_level: int
    to_level: int
    images: dict
    source: Presentation
    target: Presentation

    def __call__(self, w: Word) -> Word:
        return substitute(w, self.images)

    def check_relators(self, target_group: LevelGroup | None = None,
                       budget: int = DEFAULT_BUDGET) -> list[Decision]:
        g = target_group or LevelGroup(self.target)
        return [g.is_trivial(self(r), budget) for r in self.source.relators]


def bonding_from(fine: Presentation, coarse: Presentation) -> BondingHom:
    images = {}
    for t in range(1, fine.rank + 1):
        images[t] = seq_word(fine.generator_loop(t), coarse)
    return BondingHom(fine.level, coarse.level, images, fine, coarse)


def bonding_hom(tower: ScaleTower, fine: int, coarse: int, basepoint: int) -> BondingHom:
    tower.check_level(fine)
    tower.check_level(coarse)
    if fine <= coarse:
        raise TowerError(f"fine level {fine} must be deeper than coarse level {coarse}")
    tower.check_point(basepoint)
    pf = present_pi1(build_skeleton(tower, fine), basepoint)
    pc = present_pi1(build_skeleton(tower, coarse), basepoint)
    return bonding_from(pf, pc)

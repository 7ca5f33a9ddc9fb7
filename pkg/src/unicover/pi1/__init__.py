"""Fundamental groups of Rips 2-skeletons and the group-theoretic oracles."""

from __future__ import annotations

from ..core import Chain, TowerError
from .abelian import Abelianization, abelian_invariants, smith_diagonal
from .bonding import BondingHom, bonding_from, bonding_hom
from .cosets import CosetTable, Overflow, expand_table, todd_coxeter
from .engine import (DEFAULT_BUDGET, DEFAULT_MAX_COSETS, Decision, LevelGroup, Tri,
                     all_of, is_trivial_word, replay_trace, rewrite_search)
from .presentation import (ComponentError, Presentation, chain_to_word, present_pi1,
                           seq_word)
from .stallings import FoldedGraph, labelled_isomorphic, member
from .tietze import SimplifiedGroup
from .words import (Word, cyclic_reduce, format_word, free_reduce, inverse, mul,
                    parse_word, power, substitute, words_up_to)


class InvalidOracleUse(ValueError):
    """An exact oracle was asked about a presentation outside its domain."""


def abelian_rank(pres: Presentation) -> tuple[int, list[int]]:
    """(free rank, torsion) of the abelianization, via Smith normal form."""
    return Abelianization(list(range(1, pres.rank + 1)), list(pres.relators)).invariants()


def are_chains_e_homotopic(a: Chain, b: Chain, pres: Presentation,
                           budget: int = DEFAULT_BUDGET) -> Decision:
    if a.level != b.level:
        raise TowerError("chains at different levels")
    if a.start != b.start or a.end != b.end:
        raise TowerError("E-homotopy is relative to endpoints; endpoints differ")
    w = mul(inverse(chain_to_word(a, pres)), chain_to_word(b, pres))
    return is_trivial_word(w, pres, budget)


def stallings_member(subgroup, w: Word, pres: Presentation | None = None) -> bool:
    """Exact membership in a free group; refuses presentations with relators."""
    if pres is not None and not pres.is_free:
        raise InvalidOracleUse("Stallings membership needs a relator-free presentation")
    return member(subgroup, w)


def coset_enumerate(pres: Presentation, subgroup, max_cosets: int = DEFAULT_MAX_COSETS,
                    gens=None):
    """Coset table of ⟨subgroup⟩ over the original generators, or Overflow.

    Enumeration runs on the Tietze-simplified presentation; the table is
    then re-expressed on every requested generator.
    """
    group = LevelGroup(pres, gens)
    s = group.simplified
    table = todd_coxeter(s.kept, s.relators, [s.reduce(h) for h in subgroup], max_cosets)
    if isinstance(table, Overflow):
        return table
    return expand_table(table, group.gens, s.subst)


__all__ = [
    "Abelianization", "BondingHom", "ComponentError", "CosetTable", "Decision",
    "FoldedGraph", "InvalidOracleUse", "LevelGroup", "Overflow", "Presentation",
    "SimplifiedGroup", "Tri", "Word", "abelian_invariants", "abelian_rank", "all_of",
    "are_chains_e_homotopic", "bonding_from", "bonding_hom", "chain_to_word",
    "coset_enumerate", "cyclic_reduce", "format_word", "free_reduce", "inverse",
    "is_trivial_word", "labelled_isomorphic", "mul", "parse_word", "power",
    "present_pi1", "replay_trace", "rewrite_search", "seq_word", "smith_diagonal",
    "stallings_member", "substitute", "todd_coxeter", "words_up_to",
    "DEFAULT_BUDGET", "DEFAULT_MAX_COSETS",
]

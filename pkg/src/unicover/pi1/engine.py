"""Budgeted word problem and subgroup membership.

Verdicts are three-valued.  ``No`` is only ever backed by a free
presentation or a nonzero abelian image; ``Yes`` always carries something
that can be replayed (a free reduction, a Tietze substitution, a rewrite
trace, or a closed coset table).
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from enum import Enum

from .cosets import CosetTable, Overflow, todd_coxeter
from .presentation import Presentation
from .stallings import FoldedGraph
from .tietze import SimplifiedGroup
from .words import (Word, canonical_cyclic, cyclic_reduce, free_reduce, inverse,
                    rotations)

DEFAULT_BUDGET = 100_000
DEFAULT_MAX_COSETS = 5_000


class Tri(str, Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Decision:
    verdict: Tri
    certificate: str
    evidence: dict = field(default_factory=dict)

    @property
    def yes(self) -> bool:
        return self.verdict is Tri.YES

    @property
    def no(self) -> bool:
        return self.verdict is Tri.NO

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.value, "certificate": self.certificate,
                "evidence": self.evidence}


def all_of(decisions) -> Tri:
    """Conjunction: No dominates Unknown dominates Yes."""
    ds = [d.verdict if isinstance(d, Decision) else d for d in decisions]
    if any(d is Tri.NO for d in ds):
        return Tri.NO
    if any(d is Tri.UNKNOWN for d in ds):
        return Tri.UNKNOWN
    return Tri.YES


# ---------------------------------------------------------------------------
# rewrite search

def _relator_table(relators):
    table = []
    for ridx, r in enumerate(relators):
        r = cyclic_reduce(r)
        if not r:
            continue
        for sign, base in ((1, r), (-1, inverse(r))):
            for rot, rho in enumerate(rotations(base)):
                table.append((ridx, sign, rot, rho))
    by_first: dict[int, list] = {}
    for entry in table:
        by_first.setdefault(entry[3][0], []).append(entry)
    return by_first


def apply_move(w: Word, move, relators) -> Word:
    """Rotate ``w`` by ``p``, replace the matched relator prefix by the inverse remainder."""
    p, ridx, sign, rot, m = move
    r = cyclic_reduce(relators[ridx])
    base = r if sign == 1 else inverse(r)
    rho = base[rot:] + base[:rot]
    wr = w[p:] + w[:p]
    if wr[:m] != rho[:m]:
        raise ValueError("move does not match the word")
    return canonical_cyclic(cyclic_reduce(inverse(rho[m:]) + wr[m:]))


def rewrite_search(w: Word, relators, budget: int = DEFAULT_BUDGET, slack: int | None = None):
    """Best-first search for a relator-rewrite sequence from ``w`` to the empty word.

    Returns ``(trace, nodes)``; ``trace`` is None when the budget runs out.
    Each trace entry is ``(move, word_after)``.
    """
    start = canonical_cyclic(cyclic_reduce(w))
    if not start:
        return [], 0
    by_first = _relator_table(relators)
    if slack is None:
        slack = max((len(r) for r in relators), default=0)
    max_len = len(start) + slack
    parent = {start: None}
    counter = itertools.count()
    heap = [(len(start), next(counter), start)]
    nodes = 0
    while heap and nodes < budget:
        _, _, cur = heapq.heappop(heap)
        nodes += 1
        for p in range(len(cur)):
            wr = cur[p:] + cur[:p]
            for ridx, sign, rot, rho in by_first.get(wr[0], ()):
                m = 0
                while m < len(rho) and m < len(wr) and wr[m] == rho[m]:
                    m += 1
                for mm in range(m, 0, -1):
                    new = canonical_cyclic(cyclic_reduce(inverse(rho[mm:]) + wr[mm:]))
                    if len(new) > max_len or new in parent:
                        continue
                    parent[new] = (cur, (p, ridx, sign, rot, mm))
                    if not new:
                        trace = []
                        node = new
                        while parent[node] is not None:
                            prev, move = parent[node]
                            trace.append((move, node))
                            node = prev
                        return trace[::-1], nodes
                    heapq.heappush(heap, (len(new), next(counter), new))
    return None, nodes


def replay_trace(w: Word, relators, trace) -> bool:
    cur = canonical_cyclic(cyclic_reduce(w))
    for move, after in trace:
        try:
            cur = apply_move(cur, move, relators)
        except (ValueError, IndexError):
            return False
        if cur != tuple(after):
            return False
    return cur == ()


# ---------------------------------------------------------------------------

class LevelGroup:
    """A level presentation with its simplification and cached oracles.

    ``gens`` restricts to a union of components (normally the basepoint's).
    """

    def __init__(self, pres: Presentation, gens=None):
        self.pres = pres
        self.gens = sorted(gens) if gens is not None else list(range(1, pres.rank + 1))
        full = SimplifiedGroup.of(pres)
        self.simplified = full if gens is None else full.restricted(gens)
        self._folds: dict = {}
        self._tables: dict = {}

    @property
    def is_free(self) -> bool:
        return self.simplified.is_free

    @property
    def free_rank(self) -> int | None:
        return len(self.simplified.kept) if self.is_free else None

    def reduce(self, w: Word) -> Word:
        return self.simplified.reduce(w)

    def is_trivial(self, w: Word, budget: int = DEFAULT_BUDGET) -> Decision:
        w = free_reduce(w)
        if not w:
            return Decision(Tri.YES, "free-reduction")
        if self.pres.is_free:
            return Decision(Tri.NO, "free", {"word": list(w)})
        u = self.reduce(w)
        if self.simplified.is_free:
            if not u:
                return Decision(Tri.YES, "tietze", {"substituted": []})
            return Decision(Tri.NO, "free-tietze", {"substituted": list(u)})
        if not self.simplified.abelianization.is_zero(u):
            return Decision(Tri.NO, "abelian", {"substituted": list(u)})
        if not u:
            return Decision(Tri.YES, "tietze", {"substituted": []})
        trace, nodes = rewrite_search(u, self.simplified.relators, budget)
        if trace is not None:
            return Decision(Tri.YES, "rewrite", {
                "substituted": list(u), "nodes": nodes,
                "trace": [[list(m), list(a)] for m, a in trace]})
        return Decision(Tri.UNKNOWN, "budget", {"nodes": nodes, "budget": budget})

    def replay(self, w: Word, d: Decision) -> bool:
        """Re-derive the verdict of ``d`` from its certificate alone."""
        w = free_reduce(w)
        c = d.certificate
        if c == "free-reduction":
            return not w
        if c == "free":
            return self.pres.is_free and bool(w)
        u = self.reduce(w)
        if c == "tietze":
            return not u
        if c == "free-tietze":
            return self.simplified.is_free and bool(u)
        if c == "abelian":
            return not self.simplified.abelianization.is_zero(u)
        if c == "rewrite":
            trace = [(tuple(m), tuple(a)) for m, a in d.evidence["trace"]]
            return replay_trace(u, self.simplified.relators, trace)
        return d.verdict is Tri.UNKNOWN

    def equal(self, a: Word, b: Word, budget: int = DEFAULT_BUDGET) -> Decision:
        return self.is_trivial(free_reduce(tuple(a) + inverse(b)), budget)

    # -- subgroups ----------------------------------------------------------

    def folded(self, subgroup) -> FoldedGraph:
        key = tuple(free_reduce(h) for h in subgroup)
        if key not in self._folds:
            self._folds[key] = FoldedGraph([self.reduce(h) for h in key], self.simplified.kept)
        return self._folds[key]

    def coset_table(self, subgroup, max_cosets: int = DEFAULT_MAX_COSETS):
        key = (tuple(free_reduce(h) for h in subgroup), max_cosets)
        if key not in self._tables:
            s = self.simplified
            self._tables[key] = todd_coxeter(s.kept, s.relators,
                                             [self.reduce(h) for h in key[0]], max_cosets)
        return self._tables[key]

    def member(self, subgroup, w: Word, max_cosets: int = DEFAULT_MAX_COSETS) -> Decision:
        """Is ``w`` in the subgroup generated by ``subgroup``?"""
        u = self.reduce(w)
        if self.is_free:
            ok = self.folded(subgroup).contains(u)
            return Decision(Tri.YES if ok else Tri.NO, "stallings")
        table = self.coset_table(subgroup, max_cosets)
        if isinstance(table, CosetTable):
            ok = table.contains(u)
            return Decision(Tri.YES if ok else Tri.NO, "coset-table", {"index": table.index})
        if not u:
            return Decision(Tri.YES, "tietze")
        return Decision(Tri.UNKNOWN, "coset-overflow", {"max_cosets": max_cosets})


def is_trivial_word(w: Word, pres: Presentation, budget: int = DEFAULT_BUDGET) -> Decision:
    return LevelGroup(pres).is_trivial(w, budget)

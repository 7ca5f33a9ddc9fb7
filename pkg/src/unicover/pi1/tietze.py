"""Tietze elimination of generators that occur once in some relator."""

from __future__ import annotations

import heapq

from .abelian import Abelianization
from .presentation import Presentation
from .words import Word, canonical_cyclic, cyclic_reduce, free_reduce, inverse, substitute


class SimplifiedGroup:
    """A presentation after greedy generator elimination.

    ``kept`` generators keep their original indices.  ``subst`` maps every
    original generator (eliminated or not) to a word over ``kept`` that is
    equal to it in the group, so ``reduce`` is a homomorphism onto the
    simplified presentation.  Elimination is deterministic: shortest
    relator first, then lowest original relator index, then lowest
    generator.
    """

    def __init__(self, gens, relators):
        gens = sorted(set(gens))
        rels = [cyclic_reduce(r) for r in relators]
        occ: dict[int, set] = {}
        heap = []
        version = [0] * len(rels)
        for idx, r in enumerate(rels):
            for x in r:
                occ.setdefault(abs(x), set()).add(idx)
            if r:
                heap.append((len(r), idx, 0))
        heapq.heapify(heap)
        alive = set(gens)
        dead_rel = [not r for r in rels]
        order = []
        while heap:
            ln, idx, ver = heapq.heappop(heap)
            if dead_rel[idx] or ver != version[idx]:
                continue
            r = rels[idx]
            counts: dict[int, int] = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            once = sorted(g for g, c in counts.items() if c == 1)
            if not once:
                # dormant until a substitution rewrites it
                continue
            g = once[0]
            t = next(i for i, x in enumerate(r) if abs(x) == g)
            rot = r[t:] + r[:t]
            rest = rot[1:]
            value = free_reduce(inverse(rest) if rot[0] > 0 else tuple(rest))
            order.append((g, value))
            alive.discard(g)
            dead_rel[idx] = True
            for x in r:
                occ.get(abs(x), set()).discard(idx)
            step = {g: value}
            for j in sorted(occ.pop(g, ())):
                if dead_rel[j]:
                    continue
                old = rels[j]
                new = cyclic_reduce(substitute(old, step))
                for x in old:
                    occ.get(abs(x), set()).discard(j)
                for x in new:
                    occ.setdefault(abs(x), set()).add(j)
                rels[j] = new
                version[j] += 1
                if new:
                    heapq.heappush(heap, (len(new), j, version[j]))
                else:
                    dead_rel[j] = True
        subst: dict[int, Word] = {}
        for g, value in reversed(order):
            subst[g] = free_reduce(substitute(value, subst))
        self.original = gens
        self.kept = sorted(alive)
        self.relators = []
        seen = set()
        for r, d in zip(rels, dead_rel):
            if d:
                continue
            # a relator, its rotations and its inverse all say the same thing
            key = min(canonical_cyclic(r), canonical_cyclic(inverse(r)))
            if key not in seen:
                seen.add(key)
                self.relators.append(r)
        self.subst = subst
        self._abel = None

    @classmethod
    def of(cls, pres: Presentation, gens=None) -> "SimplifiedGroup":
        if gens is None:
            return cls(range(1, pres.rank + 1), pres.relators)
        gs = set(gens)
        rels = [r for r in pres.relators if r and all(abs(x) in gs for x in r)]
        return cls(gs, rels)

    @property
    def is_free(self) -> bool:
        return not self.relators

    def reduce(self, w: Word) -> Word:
        return substitute(w, self.subst)

    @property
    def abelianization(self) -> Abelianization:
        if self._abel is None:
            self._abel = Abelianization(self.kept, self.relators)
        return self._abel

    def restricted(self, gens) -> "SimplifiedGroup":
        """Sub-presentation on the kept generators among ``gens``.

        Valid when ``gens`` is a union of components: relators never mix
        components, so the free factor splits off cleanly.
        """
        gs = set(gens)
        out = object.__new__(SimplifiedGroup)
        out.original = sorted(gs)
        out.kept = [g for g in self.kept if g in gs]
        out.relators = [r for r in self.relators if all(abs(x) in gs for x in r)]
        out.subst = {g: w for g, w in self.subst.items() if g in gs}
        out._abel = None
        return out

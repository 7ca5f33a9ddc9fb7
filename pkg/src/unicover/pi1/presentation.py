"""Edge-path group presentations of Rips 2-skeletons."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..core import Chain, RipsSkeleton, TowerError
from .words import Word, cyclic_reduce, format_word, free_reduce


class ComponentError(TowerError):
    """A chain leaves the basepoint's component, so no loop class exists."""


@dataclass(frozen=True)
class Presentation:
    """π₁ of a Rips 2-skeleton relative to a fixed spanning forest.

    ``parent[v]`` is ``-1`` at roots.  Generator ``i`` (1-based) is the
    oriented edge ``generators[i-1] = (u, v)`` with ``u < v``; traversing it
    from ``u`` to ``v`` reads the letter ``+i``.  Forest edges read nothing.
    """

    level: int
    basepoint: int
    parent: tuple
    generators: tuple
    relators: tuple
    component_of: tuple
    triangles: tuple = ()
    n_edges: int = 0
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {e: t + 1 for t, e in enumerate(self.generators)})

    @property
    def n_points(self) -> int:
        return len(self.parent)

    @property
    def n_components(self) -> int:
        return len(set(self.component_of))

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def is_free(self) -> bool:
        return all(len(r) == 0 for r in self.relators)

    def generator_of(self, a: int, b: int) -> int | None:
        return self._index.get((a, b) if a < b else (b, a))

    def is_forest_edge(self, a: int, b: int) -> bool:
        return self.parent[a] == b or self.parent[b] == a

    def step_word(self, a: int, b: int) -> Word:
        if a == b or self.is_forest_edge(a, b):
            return ()
        g = self.generator_of(a, b)
        if g is None:
            raise TowerError(f"({a},{b}) is not an edge at level {self.level}")
        return (g,) if a < b else (-g,)

    def root_path(self, v: int) -> list[int]:
        """Forest path from the root of ``v``'s component to ``v``."""
        path = [v]
        while self.parent[path[-1]] != -1:
            path.append(self.parent[path[-1]])
        return path[::-1]

    def component_generators(self, v: int) -> list[int]:
        c = self.component_of[v]
        return [t + 1 for t, (a, _) in enumerate(self.generators) if self.component_of[a] == c]

    def generator_loop(self, g: int) -> list[int]:
        """Chain root -> u -> v -> root that reads exactly ``+g``."""
        u, v = self.generators[g - 1]
        return self.root_path(u) + self.root_path(v)[::-1]

    def dump(self) -> str:
        lines = [f"level {self.level} basepoint {self.basepoint}",
                 f"generators {self.rank}"]
        for t, (u, v) in enumerate(self.generators, start=1):
            lines.append(f"g{t} = {u}->{v}")
        lines.append(f"relators {sum(1 for r in self.relators if r)}")
        for r in self.relators:
            if r:
                lines.append(format_word(r))
        return "\n".join(lines) + "\n"


def present_pi1(skel: RipsSkeleton, basepoint: int) -> Presentation:
    """Presentation with the BFS forest rooted at ``basepoint``.

    Remaining components are rooted at their least vertex; neighbours are
    visited in ascending id order.
    """
    n = len(skel.vertices)
    if not 0 <= basepoint < n:
        raise TowerError(f"unknown basepoint {basepoint}")
    adj = [[] for _ in range(n)]
    for a, b in skel.edges:
        adj[a].append(b)
        adj[b].append(a)
    for nb in adj:
        nb.sort()
    parent = [None] * n
    comp = [None] * n
    roots = [basepoint] + [v for v in range(n) if v != basepoint]
    cid = 0
    for r in roots:
        if parent[r] is not None:
            continue
        parent[r] = -1
        comp[r] = cid
        queue = deque([r])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if parent[w] is None:
                    parent[w] = v
                    comp[w] = cid
                    queue.append(w)
        cid += 1
    forest = {(min(v, p), max(v, p)) for v, p in enumerate(parent) if p != -1}
    gens = tuple(e for e in skel.edges if e not in forest)
    pres = Presentation(skel.level, basepoint, tuple(parent), gens, (), tuple(comp),
                        tuple(skel.triangles), len(skel.edges))
    rels = tuple(
        cyclic_reduce(pres.step_word(a, b) + pres.step_word(b, c) + pres.step_word(c, a))
        for a, b, c in skel.triangles)
    object.__setattr__(pres, "relators", rels)
    return pres


def chain_to_word(chain: Chain, pres: Presentation, closed: bool = False) -> Word:
    """Reduced word of the edge path of ``chain``.

    Forest edges read the identity, so the raw word already equals the
    closed-up loop (root path, chain, root path back).  With ``closed=True``
    both endpoints must lie in the basepoint's component.
    """
    if chain.level != pres.level:
        raise TowerError(f"chain at level {chain.level}, presentation at level {pres.level}")
    if closed:
        bc = pres.component_of[pres.basepoint]
        for v in (chain.start, chain.end):
            if pres.component_of[v] != bc:
                raise ComponentError(f"point {v} is not in the basepoint's component")
    out = []
    for a, b in zip(chain.seq, chain.seq[1:]):
        out.extend(pres.step_word(a, b))
    return free_reduce(out)


def seq_word(seq, pres: Presentation) -> Word:
    """Like :func:`chain_to_word` for a bare point sequence valid at ``pres.level``."""
    out = []
    for a, b in zip(seq, seq[1:]):
        out.extend(pres.step_word(a, b))
    return free_reduce(out)

"""Stallings folding for finitely generated subgroups of free groups."""

from __future__ import annotations

from collections import deque

from .words import Word, free_reduce


class FoldedGraph:
    """Folded labelled graph of a subgroup, base vertex 0.

    ``out[v]`` maps a signed letter to the target vertex; every edge is
    stored in both directions.
    """

    def __init__(self, words, alphabet=None):
        words = [free_reduce(w) for w in words]
        self.alphabet = sorted(set(alphabet) if alphabet is not None else
                               {abs(x) for w in words for x in w})
        edges = set()
        nxt = 1
        for w in words:
            v = 0
            for t, x in enumerate(w):
                if t == len(w) - 1:
                    u = 0
                else:
                    u, nxt = nxt, nxt + 1
                edges.add((v, x, u) if x > 0 else (u, -x, v))
                v = u
        edges = _fold(edges)
        self.out = {0: {}}
        for v, x, u in edges:
            self.out.setdefault(v, {})[x] = u
            self.out.setdefault(u, {})[-x] = v
        self._relabel()

    def _relabel(self) -> None:
        # BFS numbering from the base with letters in order +1,-1,+2,-2,...
        order = {0: 0}
        queue = deque([0])
        letters = self.letters()
        while queue:
            v = queue.popleft()
            for x in letters:
                u = self.out[v].get(x)
                if u is not None and u not in order:
                    order[u] = len(order)
                    queue.append(u)
        self.out = {order[v]: {x: order[u] for x, u in d.items()}
                    for v, d in self.out.items() if v in order}

    def letters(self) -> list[int]:
        out = []
        for g in self.alphabet:
            out += [g, -g]
        return out

    @property
    def n_vertices(self) -> int:
        return len(self.out)

    @property
    def n_edges(self) -> int:
        return sum(1 for d in self.out.values() for x in d if x > 0)

    @property
    def rank(self) -> int:
        return self.n_edges - self.n_vertices + 1

    def trace(self, w: Word, start: int = 0):
        v = start
        for x in w:
            v = self.out[v].get(x)
            if v is None:
                return None
        return v

    def contains(self, w: Word) -> bool:
        return self.trace(free_reduce(w)) == 0

    def is_complete(self, alphabet=None) -> bool:
        """Every vertex has every letter: the subgroup has finite index."""
        gens = self.alphabet if alphabet is None else sorted(alphabet)
        return all(x in d and -x in d for d in self.out.values() for x in gens)

    def core(self) -> dict[int, dict[int, int]]:
        """Drop hanging trees, ignoring the base vertex."""
        out = {v: dict(d) for v, d in self.out.items()}
        changed = True
        while changed:
            changed = False
            for v in list(out):
                if len(out[v]) <= 1 and len(out) > 1:
                    for x, u in out[v].items():
                        out[u].pop(-x, None)
                    del out[v]
                    changed = True
        return out

    def edges(self) -> list[tuple[int, int, int]]:
        return sorted((v, x, u) for v, d in self.out.items() for x, u in d.items() if x > 0)


def _fold(edges: set) -> set:
    """Identify vertices until every vertex has at most one edge per signed letter.

    Vertex 0 always survives a merge, so the base keeps its name.
    """
    while True:
        seen: dict = {}
        merge = None
        for v, x, u in sorted(edges):
            for key, tgt in (((v, x), u), ((u, -x), v)):
                other = seen.get(key)
                if other is None:
                    seen[key] = tgt
                elif other != tgt:
                    merge = (min(other, tgt), max(other, tgt))
                    break
            if merge:
                break
        if merge is None:
            return edges
        keep, drop = merge
        edges = {(keep if v == drop else v, x, keep if u == drop else u) for v, x, u in edges}


def member(subgroup_words, w: Word, alphabet=None) -> bool:
    return FoldedGraph(subgroup_words, alphabet).contains(w)


def labelled_isomorphic(g1: dict, g2: dict, based: bool = False) -> dict | None:
    """Label-preserving isomorphism between two connected deterministic graphs.

    With ``based`` vertex 0 must go to vertex 0.  Returns the vertex map or None.
    """
    if len(g1) != len(g2):
        return None
    if not g1:
        return {}
    if based:
        if 0 not in g1 or 0 not in g2:
            return None
        s1, candidates = 0, [0]
    else:
        s1, candidates = min(g1), sorted(g2)
    for c in candidates:
        m = {s1: c}
        queue = deque([s1])
        ok = True
        while queue and ok:
            v = queue.popleft()
            u = m[v]
            if set(g1[v]) != set(g2[u]):
                ok = False
                break
            for x, v2 in g1[v].items():
                u2 = g2[u][x]
                if v2 not in m:
                    m[v2] = u2
                    queue.append(v2)
                elif m[v2] != u2:
                    ok = False
                    break
        if ok and len(m) == len(g1) and len(set(m.values())) == len(m):
            return m
    return None

"""Todd–Coxeter coset enumeration, HLT strategy."""

from __future__ import annotations

import io
from collections import deque
from dataclasses import dataclass

from .words import Word, free_reduce


@dataclass(frozen=True)
class CosetTable:
    """Complete action of generators on right cosets H·g.

    Coset 0 is H itself.  ``action[c][x]`` is the coset reached from ``c``
    by the signed letter ``x``; rows are numbered in BFS order over the
    letters ``+g1, -g1, +g2, ...`` so tables are canonical.
    """

    gens: tuple
    action: tuple

    @property
    def index(self) -> int:
        return len(self.action)

    def act(self, c: int, w: Word) -> int:
        for x in w:
            c = self.action[c][x]
        return c

    def contains(self, w: Word) -> bool:
        return self.act(0, w) == 0

    def letters(self) -> list[int]:
        out = []
        for g in self.gens:
            out += [g, -g]
        return out

    def representatives(self) -> list[Word]:
        reps: list = [None] * self.index
        reps[0] = ()
        queue = deque([0])
        letters = self.letters()
        while queue:
            c = queue.popleft()
            for x in letters:
                d = self.action[c][x]
                if reps[d] is None:
                    reps[d] = reps[c] + (x,)
                    queue.append(d)
        return reps

    def as_graph(self) -> dict:
        return {c: dict(row) for c, row in enumerate(self.action)}

    def to_csv(self) -> str:
        buf = io.StringIO()
        header = ["coset"] + [f"g{g}" if x > 0 else f"g{g}^-1"
                              for g in self.gens for x in (g, -g)]
        buf.write(",".join(header) + "\n")
        for c, row in enumerate(self.action):
            buf.write(",".join([str(c)] + [str(row[x]) for x in self.letters()]) + "\n")
        return buf.getvalue()


@dataclass(frozen=True)
class Overflow:
    """Enumeration did not close within the coset limit."""

    max_cosets: int
    defined: int
    live: int


def standardize(gens, rows: dict) -> CosetTable:
    letters = []
    for g in gens:
        letters += [g, -g]
    order = {0: 0}
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for x in letters:
            d = rows[c][x]
            if d not in order:
                order[d] = len(order)
                queue.append(d)
    action = [None] * len(order)
    for c, new in order.items():
        action[new] = {x: order[rows[c][x]] for x in letters}
    return CosetTable(tuple(gens), tuple(action))


def todd_coxeter(gens, relators, subgroup, max_cosets: int = 10000):
    """Enumerate cosets of ⟨subgroup⟩ in ⟨gens | relators⟩.

    Returns a :class:`CosetTable` or an :class:`Overflow`.
    """
    gens = list(gens)
    letters = []
    for g in gens:
        letters += [g, -g]
    col = {x: t for t, x in enumerate(letters)}
    inv = [col[-x] for x in letters]
    ncol = len(letters)
    rels = [[col[x] for x in free_reduce(r)] for r in relators if free_reduce(r)]
    subs = [[col[x] for x in free_reduce(h)] for h in subgroup if free_reduce(h)]
    table: list[list] = [[None] * ncol]
    p = [0]
    live = [1]
    hard_cap = 20 * max_cosets + 100

    class _Over(Exception):
        pass

    def rep(c):
        r = c
        while p[r] != r:
            r = p[r]
        while p[c] != r:
            p[c], c = r, p[c]
        return r

    def define(c, x):
        if live[0] >= max_cosets or len(table) >= hard_cap:
            raise _Over
        d = len(table)
        table.append([None] * ncol)
        p.append(d)
        live[0] += 1
        table[c][x] = d
        table[d][inv[x]] = c

    def merge(k, l, q):
        k, l = rep(k), rep(l)
        if k == l:
            return
        if k > l:
            k, l = l, k
        p[l] = k
        live[0] -= 1
        q.append(l)

    def coincidence(a, b):
        q: list = []
        merge(a, b, q)
        i = 0
        while i < len(q):
            e = q[i]
            i += 1
            for x in range(ncol):
                f = table[e][x]
                if f is None:
                    continue
                if table[f][inv[x]] == e:
                    table[f][inv[x]] = None
                e1, f1 = rep(e), rep(f)
                if table[e1][x] is not None:
                    merge(f1, table[e1][x], q)
                elif table[f1][inv[x]] is not None:
                    merge(e1, table[f1][inv[x]], q)
                else:
                    table[e1][x] = f1
                    table[f1][inv[x]] = e1

    def scan_and_fill(c, w):
        f, b = c, c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] is not None:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][inv[w[j]]] is not None:
                b = table[b][inv[w[j]]]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][inv[w[i]]] = f
                return
            define(f, w[i])

    try:
        for h in subs:
            scan_and_fill(0, h)
        c = 0
        while c < len(table):
            if p[c] == c:
                for r in rels:
                    scan_and_fill(c, r)
                    if p[c] != c:
                        break
                if p[c] == c:
                    for x in range(ncol):
                        if table[c][x] is None:
                            define(c, x)
            c += 1
    except _Over:
        return Overflow(max_cosets, len(table), live[0])
    alive = [c for c in range(len(table)) if p[c] == c]
    rows = {c: {letters[x]: rep(table[c][x]) for x in range(ncol)} for c in alive}
    return standardize(gens, rows)


def expand_table(table: CosetTable, gens, subst) -> CosetTable:
    """Re-express a table over original generators via ``g -> subst[g]``."""
    rows = {}
    for c in range(table.index):
        row = {}
        for g in gens:
            w = subst.get(g, (g,))
            row[g] = table.act(c, w)
        rows[c] = row
    for c in rows:
        for g in gens:
            rows[rows[c][g]][-g] = c
    return standardize(list(gens), rows)

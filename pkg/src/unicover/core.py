"""Finite uniform spaces modelled as scale towers.

A tower is a finite point set together with a descending chain of
reflexive, symmetric relations E_1 ⊇ E_2 ⊇ ... ⊇ E_k.  Level 1 is the
coarsest.  Diagonal pairs are never stored; every relation is reflexive by
construction.
"""

from __future__ import annotations

import itertools
import json
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


class TowerError(ValueError):
    """Raised when a tower, chain or level argument violates an invariant."""


class LengthMismatch(TowerError):
    """Two chains that must be compared positionwise have different lengths."""


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Entourage:
    """Off-diagonal unordered pairs, sorted; the diagonal is implicit."""

    pairs: frozenset

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]]) -> "Entourage":
        return cls(frozenset(_pair(a, b) for a, b in pairs if a != b))

    def __contains__(self, pair) -> bool:
        a, b = pair
        return a == b or _pair(a, b) in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def __le__(self, other: "Entourage") -> bool:
        return self.pairs <= other.pairs

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)


@dataclass(frozen=True)
class ScaleTower:
    labels: tuple
    levels: tuple
    scales: tuple = ()
    _adj: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.labels)
        if n < 1:
            raise TowerError("a tower needs at least one point")
        if len(self.levels) < 1:
            raise TowerError("a tower needs at least one level")
        if self.scales and len(self.scales) != len(self.levels):
            raise TowerError("scales must annotate every level")
        for i, lev in enumerate(self.levels, start=1):
            if not isinstance(lev, Entourage):
                raise TowerError(f"level {i} is not an Entourage")
            for a, b in lev.pairs:
                if not (0 <= a < n and 0 <= b < n):
                    raise TowerError(f"level {i}: pair ({a},{b}) names an unknown point")
        for i in range(len(self.levels) - 1):
            extra = self.levels[i + 1].pairs - self.levels[i].pairs
            if extra:
                a, b = min(extra)
                raise TowerError(
                    f"nesting violated: pair ({a},{b}) is in level {i + 2} but not level {i + 1}")
        adj = []
        for lev in self.levels:
            nb = [[] for _ in range(n)]
            for a, b in sorted(lev.pairs):
                nb[a].append(b)
                nb[b].append(a)
            adj.append(tuple(tuple(sorted(x)) for x in nb))
        object.__setattr__(self, "_adj", tuple(adj))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def k(self) -> int:
        return len(self.levels)

    def check_level(self, i: int) -> None:
        if not isinstance(i, int) or not 1 <= i <= self.k:
            raise TowerError(f"level {i} out of range 1..{self.k}")

    def level(self, i: int) -> Entourage:
        self.check_level(i)
        return self.levels[i - 1]

    def neighbors(self, i: int, v: int) -> tuple:
        """Points related to ``v`` at level ``i``, excluding ``v`` itself."""
        self.check_level(i)
        return self._adj[i - 1][v]

    def related(self, i: int, a: int, b: int) -> bool:
        return (a, b) in self.level(i)

    def check_point(self, v: int) -> None:
        if not isinstance(v, int) or not 0 <= v < self.n:
            raise TowerError(f"unknown point id {v!r}")


@dataclass(frozen=True)
class Chain:
    level: int
    seq: tuple

    def __post_init__(self):
        if len(self.seq) == 0:
            raise TowerError("a chain must be nonempty")
        object.__setattr__(self, "seq", tuple(self.seq))

    @property
    def start(self) -> int:
        return self.seq[0]

    @property
    def end(self) -> int:
        return self.seq[-1]

    def __len__(self):
        return len(self.seq)


@dataclass(frozen=True)
class RipsSkeleton:
    level: int
    vertices: tuple
    edges: tuple
    triangles: tuple


def from_metric(dist, thresholds, labels=None) -> ScaleTower:
    """Tower whose level i relates points at distance <= thresholds[i].

    ``dist`` is a square table (nested sequences or a callable taking two
    ids plus ``n`` via ``labels``).  Thresholds must be strictly descending.
    """
    thresholds = [Fraction(t) if not isinstance(t, float) else t for t in thresholds]
    if not thresholds:
        raise TowerError("at least one threshold is required")
    if any(t <= 0 for t in thresholds):
        raise TowerError("thresholds must be positive")
    if any(b >= a for a, b in zip(thresholds, thresholds[1:])):
        raise TowerError("thresholds must be strictly descending")
    n = len(dist)
    for a in range(n):
        if len(dist[a]) != n:
            raise TowerError("distance table must be square")
        if dist[a][a] != 0:
            raise TowerError(f"distance from {a} to itself is nonzero")
        for b in range(a + 1, n):
            if dist[a][b] != dist[b][a]:
                raise TowerError(f"distance table not symmetric at ({a},{b})")
            if dist[a][b] < 0:
                raise TowerError(f"negative distance at ({a},{b})")
    levels = []
    for t in thresholds:
        levels.append(Entourage.from_pairs(
            (a, b) for a, b in itertools.combinations(range(n), 2) if dist[a][b] <= t))
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
    return ScaleTower(labels, tuple(levels), tuple(thresholds))


def build_skeleton(tower: ScaleTower, i: int) -> RipsSkeleton:
    ent = tower.level(i)
    edges = tuple(ent.sorted_pairs())
    tris = []
    for a, b in edges:
        # c > b and related to both keeps each triangle listed once
        for c in tower.neighbors(i, b):
            if c > b and (a, c) in ent:
                tris.append((a, b, c))
    tris.sort()
    return RipsSkeleton(i, tuple(range(tower.n)), edges, tuple(tris))


def is_chain(tower: ScaleTower, i: int, seq: Sequence[int]) -> bool:
    tower.check_level(i)
    if len(seq) == 0:
        raise TowerError("empty sequence")
    for v in seq:
        tower.check_point(v)
    ent = tower.levels[i - 1]
    return all((a, b) in ent for a, b in zip(seq, seq[1:]))


def make_chain(tower: ScaleTower, i: int, seq: Sequence[int]) -> Chain:
    if not is_chain(tower, i, seq):
        raise TowerError(f"{tuple(seq)} is not a level-{i} chain")
    return Chain(i, tuple(seq))


def concat_chains(a: Chain, b: Chain) -> Chain:
    if a.level != b.level:
        raise TowerError(f"level mismatch: {a.level} vs {b.level}")
    if a.end != b.start:
        raise TowerError(f"junction mismatch: {a.end} vs {b.start}")
    return Chain(a.level, a.seq + b.seq[1:])


def invert_chain(a: Chain) -> Chain:
    return Chain(a.level, a.seq[::-1])


def components(tower: ScaleTower, i: int) -> list[list[int]]:
    """Connected components of the level-i graph, each sorted, ordered by least id."""
    seen = [False] * tower.n
    comps = []
    for s in range(tower.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [], deque([s])
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in tower.neighbors(i, v):
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def is_chain_connected(tower: ScaleTower, i: int | None = None) -> bool:
    """Chain connectedness at level ``i``, or at every level when ``i`` is None."""
    if i is None:
        return all(is_chain_connected(tower, j) for j in range(1, tower.k + 1))
    tower.check_level(i)
    return len(components(tower, i)) == 1


def is_hausdorff_tower(tower: ScaleTower):
    """Return ``(True, None)`` or ``(False, witness_pair)``.

    Levels are nested, so the intersection of all of them is the finest.
    """
    finest = tower.levels[-1]
    if finest.pairs:
        return False, min(finest.pairs)
    return True, None


def are_chains_e_close(tower: ScaleTower, a: Chain, b: Chain, i: int) -> bool:
    tower.check_level(i)
    if len(a) != len(b):
        raise LengthMismatch(f"chains of length {len(a)} and {len(b)} cannot be compared")
    ent = tower.levels[i - 1]
    return all((x, y) in ent for x, y in zip(a.seq, b.seq))


def image_pairs(ent: Entourage, vmap: Sequence[int]) -> Entourage:
    return Entourage.from_pairs((vmap[a], vmap[b]) for a, b in ent.pairs)


# ---------------------------------------------------------------------------
# JSON

def _scale_out(s):
    if s is None:
        return None
    if isinstance(s, Fraction):
        return str(s) if s.denominator != 1 else s.numerator
    return s


def tower_to_dict(tower: ScaleTower) -> dict:
    scales = tower.scales or (None,) * tower.k
    return {
        "points": list(tower.labels),
        "levels": [
            {"scale": _scale_out(s), "pairs": [list(p) for p in lev.sorted_pairs()]}
            for s, lev in zip(scales, tower.levels)
        ],
    }


def dump_tower(tower: ScaleTower) -> str:
    return json.dumps(tower_to_dict(tower), sort_keys=True)


_PAIR_RE = re.compile(r"\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]")


def _line_of(text: str, offset: int) -> int:
    return text.count("\n", 0, offset) + 1


def loads_tower(text: str) -> ScaleTower:
    """Parse tower JSON, reporting the source line of any offending entry."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TowerError(f"line {exc.lineno}: invalid JSON: {exc.msg}") from None
    if not isinstance(data, dict) or "points" not in data or "levels" not in data:
        raise TowerError("line 1: expected an object with 'points' and 'levels'")
    points = data["points"]
    if not isinstance(points, list) or not points:
        raise TowerError("line 1: 'points' must be a nonempty list")
    levels = data["levels"]
    if not isinstance(levels, list) or not levels:
        raise TowerError("line 1: 'levels' must be a nonempty list")
    # pair literals appear in document order; labels are strings and never match
    start = text.find('"levels"')
    spans = [m.start() for m in _PAIR_RE.finditer(text, max(start, 0))]
    n = len(points)
    ents, scales, pos = [], [], 0
    for li, lev in enumerate(levels, start=1):
        if not isinstance(lev, dict) or "pairs" not in lev:
            raise TowerError(f"level {li}: missing 'pairs'")
        pairs = []
        for pr in lev["pairs"]:
            line = _line_of(text, spans[pos]) if pos < len(spans) else "?"
            pos += 1
            if (not isinstance(pr, list) or len(pr) != 2
                    or not all(isinstance(v, int) for v in pr)):
                raise TowerError(f"line {line}: level {li}: malformed pair {pr!r}")
            a, b = pr
            if not (0 <= a < n and 0 <= b < n):
                raise TowerError(f"line {line}: level {li}: pair {pr} names an unknown point")
            pairs.append((a, b))
        ents.append(Entourage.from_pairs(pairs))
        s = lev.get("scale")
        scales.append(Fraction(s) if isinstance(s, (int, str)) else s)
    for i in range(len(ents) - 1):
        extra = ents[i + 1].pairs - ents[i].pairs
        if extra:
            a, b = min(extra)
            line = "?"
            for m in _PAIR_RE.finditer(text, max(start, 0)):
                if {int(m.group(1)), int(m.group(2))} == {a, b}:
                    line = _line_of(text, m.start())
            raise TowerError(
                f"line {line}: nesting violated: pair ({a},{b}) in level {i + 2} but not level {i + 1}")
    if all(s is None for s in scales):
        scales = []
    return ScaleTower(tuple(str(p) for p in points), tuple(ents), tuple(scales))

"""Deterministic example towers and maps."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .core import Chain, Entourage, ScaleTower, TowerError, from_metric
from .cover import TowerMap, build_cover
from .gp import CechGroup, SubgroupSpec
from .pi1 import Overflow, chain_to_word, inverse, mul


def _ring_dist(n: int):
    return [[min(abs(a - b), n - abs(a - b)) for b in range(n)] for a in range(n)]


def cycle_space(n: int, thresholds) -> ScaleTower:
    """n points on a cycle with the hop metric."""
    if n < 1:
        raise TowerError("a cycle needs at least one point")
    return from_metric(_ring_dist(n), thresholds)


def hawaiian_points(N: int) -> list[list[int]]:
    """Point ids of each circle in order, starting and ending at the wedge point 0."""
    circles, nxt = [], 1
    for m in range(1, N + 1):
        ids = list(range(nxt, nxt + 4 * m - 1))
        nxt += 4 * m - 1
        circles.append([0] + ids)
    return circles


def hawaiian_tower(N: int) -> ScaleTower:
    """Wedge of N circles, circle m with 4m points.

    At level j circles m <= j are hop-1 cycles and every pair inside a
    circle m > j is related, so smaller circles die at coarser levels.
    """
    if N < 1:
        raise TowerError("depth must be at least 1")
    circles = hawaiian_points(N)
    n = 1 + sum(len(c) - 1 for c in circles)
    levels = []
    for j in range(1, N + 1):
        pairs = []
        for m, pts in enumerate(circles, start=1):
            if m > j:
                pairs += itertools.combinations(pts, 2)
            else:
                pairs += [(pts[t], pts[(t + 1) % len(pts)]) for t in range(len(pts))]
        levels.append(Entourage.from_pairs(pairs))
    labels = ["w"] + [f"c{m}.{t}" for m, pts in enumerate(circles, start=1)
                      for t in range(1, len(pts))]
    return ScaleTower(tuple(labels), tuple(levels), tuple(Fraction(1, j) for j in range(1, N + 1)))


def hawaiian_loop(N: int, m: int) -> tuple:
    """Vertex sequence of circle m traversed once from the wedge point."""
    pts = hawaiian_points(N)[m - 1]
    return tuple(pts) + (0,)


def gapped_cycle(n: int, gap_level: int = 1, levels: int | None = None) -> ScaleTower:
    """A path on n points whose endpoints are related at levels <= ``gap_level``."""
    if n < 3:
        raise TowerError("a gapped cycle needs at least 3 points")
    k = levels if levels is not None else gap_level + 1
    if not 1 <= gap_level <= k:
        raise TowerError("gap level must lie within the levels")
    path = [(t, t + 1) for t in range(n - 1)]
    ents = [Entourage.from_pairs(path + ([(0, n - 1)] if j <= gap_level else []))
            for j in range(1, k + 1)]
    return ScaleTower(tuple(str(t) for t in range(n)), tuple(ents))


def twin_points(levels: int = 2):
    """Two points related at every level, and the fold onto a single point."""
    src = ScaleTower(("a", "b"), tuple(Entourage.from_pairs([(0, 1)]) for _ in range(levels)))
    tgt = ScaleTower(("p",), tuple(Entourage.from_pairs([]) for _ in range(levels)))
    return src, TowerMap(src, tgt, (0, 0), "fold")


def torus_grid(m: int, n: int, thresholds) -> ScaleTower:
    """m×n grid on the torus with the cyclic king-move metric."""
    pts = [(a, b) for a in range(m) for b in range(n)]

    def d(p, q):
        da = min(abs(p[0] - q[0]), m - abs(p[0] - q[0]))
        db = min(abs(p[1] - q[1]), n - abs(p[1] - q[1]))
        return max(da, db)

    dist = [[d(p, q) for q in pts] for p in pts]
    return from_metric(dist, thresholds, [f"{a},{b}" for a, b in pts])


def random_tower(seed: int, n: int, k: int, ladder=None) -> ScaleTower:
    """Random weights on all pairs; level i keeps pairs with weight <= ladder[i].

    ``ladder`` is a strictly descending list of densities in (0, 1].
    """
    rng = random.Random(seed)
    if ladder is None:
        ladder = [round(0.6 * (0.6 ** i), 6) for i in range(k)]
    if len(ladder) != k:
        raise TowerError("ladder must have one density per level")
    weights = {p: rng.random() for p in itertools.combinations(range(n), 2)}
    levels = tuple(Entourage.from_pairs(p for p, w in weights.items() if w <= t) for t in ladder)
    return ScaleTower(tuple(str(t) for t in range(n)), levels)


def random_quotient(seed: int, tower: ScaleTower, parts: int) -> TowerMap:
    """Map onto a random partition, the target carrying the image entourages."""
    rng = random.Random(seed)
    vmap = [rng.randrange(parts) for _ in range(tower.n)]
    used = sorted(set(vmap))
    relabel = {v: t for t, v in enumerate(used)}
    vmap = tuple(relabel[v] for v in vmap)
    levels = []
    for i in range(1, tower.k + 1):
        levels.append(Entourage.from_pairs((vmap[a], vmap[b]) for a, b in tower.level(i).pairs
                                           if vmap[a] != vmap[b]))
    tgt = ScaleTower(tuple(str(t) for t in range(len(used))), tuple(levels))
    return TowerMap(tower, tgt, vmap, "quotient")


# ---------------------------------------------------------------------------
# test maps

def arc_inclusion(n: int = 12, arc: int = 6) -> TowerMap:
    src = from_metric([[abs(a - b) for b in range(arc)] for a in range(arc)], [1])
    return TowerMap(src, cycle_space(n, [1]), tuple(range(arc)), "arc")


def point_inclusion(n: int = 12, point: int = 0) -> TowerMap:
    src = ScaleTower(("x",), (Entourage.from_pairs([]),))
    return TowerMap(src, cycle_space(n, [1]), (point,), "point")


def collapse_map(tower: ScaleTower) -> TowerMap:
    tgt = ScaleTower(("*",), tuple(Entourage.from_pairs([]) for _ in range(tower.k)))
    return TowerMap(tower, tgt, (0,) * tower.n, "collapse")


def identity_map(tower: ScaleTower) -> TowerMap:
    return TowerMap(tower, tower, tuple(range(tower.n)), "id")


def double_cover(tower: ScaleTower) -> TowerMap:
    """Two unrelated copies of ``tower`` folded onto one."""
    n = tower.n
    levels = tuple(Entourage.from_pairs(list(lev.pairs) + [(a + n, b + n) for a, b in lev.pairs])
                   for lev in tower.levels)
    labels = tuple(f"{x}'{s}" for s in (0, 1) for x in tower.labels)
    src = ScaleTower(labels, levels, tower.scales)
    return TowerMap(src, tower, tuple(range(n)) * 2, "double")


# ---------------------------------------------------------------------------
# loop words and subgroups

def loop_word(G: CechGroup, seq) -> tuple:
    """Finest-level word of a closed vertex sequence."""
    return chain_to_word(Chain(G.k, tuple(seq)), G.fine)


def hawaiian_alphas(G: CechGroup, N: int) -> list[tuple]:
    """Words of the circle loops α₁..α_N in the finest group of hawaiian_tower(N)."""
    return [loop_word(G, hawaiian_loop(N, m)) for m in range(1, N + 1)]


def torus_loops(G: CechGroup, m: int, n: int) -> tuple[tuple, tuple]:
    """Words of the two coordinate loops through point (0, 0)."""
    a = loop_word(G, [b for b in range(n)] + [0])
    b = loop_word(G, [r * n for r in range(m)] + [0])
    return a, b


def parity_subgroup(basis) -> list[tuple]:
    """Generators of the even-length words over ``basis`` (index <= 2)."""
    out = []
    for x in basis:
        for y in basis:
            out.append((x, y))
            if x != y:
                out.append((x, -y))
    return out


def last_parity_subgroup(alphas) -> list[tuple]:
    """Kernel of the exponent of the last loop mod 2: index 2 in a free group."""
    *head, last = alphas
    out = list(head) + [mul(last, last)]
    out += [mul(last, h, inverse(last)) for h in head]
    return out


def escaping_family(G: CechGroup, N: int) -> tuple[SubgroupSpec, tuple]:
    """H_N = ⟨α₁..α_{N-2}⟩ and β_N = α₁⋯α_N on hawaiian_tower(N)."""
    alphas = hawaiian_alphas(G, N)
    H = SubgroupSpec(f"H{N}", tuple(alphas[: max(N - 2, 0)]))
    return H, mul(*alphas)


def standard_covers() -> list[tuple[str, object]]:
    """Named finite-index covers used by the law harness."""
    out = []
    c12 = cycle_space(12, [1])
    G = CechGroup(c12, 0)
    g = loop_word(G, list(range(12)) + [0])
    for e in (1, 2, 3, 4, 6):
        out.append((f"cycle12/g^{e}", build_cover(c12, 0, SubgroupSpec(f"g^{e}", (g * e,)), group=G)))
    two = cycle_space(12, [2, 1])
    G2 = CechGroup(two, 0)
    g2 = loop_word(G2, list(range(12)) + [0])
    for e in (1, 3):
        out.append((f"cycle12-two/g^{e}", build_cover(two, 0, SubgroupSpec(f"g^{e}", (g2 * e,)), group=G2)))
    for N in (2, 3):
        h = hawaiian_tower(N)
        GH = CechGroup(h, 0)
        al = hawaiian_alphas(GH, N)
        out.append((f"hawaiian{N}/whole", build_cover(h, 0, SubgroupSpec("whole", tuple(al)), group=GH)))
        out.append((f"hawaiian{N}/parity", build_cover(
            h, 0, SubgroupSpec("parity", tuple(last_parity_subgroup(al))), group=GH)))
    t = torus_grid(6, 6, [3, 1])
    GT = CechGroup(t, 0)
    a, b = torus_loops(GT, 6, 6)
    out.append(("torus6/a,b^2", build_cover(t, 0, SubgroupSpec("a,b^2", (a, mul(b, b))), group=GT)))
    out.append(("torus6/whole", build_cover(t, 0, SubgroupSpec("whole", (a, b)), group=GT)))
    gap = gapped_cycle(8, 1)
    out.append(("gapped8/trivial", build_cover(gap, 0, SubgroupSpec("trivial", ()))))
    k6 = cycle_space(6, [3])
    out.append(("cycle6-complete/trivial", build_cover(k6, 0, SubgroupSpec("trivial", ()))))
    for name, cv in out:
        if isinstance(cv, Overflow):
            raise TowerError(f"standard cover {name} did not close")
    return out


def standard_maps() -> list[tuple[str, TowerMap]]:
    """Named maps beyond cover projections."""
    c12 = cycle_space(12, [1])
    fine12 = cycle_space(12, [1, Fraction(1, 2)])
    return [
        ("twin/fold", twin_points()[1]),
        ("cycle12/identity", identity_map(c12)),
        ("cycle12-fine/identity", identity_map(fine12)),
        ("cycle12-fine/double", double_cover(fine12)),
        ("cycle12/double", double_cover(c12)),
        ("cycle12/collapse", collapse_map(c12)),
        ("arc/inclusion", arc_inclusion()),
        ("point/inclusion", point_inclusion()),
    ]


# ---------------------------------------------------------------------------
# recipes

@dataclass(frozen=True)
class CorpusRecipe:
    name: str
    builder: object
    params: tuple
    usage: str

    def build(self, *params):
        return self.builder(*(params or self.params))


def _cycle(n=12, *thresholds):
    return cycle_space(int(n), [Fraction(t) for t in thresholds] or [1])


def _torus(m=6, n=6, *thresholds):
    return torus_grid(int(m), int(n), [Fraction(t) for t in thresholds] or [3, 1])


def _gapped(n=8, gap=1, levels=None):
    return gapped_cycle(int(n), int(gap), None if levels is None else int(levels))


def _random(seed=42, n=8, k=3):
    return random_tower(int(seed), int(n), int(k))


RECIPES = {
    r.name: r for r in [
        CorpusRecipe("cycle", _cycle, (12, 1), "cycle <n> <threshold>..."),
        CorpusRecipe("hawaiian", lambda N=3: hawaiian_tower(int(N)), (3,), "hawaiian <depth>"),
        CorpusRecipe("gapped", _gapped, (8, 1), "gapped <n> <gapLevel> [levels]"),
        CorpusRecipe("twin", lambda levels=2: twin_points(int(levels))[0], (2,), "twin [levels]"),
        CorpusRecipe("torus", _torus, (6, 6, 3, 1), "torus <m> <n> <threshold>..."),
        CorpusRecipe("random", _random, (42, 8, 3), "random <seed> <n> <k>"),
    ]
}


def emit(name: str, *params) -> ScaleTower:
    if name not in RECIPES:
        raise TowerError(f"unknown corpus recipe {name!r}; known: {', '.join(sorted(RECIPES))}")
    return RECIPES[name].build(*params)


def expected_facts() -> dict:
    text = resources.files("unicover.data").joinpath("expected_facts.json").read_text()
    return json.loads(text)


def standard_instances() -> list[tuple[str, ScaleTower]]:
    """The named towers the law harness and acceptance suite run over."""
    return [
        ("cycle12", cycle_space(12, [1])),
        ("cycle12-fine", cycle_space(12, [1, Fraction(1, 2)])),
        ("cycle12-two", cycle_space(12, [2, 1])),
        ("cycle6-complete", cycle_space(6, [3])),
        ("hawaiian2", hawaiian_tower(2)),
        ("hawaiian3", hawaiian_tower(3)),
        ("gapped8", gapped_cycle(8, 1)),
        ("twin", twin_points()[0]),
        ("torus6", torus_grid(6, 6, [3, 1])),
    ]


__all__ = [
    "CorpusRecipe", "RECIPES", "arc_inclusion", "collapse_map", "cycle_space", "emit",
    "expected_facts", "gapped_cycle", "hawaiian_loop", "hawaiian_points", "hawaiian_tower",
    "double_cover", "escaping_family", "hawaiian_alphas", "identity_map", "last_parity_subgroup",
    "loop_word", "parity_subgroup", "point_inclusion", "standard_covers", "standard_maps",
    "torus_loops", "random_quotient", "random_tower", "standard_instances",
    "torus_grid", "twin_points",
]

"""Covers GP(X, x₀)/H as towers over X, and lifting through them."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .core import (Chain, Entourage, ScaleTower, TowerError, image_pairs, loads_tower,
                   tower_to_dict)
from .gp import CechGroup, SubgroupSpec, Thread, make_thread, thread_chain
from .pi1 import (DEFAULT_BUDGET, DEFAULT_MAX_COSETS, CosetTable, Overflow, Tri,
                  coset_enumerate, free_reduce, mul, present_pi1, seq_word)
from .core import build_skeleton


class CoverError(TowerError):
    """A cover could not be built or navigated consistently."""


@dataclass(frozen=True)
class TowerMap:
    source: ScaleTower
    target: ScaleTower
    vmap: tuple
    name: str = "f"

    def __post_init__(self):
        object.__setattr__(self, "vmap", tuple(self.vmap))
        if len(self.vmap) != self.source.n:
            raise TowerError(f"map has {len(self.vmap)} entries for {self.source.n} points")
        for v in self.vmap:
            self.target.check_point(v)

    def __call__(self, x: int) -> int:
        return self.vmap[x]

    def image_level(self, i: int) -> Entourage:
        return image_pairs(self.source.level(i), self.vmap)

    def fiber(self, y: int) -> list[int]:
        return [x for x, v in enumerate(self.vmap) if v == y]

    def continuity_witness(self):
        """First target level j with no source level mapping into it, else None."""
        for j in range(1, self.target.k + 1):
            tgt = self.target.level(j)
            if not any(self.image_level(i) <= tgt for i in range(1, self.source.k + 1)):
                return j
        return None

    def is_uniformly_continuous(self) -> bool:
        return self.continuity_witness() is None

    def compose(self, other: "TowerMap") -> "TowerMap":
        """``other ∘ self``."""
        if other.source != self.target:
            raise TowerError("maps do not compose")
        return TowerMap(self.source, other.target, tuple(other(v) for v in self.vmap),
                        f"{other.name}∘{self.name}")

    def to_dict(self) -> dict:
        return {"name": self.name, "map": list(self.vmap)}


def loads_map(text: str, source: ScaleTower, target: ScaleTower) -> TowerMap:
    data = json.loads(text)
    vmap = data["map"] if isinstance(data, dict) else data
    return TowerMap(source, target, tuple(vmap), data.get("name", "f") if isinstance(data, dict) else "f")


@dataclass
class CoverSpace:
    base: ScaleTower
    basepoint: int
    H: SubgroupSpec
    table: CosetTable
    reps: list
    points: list
    total: ScaleTower
    projection: TowerMap
    group: CechGroup
    excluded: list = field(default_factory=list)
    _total_group: CechGroup | None = None

    @property
    def index(self) -> int:
        return self.table.index

    @property
    def basepoint_fiber(self) -> int:
        return self.point_id(self.basepoint, 0)

    def point_id(self, y: int, c: int) -> int:
        return self._ids[(y, c)]

    def __post_init__(self):
        self._ids = {p: t for t, p in enumerate(self.points)}

    def fiber(self, y: int) -> list[int]:
        return self.projection.fiber(y)

    @property
    def total_group(self) -> CechGroup:
        if self._total_group is None:
            self._total_group = CechGroup(self.total, self.basepoint_fiber)
        return self._total_group

    def to_dict(self) -> dict:
        return {
            "total": tower_to_dict(self.total),
            "sidecar": {
                "projection": list(self.projection.vmap),
                "cosets": self.index,
                "H": self.H.to_dict(),
                "basepoint": self.basepoint,
                "base": tower_to_dict(self.base),
                "excluded": [list(p) for p in self.excluded],
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def build_cover(tower: ScaleTower, basepoint: int, H: SubgroupSpec,
                max_cosets: int = DEFAULT_MAX_COSETS, budget: int = DEFAULT_BUDGET,
                strict: bool = True, group: CechGroup | None = None):
    """Build GP(X, x₀)/H restricted to the basepoint's finest component.

    Points are pairs (y, c) with c a right coset of ⟨H⟩.  At the finest
    level the coset advances along the step word of each edge; at a coarser
    level i, (u, c) and (v, c') are related iff (u, v) ∈ E_i and
    φ_i(rep c) · ℓ_i(u, v) · φ_i(rep c')⁻¹ lies in φ_i(⟨H⟩), the quotient of
    the E_i-short relation on threads.  Returns :class:`Overflow` when the
    index does not close within ``max_cosets``.
    """
    G = group or CechGroup(tower, basepoint)
    fine = G.fine
    comp_gens = G.group(G.k).gens
    table = coset_enumerate(fine, H.generators, max_cosets, gens=comp_gens)
    if isinstance(table, Overflow):
        return table
    reps = table.representatives()
    comp = G.component
    points = [(y, c) for y in comp for c in range(table.index)]
    ids = {p: t for t, p in enumerate(points)}
    in_comp = set(comp)
    levels = []
    excluded = []
    for i in range(1, G.k + 1):
        pairs = set()
        base_pairs = [(a, b) for a, b in tower.level(i).sorted_pairs() if a in in_comp and b in in_comp]
        if i == G.k:
            for u, v in base_pairs:
                w = fine.step_word(u, v)
                for c in range(table.index):
                    pairs.add((ids[(u, c)], ids[(v, table.act(c, w))]))
        else:
            gi = G.group(i)
            sub = [G.image(h, i) for h in H.generators]
            rep_img = [G.image(r, i) for r in reps]
            checks = [(u, u) for u in comp] + base_pairs
            for u, v in checks:
                ell = G.level_loop_word(u, v, i)
                for c in range(table.index):
                    left = mul(rep_img[c], ell)
                    for c2 in range(table.index):
                        if u == v and c2 <= c:
                            continue
                        d = gi.member(sub, mul(left, tuple(-x for x in reversed(rep_img[c2]))), max_cosets)
                        if d.yes:
                            pairs.add((ids[(u, c)], ids[(v, c2)]))
                        elif d.verdict is Tri.UNKNOWN:
                            if strict:
                                raise CoverError(
                                    f"level {i}: membership undecided for (({u},{c}),({v},{c2}))")
                            excluded.append((i, ids[(u, c)], ids[(v, c2)]))
        levels.append(Entourage.from_pairs(pairs))
    labels = tuple(f"{tower.labels[y]}|{c}" for y, c in points)
    total = ScaleTower(labels, tuple(levels), tower.scales)
    proj = TowerMap(total, tower, tuple(y for y, _ in points), "p")
    return CoverSpace(tower, basepoint, H, table, reps, points, total, proj, G, excluded)


def loads_cover(text: str, max_cosets: int = DEFAULT_MAX_COSETS,
                budget: int = DEFAULT_BUDGET) -> CoverSpace:
    """Rebuild a dumped cover from its sidecar and check it matches."""
    data = json.loads(text)
    try:
        side = data["sidecar"]
        base = loads_tower(json.dumps(side["base"]))
        H = SubgroupSpec.from_dict(side["H"])
        bp = side["basepoint"]
    except (KeyError, TypeError) as exc:
        raise CoverError(f"cover file lacks field {exc}") from None
    cv = build_cover(base, bp, H, max_cosets, budget, strict=not side.get("excluded"))
    if isinstance(cv, Overflow):
        raise CoverError("stored cover no longer closes within the coset limit")
    if tower_to_dict(cv.total) != data["total"]:
        raise CoverError("stored total space does not match its sidecar")
    return cv


# ---------------------------------------------------------------------------
# lifting

def lift_chain(cv: CoverSpace, chain: Chain, start: int):
    """Lift a base chain from total point ``start``; returns ``(lift, unique)``.

    Each step takes the candidate forced by the finest-level coset advance
    when the base step is a finest edge, else the least admissible one.
    ``unique`` records whether every step had a single admissible choice.
    """
    tot = cv.total
    i = chain.level
    cv.total.check_point(start)
    if cv.projection(start) != chain.start:
        raise CoverError(f"start point {start} does not lie over {chain.start}")
    fine = cv.group.fine
    cur = start
    seq = [cur]
    unique = True
    for a, b in zip(chain.seq, chain.seq[1:]):
        if not cv.base.related(i, a, b):
            raise TowerError(f"({a},{b}) is not a level-{i} step")
        if a == b:
            seq.append(cur)
            continue
        cands = [t for t in tot.neighbors(i, cur) if cv.projection(t) == b]
        if not cands:
            raise CoverError(f"no admissible lift of step ({a},{b}) from total point {cur}")
        if len(cands) > 1:
            unique = False
        nxt = min(cands)
        if cv.base.related(tot.k, a, b):
            _, c = cv.points[cur]
            forced = cv.point_id(b, cv.table.act(c, fine.step_word(a, b)))
            if forced in cands:
                nxt = forced
        seq.append(nxt)
        cur = nxt
    return Chain(i, tuple(seq)), unique


def lift_thread(cv: CoverSpace, t: Thread, start: int) -> Thread:
    if cv.projection(start) != t.start:
        raise CoverError(f"start point {start} does not lie over {t.start}")
    lifted, _ = lift_chain(cv, thread_chain(cv.group, t), start)
    return make_thread(cv.total_group, lifted, require_component=False)


def end_coset(cv: CoverSpace, start: int, w) -> int:
    """Coset reached from ``start`` by advancing along the finest word ``w``."""
    _, c = cv.points[start]
    return cv.table.act(c, w)


def image_subgroup(cv: CoverSpace, name: str | None = None) -> SubgroupSpec:
    """Projected loop words of the total space's finest fundamental group."""
    tot_pres = present_pi1(build_skeleton(cv.total, cv.total.k), cv.basepoint_fiber)
    fine = cv.group.fine
    comp = tot_pres.component_of[cv.basepoint_fiber]
    gens = []
    for t, (u, _) in enumerate(tot_pres.generators, start=1):
        if tot_pres.component_of[u] != comp:
            continue
        loop = tot_pres.generator_loop(t)
        w = free_reduce(seq_word(tuple(cv.projection(x) for x in loop), fine))
        if w and w not in gens:
            gens.append(w)
    return SubgroupSpec(name or f"image({cv.H.name})", tuple(gens))


def tables_isomorphic(t1: CosetTable, t2: CosetTable):
    """Unbased labelled isomorphism of two coset graphs: returns a coset map or None."""
    if t1.index != t2.index or tuple(t1.gens) != tuple(t2.gens):
        return None
    letters = t1.letters()
    for target in range(t2.index):
        m = {0: target}
        used = {target}
        stack = [0]
        ok = True
        while stack and ok:
            c = stack.pop()
            for x in letters:
                a, b = t1.action[c][x], t2.action[m[c]][x]
                if a in m:
                    if m[a] != b:
                        ok = False
                        break
                elif b in used:
                    ok = False
                    break
                else:
                    m[a] = b
                    used.add(b)
                    stack.append(a)
        if ok and len(m) == t1.index:
            return [m[c] for c in range(t1.index)]
    return None


def are_covers_equivalent(cv1: CoverSpace, cv2: CoverSpace,
                          max_cosets: int = DEFAULT_MAX_COSETS):
    """Conjugacy of the image subgroups, decided on their coset graphs.

    Transitive actions on right cosets are isomorphic exactly when the
    stabilizers are conjugate, so this is exact whenever both enumerations
    close.  Returns ``(verdict, evidence)``.
    """
    if cv1.base != cv2.base or cv1.basepoint != cv2.basepoint:
        raise CoverError("covers of different bases cannot be compared")
    fine = cv1.group.fine
    gens = cv1.group.group(cv1.group.k).gens
    tabs = []
    for cv in (cv1, cv2):
        img = image_subgroup(cv)
        t = coset_enumerate(fine, img.generators, max_cosets, gens=gens)
        if isinstance(t, Overflow):
            return Tri.UNKNOWN, {"reason": "coset-overflow", "max_cosets": max_cosets}
        tabs.append(t)
    if tabs[0].index != tabs[1].index:
        return Tri.NO, {"reason": "index", "indices": [tabs[0].index, tabs[1].index]}
    m = tables_isomorphic(tabs[0], tabs[1])
    if m is None:
        return Tri.NO, {"reason": "coset graphs not isomorphic", "indices": [tabs[0].index] * 2}
    return Tri.YES, {"reason": "coset graph isomorphism", "map": m,
                     "conjugator_coset": m[0]}


def cover_map(cv1: CoverSpace, cv2: CoverSpace) -> TowerMap:
    """The map GP/H₁ → GP/H₂, (y, H₁g) ↦ (y, H₂g), for ⟨H₁⟩ ≤ ⟨H₂⟩."""
    if cv1.base != cv2.base or cv1.basepoint != cv2.basepoint:
        raise CoverError("covers of different bases")
    for h in cv1.H.generators:
        if not cv2.table.contains(h):
            raise CoverError("first subgroup is not contained in the second")
    vmap = tuple(cv2.point_id(y, cv2.table.act(0, cv1.reps[c])) for y, c in cv1.points)
    return TowerMap(cv1.total, cv2.total, vmap, "q")


__all__ = [
    "CoverError", "CoverSpace", "TowerMap", "are_covers_equivalent", "build_cover",
    "cover_map", "end_coset", "image_subgroup", "lift_chain", "lift_thread",
    "loads_cover", "loads_map", "tables_isomorphic",
]

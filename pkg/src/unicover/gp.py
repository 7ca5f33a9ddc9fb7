"""Generalized paths at truncation depth k, and the Čech group of a tower.

With finitely many levels a generalized path is determined by its class at
the finest level: every coarser term is the image under a bonding map.  A
:class:`Thread` therefore stores only endpoints and a finest-level word.
Words are read relative to the finest spanning forest, i.e. a thread from
``s`` to ``e`` is the loop  root→s · chain · e→root.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .core import Chain, ScaleTower, TowerError, build_skeleton, components
from .pi1 import (DEFAULT_BUDGET, DEFAULT_MAX_COSETS, BondingHom, ComponentError,
                  Decision, FoldedGraph, LevelGroup, Tri, bonding_from, chain_to_word,
                  format_word, free_reduce, inverse, mul, parse_word, present_pi1,
                  seq_word, words_up_to)

DEFAULT_WORD_BOUND = 16
# enumeration searches stop after this many candidate words
DEFAULT_SEARCH_LIMIT = 20_000


@dataclass(frozen=True)
class SubgroupSpec:
    name: str
    generators: tuple

    def __post_init__(self):
        object.__setattr__(self, "generators",
                           tuple(free_reduce(w) for w in self.generators))

    @classmethod
    def parse(cls, text: str, name: str = "H") -> "SubgroupSpec":
        """Comma-separated words, e.g. ``"g1^3, g2 g1 g2^-1"``."""
        parts = [p for p in text.split(",") if p.strip()]
        return cls(name, tuple(parse_word(p) for p in parts))

    @classmethod
    def from_dict(cls, data: dict) -> "SubgroupSpec":
        return cls(data.get("name", "H"), tuple(parse_word(w) for w in data["generators"]))

    def to_dict(self) -> dict:
        return {"name": self.name, "generators": [format_word(w) for w in self.generators]}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass(frozen=True)
class Thread:
    start: int
    end: int
    word: tuple


class CechGroup:
    """π̌₁(X, x₀) of a finite tower: the finest presentation plus projections.

    Holds per-level presentations and caches of the derived oracles; all
    caches are deterministic functions of the tower, so sharing is safe.
    """

    def __init__(self, tower: ScaleTower, basepoint: int = 0):
        tower.check_point(basepoint)
        self.tower = tower
        self.basepoint = basepoint
        self.k = tower.k
        self.presentations = tuple(present_pi1(build_skeleton(tower, j), basepoint)
                                   for j in range(1, tower.k + 1))
        fine = self.presentations[-1]
        base_comp = fine.component_of[basepoint]
        self.component = tuple(v for v in range(tower.n) if fine.component_of[v] == base_comp)
        self.restricted = len(self.component) < tower.n
        self._proj: dict = {}
        self._groups: dict = {}
        self._full: dict = {}
        self._images: dict = {}

    def pres(self, j: int):
        self.tower.check_level(j)
        return self.presentations[j - 1]

    @property
    def fine(self):
        return self.presentations[-1]

    def projection(self, j: int) -> BondingHom:
        if j not in self._proj:
            if j == self.k:
                p = self.fine
                self._proj[j] = BondingHom(j, j, {t: (t,) for t in range(1, p.rank + 1)}, p, p)
            else:
                self._proj[j] = bonding_from(self.fine, self.pres(j))
        return self._proj[j]

    @property
    def projections(self) -> list[BondingHom]:
        return [self.projection(j) for j in range(1, self.k)]

    def image(self, w, j: int):
        return self.projection(j)(w)

    def group(self, j: int, root: int | None = None) -> LevelGroup:
        """Level-j group restricted to the component of ``root`` (default basepoint)."""
        p = self.pres(j)
        comp = p.component_of[self.basepoint if root is None else root]
        key = (j, comp)
        if key not in self._groups:
            gens = [t for t, (a, _) in enumerate(p.generators, start=1) if p.component_of[a] == comp]
            self._groups[key] = LevelGroup(p, gens)
        return self._groups[key]

    def full_group(self, j: int) -> LevelGroup:
        if j not in self._full:
            self._full[j] = LevelGroup(self.pres(j))
        return self._full[j]

    def fine_basis(self) -> list[int]:
        """Kept generators of the simplified finest group at the basepoint."""
        return list(self.group(self.k).simplified.kept)

    def level_loop_word(self, x: int, y: int, j: int):
        """Level-j word of  root→x, y, y→root  with finest-forest root paths."""
        f = self.fine
        return seq_word(f.root_path(x) + f.root_path(y)[::-1], self.pres(j))

    def is_trivial(self, w, j: int, budget: int = DEFAULT_BUDGET) -> Decision:
        key = (free_reduce(w), j)
        if key not in self._images:
            self._images[key] = self.full_group(j).is_trivial(key[0], budget)
        return self._images[key]

    def level_rank(self, j: int):
        g = self.group(j)
        if g.is_free:
            return g.free_rank
        return g.simplified.abelianization.invariants()[0]

    def to_dict(self) -> dict:
        out = {"basepoint": self.basepoint, "levels": []}
        for j in range(1, self.k + 1):
            p = self.pres(j)
            g = self.group(j)
            entry = {
                "level": j,
                "generators": p.rank,
                "relators": sum(1 for r in p.relators if r),
                "simplified_generators": len(g.simplified.kept),
                "simplified_relators": len(g.simplified.relators),
                "free": g.is_free,
                "abelian": dict(zip(("rank", "torsion"),
                                    g.simplified.abelianization.invariants())),
            }
            if j < self.k:
                proj = self.projection(j)
                entry["projection"] = {f"g{t}": format_word(w) for t, w in sorted(proj.images.items())}
            out["levels"].append(entry)
        out["restricted_to_component"] = self.restricted
        return out


def cech_group(tower: ScaleTower, basepoint: int = 0) -> CechGroup:
    return CechGroup(tower, basepoint)


# ---------------------------------------------------------------------------
# threads

def make_thread(G: CechGroup, chain: Chain, require_component: bool = True) -> Thread:
    if chain.level != G.k:
        raise TowerError(f"threads are built from level-{G.k} chains, got level {chain.level}")
    for a, b in zip(chain.seq, chain.seq[1:]):
        if not G.tower.related(G.k, a, b):
            raise TowerError(f"({a},{b}) is not a level-{G.k} step")
    if require_component and chain.start not in G.component:
        raise ComponentError(f"point {chain.start} is outside the basepoint's component")
    return Thread(chain.start, chain.end, chain_to_word(chain, G.fine))


def identity_thread(x: int) -> Thread:
    return Thread(x, x, ())


def concat_threads(a: Thread, b: Thread) -> Thread:
    if a.end != b.start:
        raise TowerError(f"junction mismatch: {a.end} vs {b.start}")
    return Thread(a.start, b.end, mul(a.word, b.word))


def invert_thread(a: Thread) -> Thread:
    return Thread(a.end, a.start, inverse(a.word))


def thread_chain(G: CechGroup, t: Thread) -> Chain:
    """A finest-level chain representing ``t``."""
    f = G.fine
    seq = f.root_path(t.start)[::-1]
    for x in t.word:
        loop = f.generator_loop(abs(x))
        seq += (loop if x > 0 else loop[::-1])[1:]
    seq += f.root_path(t.end)[1:]
    # collapse immediate backtracks a,b,a -> a to keep chains short
    out = []
    for v in seq:
        if out and out[-1] == v:
            continue
        if len(out) >= 2 and out[-2] == v:
            out.pop()
            continue
        out.append(v)
    return Chain(G.k, tuple(out))


def is_e_short(G: CechGroup, t: Thread, j: int, budget: int = DEFAULT_BUDGET) -> Decision:
    """Is the level-j term of ``t`` homotopic to the one-step chain start,end?"""
    if not G.tower.related(j, t.start, t.end):
        return Decision(Tri.NO, "endpoints", {"pair": [t.start, t.end], "level": j})
    w = mul(G.image(t.word, j), inverse(G.level_loop_word(t.start, t.end, j)))
    return G.is_trivial(w, j, budget)


def star_level(G: CechGroup, a: Thread, b: Thread, budget: int = DEFAULT_BUDGET):
    """Deepest j with (a, b) ∈ E_j*; None if none, Tri.UNKNOWN if undecided."""
    if a.start != b.start:
        raise TowerError("E* compares generalized paths with a common start")
    t = concat_threads(invert_thread(a), b)
    unknown = False
    for j in range(G.k, 0, -1):
        d = is_e_short(G, t, j, budget)
        if d.yes:
            return Tri.UNKNOWN if unknown else j
        if d.verdict is Tri.UNKNOWN:
            unknown = True
    return Tri.UNKNOWN if unknown else None


def gauge(level) -> float:
    """Dyadic encoding 2^-level of a star level; 1.0 when unrelated at level 1."""
    if level is None:
        return 1.0
    return 2.0 ** (-level)


# ---------------------------------------------------------------------------
# subgroups

def closure_member(G: CechGroup, H: SubgroupSpec, w, budget: int = DEFAULT_BUDGET,
                   max_cosets: int = DEFAULT_MAX_COSETS):
    """Per-level membership φ_j(w) ∈ φ_j(⟨H⟩); returns ``(verdict, profile)``."""
    profile = []
    for j in range(1, G.k + 1):
        d = G.group(j).member([G.image(h, j) for h in H.generators], G.image(w, j), max_cosets)
        profile.append({"level": j, "verdict": d.verdict.value, "certificate": d.certificate})
    verdicts = [Tri(p["verdict"]) for p in profile]
    if all(v is Tri.YES for v in verdicts):
        v = Tri.YES
    elif any(v is Tri.NO for v in verdicts):
        v = Tri.NO
    else:
        v = Tri.UNKNOWN
    return v, profile


def yes_prefix(profile) -> int:
    n = 0
    for p in profile:
        if p["verdict"] != "Yes":
            break
        n += 1
    return n


def is_semilocally_simply_uniform_joinable(G: CechGroup, budget: int = DEFAULT_BUDGET,
                                           word_bound: int = DEFAULT_WORD_BOUND,
                                           search_limit: int = DEFAULT_SEARCH_LIMIT):
    """Injectivity of π̌₁ → π₁(R(X, E_j)) for each level j.

    Returns ``(verdict, profile)``.  The finest level is always injective,
    so the verdict for a truncated tower is Yes; the profile is the content.
    """
    basis = G.fine_basis()
    gk = G.group(G.k)
    profile = []
    for j in range(1, G.k + 1):
        if j == G.k:
            profile.append({"level": j, "injective": "Yes", "certificate": "identity"})
            continue
        gj = G.group(j)
        images = [gj.reduce(G.image((g,), j)) for g in basis]
        entry = {"level": j}
        dead = [g for g, im in zip(basis, images) if not im] if gj.is_free else []
        if gk.is_free and gj.is_free:
            rank = FoldedGraph(images, gj.simplified.kept).rank if basis else 0
            ok = rank == len(basis) and not dead
            entry.update(injective="Yes" if ok else "No", certificate="stallings-rank",
                         image_rank=rank, source_rank=len(basis))
            if not ok:
                entry["witness"] = format_word((dead[0],)) if dead else None
        else:
            entry.update(_kernel_search(G, j, basis, budget, word_bound, search_limit))
        profile.append(entry)
    verdict = Tri.YES if any(p["injective"] == "Yes" for p in profile) else (
        Tri.UNKNOWN if any(p["injective"] == "Unknown" for p in profile) else Tri.NO)
    return verdict, profile


def _kernel_search(G, j, basis, budget, word_bound, search_limit):
    count = 0
    for w in words_up_to(basis, word_bound):
        if not w:
            continue
        count += 1
        if count > search_limit:
            break
        if G.is_trivial(G.image(w, j), j, budget).yes and G.is_trivial(w, G.k, budget).no:
            return {"injective": "No", "certificate": "kernel-search", "witness": format_word(w)}
    return {"injective": "Unknown", "certificate": "kernel-search",
            "searched": min(count, search_limit)}


def is_closed_subgroup(G: CechGroup, H: SubgroupSpec, budget: int = DEFAULT_BUDGET,
                       word_bound: int = DEFAULT_WORD_BOUND,
                       search_limit: int = DEFAULT_SEARCH_LIMIT):
    """Closedness of ⟨H⟩ at truncation, plus escaping-family detection.

    The closure test includes the finest level, where φ is the identity, so
    a word outside ⟨H⟩ never passes it; with injectivity at the finest
    level this makes every subgroup of a truncated tower closed.  The search
    over words up to ``word_bound`` looks for elements outside ⟨H⟩ whose
    coarse images all lie in the image of ⟨H⟩: the finite-depth shadow of
    a Cauchy sequence in ⟨H⟩ whose limit escapes it.
    """
    ssuj, _ = is_semilocally_simply_uniform_joinable(G, budget, word_bound, search_limit)
    basis = G.fine_basis()
    best = None
    count = 0
    exhausted = True
    for w in words_up_to(basis, word_bound):
        if not w:
            continue
        count += 1
        if count > search_limit:
            exhausted = False
            break
        v, profile = closure_member(G, H, w, budget)
        if profile[-1]["verdict"] != "No":
            continue
        depth = yes_prefix(profile)
        if depth > 0 and (best is None or depth > best["yes_prefix"]):
            best = {"word": format_word(w), "yes_prefix": depth, "profile": profile}
    verdict = Tri.YES if ssuj is Tri.YES else Tri.UNKNOWN
    return verdict, {
        "closed": verdict.value,
        "reason": "closure test includes the finest level; injective projection at level k",
        "escaping_family": best is not None,
        "label": "escaping family detected" if best else "no escaping family within bound",
        "witness": best,
        "bounds": {"word_bound": word_bound, "searched": min(count, search_limit),
                   "exhausted": exhausted},
    }


def escaping_profile(G: CechGroup, H: SubgroupSpec, w, budget: int = DEFAULT_BUDGET) -> dict:
    """Membership report for one candidate limit word ``w``."""
    fine = G.group(G.k).member(H.generators, w)
    v, profile = closure_member(G, H, w, budget)
    escaping = fine.no and yes_prefix(profile) > 0
    return {
        "word": format_word(w),
        "finest_member": fine.verdict.value,
        "finest_certificate": fine.certificate,
        "closure": v.value,
        "profile": profile,
        "yes_prefix": yes_prefix(profile),
        "label": "escaping family detected" if escaping else "no escape",
    }


def is_locally_uniform_joinable(G: CechGroup, budget: int = DEFAULT_BUDGET,
                                max_cosets: int = DEFAULT_MAX_COSETS):
    """For each level i, the coarsest j >= i whose pairs join by E_i-short threads.

    A pair (x, y) joins by an E_i-short thread iff the level-i loop word of
    x, y lies in the image of the finest group of x's component; this is a
    membership question, answered exactly when the level group is free.

    With finitely many levels j = k always works (the one-step finest chain
    is its own short thread), so the verdict only counts joining levels
    strictly coarser than the finest one for i < k.  The vacuous finest
    attempt is still listed in the profile.
    """
    tower = G.tower
    fine = G.fine
    profile = []
    for i in range(1, G.k + 1):
        entry = {"level": i, "joining_level": None, "attempts": []}
        outcome = Tri.NO
        for j in range(i, G.k + 1):
            status, witness = _joins(G, i, j, max_cosets)
            entry["attempts"].append({"level": j, "verdict": status.value, "witness": witness})
            if status is Tri.YES:
                entry["joining_level"] = j
                if j < G.k or i == G.k:
                    outcome = Tri.YES
                break
            if status is Tri.UNKNOWN:
                outcome = Tri.UNKNOWN
        entry["verdict"] = outcome.value
        profile.append(entry)
    verdicts = [Tri(e["verdict"]) for e in profile]
    if all(v is Tri.YES for v in verdicts):
        v = Tri.YES
    elif any(v is Tri.NO for v in verdicts):
        v = Tri.NO
    else:
        v = Tri.UNKNOWN
    return v, profile


def _joins(G: CechGroup, i: int, j: int, max_cosets: int):
    fine = G.fine
    status, witness = Tri.YES, None
    for a, b in G.tower.level(j).sorted_pairs():
        if fine.component_of[a] != fine.component_of[b]:
            return Tri.NO, [a, b]
        comp = fine.component_of[a]
        gi = G.group(i, fine.root_path(a)[0])
        sub = [G.image((t,), i) for t, (u, _) in enumerate(fine.generators, start=1)
               if fine.component_of[u] == comp]
        d = gi.member(sub, G.level_loop_word(a, b, i), max_cosets)
        if d.no:
            return Tri.NO, [a, b]
        if d.verdict is Tri.UNKNOWN and witness is None:
            status, witness = Tri.UNKNOWN, [a, b]
    return status, witness


__all__ = [
    "CechGroup", "SubgroupSpec", "Thread", "cech_group", "closure_member",
    "concat_threads", "escaping_profile", "gauge", "identity_thread", "invert_thread",
    "is_closed_subgroup", "is_e_short", "is_locally_uniform_joinable",
    "is_semilocally_simply_uniform_joinable", "make_thread", "star_level",
    "thread_chain", "yes_prefix", "components",
]

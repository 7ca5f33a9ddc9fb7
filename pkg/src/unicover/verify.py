"""Checkers for the covering-map axioms at tower granularity.

Every checker returns a :class:`Report`.  A ``Fail`` carries a witness
that :func:`replay` re-derives from scratch.  Quantifiers over entourages
range over tower levels, which is enough because the levels form a basis.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .core import Entourage, ScaleTower, build_skeleton
from .cover import TowerMap
from .pi1 import (DEFAULT_MAX_COSETS, Overflow, LevelGroup, Tri, coset_enumerate,
                  format_word, inverse, mul, present_pi1, seq_word, words_up_to)

PASS, FAIL, UNKNOWN = "Pass", "Fail", "Unknown"
DEFAULT_LIFT_WORD_BOUND = 6
DEFAULT_LIFT_SEARCH_LIMIT = 5_000


@dataclass
class Report:
    check: str
    verdict: str
    witness: dict | None = None
    trace: list = field(default_factory=list)
    bounds: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict:
        return {"check": self.check, "verdict": self.verdict, "witness": self.witness,
                "trace": self.trace, "bounds": self.bounds}


def _verdict_of(values) -> str:
    if all(v == PASS for v in values):
        return PASS
    if any(v == FAIL for v in values):
        return FAIL
    return UNKNOWN


# ---------------------------------------------------------------------------
# generates the structure

def check_generates_structure(f: TowerMap) -> Report:
    """(a) every target level contains the image of some source level;
    (b) every source-level image contains some target level, diagonal included."""
    src, tgt = f.source, f.target
    trace = []
    witness = None
    for j in range(1, tgt.k + 1):
        found = next((i for i in range(1, src.k + 1) if f.image_level(i) <= tgt.level(j)), None)
        trace.append({"clause": "a", "target_level": j, "source_level": found})
        if found is None and witness is None:
            witness = {"clause": "a", "target_level": j, "pairs": [
                list(min(f.image_level(i).pairs - tgt.level(j).pairs))
                for i in range(1, src.k + 1)]}
    missing = sorted(set(range(tgt.n)) - set(f.vmap))
    for i in range(1, src.k + 1):
        img = f.image_level(i)
        found = None
        if not missing:
            found = next((j for j in range(1, tgt.k + 1) if tgt.level(j) <= img), None)
        trace.append({"clause": "b", "source_level": i, "target_level": found})
        if found is None and witness is None:
            if missing:
                witness = {"clause": "b", "source_level": i, "missing_point": missing[0]}
            else:
                witness = {"clause": "b", "source_level": i, "pairs": [
                    list(min(tgt.level(j).pairs - img.pairs)) for j in range(1, tgt.k + 1)]}
    return Report("generates-structure", FAIL if witness else PASS, witness, trace)


# ---------------------------------------------------------------------------
# chain lifting

def _lift_sets(f: TowerMap, i: int, j: int, x: int):
    """Explore lift sets of all level-j target chains from f(x); first dead chain or None."""
    src, tgt = f.source, f.target
    fibers = {}
    start = (f(x), frozenset([x]))
    parent = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        y, S = state
        for y2 in tgt.neighbors(j, y):
            if y2 not in fibers:
                fibers[y2] = f.fiber(y2)
            S2 = frozenset(x2 for x2 in fibers[y2] if any(src.related(i, s, x2) for s in S))
            nxt = (y2, S2)
            if nxt in parent:
                continue
            parent[nxt] = state
            if not S2:
                chain = []
                node = nxt
                while node is not None:
                    chain.append(node[0])
                    node = parent[node]
                return chain[::-1]
            queue.append(nxt)
    return None


def check_chain_lifting(f: TowerMap) -> Report:
    """For each source level i, a target level j whose chains from f(x) all lift from x."""
    src, tgt = f.source, f.target
    trace = []
    witness = None
    for i in range(1, src.k + 1):
        found = None
        failures = []
        for j in range(1, tgt.k + 1):
            dead = None
            for x in range(src.n):
                chain = _lift_sets(f, i, j, x)
                if chain is not None:
                    dead = {"target_level": j, "point": x, "chain": chain}
                    break
            if dead is None:
                found = j
                break
            failures.append(dead)
        trace.append({"source_level": i, "target_level": found})
        if found is None and witness is None:
            witness = {"source_level": i, "failures": failures}
    return Report("chain-lifting", FAIL if witness else PASS, witness, trace,
                  {"method": "exhaustive lift-set search"})


def _replay_chain_lifting(f: TowerMap, w: dict) -> bool:
    i = w["source_level"]
    if len(w["failures"]) != f.target.k:
        return False
    for fail in w["failures"]:
        chain, j, x = fail["chain"], fail["target_level"], fail["point"]
        if chain[0] != f(x):
            return False
        S = {x}
        for a, b in zip(chain, chain[1:]):
            if not f.target.related(j, a, b):
                return False
            S = {x2 for x2 in f.fiber(b) if any(f.source.related(i, s, x2) for s in S)}
        if S:
            return False
    return True


# ---------------------------------------------------------------------------
# uniqueness

def transverse_levels(f: TowerMap) -> list[int]:
    out = []
    for i in range(1, f.source.k + 1):
        if all(f(a) != f(b) for a, b in f.source.level(i).pairs):
            out.append(i)
    return out


def find_transverse_entourage(f: TowerMap) -> int | None:
    """Deepest level on which f is injective between related points."""
    levels = transverse_levels(f)
    return max(levels) if levels else None


def check_uniqueness_of_chain_lifts(f: TowerMap) -> Report:
    levels = transverse_levels(f)
    if levels:
        return Report("uniqueness-of-chain-lifts", PASS, None,
                      [{"transverse_levels": levels, "deepest": max(levels)}])
    src = f.source
    a, b = min((a, b) for a, b in src.level(src.k).pairs if f(a) == f(b))
    witness = {"level": src.k, "chains": [[a, a], [a, b]], "pair": [a, b]}
    return Report("uniqueness-of-chain-lifts", FAIL, witness, [{"transverse_levels": []}])


def _pair_walk(f: TowerMap, i: int, ip: int):
    """Reachable pairs of equal-image level-ip chains from a common start.

    Returns ``(chains, depth)``: ``chains`` is a pair of chains ending in a
    pair not related at level i (None if there is none), ``depth`` the
    largest BFS depth explored.
    """
    src = f.source
    parent = {}
    depth = {}
    queue = deque()
    for x in range(src.n):
        parent[(x, x)] = None
        depth[(x, x)] = 1
        queue.append((x, x))
    while queue:
        a, b = queue.popleft()
        if not src.related(i, a, b):
            ca, cb = [], []
            node = (a, b)
            while node is not None:
                ca.append(node[0])
                cb.append(node[1])
                node = parent[node]
            return (ca[::-1], cb[::-1]), max(depth.values())
        na = (a,) + src.neighbors(ip, a)
        nb = (b,) + src.neighbors(ip, b)
        for a2 in na:
            for b2 in nb:
                if f(a2) == f(b2) and (a2, b2) not in parent:
                    parent[(a2, b2)] = (a, b)
                    depth[(a2, b2)] = depth[(a, b)] + 1
                    queue.append((a2, b2))
    return None, max(depth.values())


def check_approx_uniqueness(f: TowerMap) -> Report:
    """For each level i, a level i' >= i whose equal-image chains stay E_i-close.

    Decided exactly by reachability over pairs of points with equal image,
    which covers chains of every length; the 2n bound is echoed for reference.
    """
    src = f.source
    trace, witness, longest = [], None, 0
    for i in range(1, src.k + 1):
        found, failures = None, []
        for ip in range(i, src.k + 1):
            chains, depth = _pair_walk(f, i, ip)
            longest = max(longest, depth)
            if chains is None:
                found = ip
                break
            failures.append({"level": ip, "chains": [list(chains[0]), list(chains[1])]})
        trace.append({"level": i, "chain_level": found})
        if found is None and witness is None:
            witness = {"level": i, "failures": failures}
    return Report("approx-uniqueness", FAIL if witness else PASS, witness, trace,
                  {"method": "exact pair reachability", "chain_length_bound": 2 * src.n,
                   "longest_needed": longest})


def _replay_approx(f: TowerMap, w: dict) -> bool:
    i = w["level"]
    src = f.source
    if [x["level"] for x in w["failures"]] != list(range(i, src.k + 1)):
        return False
    for fail in w["failures"]:
        ip, (ca, cb) = fail["level"], fail["chains"]
        if len(ca) != len(cb) or ca[0] != cb[0]:
            return False
        for c in (ca, cb):
            if any(not src.related(ip, a, b) for a, b in zip(c, c[1:])):
                return False
        if any(f(a) != f(b) for a, b in zip(ca, cb)):
            return False
        if all(src.related(i, a, b) for a, b in zip(ca, cb)):
            return False
    return True


# ---------------------------------------------------------------------------
# generalized path lifting

class _PathLifter:
    """Finest-level lifting data for a map whose finest image is finest."""

    def __init__(self, f: TowerMap, max_cosets: int):
        self.f = f
        self.max_cosets = max_cosets
        self.skx = build_skeleton(f.source, f.source.k)
        self.sky = build_skeleton(f.target, f.target.k)
        self._py: dict = {}

    def pres_y(self, y):
        if y not in self._py:
            p = present_pi1(self.sky, y)
            comp = p.component_of[y]
            gens = [t for t, (a, _) in enumerate(p.generators, start=1) if p.component_of[a] == comp]
            self._py[y] = (p, LevelGroup(p, gens), gens)
        return self._py[y]

    def data(self, x):
        f = self.f
        px = present_pi1(self.skx, x)
        py, gy, gens = self.pres_y(f(x))
        comp = px.component_of[x]
        K = []
        for t, (a, _) in enumerate(px.generators, start=1):
            if px.component_of[a] == comp:
                K.append(seq_word(tuple(f(v) for v in px.generator_loop(t)), py))
        fibers = {}
        for v in range(f.source.n):
            if px.component_of[v] == comp:
                fibers.setdefault(f(v), []).append(
                    (v, seq_word(tuple(f(u) for u in px.root_path(v)), py)))
        ycomp = [y for y in range(f.target.n) if py.component_of[y] == py.component_of[f(x)]]
        return py, gy, gens, K, fibers, ycomp


def check_generalized_path_lifting(f: TowerMap, word_bound: int = DEFAULT_LIFT_WORD_BOUND,
                                   max_cosets: int = DEFAULT_MAX_COSETS,
                                   search_limit: int = DEFAULT_LIFT_SEARCH_LIMIT) -> Report:
    """Every finest-level thread from f(x) is the image of a thread from x.

    Threads from f(x) to y are the words w of π₁ at f(x); the images of
    threads from x to points x' over y form the cosets K·r(x').  With a
    finite-index K the cover check is exact on the coset table; otherwise
    words up to ``word_bound`` are searched for an uncovered one.
    """
    src, tgt = f.source, f.target
    bounds = {"word_bound": word_bound, "max_cosets": max_cosets}
    bad = next(((a, b) for a, b in src.level(src.k).sorted_pairs()
                if f(a) != f(b) and not tgt.related(tgt.k, f(a), f(b))), None)
    if bad is not None:
        return Report("generalized-path-lifting", UNKNOWN,
                      {"reason": "finest level does not map into the finest level",
                       "pair": list(bad)}, [], bounds)
    lifter = _PathLifter(f, max_cosets)
    trace = []
    unknown = None
    for x in range(src.n):
        py, gy, gens, K, fibers, ycomp = lifter.data(x)
        table = coset_enumerate(py, K, max_cosets, gens=gens)
        if not isinstance(table, Overflow):
            reps = table.representatives()
            for y in ycomp:
                covered = {table.act(0, r) for _, r in fibers.get(y, [])}
                if len(covered) < table.index:
                    c = min(set(range(table.index)) - covered)
                    w = reps[c]
                    witness = {"point": x, "end": y, "word": format_word(w), "method": "coset-table",
                               "index": table.index}
                    return Report("generalized-path-lifting", FAIL, witness, trace, bounds)
            trace.append({"point": x, "method": "coset-table", "index": table.index})
            continue
        found, undecided = _uncovered_word(gy, K, fibers, ycomp, word_bound, search_limit)
        if found is not None:
            y, w = found
            witness = {"point": x, "end": y, "word": format_word(w), "method": "word-search"}
            return Report("generalized-path-lifting", FAIL, witness, trace, bounds)
        trace.append({"point": x, "method": "word-search", "undecided": undecided})
        unknown = unknown or {"point": x, "reason": "infinite index, no uncovered word within bound"}
    return Report("generalized-path-lifting", UNKNOWN if unknown else PASS, unknown, trace, bounds)


def _uncovered_word(gy, K, fibers, ycomp, word_bound, search_limit):
    undecided = 0
    for y in ycomp:
        if not fibers.get(y):
            return (y, ()), undecided
    count = 0
    for w in words_up_to(gy.simplified.kept, word_bound):
        count += 1
        if count > search_limit:
            break
        for y in ycomp:
            verdicts = [gy.member(K, mul(w, inverse(r))).verdict for _, r in fibers[y]]
            if all(v is Tri.NO for v in verdicts):
                return (y, w), undecided
            if not any(v is Tri.YES for v in verdicts):
                undecided += 1
    return None, undecided


def _replay_path_lifting(f: TowerMap, w: dict, max_cosets: int = DEFAULT_MAX_COSETS) -> bool:
    from .pi1 import parse_word
    lifter = _PathLifter(f, max_cosets)
    py, gy, gens, K, fibers, ycomp = lifter.data(w["point"])
    word = parse_word(w["word"])
    if w["end"] not in ycomp:
        return False
    return all(gy.member(K, mul(word, inverse(r))).no for _, r in fibers.get(w["end"], []))


# ---------------------------------------------------------------------------
# classification

UNIFORM = "UniformCovering"
GENERALIZED = "GeneralizedUniformCovering"
NEITHER = "Neither"


def classify_map(f: TowerMap, word_bound: int = DEFAULT_LIFT_WORD_BOUND,
                 max_cosets: int = DEFAULT_MAX_COSETS) -> dict:
    """Label a map by the two covering definitions, with all sub-reports.

    A map meeting both definitions is labelled UniformCovering, the
    stronger notion; ``uniform`` and ``generalized`` give each verdict.
    """
    reports = {
        "generates": check_generates_structure(f),
        "chain_lifting": check_chain_lifting(f),
        "unique_chain_lifts": check_uniqueness_of_chain_lifts(f),
        "approx_uniqueness": check_approx_uniqueness(f),
        "path_lifting": check_generalized_path_lifting(f, word_bound, max_cosets),
    }
    v = {k: r.verdict for k, r in reports.items()}
    uniform = _verdict_of([v["generates"], v["chain_lifting"], v["unique_chain_lifts"]])
    general = _verdict_of([v["generates"], v["chain_lifting"], v["approx_uniqueness"],
                           v["path_lifting"]])
    if uniform == PASS:
        label = UNIFORM
    elif general == PASS:
        label = GENERALIZED
    elif uniform == FAIL and general == FAIL:
        label = NEITHER
    else:
        label = UNKNOWN
    return {
        "label": label,
        "uniform": uniform,
        "generalized": general,
        "transverse_level": find_transverse_entourage(f),
        "reports": {k: r.to_dict() for k, r in reports.items()},
    }


# ---------------------------------------------------------------------------
# replay

def replay(report: Report | dict, f: TowerMap) -> bool:
    """True iff the witness of a Fail report still demonstrates the failure."""
    r = report.to_dict() if isinstance(report, Report) else report
    if r["verdict"] != FAIL:
        return False
    w = r["witness"]
    name = r["check"]
    src, tgt = f.source, f.target
    if name == "generates-structure":
        if w["clause"] == "a":
            j = w["target_level"]
            return len(w["pairs"]) == src.k and all(
                tuple(p) in f.image_level(i).pairs and tuple(p) not in tgt.level(j)
                for i, p in enumerate(w["pairs"], start=1))
        if "missing_point" in w:
            return w["missing_point"] not in f.vmap
        img = f.image_level(w["source_level"])
        return len(w["pairs"]) == tgt.k and all(
            tuple(p) in tgt.level(j).pairs and tuple(p) not in img.pairs
            for j, p in enumerate(w["pairs"], start=1))
    if name == "chain-lifting":
        return _replay_chain_lifting(f, w)
    if name == "uniqueness-of-chain-lifts":
        a, b = w["pair"]
        return a != b and f(a) == f(b) and src.related(src.k, a, b)
    if name == "approx-uniqueness":
        return _replay_approx(f, w)
    if name == "generalized-path-lifting":
        return _replay_path_lifting(f, w)
    raise ValueError(f"no replay for check {name!r}")


# ---------------------------------------------------------------------------
# separation

def is_fiber_separated(f: TowerMap) -> bool:
    """No two distinct points over the same image are related at every level."""
    src = f.source
    return all(f(a) != f(b) for a, b in src.level(src.k).pairs)


def is_strictly_hausdorff(tower: ScaleTower) -> bool:
    return len(tower.level(tower.k)) == 0


__all__ = [
    "FAIL", "GENERALIZED", "NEITHER", "PASS", "Report", "UNIFORM", "UNKNOWN",
    "check_approx_uniqueness", "check_chain_lifting", "check_generalized_path_lifting",
    "check_generates_structure", "check_uniqueness_of_chain_lifts", "classify_map",
    "find_transverse_entourage", "is_fiber_separated", "is_strictly_hausdorff", "replay",
    "transverse_levels",
]

"""Instance tests of the structural facts about covering maps.

Each law checks its hypotheses on the instance first; instances failing a
hypothesis are skipped and counted, never counted as passes.  Corpus
instances are fixed; random instances come from seeded towers and
quotient maps.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .core import Chain, ScaleTower, build_skeleton, is_chain_connected
from .cover import CoverSpace, TowerMap, build_cover, cover_map
from .gp import (CechGroup, SubgroupSpec, Thread, is_closed_subgroup, is_e_short,
                 is_locally_uniform_joinable, make_thread, thread_chain)
from .pi1 import LevelGroup, Overflow, Tri, free_reduce, present_pi1, seq_word, words_up_to
from .verify import (FAIL, PASS, UNKNOWN, check_approx_uniqueness, check_chain_lifting,
                     check_generates_structure, check_uniqueness_of_chain_lifts, classify_map,
                     is_fiber_separated, is_strictly_hausdorff)

SUITES = ("composition", "hausdorff-closed", "short-lift", "unique-generalized-lift",
          "hausdorff-inheritance", "lifting-lemma-instance")
DEFAULT_THREAD_WORD_BOUND = 2
DEFAULT_THREAD_STARTS = 3


@dataclass
class Outcome:
    instance: str
    part: str
    status: str  # pass | fail | skip | unknown
    detail: dict = field(default_factory=dict)
    corpus: bool = True


# ---------------------------------------------------------------------------
# instances

@dataclass
class Instances:
    covers: list
    maps: list
    pairs: list  # (name, f, g) with f: X -> Y, g: Y -> Z
    lift_pairs: list  # (name, f, g) with f, g both into the same base
    corpus: bool = True


def corpus_instances() -> Instances:
    from .corpus import standard_covers, standard_maps
    covers = standard_covers()
    maps = [(f"{n}/p", cv.projection) for n, cv in covers] + standard_maps()
    by = dict(covers)
    pairs = []
    for small, big in [("g^6", "g^3"), ("g^6", "g^2"), ("g^4", "g^2"), ("g^2", "g^1"),
                       ("g^3", "g^1")]:
        c1, c2 = by[f"cycle12/{small}"], by[f"cycle12/{big}"]
        pairs.append((f"cycle12/{small}->{big}", cover_map(c1, c2), c2.projection))
    for base in ("hawaiian2", "hawaiian3"):
        c1, c2 = by[f"{base}/parity"], by[f"{base}/whole"]
        pairs.append((f"{base}/parity->whole", cover_map(c1, c2), c2.projection))
    c1, c2 = by["torus6/a,b^2"], by["torus6/whole"]
    pairs.append(("torus6/a,b^2->whole", cover_map(c1, c2), c2.projection))
    twin = dict(standard_maps())["twin/fold"]
    from .corpus import identity_map
    pairs.append(("twin/id,fold", identity_map(twin.source), twin))
    lift_pairs = []
    names = ["g^1", "g^2", "g^3", "g^4", "g^6"]
    for a in names:
        for b in names:
            lift_pairs.append((f"cycle12/{a}<-{b}", by[f"cycle12/{a}"].projection,
                               by[f"cycle12/{b}"].projection))
        base = by[f"cycle12/{a}"].base
        from .corpus import identity_map as _id
        lift_pairs.append((f"cycle12/{a}<-base", by[f"cycle12/{a}"].projection, _id(base)))
    for base in ("hawaiian2", "hawaiian3", "torus6"):
        keys = [n for n in by if n.startswith(base + "/")]
        for a in keys:
            for b in keys:
                lift_pairs.append((f"{a}<-{b}", by[a].projection, by[b].projection))
    return Instances(covers, maps, pairs, lift_pairs, True)


def random_instances(seed: int, count: int) -> Instances:
    from .corpus import parity_subgroup, random_quotient, random_tower
    rng = random.Random(seed)
    covers, maps, pairs, lift_pairs = [], [], [], []
    for t in range(count):
        s = rng.randrange(1 << 30)
        n = rng.randint(4, 7)
        k = rng.randint(1, 3)
        X = random_tower(s, n, k)
        tag = f"random{t}(seed={s},n={n},k={k})"
        f = random_quotient(s + 1, X, max(2, n - 2))
        g = random_quotient(s + 2, f.target, max(1, f.target.n - 1))
        pairs.append((tag, f, g))
        maps.append((tag + "/quotient", f))
        G = CechGroup(X, 0)
        basis = G.fine_basis()
        whole = build_cover(X, 0, SubgroupSpec("whole", tuple((b,) for b in basis)), group=G,
                            strict=False)
        even = build_cover(X, 0, SubgroupSpec("parity", tuple(parity_subgroup(basis))), group=G,
                           strict=False)
        for name, cv in (("whole", whole), ("parity", even)):
            if isinstance(cv, CoverSpace):
                covers.append((f"{tag}/{name}", cv))
                maps.append((f"{tag}/{name}/p", cv.projection))
        if isinstance(whole, CoverSpace) and isinstance(even, CoverSpace):
            lift_pairs.append((f"{tag}/parity<-whole", even.projection, whole.projection))
            lift_pairs.append((f"{tag}/whole<-parity", whole.projection, even.projection))
    return Instances(covers, maps, pairs, lift_pairs, False)


# ---------------------------------------------------------------------------
# helpers

class _Cache:
    def __init__(self, word_bound: int, max_cosets: int):
        self.word_bound = word_bound
        self.max_cosets = max_cosets
        self._classify: dict = {}

    def classify(self, f: TowerMap) -> dict:
        key = id(f)
        if key not in self._classify:
            self._classify[key] = (f, classify_map(f, max_cosets=self.max_cosets))
        return self._classify[key][1]


def _implies(name, part, hyp, concl, detail=None, corpus=True) -> Outcome:
    """Combine a hypothesis verdict and a conclusion verdict into a status."""
    detail = dict(detail or {})
    if hyp == FAIL or hyp is False:
        return Outcome(name, part, "skip", detail, corpus)
    if hyp == UNKNOWN:
        return Outcome(name, part, "unknown", {**detail, "undecided": "hypothesis"}, corpus)
    if concl == PASS or concl is True:
        return Outcome(name, part, "pass", detail, corpus)
    if concl == UNKNOWN:
        return Outcome(name, part, "unknown", {**detail, "undecided": "conclusion"}, corpus)
    return Outcome(name, part, "fail", detail, corpus)


def _and(*vs) -> str:
    vs = [PASS if v is True else FAIL if v is False else v for v in vs]
    if all(v == PASS for v in vs):
        return PASS
    if any(v == FAIL for v in vs):
        return FAIL
    return UNKNOWN


_TRI = {Tri.YES: PASS, Tri.NO: FAIL, Tri.UNKNOWN: UNKNOWN}


def _dedupe(seq):
    out = []
    for v in seq:
        if not out or out[-1] != v:
            out.append(v)
    return tuple(out)


def _threads(G: CechGroup, bound: int, starts: int):
    """Threads of G's component from a few starts, words up to ``bound``."""
    comp = G.component
    basis = G.fine_basis()
    words = [w for w in words_up_to(basis, bound)]
    for s in comp[:starts]:
        for e in comp:
            for w in words:
                yield Thread(s, e, w)


def _push(G_src: CechGroup, G_tgt: CechGroup, f: TowerMap, t: Thread) -> Thread:
    ch = thread_chain(G_src, t)
    seq = _dedupe(f(v) for v in ch.seq)
    return make_thread(G_tgt, Chain(G_tgt.k, seq), require_component=False)


# ---------------------------------------------------------------------------
# laws

def law_composition(name, f, g, cache, corpus=True) -> list[Outcome]:
    h = f.compose(g)
    gen_f = check_generates_structure(f).verdict
    out = []
    detail = {"f_generates": gen_f}
    parts = [
        ("1", lambda: check_generates_structure(h).verdict,
         lambda: check_generates_structure(g).verdict),
        ("2", lambda: _and(check_chain_lifting(f).verdict, check_approx_uniqueness(h).verdict),
         lambda: check_approx_uniqueness(g).verdict),
        ("3", lambda: check_uniqueness_of_chain_lifts(h).verdict,
         lambda: check_uniqueness_of_chain_lifts(g).verdict),
        ("4", lambda: check_chain_lifting(h).verdict,
         lambda: check_chain_lifting(g).verdict),
    ]
    for part, hyp, concl in parts:
        hv = _and(gen_f, hyp()) if gen_f != FAIL else FAIL
        cv = concl() if hv != FAIL else None
        out.append(_implies(name, f"composition.{part}", hv, cv,
                            {**detail, "hypothesis": hv, "conclusion": cv}, corpus))
    return out


def law_hausdorff_closed(name, cv: CoverSpace, cache, corpus=True) -> list[Outcome]:
    """Fiber separation of GP/H matches closedness of H."""
    sep = is_fiber_separated(cv.projection)
    closed, info = is_closed_subgroup(cv.group, cv.H, word_bound=4, search_limit=300)
    if closed is Tri.UNKNOWN:
        concl = UNKNOWN
    else:
        concl = sep == (closed is Tri.YES)
    return [_implies(name, "hausdorff-closed", True, concl,
                     {"fiber_separated": sep, "closed": closed.value}, corpus)]


def law_short_lift(name, f: TowerMap, cache, corpus=True, bound=DEFAULT_THREAD_WORD_BOUND,
                   starts=DEFAULT_THREAD_STARTS) -> list[Outcome]:
    """For each source level i some target level j has: F_j-short images come from E_i-short threads."""
    c = cache.classify(f)
    hyp = c["generalized"]
    if hyp != PASS:
        return [_implies(name, "short-lift", hyp, None, {}, corpus)]
    GX = CechGroup(f.source, 0)
    GY = CechGroup(f.target, f(0))
    threads = list(_threads(GX, bound, starts))
    images = [_push(GX, GY, f, t) for t in threads]
    found = {}
    undecided = False
    for i in range(1, f.source.k + 1):
        found[i] = None
        for j in range(1, f.target.k + 1):
            ok = True
            for t, ft in zip(threads, images):
                img = is_e_short(GY, ft, j)
                if img.no:
                    continue
                src = is_e_short(GX, t, i)
                if img.verdict is Tri.UNKNOWN or src.verdict is Tri.UNKNOWN:
                    undecided = True
                    ok = False
                    break
                if src.no:
                    ok = False
                    break
            if ok:
                found[i] = j
                break
    concl = PASS if all(v is not None for v in found.values()) else (UNKNOWN if undecided else FAIL)
    return [_implies(name, "short-lift", PASS, concl,
                     {"levels": {str(i): j for i, j in found.items()}, "threads": len(threads)},
                     corpus)]


def _collision(f: TowerMap, bound: int, starts: int):
    """A non-identity thread whose image is an identity thread, or None.

    Two lifts a, b of one thread exist iff a⁻¹b is such a thread.
    """
    GX = CechGroup(f.source, 0)
    GY = CechGroup(f.target, f(0))
    for t in _threads(GX, bound, starts):
        if f(t.start) != f(t.end):
            continue
        ft = _push(GX, GY, f, t)
        d = GY.is_trivial(ft.word, GY.k)
        if d.verdict is Tri.UNKNOWN:
            return "unknown"
        if not d.yes:
            continue
        if t.start != t.end:
            return t
        src = GX.is_trivial(t.word, GX.k)
        if src.verdict is Tri.UNKNOWN:
            return "unknown"
        if src.no:
            return t
    return None


def law_unique_generalized_lift(name, f: TowerMap, cache, corpus=True,
                                bound=DEFAULT_THREAD_WORD_BOUND,
                                starts=DEFAULT_THREAD_STARTS) -> list[Outcome]:
    c = cache.classify(f)
    gen = c["generalized"]
    sep = is_fiber_separated(f)
    out = []
    hyp_a = _and(gen, sep)
    coll = _collision(f, bound, starts) if gen == PASS else None
    unique = UNKNOWN if coll == "unknown" else coll is None
    detail = {"collision": dict(coll.__dict__) if isinstance(coll, Thread) else coll}
    out.append(_implies(name, "unique-generalized-lift.a", hyp_a,
                        None if hyp_a == FAIL else unique, detail, corpus))
    hyp_b = _and(gen, is_strictly_hausdorff(f.target), unique) if gen == PASS else FAIL
    out.append(_implies(name, "unique-generalized-lift.b", hyp_b,
                        None if hyp_b == FAIL else is_strictly_hausdorff(f.source), detail, corpus))
    return out


def law_hausdorff_inheritance(name, f: TowerMap, cache, corpus=True) -> list[Outcome]:
    c = cache.classify(f)
    hyp = _and(c["uniform"], is_strictly_hausdorff(f.target))
    concl = None if hyp == FAIL else is_strictly_hausdorff(f.source)
    return [_implies(name, "hausdorff-inheritance", hyp, concl,
                     {"uniform": c["uniform"]}, corpus)]


def _count_lifts(f: TowerMap, g: TowerMap, x0: int, z0: int, limit: int = 2) -> int:
    """Number of maps h with f∘h = g, h(z0) = x0, finest level into finest level."""
    Z, X = g.source, f.source
    order, seen = [z0], {z0}
    for v in order:
        for u in Z.neighbors(Z.k, v):
            if u not in seen:
                seen.add(u)
                order.append(u)
    if len(order) != Z.n:
        return limit  # other components are unconstrained
    cands = {z: f.fiber(g(z)) for z in order}
    assign = {}
    count = 0

    def extend(t):
        nonlocal count
        if count >= limit:
            return
        if t == len(order):
            count += 1
            return
        z = order[t]
        for x in ([x0] if t == 0 else cands[z]):
            if all(X.related(X.k, x, assign[u]) for u in Z.neighbors(Z.k, z) if u in assign):
                assign[z] = x
                extend(t + 1)
                del assign[z]

    if x0 in cands[z0]:
        extend(0)
    return count


def _image_gens(f: TowerMap, x0: int, pres_y):
    skel = build_skeleton(f.source, f.source.k)
    px = present_pi1(skel, x0)
    comp = px.component_of[x0]
    return [seq_word(tuple(f(v) for v in px.generator_loop(t)), pres_y)
            for t, (a, _) in enumerate(px.generators, start=1) if px.component_of[a] == comp]


def law_lifting_lemma(name, f: TowerMap, g: TowerMap, cache, corpus=True) -> list[Outcome]:
    """A unique lift of g through f exists iff g_* lands in f_*."""
    Y = f.target
    x0, z0 = 0, 0
    if g(z0) != f(x0) or g.target != Y:
        return [_implies(name, "lifting-lemma-instance", FAIL, None, {}, corpus)]
    c = cache.classify(f)
    GZ = CechGroup(g.source, z0)
    luj, _ = is_locally_uniform_joinable(GZ)
    hyp = _and(c["generalized"], is_fiber_separated(f), _TRI[luj],
               is_chain_connected(g.source), g.is_uniformly_continuous())
    if hyp == FAIL:
        return [_implies(name, "lifting-lemma-instance", hyp, None, {}, corpus)]
    py = present_pi1(build_skeleton(Y, Y.k), f(x0))
    comp = py.component_of[f(x0)]
    gens = [t for t, (a, _) in enumerate(py.generators, start=1) if py.component_of[a] == comp]
    gy = LevelGroup(py, gens)
    fx = _image_gens(f, x0, py)
    gz = _image_gens(g, z0, py)
    verdicts = [gy.member(fx, w, cache.max_cosets).verdict for w in gz]
    inclusion = Tri.NO if Tri.NO in verdicts else Tri.UNKNOWN if Tri.UNKNOWN in verdicts else Tri.YES
    lifts = _count_lifts(f, g, x0, z0)
    if inclusion is Tri.UNKNOWN:
        concl = UNKNOWN
    else:
        concl = lifts <= 1 and (lifts == 1) == (inclusion is Tri.YES)
    return [_implies(name, "lifting-lemma-instance", hyp, concl,
                     {"lifts": lifts, "inclusion": inclusion.value}, corpus)]


# ---------------------------------------------------------------------------

def run_suite(suite: str, inst: Instances, cache: _Cache) -> list[Outcome]:
    out = []
    c = inst.corpus
    if suite == "composition":
        for name, f, g in inst.pairs:
            out += law_composition(name, f, g, cache, c)
    elif suite == "hausdorff-closed":
        for name, cv in inst.covers:
            out += law_hausdorff_closed(name, cv, cache, c)
    elif suite == "short-lift":
        for name, f in inst.maps:
            out += law_short_lift(name, f, cache, c)
    elif suite == "unique-generalized-lift":
        for name, f in inst.maps:
            out += law_unique_generalized_lift(name, f, cache, c)
    elif suite == "hausdorff-inheritance":
        for name, f in inst.maps:
            out += law_hausdorff_inheritance(name, f, cache, c)
    elif suite == "lifting-lemma-instance":
        for name, f, g in inst.lift_pairs:
            out += law_lifting_lemma(name, f, g, cache, c)
    else:
        raise ValueError(f"unknown suite {suite!r}; known: all, {', '.join(SUITES)}")
    return out


def law_harness(suite: str = "all", seed: int = 0, instances: int = 50,
                max_cosets: int = 2_000, include_corpus: bool = True) -> dict:
    """Run law suites over the corpus and ``instances`` seeded random towers."""
    suites = SUITES if suite == "all" else (suite,)
    for s in suites:
        if s not in SUITES:
            raise ValueError(f"unknown suite {s!r}; known: all, {', '.join(SUITES)}")
    cache = _Cache(2, max_cosets)
    pools = []
    if include_corpus:
        pools.append(corpus_instances())
    pools.append(random_instances(seed, instances))
    results = []
    for s in suites:
        outcomes = []
        for pool in pools:
            outcomes += run_suite(s, pool, cache)
        parts = sorted({o.part for o in outcomes})
        summary = []
        for p in parts:
            mine = [o for o in outcomes if o.part == p]
            summary.append({
                "part": p,
                "checked": sum(o.status in ("pass", "fail") for o in mine),
                "passed": sum(o.status == "pass" for o in mine),
                "conclusion_failures": sum(o.status == "fail" for o in mine),
                "skipped_hypothesis": sum(o.status == "skip" for o in mine),
                "unknown": sum(o.status == "unknown" for o in mine),
                "corpus_unknown": sum(o.status == "unknown" and o.corpus for o in mine),
                "failures": [{"instance": o.instance, "detail": o.detail}
                             for o in mine if o.status == "fail"],
            })
        results.append({"suite": s, "parts": summary})
    total_fail = sum(p["conclusion_failures"] for r in results for p in r["parts"])
    total_unknown = sum(p["unknown"] for r in results for p in r["parts"])
    return {"seed": seed, "instances": instances, "suites": results,
            "conclusion_failures": total_fail, "unknown": total_unknown,
            "corpus_unknown": sum(p["corpus_unknown"] for r in results for p in r["parts"])}


__all__ = ["SUITES", "corpus_instances", "law_harness", "random_instances", "run_suite"]

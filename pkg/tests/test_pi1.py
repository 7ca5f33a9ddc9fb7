import itertools

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import free_group
from sympy.matrices.normalforms import smith_normal_form

from unicover.core import build_skeleton, make_chain
from unicover.corpus import cycle_space, hawaiian_tower, random_tower
from unicover.pi1 import (FoldedGraph, InvalidOracleUse, LevelGroup, Overflow, SimplifiedGroup,
                          Tri, abelian_rank, bonding_hom, chain_to_word, coset_enumerate,
                          format_word, free_reduce, inverse, member, mul, parse_word,
                          present_pi1, rewrite_search, replay_trace, smith_diagonal,
                          stallings_member, todd_coxeter)
from unicover.pi1.words import canonical_cyclic, cyclic_reduce, words_up_to


def pres(tower, level=1, base=0):
    return present_pi1(build_skeleton(tower, level), base)


# words ----------------------------------------------------------------------

@given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=30))
def test_free_reduce_idempotent_and_inverse(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert all(a != -b for a, b in zip(r, r[1:]))
    assert free_reduce(mul(r, inverse(r))) == ()


@given(st.lists(st.sampled_from([1, -1, 2, -2, 7, -7]), max_size=20))
def test_format_parse_round_trip(w):
    r = free_reduce(w)
    assert parse_word(format_word(r)) == r


def test_cyclic_helpers():
    assert cyclic_reduce((1, 2, -1)) == (2,)
    assert canonical_cyclic((2, 1)) == canonical_cyclic((1, 2))
    assert len(list(words_up_to([1, 2], 2))) == 1 + 4 + 12


# presentations ---------------------------------------------------------------

def test_cycle12_presentation(cycle12):
    p = pres(cycle12)
    assert p.rank == 1 and all(not r for r in p.relators)
    assert abelian_rank(p) == (1, [])
    loop = make_chain(cycle12, 1, list(range(12)) + [0])
    assert chain_to_word(loop, p) == (1,)
    assert chain_to_word(make_chain(cycle12, 1, [0] + list(range(11, -1, -1))), p) == (-1,)


def test_complete_graph_is_trivial():
    p = pres(cycle_space(6, [3]))
    assert abelian_rank(p) == (0, [])
    table = coset_enumerate(p, [])
    assert not isinstance(table, Overflow) and table.index == 1


def test_two_components():
    two = cycle_space(6, [1])
    from unicover.core import ScaleTower, Entourage
    pairs = [(a, (a + 1) % 6) for a in range(6)] + [(6 + a, 6 + (a + 1) % 6) for a in range(6)]
    t = ScaleTower(tuple(map(str, range(12))), (Entourage.from_pairs(pairs),))
    p = pres(t)
    assert p.n_components == 2 and p.rank == 2
    assert abelian_rank(p) == (2, [])
    assert two  # fixture sanity


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 5_000), st.integers(3, 9), st.integers(1, 3))
def test_rank_formula_and_relator_alphabet(seed, n, k):
    t = random_tower(seed, n, k)
    for j in range(1, k + 1):
        p = pres(t, j)
        assert p.rank == p.n_edges - p.n_points + p.n_components
        for r in p.relators:
            assert all(1 <= abs(x) <= p.rank for x in r)
        for (a, b, c), r in zip(p.triangles, p.relators):
            forest = [p.is_forest_edge(*e) for e in ((a, b), (b, c), (a, c))]
            if all(forest):
                assert r == ()


# Smith normal form against sympy ---------------------------------------------

@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=4, max_size=4), min_size=1, max_size=5))
def test_smith_matches_sympy(rows):
    ours = smith_diagonal(rows)
    snf = smith_normal_form(Matrix(rows), domain=ZZ)
    theirs = [abs(snf[i, i]) for i in range(min(snf.shape)) if snf[i, i] != 0]
    assert ours == sorted(theirs)


# Stallings ---------------------------------------------------------------------

def test_stallings_hand_example():
    a, b, c = 1, 2, 3
    H = [(a,), (b,)]
    assert member(H, (a, b, a, -b))
    assert not member(H, (c,))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=4), min_size=1,
                max_size=3),
       st.lists(st.integers(0, 5), min_size=1, max_size=4), st.lists(st.booleans(), min_size=4,
                                                                       max_size=4))
def test_stallings_accepts_products_of_generators(gens, picks, signs):
    gens = [free_reduce(g) for g in gens]
    w = ()
    for t, p in enumerate(picks):
        g = gens[p % len(gens)]
        w = mul(w, g if signs[t % 4] else inverse(g))
    assert member(gens, w)


def test_stallings_rank_and_refusal():
    g = FoldedGraph([(1, 1), (1, 2, -1)])
    assert g.rank == 2
    with pytest.raises(InvalidOracleUse):
        stallings_member([(1,)], (1,), pres(cycle_space(6, [3])))


# Todd-Coxeter against sympy ------------------------------------------------------

def test_free_cyclic_index():
    t = todd_coxeter([1], [], [(1, 1, 1)])
    assert t.index == 3
    assert t.act(0, (1,)) == t.act(0, (1, 1, 1, 1))


@pytest.mark.parametrize("rels,sub", [
    ([(1, 1), (2, 2, 2), (1, 2, 1, 2)], []),
    ([(1, 1), (2, 2, 2), (1, 2, 1, 2)], [(1,)]),
    ([(1,) * 4, (2, 2), (1, 2, 1, -2)], []),
    ([(1, 2, -1, -2)], [(1,), (2, 2, 2, 2, 2)]),
])
def test_coset_index_matches_sympy(rels, sub):
    F, x, y = free_group("x y")
    conv = lambda w: F.identity if not w else \
        __import__("functools").reduce(lambda u, v: u * v, [(x, y)[abs(l) - 1] ** (1 if l > 0 else -1) for l in w])
    G = FpGroup(F, [conv(r) for r in rels])
    expected = G.coset_enumeration([conv(h) for h in sub]).table
    ours = todd_coxeter([1, 2], rels, sub)
    assert ours.index == len(expected)


def test_overflow_on_infinite_index():
    assert isinstance(todd_coxeter([1, 2], [], [(1,)], max_cosets=50), Overflow)


# Tietze --------------------------------------------------------------------------

@settings(max_examples=25, deadline=None)
@given(st.integers(0, 5_000), st.integers(4, 9), st.integers(1, 3))
def test_tietze_preserves_abelianization_and_relators(seed, n, k):
    t = random_tower(seed, n, k)
    p = pres(t, 1)
    s = SimplifiedGroup.of(p)
    assert s.abelianization.invariants() == abelian_rank(p)
    for g, w in s.subst.items():
        assert all(abs(x) in s.kept for x in w)
    for r in p.relators:
        img = s.reduce(r)
        # every original relator dies in the simplified group
        assert s.abelianization.is_zero(img)
        if s.is_free:
            assert free_reduce(img) == ()


def test_tietze_on_torus_keeps_commutator(torus6):
    s = LevelGroup(pres(torus6, 2)).simplified
    assert len(s.kept) == 2 and len(s.relators) == 1
    assert s.abelianization.invariants() == (2, [])


# engine ------------------------------------------------------------------------

def test_engine_decisions(cycle12):
    g = LevelGroup(pres(cycle12))
    assert g.is_trivial((1, -1)).verdict is Tri.YES
    assert g.is_trivial((1,)).verdict is Tri.NO
    k6 = LevelGroup(pres(cycle_space(6, [3])))
    d = k6.is_trivial((1, 2, -1))
    assert d.yes and k6.replay((1, 2, -1), d)


def test_rewrite_trace_replays():
    rels = [(1, 2, -1, -2)]
    found, trace = rewrite_search((1, 2, -1, -2, 2, 1, -2, -1), rels, budget=5_000)[:2]
    if found:
        assert replay_trace((1, 2, -1, -2, 2, 1, -2, -1), rels, trace)


def test_e_homotopy_of_cycle_paths(cycle12):
    from unicover.pi1 import are_chains_e_homotopic
    p = pres(cycle12)
    a = make_chain(cycle12, 1, [0, 1])
    b = make_chain(cycle12, 1, [0] + list(range(11, 0, -1)))
    assert are_chains_e_homotopic(a, b, p).verdict is Tri.NO
    assert are_chains_e_homotopic(a, make_chain(cycle12, 1, [0, 1, 2, 1]), p).verdict is Tri.YES


# bonding ---------------------------------------------------------------------------

def test_bonding_kills_small_circle():
    t = hawaiian_tower(2)
    phi = bonding_hom(t, 2, 1, 0)
    coarse = LevelGroup(phi.target)
    assert all(d.yes for d in phi.check_relators(coarse))
    verdicts = sorted(coarse.is_trivial(phi((g,))).verdict.value for g in (1, 2))
    assert verdicts == ["No", "Yes"]
    for g in (1, 2):
        img = phi((g,))
        if not coarse.is_trivial(img).yes:
            assert coarse.simplified.abelianization.invariants()[0] == 1
            assert abs(sum(1 if x > 0 else -1 for x in coarse.reduce(img))) == 1


def test_bonding_on_duplicated_levels():
    t = cycle_space(12, [1])
    from unicover.core import ScaleTower
    dup = ScaleTower(t.labels, (t.level(1), t.level(1)))
    phi = bonding_hom(dup, 2, 1, 0)
    assert phi((1,)) == (1,)

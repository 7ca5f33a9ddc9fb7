import pytest

from unicover.core import TowerError, build_skeleton, dump_tower, is_chain_connected
from unicover.corpus import (RECIPES, emit, expected_facts, random_quotient, random_tower,
                             standard_covers, standard_maps, twin_points)
from unicover.gp import CechGroup, is_locally_uniform_joinable
from unicover.pi1 import LevelGroup, Overflow

FACTS = expected_facts()


@pytest.mark.parametrize("key", sorted(FACTS["towers"]))
def test_tower_facts(key):
    name, *params = key.split()
    t = emit(name, *params)
    facts = FACTS["towers"][key]
    assert t.n == facts["points"]
    if "edges_per_level" in facts:
        assert [len(t.level(j)) for j in range(1, t.k + 1)] == facts["edges_per_level"]
    if "triangles_per_level" in facts:
        assert [len(build_skeleton(t, j).triangles)
                for j in range(1, t.k + 1)] == facts["triangles_per_level"]
    G = CechGroup(t, 0)
    assert [G.level_rank(j) for j in range(1, t.k + 1)] == facts["ranks"]
    if "abelian" in facts:
        got = [list(LevelGroup(G.pres(j)).simplified.abelianization.invariants())
               for j in range(1, t.k + 1)]
        assert got == facts["abelian"]
    if "locally_uniform_joinable" in facts:
        v, profile = is_locally_uniform_joinable(G)
        assert v.value == facts["locally_uniform_joinable"]
        assert profile[0]["attempts"][0]["witness"] == facts["witness_pair"]


def test_cover_facts():
    covers = dict(standard_covers())
    for key, facts in FACTS["covers"].items():
        cv = covers[key.replace("cycle12 ", "cycle12/")]
        assert cv.index == facts["index"] and cv.total.n == facts["points"]


@pytest.mark.parametrize("name", sorted(RECIPES))
def test_recipes_regenerate_identically(name):
    assert dump_tower(emit(name)) == dump_tower(emit(name))


def test_unknown_recipe():
    with pytest.raises(TowerError, match="unknown corpus recipe"):
        emit("mobius")


def test_gapped_cycle_is_chain_connected():
    assert is_chain_connected(emit("gapped", 8, 1))


def test_twin_points():
    src, fold = twin_points()
    assert src.n == 2 and fold.target.n == 1
    assert all((0, 1) in src.level(j) for j in range(1, src.k + 1))


def test_random_quotient_is_a_tower_map():
    t = random_tower(3, 8, 2)
    f = random_quotient(3, t, 4)
    assert len(set(f.vmap)) <= 4
    for j in range(1, t.k + 1):
        assert f.image_level(j) <= f.target.level(j)


def test_standard_lists_are_finite_and_named():
    covers = standard_covers()
    assert len({n for n, _ in covers}) == len(covers)
    assert not any(isinstance(cv, Overflow) for _, cv in covers)
    assert len(standard_maps()) >= 6

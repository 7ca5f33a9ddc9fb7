import pytest

from unicover.corpus import (arc_inclusion, collapse_map, cycle_space, double_cover,
                             identity_map, point_inclusion, twin_points)
from unicover.cover import build_cover
from unicover.gp import SubgroupSpec
from unicover.verify import (FAIL, GENERALIZED, NEITHER, PASS, UNIFORM, check_approx_uniqueness,
                             check_chain_lifting, check_generalized_path_lifting,
                             check_generates_structure, check_uniqueness_of_chain_lifts,
                             classify_map, find_transverse_entourage, is_fiber_separated,
                             is_strictly_hausdorff, replay, transverse_levels)


@pytest.fixture(scope="module")
def projection():
    cv = build_cover(cycle_space(12, [1]), 0, SubgroupSpec("g^3", ((1, 1, 1),)))
    return cv.projection


def test_cover_projection_passes_everything(projection):
    f = projection
    for check in (check_generates_structure, check_chain_lifting, check_uniqueness_of_chain_lifts,
                  check_approx_uniqueness, check_generalized_path_lifting):
        assert check(f).verdict == PASS, check.__name__
    assert find_transverse_entourage(f) == 1
    c = classify_map(f)
    assert c["label"] == UNIFORM and c["generalized"] == PASS


def test_twin_fold_is_generalized_only():
    _, fold = twin_points()
    c = classify_map(fold)
    assert c["label"] == GENERALIZED and c["uniform"] == FAIL
    assert c["transverse_level"] is None
    r = c["reports"]["unique_chain_lifts"]
    assert r["verdict"] == FAIL and replay(r, fold)
    assert not is_fiber_separated(fold)


def test_arc_inclusion_fails_at_clause_b():
    f = arc_inclusion()
    r = check_generates_structure(f)
    assert r.verdict == FAIL and r.witness["clause"] == "b"
    assert replay(r, f)
    c = classify_map(f)
    assert c["label"] == NEITHER
    for rep in c["reports"].values():
        if rep["verdict"] == FAIL:
            assert replay(rep, f), rep["check"]


def test_point_inclusion():
    f = point_inclusion()
    r = check_chain_lifting(f)
    assert r.verdict == FAIL and replay(r, f)
    g = check_generalized_path_lifting(f)
    assert g.verdict == FAIL and replay(g, f)
    assert classify_map(f)["label"] == NEITHER


def test_collapse_map():
    f = collapse_map(cycle_space(12, [1]))
    assert check_chain_lifting(f).verdict == PASS
    assert find_transverse_entourage(f) is None
    u = check_uniqueness_of_chain_lifts(f)
    assert u.verdict == FAIL and replay(u, f)


def test_identity_and_double_cover():
    t = cycle_space(12, [1, 0.5])
    ident = identity_map(t)
    assert find_transverse_entourage(ident) == t.k
    assert check_generalized_path_lifting(ident).verdict == PASS
    assert classify_map(double_cover(t))["label"] == UNIFORM


def test_transverse_levels_are_monotone(projection):
    levels = transverse_levels(projection)
    assert levels
    lo = min(levels)
    assert levels == list(range(lo, projection.source.k + 1))


def test_approx_uniqueness_reports_bound(projection):
    r = check_approx_uniqueness(projection)
    assert r.bounds["chain_length_bound"] == 2 * projection.source.n


def test_replay_of_pass_is_false(projection):
    assert replay(check_chain_lifting(projection), projection) is False


def test_hausdorff_helpers():
    assert not is_strictly_hausdorff(cycle_space(6, [1]))
    src, _ = twin_points()
    assert not is_strictly_hausdorff(src)

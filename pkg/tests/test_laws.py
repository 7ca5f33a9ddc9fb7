import pytest

from unicover.laws import SUITES, law_harness, random_instances


def test_suites_listed():
    assert SUITES == ("composition", "hausdorff-closed", "short-lift", "unique-generalized-lift",
                      "hausdorff-inheritance", "lifting-lemma-instance")


def test_random_instances_are_deterministic():
    a = random_instances(5, 6)
    b = random_instances(5, 6)
    assert [cv.dumps() for _, cv in a.covers] == [cv.dumps() for _, cv in b.covers]


@pytest.mark.parametrize("suite", SUITES)
def test_each_suite_on_random_towers(suite):
    r = law_harness(suite, seed=11, instances=8, include_corpus=False)
    assert r["conclusion_failures"] == 0
    parts = r["suites"][0]["parts"]
    assert parts
    for p in parts:
        assert p["checked"] + p["skipped_hypothesis"] + p["unknown"] >= 0
        assert p["passed"] + p["conclusion_failures"] == p["checked"]


def test_composition_has_four_parts():
    r = law_harness("composition", seed=2, instances=4, include_corpus=False)
    assert len(r["suites"][0]["parts"]) == 4


def test_unknown_suite():
    with pytest.raises(ValueError):
        law_harness("nope")

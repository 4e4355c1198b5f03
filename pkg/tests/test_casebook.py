import json

import pytest

from druzkowski.casebook import (
    FURTER_LIFT_DIMENSION,
    SCENARIOS,
    ScenarioResult,
    furter_pipeline,
    random_keller_generator,
    random_keller_with_inverse,
    run_suite,
)
from druzkowski.inversion import formal_inverse
from druzkowski.polymap import compose_maps, jacobian_determinant, map_degree


@pytest.fixture(scope="module")
def suite():
    return run_suite()


def test_full_suite_passes(suite):
    assert suite["passed"], suite["failed"]
    assert suite["total"] == len(SCENARIOS)
    assert [s["name"] for s in suite["scenarios"]] == sorted(SCENARIOS)


def test_furter_expectations():
    res = furter_pipeline()
    assert res.passed, [e for e in res.expectations if not e.passed]
    names = [e.name for e in res.expectations]
    assert len(names) == len(set(names))
    assert res.values["lift_dimension"] == FURTER_LIFT_DIMENSION


def test_filter_selects_by_substring_and_glob():
    rep = run_suite("furter")
    assert [s["name"] for s in rep["scenarios"]] == ["furter"]
    assert rep["filter"] == "furter"
    rep = run_suite("trace-minors-*")
    assert [s["name"] for s in rep["scenarios"]] == ["trace-minors-permuted", "trace-minors-triangular"]
    assert run_suite("no-such-scenario")["total"] == 0


def test_corrupted_expectation_is_reported():
    def corrupted(seed):
        res = ScenarioResult("corrupted")
        res.expect("one equals two", 1 == 2, "deliberately false")
        return res

    def crashing(seed):
        raise RuntimeError("boom")

    rep = run_suite(scenarios={"good": SCENARIOS["rank-one-normal-form"], "corrupted": corrupted, "crash": crashing})
    assert not rep["passed"]
    assert rep["failed"] == ["corrupted", "crash"]
    crash = next(s for s in rep["scenarios"] if s["name"] == "crash")
    assert "boom" in crash["expectations"][0]["detail"]


def test_reports_are_byte_identical(suite):
    again = run_suite()
    assert json.dumps(suite, sort_keys=True) == json.dumps(again, sort_keys=True)
    other = run_suite("rank-one", seed=7)
    assert json.dumps(other) == json.dumps(run_suite("rank-one", seed=7))


def test_keller_generator():
    assert random_keller_generator(3, 2, 0, 1).is_identity()
    for seed in range(10):
        F, Finv = random_keller_with_inverse(3, 3, 3, seed)
        assert jacobian_determinant(F) == 1
        assert map_degree(F) <= 3
        assert compose_maps(F, Finv).is_identity()
        assert formal_inverse(F).inverse == Finv
    assert random_keller_generator(2, 2, 2, 5) == random_keller_generator(2, 2, 2, 5)
    with pytest.raises(ValueError):
        random_keller_generator(0, 2, 1, 0)
    with pytest.raises(ValueError):
        random_keller_generator(2, 1, 1, 0)

import json

import pytest

from kmroots.cartan import validate
from kmroots.verify import (
    CHECKS,
    DEFAULT_CORPUS,
    build_entries,
    check_affine_periodicity,
    check_partition_bound,
    check_real_mult_one,
    check_small_multiple_witness,
    check_sum_bound,
    run_verify,
)

from conftest import A1_AFF, A2, HYP, RANK3


@pytest.fixture(scope="module")
def report():
    return run_verify()


def test_default_corpus_passes(report):
    assert report.passed
    assert [c.name for c in report.checks] == [name for name, _ in CHECKS]
    assert len(report.matrices) == len(DEFAULT_CORPUS)
    for c in report.checks:
        assert c.anchor
        if c.name != "affine_periodicity":
            assert c.instances > 0


def test_report_deterministic(report):
    assert run_verify().to_json() == report.to_json()
    data = json.loads(report.to_json())
    assert data["passed"] is True
    assert "runtime" not in json.dumps(data)


def test_real_mult_one_counts():
    entries = build_entries([validate(A2, "A2")], 3)
    res = check_real_mult_one(entries, 3)
    assert res.instances == 3 and res.passed


def test_single_matrix_subset():
    r = run_verify([validate(HYP, "hyp")], 12)
    assert r.passed
    assert r.check("affine_periodicity").instances == 0
    assert r.check("small_multiple_witness").instances >= 1


def test_failures_carry_witnesses():
    entries = build_entries([validate(HYP, "hyp")], 12)
    entries[0].table._mult[(2, 2)] = 0  # sabotage one entry
    res = check_sum_bound(entries, 12)
    assert not res.passed
    f = res.failures[0]
    assert f["matrix"] == "hyp" and "x" in f and "y" in f and "mults" in f
    res = check_small_multiple_witness(entries, 12)
    assert res.passed  # (3,3) still has multiplicity 3


def test_witness_failure_lists_multiples():
    entries = build_entries([validate(HYP, "hyp")], 30)
    for k in range(1, 6):
        entries[0].table._mult[(k, k)] = 1
    res = check_small_multiple_witness(entries, 30)
    assert any(f["beta"] == [1, 1] and f["mults"] == [1, 1, 1, 1, 1] for f in res.failures)


def test_affine_periodicity_values():
    entries = build_entries([validate(A1_AFF, "a")], 30)
    assert check_affine_periodicity(entries).passed
    short = build_entries([validate(A1_AFF, "a")], 6)
    assert not check_affine_periodicity(short).passed


def test_partition_bound_rank3():
    entries = build_entries([validate(RANK3, "r3")], 30)
    res = check_partition_bound(entries, 12)
    assert res.passed and res.instances > 0


def test_table_output(report):
    text = report.to_table()
    assert "all checks passed" in text
    assert text.splitlines()[0].startswith("check")

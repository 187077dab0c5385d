import pytest

from perfcode.core import GroupTable
from perfcode.errors import InternalError, InvalidRange
from perfcode.theorems import (
    FAIL,
    NOT_APPLICABLE,
    PASS,
    CheckResult,
    allowed_socle_order,
    check_empty_delta,
    check_main_theorem,
    check_observation_quaternion,
    check_pi_plus_one,
    check_small_delta,
    check_solvable_bound,
    involution_class_count,
    is_exceptional_shape,
    lemma_scans,
    run_group_checks,
    table1_row,
)

from conftest import cached_group, catalogue_groups


def test_fail_requires_witness():
    with pytest.raises(InternalError):
        CheckResult("x", FAIL)
    with pytest.raises(ValueError):
        CheckResult("x", "maybe")


def test_empty_delta_examples():
    r = check_empty_delta(cached_group("cyclic:7"))
    assert r.status == NOT_APPLICABLE and r.data["delta_count"] == 0
    r = check_empty_delta(cached_group("quaternion:32"))
    assert r.status == PASS and r.data["delta_count"] == 0
    r = check_empty_delta(cached_group("cyclic:12"))
    assert r.status == PASS and r.data["delta_count"] == 2


@pytest.mark.parametrize("spec,row", [
    ("cyclic:49", "Z_{p^2}"), ("cyclic:12", "Z_p:Z_{2^n}"), ("sl2:3", "Q_8:Z_3"),
    ("binary_octahedral", "SL(2,3).Z_2"), ("semidirect:cyclic:11:cyclic:5:exp=3", "Z_q:Z_p"),
    ("semidirect:cyclic:5:quaternion:8:exp=1,-1", "Z_p:Q_{2^n}"),
])
def test_main_theorem_equality_rows(spec, row):
    r = check_main_theorem(cached_group(spec))
    assert r.status == PASS
    assert r.data["row"] == row and r.data["delta_count"] == r.data["pi"]


def test_main_theorem_strict():
    r = check_main_theorem(cached_group("alternating:5"))
    assert r.status == PASS and r.data["delta_count"] == 7 and r.data["pi"] == 3 and r.data["row"] is None


def test_main_theorem_detects_false_equality():
    # hand a group to the checker with a forged delta to make sure failures carry witnesses
    G = cached_group("cyclic:12")
    from perfcode.codes import DeltaReport

    fake = GroupTable(G.mul, name="forged", source="forged")
    fake._cache[("delta", False)] = DeltaReport("forged", 12, (), 2)
    r = check_main_theorem(fake)
    assert r.status == FAIL and r.witness["group"] == "forged"


def test_exceptional_shapes():
    assert is_exceptional_shape(cached_group("cyclic:13"))
    assert is_exceptional_shape(cached_group("quaternion:16"))
    assert is_exceptional_shape(cached_group("cyclic:32"))
    assert not is_exceptional_shape(cached_group("cyclic:9"))
    assert not is_exceptional_shape(cached_group("dihedral:8"))


def test_pi_plus_one_examples():
    r = check_pi_plus_one(cached_group("cyclic:27"))
    assert r.status == PASS and r.data["case"] == "i"
    A4 = cached_group("alternating:4")
    r = check_pi_plus_one(A4)
    assert r.status == PASS and r.data["case"] == "iii" and r.data["involution_classes"] == 1
    r = check_pi_plus_one(cached_group("sl2:5"))
    assert r.status == PASS and r.data["case"] == "non-solvable"
    assert "PSL(2,5)" in r.details and "generalized_quaternion(8)" in r.details
    assert check_pi_plus_one(cached_group("cyclic:12")).status == NOT_APPLICABLE


def _forged(spec, count):
    """A copy of the group whose cached delta has ``count`` entries, to reach checker branches."""
    from perfcode.codes import DeltaReport

    G = cached_group(spec)
    F = GroupTable(G.mul, name=spec, source=spec, gens=G.gens)
    F._cache[("delta", False)] = DeltaReport(spec, G.order, (None,) * count, 1)
    return F


def test_pi_plus_one_two_group_branch():
    # no catalogue 2-group has delta 2, so the branch is driven with forged counts
    sd16 = _forged("semidirect:cyclic:8:cyclic:2:exp=3", 2)
    assert involution_class_count(sd16) == 2
    r = check_pi_plus_one(sd16)
    assert r.status == PASS and r.data["case"] == "ii"
    r = check_pi_plus_one(_forged("dihedral:8", 2))
    assert r.status == FAIL and r.witness["involution_classes"] == 3


def test_solvable_bound_examples():
    r = check_solvable_bound(cached_group("cyclic:30"))
    assert r.status == PASS and r.data["delta_count"] == 6 and r.data["equality"] and r.data["condition"]
    r = check_solvable_bound(cached_group("alternating:4"))
    assert r.status == PASS and r.data["delta_count"] == 3 and r.data["bound"] == 2
    assert not r.data["equality"] and not r.data["condition"]
    r = check_solvable_bound(cached_group("elementary_abelian:2:2"))
    assert r.status == PASS and r.data["delta_count"] == 3
    assert check_solvable_bound(cached_group("alternating:5")).status == NOT_APPLICABLE


def test_small_delta_examples():
    assert check_small_delta(cached_group("cyclic:12")).status == PASS
    r = check_small_delta(cached_group("sl2:5"))
    assert r.status == PASS and r.data["socle_order"] == 60
    r = check_small_delta(cached_group("alternating:5"))
    assert r.status == PASS and r.data["socle_order"] is None


def test_allowed_socle_orders():
    for s in (60, 168, 360, 2448, 29120):
        assert allowed_socle_order(s)
    # p = 11: 120 = 8 * 15, odd part 3 * 5 -> allowed
    assert allowed_socle_order(11 * 120 // 2)
    # p = 13: 168 = 8 * 21 -> allowed; p = 19: 360 = 8 * 45 -> 3^2 * 5 not allowed
    assert allowed_socle_order(13 * 168 // 2)
    assert not allowed_socle_order(19 * 360 // 2)
    assert not allowed_socle_order(120)


def test_observation_quaternion():
    assert check_observation_quaternion(3).status == PASS
    r = check_observation_quaternion(6)
    assert r.status == PASS and r.data["checked"] > 0
    with pytest.raises(InvalidRange):
        check_observation_quaternion(2)


def test_lemma_scans_small_range():
    a, b, c = lemma_scans(60, 10**4)
    assert a.data["solutions"] == [2]
    assert b.data["counterexamples"] == []
    assert c.data["first"] == [7] and c.data["second"] == [5, 17]
    with pytest.raises(InvalidRange):
        lemma_scans(1, 100)
    with pytest.raises(InvalidRange):
        lemma_scans(10, 4)


def test_lemma_scan_independent():
    def is_prime(n):
        return n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))

    sols = [m for m in range(2, 30) if is_prime(2**m + 1) and is_prime(2 ** (m - 1) + 1)]
    assert sols == lemma_scans(29, 5)[0].data["solutions"]


def test_table_rows_only_for_listed_shapes():
    assert table1_row(cached_group("alternating:4")) is None
    assert table1_row(cached_group("cyclic:8")) is None
    assert table1_row(cached_group("product:cyclic:3*cyclic:3")) is None


def test_checks_partition_catalogue():
    statuses = {PASS, FAIL, NOT_APPLICABLE}
    for spec, G in catalogue_groups(100):
        for r in run_group_checks(G):
            assert r.status in statuses
            assert r.status != FAIL, (spec, r.check_name, r.witness)

import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import symmetric_matrices
from prseq.classifier import EPR_FAMILIES, PR_FAMILIES, get_family
from prseq.linalg import ConstructionKind as K, construct, direct_sum, duplicate_index, inverse
from prseq.sequences import compute_epr, compute_pr
from prseq.witnesses import (
    FIXTURE_NAME,
    InvalidInstanceError,
    WitnessRecipe,
    WitnessUnavailableError,
    build_fixture,
    cached_witness,
    recipe_for,
    witness,
    witness_epr,
    witness_pr,
)


class TestExamples:
    def test_pr1_order5(self):
        B = witness_pr("PR-1", 5)
        assert str(compute_pr(B)) == "0]10000"
        assert B == duplicate_index(duplicate_index(construct(K.ALLONES, 3), 1), 1)

    def test_pr11_order5(self):
        B = witness_pr("PR-11", 5)
        assert B == construct(K.CYCLE_ADJ, 5)
        assert str(compute_pr(B)) == "1]01011"

    def test_pr4_order7(self):
        assert str(compute_pr(witness_pr("PR-4", 7))) == "0]1010110"

    def test_epr_examples(self):
        assert witness_epr("EPR-1", 6) == construct(K.ALLONES, 6)
        assert str(compute_epr(witness_epr("EPR-1", 6))) == "ANNNNN"
        assert witness_epr("EPR-11c", 4) == construct(K.SQUARED_DIFF, 4)
        assert witness_epr("EPR-2a", 5) == inverse(construct(K.CYCLE_ADJ, 5))
        assert str(compute_epr(witness_epr("EPR-2a", 5))) == "ANSNA"

    def test_explicit_sequence(self):
        B = witness_pr("PR-2", 6, "0]101010")
        assert str(compute_pr(B)) == "0]101010"
        assert str(compute_pr(witness_pr("PR-2", 6))) == "0]101010"
        assert str(compute_pr(witness_pr("PR-2", 7, "0]1010100"))) == "0]1010100"

    def test_17a_via_fan_inverse(self):
        for n in (4, 6, 8):
            B = witness_epr("EPR-17a", n)
            assert B == inverse(construct(K.FAN_ADJ, n))
            assert compute_epr(B).letters == "SS" + "NS" * ((n - 4) // 2) + "NA"


class TestRecipes:
    def test_pr9(self):
        r = recipe_for("PR-9", 4)
        assert r.strategy == "DIRECT-SUM"
        assert r.evaluate() == direct_sum(construct(K.PATH_ADJ, 2), construct(K.ZERO, 2))
        assert r.to_dict()["children"][0]["kind"] == "PATH_ADJ"

    def test_epr8(self):
        for n in (3, 7):
            r = recipe_for("EPR-8", n)
            assert (r.strategy, r.kind, r.n) == ("CONSTRUCT", "ZERO", n)

    def test_pr16_search_cached(self):
        r = recipe_for("PR-16", 3)
        assert r.strategy == "SEARCH-CACHED"
        assert str(compute_pr(r.evaluate())) == "1]110"

    def test_orders_and_serialization(self):
        for t in PR_FAMILIES + EPR_FAMILIES:
            n = t.min_order if t.min_order >= 3 else 3
            if not list(t.instances(n)):
                n = next(m for m in range(3, 12) if list(t.instances(m)))
            r = recipe_for(t.id, n)
            assert r.n == n and r.family == t.id
            json.dumps(r.to_dict())

    def test_diagonal_conjugate_strategy(self):
        base = WitnessRecipe("CONSTRUCT", 4, kind="J_MINUS_2I")
        r = WitnessRecipe("DIAGONAL-CONJUGATE", 4, diag=(Fraction(2), Fraction(-1), Fraction(1, 3), Fraction(5)),
                          children=(base,))
        assert str(compute_epr(r.evaluate())) == "ANAA"
        assert r.to_dict()["diag"] == ["2", "-1", "1/3", "5"]


class TestErrors:
    def test_invalid_instance(self):
        with pytest.raises(InvalidInstanceError):
            witness_pr("PR-3", 3)  # family 3 starts at order 4
        with pytest.raises(InvalidInstanceError):
            witness_epr("EPR-2a", 4)  # odd orders only
        with pytest.raises(InvalidInstanceError):
            witness_pr("PR-2", 6, "0]10100")  # order mismatch
        with pytest.raises(InvalidInstanceError):
            witness_pr("PR-99", 5)
        with pytest.raises(InvalidInstanceError):
            witness_pr("EPR-1", 5)  # kind mismatch

    def test_order_cap(self):
        with pytest.raises(WitnessUnavailableError):
            witness_pr("PR-8", 21)

    def test_unknown_cache_key(self):
        with pytest.raises(WitnessUnavailableError):
            cached_witness("nope")


class TestFixture:
    def test_regenerates_identically(self):
        from importlib import resources
        shipped = json.loads((resources.files("prseq") / "data" / FIXTURE_NAME).read_text())
        assert build_fixture() == shipped

    def test_entries_verified(self):
        data = build_fixture()
        for e in data["entries"]:
            B = cached_witness(e["key"])
            assert B.n == e["order"] <= 7
            got = str(compute_pr(B)) if "]" in e["target"] else str(compute_epr(B))
            assert got == e["target"]


def test_all_families_small_orders():
    for t in PR_FAMILIES + EPR_FAMILIES:
        for n in range(3, 9):
            for _, s in t.instances(n):
                B = witness(t.id, n, s)
                assert str(compute_pr(B) if t.kind == "pr" else compute_epr(B)) == s


def test_max_order_constructive():
    B = witness_pr("PR-11", 14)
    assert B == duplicate_index(construct(K.CYCLE_ADJ, 13), 1)
    assert str(compute_pr(B)) == "1]" + "01" * 6 + "10"


@given(symmetric_matrices(max_n=5), st.data())
def test_diagonal_conjugation_invariance(B, data):
    d = [data.draw(st.builds(Fraction, st.integers(1, 9).map(lambda x: x * data.draw(st.sampled_from([-1, 1]))),
                             st.integers(1, 4))) for _ in range(B.n)]
    assert compute_epr(B.conjugate_diagonal(d)) == compute_epr(B)


def test_ana_witnesses_are_rigid():
    """Any witness whose epr starts ANA is ANA followed only by A."""
    for t in EPR_FAMILIES:
        for n in range(3, 11):
            for _, s in t.instances(n):
                e = compute_epr(witness_epr(t.id, n, s)).letters
                if e.startswith("ANA"):
                    assert e == "ANA" + "A" * (n - 3)

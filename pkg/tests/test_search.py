from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import cofactor_det, naive_epr, path
from prseq.linalg import RationalMatrix
from prseq.rules import check_epr
from prseq import search as S
from prseq.search import (
    SearchError,
    SearchSpec,
    SpaceTooLargeError,
    VerificationError,
    batch_minor,
    canonicalize,
    census,
    evaluate_batch,
    jblock_singularity_probe,
    parse_alphabet,
    search,
)
from prseq.sequences import compute_epr


class TestSpec:
    def test_space_bound(self):
        with pytest.raises(SpaceTooLargeError):
            SearchSpec(7)  # 3^28 matrices
        assert SearchSpec(7, mode="random", trials=10, seed=1).space_size == 3 ** 28

    def test_random_needs_seed_and_budget(self):
        with pytest.raises(SearchError):
            SearchSpec(4, mode="random", trials=10)
        with pytest.raises(SearchError):
            SearchSpec(4, mode="random", seed=1)

    def test_canonical_needs_pm1(self):
        with pytest.raises(SearchError):
            SearchSpec(4, canonical=True)
        assert SearchSpec(4, diag=[1], offdiag=[-1, 1], canonical=True).space_size == 2 ** 3

    def test_target_order(self):
        with pytest.raises(SearchError):
            SearchSpec(3, target="0]1010")

    def test_alphabet_parsing(self):
        assert parse_alphabet("1,-1,0") == (-1, 0, 1)
        assert parse_alphabet("1/2, 0") == (0, Fraction(1, 2))
        with pytest.raises(SearchError):
            parse_alphabet("a,b")


class TestExamples:
    def test_pr_0_101(self):
        r = search(SearchSpec(3, diag=[1], offdiag=[-1, 1], target="0]101"))
        assert r.found and r.visited == 8
        (entry,) = r.pr.values()
        assert str(S.compute_pr(entry.matrix)) == "0]101"
        B = entry.matrix
        # unit diagonal with an odd number of -1 off-diagonals
        assert B.diagonal() == (1, 1, 1)
        assert B.entry(1, 2) * B.entry(1, 3) * B.entry(2, 3) == -1

    def test_epr_nsna_finds_path(self):
        r = search(SearchSpec(4, diag=[0], offdiag=[0, 1], target="NSNA"))
        entry = r.epr["NSNA"]
        assert compute_epr(entry.matrix).letters == "NSNA"
        # A(P_4) belongs to the space and is among the counted attainers
        assert naive_epr(path(4)) == "NSNA"
        assert entry.count >= 1
        perms = 12  # labelled paths on 4 vertices
        assert entry.count >= perms

    def test_1_1011_not_found(self):
        r = search(SearchSpec(4, target="1]1011"))
        assert not r.found and r.exhaustive and r.visited == 3 ** 10
        assert "not a proof" in r.note


class TestCensus:
    def test_order2_binary(self):
        c = census(2, [0, 1], [0, 1])
        assert c.visited == 8
        # frozen from the 8-matrix enumeration
        assert sorted(c.epr) == ["AA", "AN", "NA", "NN", "SA", "SN"]
        assert sorted(c.pr) == ["0]10", "0]11", "1]00", "1]01", "1]10", "1]11"]
        assert sum(e.count for e in c.epr.values()) == 8

    def test_order3_passes_rules(self):
        c = census(3)
        assert c.visited == 3 ** 6
        for e in c.epr:
            assert check_epr(e) == []

    def test_order4_counts(self):
        c = census(4)
        assert sum(e.count for e in c.epr.values()) == 3 ** 10
        assert sum(e.count for e in c.pr.values()) == 3 ** 10
        for key, entry in c.epr.items():
            assert compute_epr(entry.matrix).letters == key

    def test_first_witness_is_lexicographically_least(self):
        c = census(2, [0, 1], [0, 1])
        # index order: diagonal (1,1),(2,2) then (1,2); 0 before 1
        assert c.epr["NN"].index == 0
        assert c.epr["NA"].matrix == RationalMatrix([[0, 1], [1, 0]])


class TestReproducibility:
    def test_random_same_seed(self):
        spec = SearchSpec(5, mode="random", trials=20_000, seed=11, chunk_size=4096)
        a, b = search(spec), search(spec)
        assert a.to_dict() == b.to_dict()

    def test_random_different_seed(self):
        a = search(SearchSpec(5, mode="random", trials=5000, seed=1))
        b = search(SearchSpec(5, mode="random", trials=5000, seed=2))
        assert a.to_dict() != b.to_dict()

    def test_parallel_matches_serial(self):
        spec = SearchSpec(4, chunk_size=5000)
        assert search(spec, jobs=2).to_dict() == search(spec, jobs=1).to_dict()


class TestEngine:
    @given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
    def test_batch_minor_matches_oracle(self, n, seed):
        rng = np.random.default_rng(seed)
        X = rng.integers(-3, 4, size=(3, n, n))
        X = np.triu(X) + np.triu(X, 1).transpose(0, 2, 1)
        for k in range(1, n + 1):
            for idx in combinations(range(n), k):
                got = batch_minor(X, idx)
                for b in range(3):
                    want = cofactor_det([[int(X[b, i, j]) for j in idx] for i in idx])
                    assert got[b] == want

    def test_object_fallback_is_exact(self):
        big = 10 ** 9
        spec = SearchSpec(3, diag=[big], offdiag=[-big, big], target="AAN")
        assert spec.free_positions
        r = search(spec)
        for key, entry in r.epr.items():
            assert compute_epr(entry.matrix).letters == key

    def test_rational_alphabet(self):
        c = census(3, ["1/2", 0], ["1/3", "-1/2"])
        for key, entry in c.epr.items():
            assert compute_epr(entry.matrix).letters == key
        assert sum(e.count for e in c.epr.values()) == 2 ** 6

    def test_verification_gate(self, monkeypatch):
        real = S.evaluate_batch

        def corrupt(X, allowed=None):
            alive, codes = real(X, allowed)
            return alive, (codes + 1) % 3  # lie about every letter

        monkeypatch.setattr(S, "evaluate_batch", corrupt)
        with pytest.raises(VerificationError):
            census(2, [0, 1], [0, 1])


def test_canonicalization_soundness():
    rng = np.random.default_rng(5)
    for _ in range(200):
        n = int(rng.integers(2, 7))
        X = rng.choice([-1, 1], size=(n, n))
        X = np.triu(X) + np.triu(X, 1).T
        B = RationalMatrix(X.tolist())
        C = canonicalize(B)
        assert all(C.entry(1, j) == 1 for j in range(2, n + 1))
        assert compute_epr(C) == compute_epr(B)


def test_ansnsn_order8_probe():
    """No random nonsingular order-8 +-1 matrix with epr prefix ANSNSN turns up."""
    rng = np.random.default_rng(2026)
    allowed = [frozenset({2}), frozenset({0}), frozenset({1}), frozenset({0}), frozenset({1}), frozenset({0}),
               frozenset({0, 1, 2}), frozenset({2})]
    for _ in range(10):
        X = rng.choice([-1, 1], size=(20_000, 8, 8)).astype(np.int64)
        X = np.triu(X) + np.triu(X, 1).transpose(0, 2, 1)
        alive, _ = evaluate_batch(X, allowed)
        assert len(alive) == 0


class TestJBlock:
    @pytest.mark.parametrize("n", [2, 4, 8])
    def test_probe(self, n):
        report = jblock_singularity_probe(n, 30, seed=3)
        assert report.ok and report.trials == 30

    def test_needs_even(self):
        with pytest.raises(SearchError):
            jblock_singularity_probe(5, 1, 0)

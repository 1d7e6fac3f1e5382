import json
from fractions import Fraction

import pytest

from prseq import verify as V
from prseq.linalg import det, matrix_from_json
from prseq.sequences import compute_epr
from prseq.verify import (
    PROFILES,
    SUITES,
    RejectionBudgetError,
    UnknownSuiteError,
    VerifyError,
    generate_matrix,
    run_suite,
    trial_seed,
)


class TestGenerators:
    @pytest.mark.parametrize("profile", PROFILES)
    def test_deterministic_and_symmetric(self, profile):
        for n in (1, 3, 6):
            a = generate_matrix(profile, n, 42)
            assert a == generate_matrix(profile, n, 42)
            assert a.n == n
            assert all(a.entry(i, j) == a.entry(j, i) for i in range(1, n + 1) for j in range(1, n + 1))

    def test_seeds_differ(self):
        assert generate_matrix("dense-random-rational", 5, 1) != generate_matrix("dense-random-rational", 5, 2)

    def test_zero_diagonal(self):
        for s in range(30):
            assert set(generate_matrix("zero-diagonal", 5, s).diagonal()) == {0}

    def test_sign_pattern(self):
        for s in range(30):
            B = generate_matrix("sign-pattern", 4, s)
            assert {B.entry(i, j) for i in range(1, 5) for j in range(1, 5)} <= {-1, 0, 1}

    def test_nonsingular(self):
        for s in range(30):
            assert det(generate_matrix("nonsingular", 5, s)) != 0

    def test_targeted_profile_is_varied(self):
        eprs = {compute_epr(generate_matrix("epr-prefix-targeted", 6, s)).letters for s in range(200)}
        assert len(eprs) > 40
        assert any("S" in e for e in eprs) and any(e.startswith("N") for e in eprs)

    def test_errors(self):
        with pytest.raises(VerifyError):
            generate_matrix("nope", 3, 0)
        with pytest.raises(VerifyError):
            generate_matrix("nonsingular", 0, 0)
        assert issubclass(RejectionBudgetError, VerifyError)

    def test_trial_seed(self):
        assert trial_seed(5, 3) == trial_seed(5, 3)
        assert len({trial_seed(5, t) for t in range(100)}) == 100


class TestSuites:
    @pytest.mark.parametrize("suite", [s for s in SUITES if s != "UNIQUE"])
    def test_small_runs_pass(self, suite):
        report = run_suite(suite, 40, seed=99)
        assert report.ok, report.failures[:1]
        assert report.trials == 40
        d = report.to_dict()
        assert d["ok"] and d["failures"] == [] and d["seed"] == 99

    def test_unique(self):
        report = run_suite("UNIQUE", 1, seed=0, n_range=(3, 6))
        assert report.ok and report.trials > 0

    def test_example_commands(self):
        assert run_suite("SCHUR", 200, seed=1, n_range=(3, 7)).ok
        assert run_suite("INVERSE-EPR", 200, seed=1, n_range=(3, 8)).ok

    def test_reproducible(self):
        a = run_suite("INVERSE-PR", 50, seed=3).to_dict()
        b = run_suite("INVERSE-PR", 50, seed=3).to_dict()
        a.pop("elapsed"), b.pop("elapsed")
        assert a == b

    def test_parallel_equivalent(self):
        a = run_suite("INHERIT", 30, seed=4, jobs=1)
        b = run_suite("INHERIT", 30, seed=4, jobs=2)
        assert a.failures == b.failures and a.trials == b.trials

    def test_bad_arguments(self):
        with pytest.raises(UnknownSuiteError):
            run_suite("NOPE", 1, 0)
        with pytest.raises(VerifyError):
            run_suite("SCHUR", 0, 0)
        with pytest.raises(VerifyError):
            run_suite("SCHUR", 1, 0, n_range=(5, 3))
        with pytest.raises(VerifyError):
            run_suite("JBLOCK", 1, 0, n_range=(1, 1))

    def test_jblock_orders_even(self, monkeypatch):
        seen = []
        monkeypatch.setitem(V._TRIALS, "JBLOCK", lambda rng, n, tseed, ctx: seen.append(n))
        run_suite("JBLOCK", 50, seed=0, n_range=(3, 7))
        assert seen and all(n % 2 == 0 and 3 <= n <= 7 for n in seen)


def test_failures_are_reported_with_the_matrix(monkeypatch):
    def broken(rng, n, tseed, ctx):
        B = generate_matrix("dense-random-rational", n, tseed)
        ctx["matrix"] = B
        V._expect(False, "planted counterexample")

    monkeypatch.setitem(V._TRIALS, "SCHUR", broken)
    report = run_suite("SCHUR", 3, seed=8)
    assert not report.ok and len(report.failures) == 3
    f = report.failures[0]
    assert f["message"] == "planted counterexample"
    # the recorded matrix is the one the trial used, and replays from its seed
    replay = matrix_from_json(json.loads(json.dumps(f["matrix"])))
    assert replay == generate_matrix("dense-random-rational", f["n"], f["trial_seed"])
    assert isinstance(replay.entry(1, 1), (int, Fraction))

"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

The lines are printed at the end of the pytest run (see conftest.py) and also
when this file is run directly with ``python tests/test_acceptance.py``.
"""
import time
from contextlib import contextmanager

import pytest

from oracles import J, J_minus, cycle, path
from prseq.classifier import (
    EPR_FAMILIES,
    PR_FAMILIES,
    classify_epr,
    classify_pr,
    in_epr_universe,
    in_pr_universe,
    uniqueness_report,
)
from prseq.linalg import ConstructionKind, RationalMatrix, construct
from prseq.search import SearchSpec, census, jblock_singularity_probe, search
from prseq.sequences import compute_epr, compute_pr
from prseq.verify import run_suite
from prseq.witnesses import witness_epr, witness_pr

SEED = 20261014
RESULTS: dict[int, str] = {}


@contextmanager
def criterion(number: int, title: str):
    start = time.perf_counter()
    notes: list[str] = []
    try:
        yield notes
    except BaseException as exc:
        RESULTS[number] = f"FAIL criterion {number}: {title} ({type(exc).__name__}: {exc})"
        print(RESULTS[number])
        raise
    elapsed = time.perf_counter() - start
    extra = "; ".join(notes)
    RESULTS[number] = f"PASS criterion {number}: {title} [{elapsed:.1f}s{'; ' + extra if extra else ''}]"
    print(RESULTS[number])


def test_criterion_1_pr_witnesses():
    with criterion(1, "pr witness completeness, 18 families, orders 3..12") as notes:
        start = time.perf_counter()
        checked = 0
        for t in PR_FAMILIES:
            orders = 0
            for n in range(3, 13):
                instances = list(t.instances(n))
                orders += bool(instances)
                for counts, text in instances:
                    assert str(compute_pr(witness_pr(t.id, n, text))) == text, (t.id, n, text)
                    checked += 1
            assert orders, t.id
        assert len(PR_FAMILIES) == 18
        assert time.perf_counter() - start < 120
        notes.append(f"{checked} instances")


def test_criterion_2_epr_witnesses():
    with criterion(2, "epr witness completeness, 30 families, orders <= 10") as notes:
        start = time.perf_counter()
        checked, fixed = 0, []
        for t in EPR_FAMILIES:
            valid = []
            for n in range(3, 11):
                instances = list(t.instances(n))
                if instances:
                    valid.append(n)
                for counts, text in instances:
                    assert compute_epr(witness_epr(t.id, n, text)).letters == text, (t.id, n, text)
                    checked += 1
            assert valid and valid[0] == max(t.min_order, 3), t.id
            if t.star_count:
                assert len(valid) >= 3, (t.id, valid)
            else:
                fixed.append(t.id)  # fixed-length family: its minimal order is its only order
        assert len(EPR_FAMILIES) == 30
        assert time.perf_counter() - start < 300
        notes.append(f"{checked} instances; single-order families: {', '.join(fixed) or 'none'}")


def test_criterion_3_pinned_values():
    with criterion(3, "pinned sequence values"):
        assert str(compute_pr(RationalMatrix(J(3)))) == "0]100"
        assert str(compute_pr(RationalMatrix([[0] * 3] * 3))) == "1]000"
        assert str(compute_pr(RationalMatrix(J_minus(3, 5)))) == "0]11011"
        assert compute_epr(RationalMatrix(J_minus(2, 4))).letters == "ANAA"
        assert compute_epr(RationalMatrix(path(4))).letters == "NSNA"
        assert compute_epr(RationalMatrix(cycle(5))).letters == "NSNAA"
        for n in range(3, 11):
            B = construct(ConstructionKind.SQUARED_DIFF, n)
            assert B == RationalMatrix([[(i - j) ** 2 for j in range(n)] for i in range(n)])
            assert compute_epr(B).letters == "NAA" + "N" * (n - 3)


def test_criterion_4_census_agreement():
    with criterion(4, "classifier agrees with the n=4 census; no attainers for 1]1011, SSNSNAA") as notes:
        start = time.perf_counter()
        c = census(4)
        exhaustive = time.perf_counter() - start
        assert c.visited == 3 ** 10 and exhaustive < 60
        pr_checked = [p for p in c.pr if in_pr_universe(p)]
        epr_checked = [e for e in c.epr if in_epr_universe(e)]
        for p in pr_checked:
            assert classify_pr(p).attainable, p
        for e in epr_checked:
            assert classify_epr(e).attainable, e
        assert "1]1011" not in c.pr
        # the exhaustive order-4 space is a certificate for this alphabet only
        assert not search(SearchSpec(4, target="1]1011")).found
        r = search(SearchSpec(4, mode="random", trials=10 ** 7, seed=SEED, target="1]1011"))
        assert not r.found and r.visited >= 10 ** 7
        r = search(SearchSpec(7, mode="random", trials=10 ** 7, seed=SEED, target="SSNSNAA"))
        assert not r.found and r.visited >= 10 ** 7
        notes.append(f"census {exhaustive:.2f}s, {len(pr_checked)} pr / {len(epr_checked)} epr accepted")


SUITE_TRIALS = {"SCHUR": 1000, "INVERSE-PR": 1000, "INVERSE-EPR": 1000, "INHERIT": 1000,
                "RULES-SOUND": 1000, "ANA-RIGID": 200}


def test_criterion_5_theorem_suites():
    with criterion(5, "theorem suites pass with zero failures") as notes:
        start = time.perf_counter()
        for suite, trials in SUITE_TRIALS.items():
            report = run_suite(suite, trials, SEED)
            assert report.ok, (suite, report.failures[:1])
            assert report.trials == trials
            notes.append(f"{suite} {trials}")
        assert time.perf_counter() - start < 300


def test_criterion_6_uniqueness():
    with criterion(6, "uniqueness of associated epr families through order 12") as notes:
        rows = uniqueness_report(12)
        double = [r for r in rows if r.count == 2]
        for r in rows:
            assert r.ok, r.to_dict()
            assert r.count == r.expected
        assert {r.pr for r in double} == {"0]110" + "0" * k for k in range(10)} | {"1]0110" + "0" * k for k in range(9)}
        notes.append(f"{len(rows)} instances, {len(double)} with two families")


def test_criterion_7_jblock():
    with criterion(7, "J-block matrices are singular") as notes:
        total = 0
        for n, trials in ((4, 167), (6, 167), (8, 166)):
            report = jblock_singularity_probe(n, trials, SEED + n)
            assert report.ok, report.failures[:1]
            total += report.trials
        assert total == 500
        notes.append(f"{total} matrices")


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))

"""Randomized property suites: each cited theorem checked on generated matrices.

Every trial derives its own seed from (suite seed, trial number), so any
failure can be replayed with :func:`generate_matrix` alone.
"""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .classifier import uniqueness_report
from .linalg import (
    ConstructionKind as K,
    RationalMatrix,
    all_principal_minors,
    complement,
    construct,
    det,
    direct_sum,
    duplicate_index,
    inverse,
    principal_minor,
    rank,
    schur_complement,
)
from .rules import check_epr, check_pr
from .search import jblock_matrix
from .sequences import compute_epr, compute_pr, epr_of_inverse, pr_of_inverse

PROFILES = ("dense-random-rational", "sign-pattern", "zero-diagonal", "nonsingular", "epr-prefix-targeted")
REJECTION_BUDGET = 1000

DEFAULT_ORDERS = {
    "SCHUR": (3, 7),
    "INVERSE-PR": (3, 8),
    "INVERSE-EPR": (3, 8),
    "INHERIT": (3, 6),
    "RULES-SOUND": (3, 8),
    "ANA-RIGID": (3, 12),
    "UNIQUE": (3, 12),
    "JBLOCK": (4, 8),
}
SUITES = tuple(DEFAULT_ORDERS)


class VerifyError(ValueError):
    pass


class UnknownSuiteError(VerifyError):
    pass


class RejectionBudgetError(VerifyError):
    pass


# -- matrix generation ---------------------------------------------------------------

def _rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 4))


def _nonzero_rational(rng: random.Random) -> Fraction:
    while True:
        x = _rational(rng)
        if x:
            return x


def _symmetric(n: int, entry, diagonal=None) -> RationalMatrix:
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = diagonal() if (i == j and diagonal is not None) else entry()
            rows[i][j] = rows[j][i] = v
    return RationalMatrix(rows)


def _dense(rng, n):
    return _symmetric(n, lambda: _rational(rng))


def _sign(rng, n):
    return _symmetric(n, lambda: Fraction(rng.choice((-1, 0, 1))))


def _zero_diag(rng, n):
    return _symmetric(n, lambda: _rational(rng), diagonal=lambda: Fraction(0))


def _gram(rng, n):
    r = rng.randint(1, n)
    V = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(r)]
    s = [rng.choice((-1, 1)) for _ in range(r)]
    return RationalMatrix.from_function(n, lambda i, j: sum(s[k] * V[k][i - 1] * V[k][j - 1] for k in range(r)))


_NAMED = (K.ALLONES, K.J_MINUS_2I, K.J_MINUS_3I, K.PATH_ADJ, K.CYCLE_ADJ, K.FAN_ADJ, K.SQUARED_DIFF,
          K.RANK2_PLUS, K.RANK2_MINUS, K.IDENTITY, K.ZERO)


def _named(rng, n):
    kinds = [k for k in _NAMED if n >= {K.CYCLE_ADJ: 3, K.FAN_ADJ: 4}.get(k, 1)]
    B = construct(rng.choice(kinds), n)
    if rng.random() < 0.4 and det(B) != 0:
        B = inverse(B)
    return B


def _structured(rng: random.Random, n: int, depth: int = 0) -> RationalMatrix:
    """Matrices built from low-rank, named, duplicated and block pieces, so N and S letters are common."""
    choice = rng.random() if depth < 3 and n > 1 else rng.random() * 0.6
    if choice < 0.2:
        B = _gram(rng, n)
    elif choice < 0.4:
        B = _named(rng, n)
    elif choice < 0.6:
        zero_p = rng.choice((0.2, 0.5, 0.8))
        diag_zero = rng.random() < 0.5
        B = _symmetric(n, lambda: Fraction(0) if rng.random() < zero_p else Fraction(rng.choice((-1, 1))),
                       diagonal=(lambda: Fraction(0)) if diag_zero else None)
    elif choice < 0.8:
        m = rng.randint(1, n - 1)
        B = _structured(rng, m, depth + 1)
        while B.n < n:
            B = duplicate_index(B, rng.randint(1, B.n))
    else:
        m = rng.randint(1, n - 1)
        B = direct_sum(_structured(rng, m, depth + 1), _structured(rng, n - m, depth + 1))
    if rng.random() < 0.5:
        B = B.conjugate_diagonal([_nonzero_rational(rng) for _ in range(n)])
    if rng.random() < 0.5:
        perm = list(range(1, n + 1))
        rng.shuffle(perm)
        B = B.permuted(perm)
    return B


def _nonsingular(rng, n):
    for _ in range(REJECTION_BUDGET):
        base = rng.choice((_dense, _sign, _structured, _structured))
        B = base(rng, n)
        if det(B) != 0:
            return B
    raise RejectionBudgetError(f"no nonsingular matrix of order {n} within {REJECTION_BUDGET} attempts")


_GENERATORS = {
    "dense-random-rational": _dense,
    "sign-pattern": _sign,
    "zero-diagonal": _zero_diag,
    "nonsingular": _nonsingular,
    "epr-prefix-targeted": _structured,
}


def generate_matrix(profile: str, n: int, seed: int) -> RationalMatrix:
    """A reproducible pseudo-random symmetric matrix of the given profile and order."""
    try:
        gen = _GENERATORS[profile]
    except KeyError:
        raise VerifyError(f"unknown profile {profile!r}; choose from {', '.join(PROFILES)}") from None
    if n < 1:
        raise VerifyError("order must be positive")
    return gen(random.Random(f"{profile}/{n}/{seed}"), n)


def trial_seed(seed: int, trial: int) -> int:
    return int(np.random.SeedSequence([seed, trial]).generate_state(1)[0])


# -- reports --------------------------------------------------------------------

@dataclass
class SuiteReport:
    suite: str
    trials: int
    seed: int
    orders: tuple[int, int]
    failures: list[dict] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"suite": self.suite, "trials": self.trials, "seed": self.seed, "orders": list(self.orders),
                "failures": self.failures, "ok": self.ok, "elapsed": round(self.elapsed, 3)}


class _Failure(Exception):
    pass


def _expect(cond: bool, message: str):
    if not cond:
        raise _Failure(message)


# -- suites ---------------------------------------------------------------------
# Each trial function gets (rng, n, tseed, ctx), records the matrix it tests in
# ctx before checking, and raises _Failure with a message on a counterexample.

_MIXED = ("dense-random-rational", "sign-pattern", "zero-diagonal", "epr-prefix-targeted",
          "epr-prefix-targeted", "epr-prefix-targeted")


def _trial_schur(rng, n, tseed, ctx):
    profile = rng.choice(("dense-random-rational", "epr-prefix-targeted", "nonsingular"))
    B = ctx["matrix"] = generate_matrix(profile, n, tseed)
    alphas = [a for k in range(1, n) for a in combinations(range(1, n + 1), k) if principal_minor(B, a) != 0]
    if not alphas:
        return
    alpha = rng.choice(alphas)
    C = schur_complement(B, alpha)
    rest = complement(alpha, n)
    d_alpha = principal_minor(B, alpha)
    for k in range(0, len(rest) + 1):
        for local in combinations(range(1, len(rest) + 1), k):
            gamma = tuple(rest[i - 1] for i in local)
            lhs = principal_minor(C, local) * d_alpha
            rhs = principal_minor(B, sorted(gamma + alpha))
            _expect(lhs == rhs, f"det C[{gamma}] * det B[{alpha}] = {lhs} but det B[gamma u alpha] = {rhs}")
    _expect(rank(C) == rank(B) - len(alpha), f"rank C = {rank(C)}, rank B - |alpha| = {rank(B) - len(alpha)}")


def _trial_inverse_pr(rng, n, tseed, ctx):
    B = ctx["matrix"] = generate_matrix("nonsingular", n, tseed)
    got = compute_pr(inverse(B))
    want = pr_of_inverse(compute_pr(B), compute_epr(B))
    _expect(got == want, f"pr(B^-1) = {got}, predicted {want}")


def _trial_inverse_epr(rng, n, tseed, ctx):
    B = ctx["matrix"] = generate_matrix("nonsingular", n, tseed)
    e = compute_epr(B)
    _expect(e.letters[-1] == "A", f"nonsingular matrix with epr {e}")
    got = compute_epr(inverse(B))
    want = epr_of_inverse(e)
    _expect(got == want, f"epr(B^-1) = {got}, predicted {want}")


def _letter(values) -> str:
    nz = [v != 0 for v in values]
    return "A" if all(nz) else ("S" if any(nz) else "N")


def _trial_inherit(rng, n, tseed, ctx):
    profile = rng.choice(_MIXED)
    B = ctx["matrix"] = generate_matrix(profile, n, tseed)
    minors = all_principal_minors(B)
    eB = compute_epr(B).letters
    for m in range(1, n + 1):
        subs = list(combinations(range(1, n + 1), m))
        # epr of every m x m principal submatrix, read off B's minors
        eC = {S: "".join(_letter(minors[T] for T in combinations(S, i)) for i in range(1, m + 1)) for S in subs}
        for i in range(1, m + 1):
            letter = eB[i - 1]
            if letter in "NA":
                bad = next((S for S in subs if eC[S][i - 1] != letter), None)
                if bad is not None:
                    raise _Failure(f"l_{i}(B) = {letter} but l_{i}(B[{bad}]) = {eC[bad][i - 1]}")
            elif i == m:
                got = {eC[S][m - 1] for S in subs}
                _expect({"A", "N"} <= got, f"l_{m}(B) = S but order-{m} submatrices give only {sorted(got)}")
            else:
                _expect(any(eC[S][i - 1] == "S" for S in subs),
                        f"l_{i}(B) = S but no {m}x{m} principal submatrix has l_{i} = S")


def _trial_rules_sound(rng, n, tseed, ctx):
    profile = rng.choice(_MIXED)
    B = ctx["matrix"] = generate_matrix(profile, n, tseed)
    e, p = compute_epr(B), compute_pr(B)
    bad = check_epr(e) + check_pr(p)
    _expect(not bad, f"epr {e} / pr {p} violate {[v.rule_id for v in bad]}")


def _trial_ana_rigid(rng, n, tseed, ctx):
    r = random.Random(f"ana/{n}/{tseed}")
    d = [_nonzero_rational(r) for _ in range(n)]
    B = construct(K.J_MINUS_2I, n).conjugate_diagonal(d)
    if r.random() < 0.5:
        B = -B
    ctx["matrix"] = B
    e = compute_epr(B).letters
    want = "ANA" + "A" * (n - 3)
    _expect(e == want, f"epr of a conjugated +-(J_n - 2I_n) is {e}, expected {want}")


def _trial_jblock(rng, n, tseed, ctx):
    if n % 2:
        n -= 1
    B, block = jblock_matrix(n, random.Random(f"jblock/{n}/{tseed}"))
    ctx["matrix"] = B
    d = det(B)
    _expect(d == 0, f"det = {d} with all-ones block on {block}")


_TRIALS = {
    "SCHUR": _trial_schur,
    "INVERSE-PR": _trial_inverse_pr,
    "INVERSE-EPR": _trial_inverse_epr,
    "INHERIT": _trial_inherit,
    "RULES-SOUND": _trial_rules_sound,
    "ANA-RIGID": _trial_ana_rigid,
    "JBLOCK": _trial_jblock,
}


def _run_range(suite_id: str, first: int, stop: int, seed: int, lo: int, hi: int) -> list[dict]:
    fn = _TRIALS[suite_id]
    failures = []
    for t in range(first, stop):
        tseed = trial_seed(seed, t)
        rng = random.Random(tseed)
        n = rng.randint(lo, hi)
        if suite_id == "JBLOCK" and n % 2:
            n = n - 1 if n - 1 >= max(lo, 2) else n + 1
        ctx: dict = {}
        try:
            fn(rng, n, tseed, ctx)
        except _Failure as exc:
            B = ctx.get("matrix")
            failures.append({"trial": t, "trial_seed": tseed, "n": n, "message": str(exc),
                             "matrix": None if B is None else B.to_json_dict()})
    return failures


def run_suite(suite_id: str, trials: int, seed: int, n_range: tuple[int, int] | None = None,
              jobs: int | None = None) -> SuiteReport:
    """Run one property suite; a report with no failures means every trial confirmed the theorem."""
    if suite_id not in DEFAULT_ORDERS:
        raise UnknownSuiteError(f"unknown suite {suite_id!r}; choose from {', '.join(SUITES)}")
    lo, hi = n_range if n_range is not None else DEFAULT_ORDERS[suite_id]
    if not 1 <= lo <= hi:
        raise VerifyError(f"bad order range {lo}..{hi}")
    if trials < 1:
        raise VerifyError("trials must be positive")
    if suite_id == "JBLOCK" and hi < 2:
        raise VerifyError("JBLOCK needs an order range reaching an even order >= 2")
    start = time.perf_counter()
    report = SuiteReport(suite_id, trials, seed, (lo, hi))
    if suite_id == "UNIQUE":
        report.trials = 0
        for row in uniqueness_report(max(hi, 3)):
            report.trials += 1
            if not row.ok:
                report.failures.append({"pr": row.pr, "message": f"{row.count} associated epr families",
                                        "epr_families": list(row.epr_families)})
        report.elapsed = time.perf_counter() - start
        return report
    if jobs is not None and jobs > 1 and trials > 1:
        bounds = [(trials * w // jobs, trials * (w + 1) // jobs) for w in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = pool.map(_run_range, *zip(*[(suite_id, a, b, seed, lo, hi) for a, b in bounds]))
            for part in parts:
                report.failures.extend(part)
    else:
        report.failures = _run_range(suite_id, 0, trials, seed, lo, hi)
    report.elapsed = time.perf_counter() - start
    return report


__all__ = ["generate_matrix", "run_suite", "SuiteReport", "SUITES", "PROFILES", "DEFAULT_ORDERS",
           "trial_seed", "VerifyError", "UnknownSuiteError", "RejectionBudgetError"]

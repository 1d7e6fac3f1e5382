"""Exhaustive and randomized search over symmetric matrices with small entry alphabets.

The engine evaluates whole batches of integer matrices at once with numpy.
Order-k principal minors use closed forms for k <= 3 and a Laplace expansion
over column subsets for larger k, all in exact integer arithmetic (int64 when
a Hadamard-type bound proves it safe, Python integers otherwise).  Rational
alphabets are rescaled to integers, which multiplies every order-k minor by the
same nonzero constant and so leaves the zero pattern unchanged.

Search spaces enumerate the diagonal positions first, then the off-diagonal
positions row by row; the first position is the most significant digit and
every alphabet is sorted ascending, so index order is lexicographic order.

Finite-alphabet search can only corroborate unattainability: finding no
attainer is evidence, never proof.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable

import numpy as np

from .linalg import (
    RationalMatrix,
    as_fraction,
    det,
)
from .sequences import (
    EprSequence,
    PrSequence,
    compute_epr,
    compute_pr,
    parse_epr,
    parse_pr,
)

DEFAULT_ALPHABET = (Fraction(-1), Fraction(0), Fraction(1))
DEFAULT_MAX_SPACE = 10 ** 8
DEFAULT_CHUNK = 1 << 15
ONE_SIDED_NOTE = (
    "finite-alphabet search only corroborates unattainability; an empty result is not a proof"
)
_LETTERS = "NSA"  # code 0, 1, 2


class SearchError(ValueError):
    pass


class SpaceTooLargeError(SearchError):
    pass


class VerificationError(AssertionError):
    """A matrix found by the engine does not recompute to its sequence."""


def _alphabet(values: Iterable) -> tuple[Fraction, ...]:
    out = tuple(sorted({as_fraction(v) for v in values}))
    if not out:
        raise SearchError("alphabets must be nonempty")
    return out


def parse_alphabet(text: str) -> tuple[Fraction, ...]:
    """Parse "-1,0,1" or "0,1/2" into a sorted alphabet."""
    try:
        return _alphabet(Fraction(part.strip()) for part in text.split(",") if part.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise SearchError(f"bad alphabet {text!r}: {exc}") from None


@dataclass(frozen=True)
class SearchSpec:
    n: int
    diag: tuple = DEFAULT_ALPHABET
    offdiag: tuple = DEFAULT_ALPHABET
    mode: str = "exhaustive"  # "exhaustive" | "random"
    trials: int | None = None
    seed: int | None = None
    target: PrSequence | EprSequence | str | None = None  # None means census
    canonical: bool = False
    max_space: int = DEFAULT_MAX_SPACE
    chunk_size: int = DEFAULT_CHUNK

    def __post_init__(self):
        object.__setattr__(self, "diag", _alphabet(self.diag))
        object.__setattr__(self, "offdiag", _alphabet(self.offdiag))
        if isinstance(self.target, str):
            t = self.target
            object.__setattr__(self, "target", parse_pr(t) if "]" in t else parse_epr(t))
        if self.n < 1:
            raise SearchError("order must be positive")
        if self.target is not None and self.target.n != self.n:
            raise SearchError(f"target {self.target} has order {self.target.n}, not {self.n}")
        if self.mode not in ("exhaustive", "random"):
            raise SearchError(f"unknown mode {self.mode!r}")
        if self.mode == "random":
            if self.seed is None:
                raise SearchError("randomized search requires a seed")
            if not self.trials or self.trials < 1:
                raise SearchError("randomized search requires a positive trial budget")
        if self.canonical:
            pm = {Fraction(-1), Fraction(1)}
            if not (set(self.diag) <= pm and set(self.offdiag) <= pm and 1 in self.diag and 1 in self.offdiag):
                raise SearchError("canonicalization applies to +-1 spaces only")
        if self.mode == "exhaustive" and self.space_size > self.max_space:
            raise SpaceTooLargeError(f"space of {self.space_size} matrices exceeds the bound {self.max_space}")

    @property
    def positions(self) -> tuple[tuple[int, int], ...]:
        n = self.n
        return tuple((i, i) for i in range(n)) + tuple((i, j) for i in range(n) for j in range(i + 1, n))

    @property
    def free_positions(self) -> tuple[tuple[int, int], ...]:
        if not self.canonical:
            return self.positions
        return tuple((i, j) for i, j in self.positions if i != j and i != 0)

    def _alphabet_at(self, pos) -> tuple[Fraction, ...]:
        return self.diag if pos[0] == pos[1] else self.offdiag

    @property
    def space_size(self) -> int:
        return math.prod(len(self._alphabet_at(p)) for p in self.free_positions)

    @property
    def scale(self) -> int:
        return math.lcm(*(x.denominator for x in self.diag + self.offdiag))


@dataclass
class CensusEntry:
    matrix: RationalMatrix
    count: int
    index: int

    def to_dict(self) -> dict:
        return {"matrix": self.matrix.to_json_dict(), "count": self.count, "index": self.index}


@dataclass
class CensusResult:
    spec: SearchSpec
    pr: dict[str, CensusEntry] = field(default_factory=dict)
    epr: dict[str, CensusEntry] = field(default_factory=dict)
    visited: int = 0
    note: str = ONE_SIDED_NOTE

    @property
    def exhaustive(self) -> bool:
        return self.spec.mode == "exhaustive"

    @property
    def found(self) -> bool:
        return bool(self.pr or self.epr)

    def first(self) -> RationalMatrix | None:
        entries = list(self.pr.values()) + list(self.epr.values())
        return min(entries, key=lambda e: e.index).matrix if entries else None

    def to_dict(self) -> dict:
        s = self.spec
        return {
            "n": s.n,
            "mode": s.mode,
            "target": None if s.target is None else str(s.target),
            "canonical": s.canonical,
            "visited": self.visited,
            "exhaustive": self.exhaustive,
            "found": self.found,
            "pr": {k: v.to_dict() for k, v in sorted(self.pr.items())},
            "epr": {k: v.to_dict() for k, v in sorted(self.epr.items())},
            "note": self.note,
        }


# -- batched exact minors ----------------------------------------------------------

def _safe_int64(n: int, bound: int) -> bool:
    """True when every partial Laplace sum for minors of order <= n fits in int64."""
    worst = 0
    for r in range(1, n + 1):
        hadamard = (math.sqrt(r - 1) * bound) ** (r - 1) if r > 1 else 1
        worst = max(worst, r * bound * hadamard * 2)
    return worst < 2 ** 62


@lru_cache(maxsize=None)
def _laplace_plan(k: int):
    layers = []
    for r in range(1, k + 1):
        layer = []
        for cols in combinations(range(k), r):
            mask = sum(1 << c for c in cols)
            terms = tuple((j, mask ^ (1 << j), -1 if bin(mask >> (j + 1)).count("1") % 2 else 1) for j in cols)
            layer.append((mask, terms))
        layers.append(layer)
    return layers


def batch_minor(X: np.ndarray, idx: tuple[int, ...]) -> np.ndarray:
    """The principal minor on 0-based ``idx`` of every matrix in the batch ``X``."""
    k = len(idx)
    if k == 1:
        i, = idx
        return X[:, i, i]
    if k == 2:
        i, j = idx
        return X[:, i, i] * X[:, j, j] - X[:, i, j] * X[:, i, j]
    if k == 3:
        i, j, l = idx
        a, e, z = X[:, i, i], X[:, j, j], X[:, l, l]
        b, c, f = X[:, i, j], X[:, i, l], X[:, j, l]
        # with a zero diagonal this is 2*b*c*f
        return a * e * z + 2 * b * c * f - a * f * f - e * c * c - z * b * b
    prev = {0: None}
    for r, layer in enumerate(_laplace_plan(k)):
        row = idx[r]
        cur = {}
        for mask, terms in layer:
            acc = None
            for j, sub, sign in terms:
                entry = X[:, row, idx[j]]
                term = entry if prev[sub] is None else entry * prev[sub]
                acc = (term if sign > 0 else -term) if acc is None else (acc + term if sign > 0 else acc - term)
            cur[mask] = acc
        prev = cur
    return prev[(1 << k) - 1]


def _allowed_codes(target) -> list[frozenset[int]] | None:
    """Per order (0-based), the letter codes compatible with the target."""
    if target is None:
        return None
    if isinstance(target, EprSequence):
        return [frozenset({_LETTERS.index(c)}) for c in target.letters]
    allowed = [frozenset({0}) if t == 0 else frozenset({1, 2}) for t in target.terms]
    first = frozenset({2}) if target.r0 == 0 else frozenset({0, 1})
    allowed[0] = allowed[0] & first
    return allowed


def evaluate_batch(X: np.ndarray, allowed=None) -> tuple[np.ndarray, np.ndarray]:
    """Letter codes (N=0, S=1, A=2) per order for the matrices compatible with ``allowed``.

    Returns (positions of surviving matrices within X, codes of shape (survivors, n)).
    Matrices are dropped as soon as an order contradicts ``allowed``.
    """
    count, n, _ = X.shape
    alive = np.arange(count)
    codes = np.zeros((count, n), dtype=np.int8)
    for k in range(1, n + 1):
        if len(alive) == 0:
            break
        want = None if allowed is None else allowed[k - 1]
        any_nz = np.zeros(len(alive), dtype=bool)
        all_nz = np.ones(len(alive), dtype=bool)
        for idx in combinations(range(n), k):
            nz = batch_minor(X, idx) != 0
            any_nz |= nz
            all_nz &= nz
            if want == frozenset({0}) or want == frozenset({2}):
                keep = ~any_nz if want == frozenset({0}) else all_nz
                if keep.sum() * 2 < len(keep):
                    X, alive, codes = X[keep], alive[keep], codes[keep]
                    any_nz, all_nz = any_nz[keep], all_nz[keep]
                    if len(alive) == 0:
                        break
        letters = np.where(all_nz, 2, np.where(any_nz, 1, 0)).astype(np.int8)
        codes[:, k - 1] = letters
        if want is not None:
            keep = np.isin(letters, list(want))
            X, alive, codes = X[keep], alive[keep], codes[keep]
    return alive, codes


# -- enumeration -------------------------------------------------------------------

def _digit_tables(spec: SearchSpec):
    scale = spec.scale
    free = spec.free_positions
    radices = [len(spec._alphabet_at(p)) for p in free]
    values = [[int(v * scale) for v in spec._alphabet_at(p)] for p in free]
    bound = max(abs(int(v * scale)) for v in spec.diag + spec.offdiag)
    dtype = np.int64 if _safe_int64(spec.n, bound) else object
    return free, radices, values, dtype


def _assemble(spec: SearchSpec, digits: np.ndarray, tables) -> np.ndarray:
    free, radices, values, dtype = tables
    n = spec.n
    X = np.zeros((digits.shape[0], n, n), dtype=dtype)
    if spec.canonical:
        X[:, range(n), range(n)] = spec.scale
        X[:, 0, 1:] = spec.scale
        X[:, 1:, 0] = spec.scale
    for col, (i, j) in enumerate(free):
        v = np.asarray(values[col], dtype=dtype)[digits[:, col]]
        X[:, i, j] = v
        X[:, j, i] = v
    return X


def _digits_for(indices: np.ndarray, radices: list[int]) -> np.ndarray:
    out = np.zeros((len(indices), len(radices)), dtype=np.int64)
    rest = indices.astype(np.int64).copy()
    for col in range(len(radices) - 1, -1, -1):
        rest, out[:, col] = np.divmod(rest, radices[col])
    return out


def matrix_at(spec: SearchSpec, digits) -> RationalMatrix:
    """The space member with the given digit vector, as exact rationals."""
    n = spec.n
    rows = [[Fraction(0)] * n for _ in range(n)]
    if spec.canonical:
        for i in range(n):
            rows[i][i] = Fraction(1)
            rows[0][i] = rows[i][0] = Fraction(1)
    for (i, j), d in zip(spec.free_positions, digits):
        rows[i][j] = rows[j][i] = spec._alphabet_at((i, j))[int(d)]
    return RationalMatrix(rows)


def _chunk_task(args):
    spec, chunk = args
    tables = _digit_tables(spec)
    radices = tables[1]
    size = spec.chunk_size
    if spec.mode == "exhaustive":
        start = chunk * size
        stop = min(start + size, spec.space_size)
        indices = np.arange(start, stop, dtype=np.int64)
        digits = _digits_for(indices, radices)
    else:
        start = chunk * size
        stop = min(start + size, spec.trials)
        rng = np.random.default_rng(np.random.SeedSequence([spec.seed, chunk]))
        digits = np.stack([rng.integers(0, r, size=stop - start) for r in radices], axis=1) if radices \
            else np.zeros((stop - start, 0), dtype=np.int64)
        indices = np.arange(start, stop, dtype=np.int64)
    X = _assemble(spec, digits, tables)
    alive, codes = evaluate_batch(X, _allowed_codes(spec.target))
    found: dict[tuple, list] = {}
    if len(alive):
        weights = 3 ** np.arange(spec.n - 1, -1, -1, dtype=np.int64)
        keys = codes.astype(np.int64) @ weights
        uniq, first, counts = np.unique(keys, return_index=True, return_counts=True)
        for key, f, c in zip(uniq, first, counts):
            pos = alive[f]
            found[int(key)] = [int(c), int(indices[pos]), digits[pos].tolist()]
    return stop - start, found


def _decode(key: int, n: int) -> str:
    letters = []
    for _ in range(n):
        key, d = divmod(key, 3)
        letters.append(_LETTERS[d])
    return "".join(reversed(letters))


def _pr_text(epr: str) -> str:
    return f"{int(epr[0] != 'A')}]" + "".join("0" if c == "N" else "1" for c in epr)


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("PRSEQ_JOBS", "1")))
    except ValueError:
        return 1


def search(spec: SearchSpec, jobs: int | None = None) -> CensusResult:
    """Run the search; every reported matrix is recomputed exactly before it is returned."""
    jobs = default_jobs() if jobs is None else max(1, jobs)
    total = spec.space_size if spec.mode == "exhaustive" else spec.trials
    chunks = [(spec, c) for c in range(-(-total // spec.chunk_size))]
    if jobs == 1 or len(chunks) == 1:
        parts = map(_chunk_task, chunks)
        parts = list(parts)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_chunk_task, chunks))

    merged: dict[int, list] = {}
    visited = 0
    for seen, found in parts:
        visited += seen
        for key, (count, index, digits) in found.items():
            cur = merged.get(key)
            if cur is None:
                merged[key] = [count, index, digits]
            else:
                cur[0] += count
                if index < cur[1]:
                    cur[1], cur[2] = index, digits

    result = CensusResult(spec, visited=visited)
    pr_acc: dict[str, CensusEntry] = {}
    for key in sorted(merged):
        count, index, digits = merged[key]
        epr_text = _decode(key, spec.n)
        B = matrix_at(spec, digits)
        if compute_epr(B).letters != epr_text:
            raise VerificationError(f"engine reported {epr_text} for a matrix whose epr is {compute_epr(B)}")
        pr_text = _pr_text(epr_text)
        if str(compute_pr(B)) != pr_text:
            raise VerificationError(f"engine reported {pr_text} for a matrix whose pr is {compute_pr(B)}")
        if spec.target is None or isinstance(spec.target, EprSequence):
            result.epr[epr_text] = CensusEntry(B, count, index)
        if spec.target is None or isinstance(spec.target, PrSequence):
            e = pr_acc.get(pr_text)
            if e is None:
                pr_acc[pr_text] = CensusEntry(B, count, index)
            else:
                e.count += count
                if index < e.index:
                    e.matrix, e.index = B, index
    result.pr = pr_acc
    return result


def census(n: int, diag=DEFAULT_ALPHABET, offdiag=DEFAULT_ALPHABET, jobs: int | None = None,
           max_space: int = DEFAULT_MAX_SPACE) -> CensusResult:
    """Every pr- and epr-sequence realized at order n over the alphabets, one witness each."""
    return search(SearchSpec(n, diag, offdiag, max_space=max_space), jobs=jobs)


def canonicalize(B: RationalMatrix) -> RationalMatrix:
    """Conjugate by a +-1 diagonal matrix so that the first row has no negative entries.

    Diagonal conjugation preserves every principal minor up to a positive square
    factor, hence preserves the epr-sequence.
    """
    d = [1] + [-1 if B.entry(1, j) < 0 else 1 for j in range(2, B.n + 1)]
    return B.conjugate_diagonal(d)


# -- J-block singularity probe --------------------------------------------------

@dataclass
class ProbeReport:
    n: int
    trials: int
    seed: int
    failures: list[dict]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"n": self.n, "trials": self.trials, "seed": self.seed,
                "failures": self.failures, "ok": self.ok}


def jblock_matrix(n: int, rng) -> tuple[RationalMatrix, tuple[int, ...]]:
    """A random symmetric rational matrix with an all-ones principal block of size n/2 + 1."""
    size = n // 2 + 1
    block = tuple(sorted(rng.sample(range(1, n + 1), size)))
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            if i + 1 in block and j + 1 in block:
                v = Fraction(1)
            else:
                v = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
            rows[i][j] = rows[j][i] = v
    return RationalMatrix(rows), block


def jblock_singularity_probe(n_even: int, trials: int, seed: int) -> ProbeReport:
    """Check det = 0 exactly for random matrices holding J_{n/2+1} as a principal submatrix."""
    import random

    if n_even < 2 or n_even % 2:
        raise SearchError("the J-block probe needs an even order")
    if trials < 1:
        raise SearchError("trials must be positive")
    failures = []
    for t in range(trials):
        rng = random.Random(f"jblock:{seed}:{n_even}:{t}")
        B, block = jblock_matrix(n_even, rng)
        d = det(B)
        if d != 0:
            failures.append({"trial": t, "block": list(block), "det": str(d), "matrix": B.to_json_dict()})
    return ProbeReport(n_even, trials, seed, failures)


__all__ = [
    "SearchSpec", "CensusEntry", "CensusResult", "search", "census", "canonicalize",
    "jblock_singularity_probe", "jblock_matrix", "ProbeReport", "parse_alphabet", "batch_minor",
    "evaluate_batch", "matrix_at", "SearchError", "SpaceTooLargeError", "VerificationError",
    "DEFAULT_ALPHABET", "ONE_SIDED_NOTE", "default_jobs",
]

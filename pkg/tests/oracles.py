"""Independent brute-force oracles: no code from the package under test.

Determinants by cofactor expansion along the first row, and sequences by
listing every principal minor explicitly.
"""
from fractions import Fraction
from itertools import combinations


def cofactor_det(rows):
    rows = [[Fraction(x) for x in r] for r in rows]
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return rows[0][0]
    total = Fraction(0)
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * cofactor_det(minor)
    return total


def principal_rows(rows, idx):
    """idx is 1-based."""
    return [[rows[i - 1][j - 1] for j in idx] for i in idx]


def naive_minors(rows):
    n = len(rows)
    return {idx: cofactor_det(principal_rows(rows, idx))
            for k in range(1, n + 1) for idx in combinations(range(1, n + 1), k)}


def naive_epr(rows):
    n = len(rows)
    minors = naive_minors(rows)
    out = []
    for k in range(1, n + 1):
        vals = [v != 0 for idx, v in minors.items() if len(idx) == k]
        out.append("A" if all(vals) else ("S" if any(vals) else "N"))
    return "".join(out)


def naive_pr(rows):
    n = len(rows)
    minors = naive_minors(rows)
    r0 = int(any(Fraction(rows[i][i]) == 0 for i in range(n)))
    body = "".join(str(int(any(v != 0 for idx, v in minors.items() if len(idx) == k))) for k in range(1, n + 1))
    return f"{r0}]{body}"


def naive_rank(rows):
    """Largest k with a nonzero k x k minor (not necessarily principal)."""
    n = len(rows)
    m = len(rows[0]) if rows else 0
    for k in range(min(n, m), 0, -1):
        for ri in combinations(range(n), k):
            for ci in combinations(range(m), k):
                if cofactor_det([[rows[i][j] for j in ci] for i in ri]) != 0:
                    return k
    return 0


def matmul(a, b):
    return [[sum(Fraction(a[i][k]) * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


# Explicit matrices, written out by hand
def J(n):
    return [[1] * n for _ in range(n)]


def I(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def path(n):
    return [[int(abs(i - j) == 1) for j in range(n)] for i in range(n)]


def cycle(n):
    return [[int(abs(i - j) in (1, n - 1)) for j in range(n)] for i in range(n)]


def J_minus(c, n):
    return [[1 - c * (i == j) for j in range(n)] for i in range(n)]

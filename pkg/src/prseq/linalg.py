"""Exact rational symmetric matrices and the principal-minor machinery.

All indices exposed by this module are 1-based.  Entries are stored as
:class:`fractions.Fraction`; every determinant is computed exactly by
fraction-free (Bareiss) elimination on an integer rescaling of the matrix.
"""
from __future__ import annotations

import json
import math
from enum import Enum
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Callable, Iterable, Iterator, Sequence

DEFAULT_MINOR_CAP = 20


class LinalgError(ValueError):
    pass


class AsymmetricMatrixError(LinalgError):
    pass


class SingularMatrixError(LinalgError):
    pass


class OrderCapError(LinalgError):
    pass


def as_fraction(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: the whole package is exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise LinalgError(f"not an exact rational: {value!r}") from exc
    raise TypeError(f"unsupported entry type {type(value).__name__}; use int, Fraction or 'p/q'")


def index_set(indices: Iterable[int], n: int) -> tuple[int, ...]:
    """Validate a set of 1-based indices and return it sorted."""
    out = tuple(sorted(indices))
    for a, b in zip(out, out[1:]):
        if a == b:
            raise LinalgError(f"repeated index {a}")
    if out and (out[0] < 1 or out[-1] > n):
        raise LinalgError(f"index out of range 1..{n}: {out}")
    return out


def complement(alpha: Iterable[int], n: int) -> tuple[int, ...]:
    alpha = set(index_set(alpha, n))
    return tuple(i for i in range(1, n + 1) if i not in alpha)


class RationalMatrix:
    """Immutable square symmetric matrix over the rationals."""

    __slots__ = ("_rows", "__dict__")

    def __init__(self, rows: Sequence[Sequence]):
        grid = tuple(tuple(as_fraction(x) for x in row) for row in rows)
        n = len(grid)
        if n == 0:
            raise LinalgError("matrix order must be positive")
        for i, row in enumerate(grid):
            if len(row) != n:
                raise LinalgError(f"row {i + 1} has length {len(row)}, expected {n}")
        for i in range(n):
            for j in range(i + 1, n):
                if grid[i][j] != grid[j][i]:
                    raise AsymmetricMatrixError(
                        f"entry ({i + 1},{j + 1}) = {grid[i][j]} but ({j + 1},{i + 1}) = {grid[j][i]}"
                    )
        self._rows = grid

    @classmethod
    def from_function(cls, n: int, f: Callable[[int, int], object]) -> RationalMatrix:
        """Build the matrix with entry ``f(i, j)`` at 1-based position (i, j)."""
        return cls([[f(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)])

    @property
    def n(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def entry(self, i: int, j: int) -> Fraction:
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise LinalgError(f"index ({i},{j}) out of range 1..{self.n}")
        return self._rows[i - 1][j - 1]

    def diagonal(self) -> tuple[Fraction, ...]:
        return tuple(self._rows[i][i] for i in range(self.n))

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self._rows)
        return f"RationalMatrix([{body}])"

    def __neg__(self) -> RationalMatrix:
        return RationalMatrix([[-x for x in row] for row in self._rows])

    def scaled(self, c) -> RationalMatrix:
        c = as_fraction(c)
        return RationalMatrix([[c * x for x in row] for row in self._rows])

    def __add__(self, other: RationalMatrix) -> RationalMatrix:
        if other.n != self.n:
            raise LinalgError("order mismatch")
        return RationalMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __sub__(self, other: RationalMatrix) -> RationalMatrix:
        return self + (-other)

    def conjugate_diagonal(self, d: Sequence) -> RationalMatrix:
        """Return D·B·D for D = diag(d)."""
        d = [as_fraction(x) for x in d]
        if len(d) != self.n:
            raise LinalgError("diagonal length does not match order")
        return RationalMatrix([[d[i] * x * d[j] for j, x in enumerate(row)] for i, row in enumerate(self._rows)])

    def permuted(self, perm: Sequence[int]) -> RationalMatrix:
        """Simultaneous row/column permutation; ``perm`` lists 1-based source indices."""
        p = [i - 1 for i in perm]
        if sorted(p) != list(range(self.n)):
            raise LinalgError("not a permutation")
        return RationalMatrix([[self._rows[i][j] for j in p] for i in p])

    @cached_property
    def _integer_form(self) -> tuple[int, tuple[tuple[int, ...], ...]]:
        # L·B has integer entries; minors of order k scale by L**k.
        scale = 1
        for row in self._rows:
            for x in row:
                scale = math.lcm(scale, x.denominator)
        ints = tuple(tuple(int(x * scale) for x in row) for row in self._rows)
        return scale, ints

    def to_json_dict(self) -> dict:
        return {"n": self.n, "entries": [[_entry_json(x) for x in row] for row in self._rows]}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), **kwargs)


def _entry_json(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def matrix_from_json(data) -> RationalMatrix:
    """Read the ``{"n": int, "entries": [[...]]}`` format (str or parsed dict)."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    if not isinstance(data, dict) or "entries" not in data:
        raise LinalgError("matrix JSON must be an object with 'entries'")
    entries = data["entries"]
    if not isinstance(entries, list) or not all(isinstance(r, list) for r in entries):
        raise LinalgError("'entries' must be a list of rows")
    for row in entries:
        for x in row:
            if isinstance(x, float):
                raise LinalgError("float entries are not allowed; write fractions as 'p/q' strings")
    m = RationalMatrix(entries)
    if "n" in data and data["n"] != m.n:
        raise LinalgError(f"declared n={data['n']} but matrix has order {m.n}")
    return m


# -- determinants -----------------------------------------------------------

def bareiss_det(rows: list[list[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination.

    The input lists are consumed (modified in place).
    """
    n = len(rows)
    if n == 0:
        return 1
    a = rows
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        rk = a[k]
        piv = rk[k]
        tail = rk[k + 1:]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            # exact: Bareiss quotients are always integral
            ri[k + 1:] = [(x * piv - aik * y) // prev for x, y in zip(ri[k + 1:], tail)]
        prev = piv
    return sign * a[n - 1][n - 1]


def _principal_int(m: Sequence[Sequence[int]], idx: Sequence[int]) -> int:
    """Principal minor of an integer symmetric matrix on 0-based ``idx``."""
    k = len(idx)
    if k == 0:
        return 1
    if k == 1:
        i = idx[0]
        return m[i][i]
    if k == 2:
        i, j = idx
        return m[i][i] * m[j][j] - m[i][j] * m[i][j]
    if k == 3:
        i, j, l = idx
        a, e, f = m[i][i], m[j][j], m[l][l]
        b, c, d = m[i][j], m[i][l], m[j][l]
        # symmetric 3x3 expansion; with zero diagonal it reduces to 2*b*c*d
        return a * e * f + 2 * b * c * d - a * d * d - e * c * c - f * b * b
    return bareiss_det([[m[r][c] for c in idx] for r in idx])


def det(B: RationalMatrix) -> Fraction:
    """Exact determinant."""
    scale, ints = B._integer_form
    d = bareiss_det([list(r) for r in ints])
    return Fraction(d, scale ** B.n)


def det_grid(rows: Sequence[Sequence]) -> Fraction:
    """Exact determinant of an arbitrary square grid (used for rectangular-submatrix work)."""
    grid = [[as_fraction(x) for x in r] for r in rows]
    k = len(grid)
    if any(len(r) != k for r in grid):
        raise LinalgError("determinant of a non-square grid")
    scale = 1
    for r in grid:
        for x in r:
            scale = math.lcm(scale, x.denominator)
    ints = [[int(x * scale) for x in r] for r in grid]
    return Fraction(bareiss_det(ints), scale ** k)


def principal_minor(B: RationalMatrix, alpha: Iterable[int]) -> Fraction:
    """det B[alpha]; the empty minor is 1."""
    alpha = index_set(alpha, B.n)
    scale, ints = B._integer_form
    return Fraction(_principal_int(ints, [i - 1 for i in alpha]), scale ** len(alpha))


def submatrix(B: RationalMatrix, rows: Iterable[int], cols: Iterable[int] | None = None):
    """B[rows, cols].  Returns a RationalMatrix when rows == cols, else a grid (tuple of tuples)."""
    r = index_set(rows, B.n)
    c = r if cols is None else index_set(cols, B.n)
    if r == c:
        if not r:
            raise LinalgError("empty principal submatrix has no matrix form")
        return RationalMatrix([[B.rows[i - 1][j - 1] for j in r] for i in r])
    return tuple(tuple(B.rows[i - 1][j - 1] for j in c) for i in r)


def _check_cap(B: RationalMatrix, cap: int | None):
    cap = DEFAULT_MINOR_CAP if cap is None else cap
    if B.n > cap:
        raise OrderCapError(f"order {B.n} exceeds the principal-minor cap {cap}")


def iter_principal_minors(B: RationalMatrix, k: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Yield (1-based index set, scaled integer minor) for every order-k subset.

    The integer is L**k times the true minor for the matrix's denominator lcm L,
    so its zero pattern (and sign) matches the true value.
    """
    _, ints = B._integer_form
    for idx in combinations(range(B.n), k):
        yield tuple(i + 1 for i in idx), _principal_int(ints, idx)


def all_principal_minors(B: RationalMatrix, cap: int | None = None) -> dict[tuple[int, ...], Fraction]:
    """Every nonempty principal minor, keyed by its 1-based index set."""
    _check_cap(B, cap)
    scale, _ = B._integer_form
    out = {}
    for k in range(1, B.n + 1):
        denom = scale ** k
        for alpha, value in iter_principal_minors(B, k):
            out[alpha] = Fraction(value, denom)
    return out


def order_letter(B: RationalMatrix, k: int) -> str:
    """'A', 'S' or 'N' for the order-k principal minors, with early exit."""
    seen_zero = seen_nonzero = False
    for _, value in iter_principal_minors(B, k):
        if value:
            seen_nonzero = True
        else:
            seen_zero = True
        if seen_zero and seen_nonzero:
            return "S"
    return "A" if seen_nonzero else "N"


def has_nonzero_principal_minor(B: RationalMatrix, k: int) -> bool:
    return any(value for _, value in iter_principal_minors(B, k))


# -- rank, inverse, Schur complement ----------------------------------------

def _rank_int(rows: list[list[int]]) -> int:
    if not rows:
        return 0
    a = [list(r) for r in rows]
    m, n = len(a), len(a[0])
    rank = 0
    for col in range(n):
        pivot = next((r for r in range(rank, m) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        piv = a[rank][col]
        for r in range(rank + 1, m):
            arc = a[r][col]
            if arc:
                row = [x * piv - arc * y for x, y in zip(a[r], a[rank])]
                g = math.gcd(*row)
                a[r] = [x // g for x in row] if g > 1 else row
        rank += 1
        if rank == m:
            break
    return rank


def rank(B) -> int:
    """Exact rank of a RationalMatrix or of an arbitrary rectangular grid."""
    grid = B.rows if isinstance(B, RationalMatrix) else [[as_fraction(x) for x in r] for r in B]
    scale = 1
    for r in grid:
        for x in r:
            scale = math.lcm(scale, x.denominator)
    return _rank_int([[int(x * scale) for x in r] for r in grid])


def _solve_inverse(grid: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(grid)
    a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(grid)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        rc = a[col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], rc)]
    return [r[n:] for r in a]


def inverse(B: RationalMatrix) -> RationalMatrix:
    """Exact inverse; raises SingularMatrixError when det B = 0."""
    return RationalMatrix(_solve_inverse([list(r) for r in B.rows]))


def schur_complement(B: RationalMatrix, alpha: Iterable[int]) -> RationalMatrix:
    """B/B[alpha] = B[beta] - B[beta, alpha] B[alpha]^-1 B[alpha, beta].

    Row i of the result corresponds to index ``complement(alpha, n)[i-1]`` of B.
    """
    alpha = index_set(alpha, B.n)
    if not alpha:
        return B
    beta = complement(alpha, B.n)
    if not beta:
        raise LinalgError("alpha must be a proper subset")
    try:
        inv = _solve_inverse([[B.rows[i - 1][j - 1] for j in alpha] for i in alpha])
    except SingularMatrixError:
        raise SingularMatrixError(f"B[{list(alpha)}] is singular") from None
    cross = [[B.rows[i - 1][j - 1] for j in alpha] for i in beta]  # B[beta, alpha]
    t = [[sum(c * inv[p][q] for p, c in enumerate(row)) for q in range(len(alpha))] for row in cross]
    out = []
    for a_i, i in enumerate(beta):
        out.append([
            B.rows[i - 1][j - 1] - sum(t[a_i][q] * cross[b_j][q] for q in range(len(alpha)))
            for b_j, j in enumerate(beta)
        ])
    return RationalMatrix(out)


# -- combinators --------------------------------------------------------------

def direct_sum(B: RationalMatrix, C: RationalMatrix) -> RationalMatrix:
    n, m = B.n, C.n
    zero = Fraction(0)
    rows = [list(r) + [zero] * m for r in B.rows]
    rows += [[zero] * n + list(r) for r in C.rows]
    return RationalMatrix(rows)


def duplicate_index(B: RationalMatrix, i: int) -> RationalMatrix:
    """Append a copy of row/column i as row/column n+1.

    Every principal minor through both i and n+1 vanishes, so the pr-sequence
    gains a trailing 0 and is otherwise unchanged.
    """
    if not 1 <= i <= B.n:
        raise LinalgError(f"index {i} out of range 1..{B.n}")
    rows = [list(r) + [r[i - 1]] for r in B.rows]
    rows.append(list(B.rows[i - 1]) + [B.rows[i - 1][i - 1]])
    return RationalMatrix(rows)


# -- named constructions --------------------------------------------------------

class ConstructionKind(str, Enum):
    ZERO = "ZERO"
    IDENTITY = "IDENTITY"
    ALLONES = "ALLONES"
    J_MINUS_2I = "J_MINUS_2I"
    J_MINUS_3I = "J_MINUS_3I"
    PATH_ADJ = "PATH_ADJ"
    CYCLE_ADJ = "CYCLE_ADJ"
    FAN_ADJ = "FAN_ADJ"
    SQUARED_DIFF = "SQUARED_DIFF"
    # rank-2 Gram-type matrices on the rows (1, i): b_ij = 1 + ij and 1 - ij
    RANK2_PLUS = "RANK2_PLUS"
    RANK2_MINUS = "RANK2_MINUS"


_MIN_ORDER = {ConstructionKind.CYCLE_ADJ: 3, ConstructionKind.FAN_ADJ: 4}


def _adjacency(n: int, edges: Iterable[tuple[int, int]]) -> RationalMatrix:
    rows = [[0] * n for _ in range(n)]
    for a, b in edges:
        rows[a - 1][b - 1] = rows[b - 1][a - 1] = 1
    return RationalMatrix(rows)


def construct(kind: ConstructionKind | str, n: int) -> RationalMatrix:
    """The named matrix of order n.

    FAN_ADJ is the cycle on vertices 1..n-1 plus a pendant vertex n joined to 1.
    """
    kind = ConstructionKind(kind)
    if n < _MIN_ORDER.get(kind, 1):
        raise LinalgError(f"{kind.value} is not defined for n={n}")
    K = ConstructionKind
    if kind is K.ZERO:
        return RationalMatrix.from_function(n, lambda i, j: 0)
    if kind is K.IDENTITY:
        return RationalMatrix.from_function(n, lambda i, j: int(i == j))
    if kind is K.ALLONES:
        return RationalMatrix.from_function(n, lambda i, j: 1)
    if kind is K.J_MINUS_2I:
        return RationalMatrix.from_function(n, lambda i, j: -1 if i == j else 1)
    if kind is K.J_MINUS_3I:
        return RationalMatrix.from_function(n, lambda i, j: -2 if i == j else 1)
    if kind is K.PATH_ADJ:
        return _adjacency(n, [(i, i + 1) for i in range(1, n)])
    if kind is K.CYCLE_ADJ:
        return _adjacency(n, [(i, i + 1) for i in range(1, n)] + [(n, 1)])
    if kind is K.FAN_ADJ:
        m = n - 1
        return _adjacency(n, [(i, i + 1) for i in range(1, m)] + [(m, 1), (1, n)])
    if kind is K.SQUARED_DIFF:
        return RationalMatrix.from_function(n, lambda i, j: (i - j) ** 2)
    if kind is K.RANK2_PLUS:
        return RationalMatrix.from_function(n, lambda i, j: 1 + i * j)
    if kind is K.RANK2_MINUS:
        return RationalMatrix.from_function(n, lambda i, j: 1 - i * j)
    raise LinalgError(f"unsupported construction {kind}")  # pragma: no cover

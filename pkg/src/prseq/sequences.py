"""pr- and epr-sequences: computation from matrices, text forms, inverse transforms."""
from __future__ import annotations

import re
from dataclasses import dataclass

from .linalg import (
    DEFAULT_MINOR_CAP,
    OrderCapError,
    RationalMatrix,
    has_nonzero_principal_minor,
    order_letter,
)

_PR_RE = re.compile(r"([01])\]([01]+)")
_EPR_RE = re.compile(r"[ASN]+")


class SequenceError(ValueError):
    pass


class UndeterminedError(SequenceError):
    """The 0th term of pr(B^-1) cannot be decided from the data supplied."""


@dataclass(frozen=True)
class PrSequence:
    r0: int
    terms: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.r0 not in (0, 1) or not self.terms or any(t not in (0, 1) for t in self.terms):
            raise SequenceError(f"invalid pr-sequence r0={self.r0!r} terms={self.terms!r}")

    @property
    def n(self) -> int:
        return len(self.terms)

    def r(self, k: int) -> int:
        """r_k for 0 <= k <= n."""
        if k == 0:
            return self.r0
        if not 1 <= k <= self.n:
            raise IndexError(k)
        return self.terms[k - 1]

    @property
    def body(self) -> str:
        return "".join(map(str, self.terms))

    def __str__(self):
        return f"{self.r0}]{self.body}"


@dataclass(frozen=True)
class EprSequence:
    letters: str

    def __post_init__(self):
        if not isinstance(self.letters, str) or not _EPR_RE.fullmatch(self.letters):
            raise SequenceError(f"invalid epr-sequence {self.letters!r}")

    @property
    def n(self) -> int:
        return len(self.letters)

    def letter(self, k: int) -> str:
        """The 1-based letter l_k."""
        if not 1 <= k <= self.n:
            raise IndexError(k)
        return self.letters[k - 1]

    def __str__(self):
        return self.letters


def parse_pr(text: str) -> PrSequence:
    if not isinstance(text, str):
        raise SequenceError("pr-sequence text must be a string")
    m = _PR_RE.fullmatch(text)
    if not m:
        raise SequenceError(f"malformed pr-sequence {text!r}; expected e.g. '0]101'")
    return PrSequence(int(m.group(1)), tuple(int(c) for c in m.group(2)))


def format_pr(p: PrSequence) -> str:
    return str(p)


def parse_epr(text: str) -> EprSequence:
    if not isinstance(text, str) or not _EPR_RE.fullmatch(text):
        raise SequenceError(f"malformed epr-sequence {text!r}; expected letters from A, S, N")
    return EprSequence(text)


def format_epr(e: EprSequence) -> str:
    return e.letters


def as_pr(p) -> PrSequence:
    return p if isinstance(p, PrSequence) else parse_pr(p)


def as_epr(e) -> EprSequence:
    return e if isinstance(e, EprSequence) else parse_epr(e)


def _cap(B: RationalMatrix, cap):
    cap = DEFAULT_MINOR_CAP if cap is None else cap
    if B.n > cap:
        raise OrderCapError(f"order {B.n} exceeds the principal-minor cap {cap}")


def compute_pr(B: RationalMatrix, cap: int | None = None) -> PrSequence:
    _cap(B, cap)
    r0 = int(any(x == 0 for x in B.diagonal()))
    return PrSequence(r0, tuple(int(has_nonzero_principal_minor(B, k)) for k in range(1, B.n + 1)))


def compute_epr(B: RationalMatrix, cap: int | None = None) -> EprSequence:
    _cap(B, cap)
    return EprSequence("".join(order_letter(B, k) for k in range(1, B.n + 1)))


def pr_from_epr(e) -> PrSequence:
    """The pr-sequence every matrix attaining ``e`` attains."""
    e = as_epr(e)
    return PrSequence(int(e.letters[0] != "A"), tuple(int(c != "N") for c in e.letters))


def epr_of_inverse(e) -> EprSequence:
    """epr(B^-1) = l_{n-1} ... l_1 A for nonsingular B (Inverse Theorem)."""
    e = as_epr(e)
    if e.letters[-1] != "A":
        raise SequenceError(f"{e} does not end in A; the matrix is singular")
    return EprSequence(e.letters[-2::-1] + "A")


def inverse_r0(p, e=None) -> int:
    """Decide r'_0 of pr(B^-1) from pr(B) and, when needed, epr(B)."""
    p = as_pr(p)
    n = p.n
    if p.terms[-1] != 1:
        raise SequenceError(f"{p} ends in 0; the matrix is singular")
    if n == 1:
        return 0
    # a zero order-(n-1) minor exists iff r'_0 = 1
    if p.terms[-2] == 0:
        return 1
    if n >= 3 and p.terms[-3] == 0:
        # tail 011: NSA is prohibited, so l_{n-1} = A
        return 0
    if e is None:
        raise UndeterminedError(f"r'_0 of the inverse of a matrix with pr {p} needs its epr-sequence")
    e = as_epr(e)
    if e.n != n or pr_from_epr(e) != p:
        raise SequenceError(f"epr {e} is not associated with pr {p}")
    return int(e.letters[-2] != "A")


def pr_of_inverse(p, e=None) -> PrSequence:
    """pr(B^-1): r'_i = r_{n-i} for 1 <= i < n, r'_n = 1, r'_0 as in :func:`inverse_r0`."""
    p = as_pr(p)
    r0 = inverse_r0(p, e)
    n = p.n
    terms = tuple(p.terms[n - i - 1] for i in range(1, n)) + (1,)
    return PrSequence(r0, terms)

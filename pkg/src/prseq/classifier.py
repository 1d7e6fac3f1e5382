"""Family templates and the two classification theorems.

A template is written like ``"0]1(01)*01(0)*"`` or ``"A(NS)*NA"``: literal runs
plus starred blocks that may repeat any number of times, including zero.  A
single symbol followed by ``*`` is shorthand for a one-symbol block.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

from .rules import RuleViolation, check_epr, check_pr
from .sequences import EprSequence, PrSequence, as_epr, as_pr, pr_from_epr


class ClassifierError(ValueError):
    pass


class OutOfUniverseError(ClassifierError):
    pass


class UnattainableError(ClassifierError):
    pass


@dataclass(frozen=True)
class Block:
    text: str
    starred: bool


_TOKEN = re.compile(r"\(([^()*]+)\)\*|([^()*])\*|([^()*]+?)(?=[^()*]\*|\(|$)")


def parse_pattern(pattern: str) -> tuple[Block, ...]:
    blocks = []
    pos = 0
    while pos < len(pattern):
        m = _TOKEN.match(pattern, pos)
        if not m or m.end() == pos:
            raise ClassifierError(f"bad template syntax at {pattern[pos:]!r}")
        group, single, literal = m.groups()
        if group is not None:
            blocks.append(Block(group, True))
        elif single is not None:
            blocks.append(Block(single, True))
        else:
            blocks.append(Block(literal, False))
        pos = m.end()
    merged: list[Block] = []
    for b in blocks:
        if merged and not b.starred and not merged[-1].starred:
            merged[-1] = Block(merged[-1].text + b.text, False)
        else:
            merged.append(b)
    return tuple(merged)


@dataclass(frozen=True)
class FamilyTemplate:
    id: str
    label: str
    kind: str  # "pr" | "epr"
    pattern: str
    r0: int | None = None
    blocks: tuple[Block, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        body = self.pattern
        r0 = None
        if self.kind == "pr":
            head, sep, body = self.pattern.partition("]")
            if not sep or head not in ("0", "1"):
                raise ClassifierError(f"pr template needs an r0 prefix: {self.pattern}")
            r0 = int(head)
        blocks = parse_pattern(body)
        alphabet = set("01") if self.kind == "pr" else set("ASN")
        for b in blocks:
            if not b.text or not set(b.text) <= alphabet:
                raise ClassifierError(f"template {self.pattern} uses symbols outside {sorted(alphabet)}")
        object.__setattr__(self, "r0", r0)
        object.__setattr__(self, "blocks", blocks)

    @property
    def star_count(self) -> int:
        return sum(b.starred for b in self.blocks)

    @property
    def min_order(self) -> int:
        return sum(len(b.text) for b in self.blocks if not b.starred)

    def expand(self, counts) -> str:
        counts = list(counts)
        if len(counts) != self.star_count:
            raise ClassifierError(f"{self.id} needs {self.star_count} counts, got {len(counts)}")
        it = iter(counts)
        body = "".join(b.text * next(it) if b.starred else b.text for b in self.blocks)
        return f"{self.r0}]{body}" if self.kind == "pr" else body

    def _body(self, s) -> str | None:
        if self.kind == "pr":
            p = as_pr(s)
            return p.body if p.r0 == self.r0 else None
        return as_epr(s).letters

    def match(self, s) -> tuple[int, ...] | None:
        """Repetition counts that expand to ``s``, or None.

        Leftmost-greedy with backtracking: each starred block first tries the
        largest count that fits, then fewer.
        """
        body = self._body(s)
        if body is None:
            return None
        blocks = self.blocks

        def go(bi: int, pos: int) -> tuple[int, ...] | None:
            if bi == len(blocks):
                return () if pos == len(body) else None
            b = blocks[bi]
            t = b.text
            if not b.starred:
                return go(bi + 1, pos + len(t)) if body.startswith(t, pos) else None
            c = 0
            while body.startswith(t, pos + c * len(t)):
                c += 1
            for k in range(c, -1, -1):
                rest = go(bi + 1, pos + k * len(t))
                if rest is not None:
                    return (k,) + rest
            return None

        return go(0, 0)

    def instances(self, n: int) -> Iterator[tuple[tuple[int, ...], str]]:
        """All (counts, sequence text) of order exactly n, in lexicographic count order."""
        free = n - self.min_order
        if free < 0:
            return
        lengths = [len(b.text) for b in self.blocks if b.starred]
        for counts in _count_vectors(lengths, free):
            yield counts, self.expand(counts)

    def instance(self, n: int, sequence=None) -> tuple[tuple[int, ...], str]:
        """The instance of order n to use by default: the largest counts in lexicographic order.

        With ``sequence`` given, that sequence must be an instance of this family.
        """
        if sequence is not None:
            text = str(sequence)
            counts = self.match(text)
            if counts is None or len(self._body(text) or "") != n:
                raise ClassifierError(f"{text} is not an order-{n} instance of {self.id}")
            return counts, self.expand(counts)
        options = list(self.instances(n))
        if not options:
            raise ClassifierError(f"{self.id} ({self.pattern}) has no instance of order {n}")
        return max(options)


def _count_vectors(lengths: list[int], total: int) -> Iterator[tuple[int, ...]]:
    if not lengths:
        if total == 0:
            yield ()
        return
    head, rest = lengths[0], lengths[1:]
    for c in range(total // head + 1):
        for tail in _count_vectors(rest, total - c * head):
            yield (c,) + tail


def _pr(label, pattern):
    return FamilyTemplate(f"PR-{label}", label, "pr", pattern)


def _epr(label, pattern):
    return FamilyTemplate(f"EPR-{label}", label, "epr", pattern)


# pr-sequences with no 111 in r_1..r_n: families 1-15, then the 1]11-initial 16-18
PR_FAMILIES: tuple[FamilyTemplate, ...] = (
    _pr("1", "0]100(0)*"),
    _pr("2", "0]1(01)*01(0)*"),
    _pr("3", "0]1011(0)*"),
    _pr("4", "0]101011(0)*"),
    _pr("5", "0]110(0)*"),
    _pr("6", "0]1101(0)*"),
    _pr("7", "0]11011(0)*"),
    _pr("8", "1]000(0)*"),
    _pr("9", "1]010(0)*"),
    _pr("10", "1]01(01)*01(0)*"),
    _pr("11", "1]01(01)*1(0)*"),
    _pr("12", "1]100(0)*"),
    _pr("13", "1]1(01)*010(0)*"),
    _pr("14", "1]10110(0)*"),
    _pr("15", "1]1010110(0)*"),
    _pr("16", "1]110(0)*"),
    _pr("17", "1]11(01)*01(0)*"),
    _pr("18", "1]11011(0)*"),
)

# epr-sequences with an N in every length-3 window
EPR_FAMILIES: tuple[FamilyTemplate, ...] = (
    _epr("1", "ANN(N)*"),
    _epr("2a", "A(NS)*NA"),
    _epr("2b", "A(NS)*NSN(N)*"),
    _epr("3a", "ANAA"),
    _epr("3b", "ANSSN(N)*"),
    _epr("4a", "ANSNAA"),
    _epr("4b", "ANSNSSN(N)*"),
    _epr("5a", "AAN(N)*"),
    _epr("5b", "ASN(N)*"),
    _epr("6a", "AANA"),
    _epr("6b", "ASNSN(N)*"),
    _epr("7a", "AANAA"),
    _epr("7b", "ASNSSN(N)*"),
    _epr("8", "NNN(N)*"),
    _epr("9", "NSN(N)*"),
    _epr("10a", "NS(NS)*NA"),
    _epr("10b", "NS(NS)*NSN(N)*"),
    _epr("11a", "N(SN)*AA"),
    _epr("11b", "N(SN)*SSN(N)*"),
    _epr("11c", "NAAN(N)*"),
    _epr("12", "SNN(N)*"),
    _epr("13", "S(NS)*NSN(N)*"),
    _epr("14", "SNSSN(N)*"),
    _epr("15", "SNSNSSN(N)*"),
    _epr("16a", "SAN(N)*"),
    _epr("16b", "SSN(N)*"),
    _epr("17a", "SS(NS)*NA"),
    _epr("17b", "SS(NS)*NSN(N)*"),
    _epr("18a", "SSNAA"),
    _epr("18b", "SSNSSN(N)*"),
)

FAMILIES: dict[str, FamilyTemplate] = {t.id: t for t in PR_FAMILIES + EPR_FAMILIES}

# pr families whose sequences avoid 111 even counting r_0
_NO_111_PR = tuple(t for t in PR_FAMILIES if int(t.label) <= 15)


def get_family(family_id: str) -> FamilyTemplate:
    try:
        return FAMILIES[family_id]
    except KeyError:
        raise ClassifierError(f"unknown family {family_id!r}") from None


def match_template(t: FamilyTemplate, s) -> tuple[int, ...] | None:
    return t.match(s)


@dataclass(frozen=True)
class ClassificationResult:
    attainable: bool
    matches: tuple[tuple[str, tuple[int, ...]], ...]
    violations: tuple[RuleViolation, ...] = ()

    @property
    def families(self) -> list[str]:
        return [fid for fid, _ in self.matches]

    @property
    def labels(self) -> list[str]:
        return [FAMILIES[fid].label for fid, _ in self.matches]

    def to_dict(self) -> dict:
        return {
            "attainable": self.attainable,
            "families": self.labels,
            "matches": [{"family": fid, "counts": list(c)} for fid, c in self.matches],
            "violations": [v.to_dict() for v in self.violations],
        }


def in_pr_universe(p) -> bool:
    p = as_pr(p)
    return p.n >= 3 and "111" not in p.body


def in_epr_universe(e) -> bool:
    s = as_epr(e).letters
    return len(s) >= 3 and all("N" in s[i:i + 3] for i in range(len(s) - 2))


def _classify(s, families, violations_fn) -> ClassificationResult:
    matches = tuple((t.id, c) for t in families if (c := t.match(s)) is not None)
    if len(matches) > 1:
        raise AssertionError(f"families overlap on {s}: {matches}")
    if matches:
        return ClassificationResult(True, matches)
    return ClassificationResult(False, (), tuple(violations_fn(s)))


def classify_pr(p) -> ClassificationResult:
    p = as_pr(p)
    if not in_pr_universe(p):
        raise OutOfUniverseError(f"{p}: needs order >= 3 and no 111 within r_1..r_n")
    return _classify(p, PR_FAMILIES, check_pr)


def classify_epr(e) -> ClassificationResult:
    e = as_epr(e)
    if not in_epr_universe(e):
        raise OutOfUniverseError(f"{e}: needs order >= 3 and an N in every length-3 window")
    return _classify(e, EPR_FAMILIES, check_epr)


def associated_epr_families(p) -> list[tuple[str, tuple[int, ...]]]:
    """Every epr family instance (id, counts) whose associated pr-sequence is ``p``."""
    p = as_pr(p)
    if not classify_pr(p).attainable:
        raise UnattainableError(f"{p} is not attainable")
    out = []
    for t in EPR_FAMILIES:
        for counts, text in t.instances(p.n):
            if pr_from_epr(text) == p:
                out.append((t.id, counts))
    return out


@dataclass(frozen=True)
class UniquenessRow:
    pr: str
    pr_family: str
    epr_families: tuple[str, ...]
    expected: int

    @property
    def count(self) -> int:
        return len(self.epr_families)

    @property
    def ok(self) -> bool:
        return self.count == self.expected

    def to_dict(self) -> dict:
        return {"pr": self.pr, "pr_family": self.pr_family, "epr_families": list(self.epr_families),
                "count": self.count, "expected": self.expected, "ok": self.ok}


_TWO_EPR = (FamilyTemplate("x", "x", "pr", "0]110(0)*"), FamilyTemplate("y", "y", "pr", "1]0110(0)*"))


def uniqueness_report(n_max: int) -> list[UniquenessRow]:
    """Associated-epr counts for every attainable pr instance avoiding 111 (r_0 included), 3 <= n <= n_max.

    Exactly the instances of 0]110(0)* and 1]0110(0)* are expected to have two.
    """
    if n_max < 3:
        raise ClassifierError("n_max must be at least 3")
    rows = []
    for n in range(3, n_max + 1):
        for t in _NO_111_PR:
            for _, text in t.instances(n):
                fams = tuple(fid for fid, _ in associated_epr_families(text))
                expected = 2 if any(x.match(text) is not None for x in _TWO_EPR) else 1
                rows.append(UniquenessRow(text, t.id, fams, expected))
    return rows


def family_instances(family_id: str, n_lo: int, n_hi: int) -> Iterator[tuple[int, tuple[int, ...], str]]:
    t = get_family(family_id)
    for n in range(n_lo, n_hi + 1):
        for counts, text in t.instances(n):
            yield n, counts, text


__all__ = [
    "Block", "FamilyTemplate", "ClassificationResult", "PR_FAMILIES", "EPR_FAMILIES", "FAMILIES",
    "classify_pr", "classify_epr", "associated_epr_families", "uniqueness_report", "match_template",
    "in_pr_universe", "in_epr_universe", "get_family", "family_instances", "parse_pattern",
    "ClassifierError", "OutOfUniverseError", "UnattainableError", "UniquenessRow",
    "EprSequence", "PrSequence",
]

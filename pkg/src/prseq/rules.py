"""Necessary conditions on attainable sequences of real symmetric matrices.

Each rule is a prohibition or forcing result restated so it can be checked on a
sequence alone; results of the form "B is singular" appear here as
"the last letter is N" (epr) or "r_n = 0" (pr).  Positions are 1-based.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .sequences import as_epr, as_pr


class UnknownRuleError(KeyError):
    pass


@dataclass(frozen=True)
class RuleViolation:
    rule_id: str
    position: int
    message: str

    def to_dict(self) -> dict:
        return {"rule": self.rule_id, "position": self.position, "message": self.message}


@dataclass(frozen=True)
class Rule:
    rule_id: str
    kind: str  # "pr" or "epr"
    statement: str
    citation: str
    check: Callable[[str], list[tuple[int, str]]]


def _find_all(s: str, sub: str) -> list[int]:
    """1-based start positions of (possibly overlapping) occurrences."""
    out, i = [], s.find(sub)
    while i != -1:
        out.append(i + 1)
        i = s.find(sub, i + 1)
    return out


def _first_not(s: str, start: int, letter: str) -> int | None:
    """First 1-based position >= start whose symbol differs from ``letter``."""
    for p in range(start, len(s) + 1):
        if s[p - 1] != letter:
            return p
    return None


# -- epr rules ------------------------------------------------------------------

def _nn(s):
    for k in _find_all(s, "NN"):
        p = _first_not(s, k + 2, "N")
        return [(p, f"NN at {k} forces N from there on, but l_{p} = {s[p - 1]}")] if p else []
    return []


def _substring_rule(pattern):
    def check(s):
        return [(k, f"{pattern} occurs at {k}") for k in _find_all(s, pattern)]
    return check


def _asn_a(s):
    out = []
    for k in _find_all(s, "ASN"):
        j = s.find("A", k + 2)
        if j != -1:
            out.append((j + 1, f"ASN at {k} is followed by A at {j + 1}"))
    return out


def _sn_a(s):
    if s.startswith("SN") and "A" in s[2:]:
        j = s.index("A", 2) + 1
        return [(j, f"sequence starts SN and has A at {j}")]
    return []


def _ans_initial(s):
    return [(k, f"ANS occurs at {k}, not initially") for k in _find_all(s, "ANS") if k > 1]


def _san_tail(s):
    out = []
    for k in _find_all(s, "SAN"):
        p = _first_not(s, k + 3, "N")
        if p:
            out.append((p, f"SAN at {k} forces N from {k + 2} on, but l_{p} = {s[p - 1]}"))
    return out


def _nsna_prefix(s):
    if len(s) >= 6 and s.startswith("NSNA"):
        return [(1, f"order {len(s)} >= 6 epr-sequence starts NSNA")]
    return []


def _nsna_placement(s):
    n = len(s)
    return [(k, f"NSNA at {k} lies within l_1..l_{n - 2}") for k in _find_all(s, "NSNA") if k + 3 <= n - 2]


def _nxxn(s):
    out = []
    n = len(s)
    for k in range(1, n - 2):
        if s[k - 1] == "N" and s[k + 2] == "N":
            p = _first_not(s, k + 3, "N")
            if p:
                out.append((p, f"l_{k} = l_{k + 3} = N forces N from {k + 3} on, but l_{p} = {s[p - 1]}"))
    return out


def _ana_rigid(s):
    n = len(s)
    out = []
    for p in _find_all(s, "ANA"):
        if p + 2 >= n:
            continue  # terminal ANA is unrestricted
        expected = "A" * p + "N" + "A" * (n - p - 1)
        if s != expected:
            bad = next(i + 1 for i, (a, b) in enumerate(zip(s, expected)) if a != b)
            out.append((bad, f"non-terminal ANA at {p} requires the shape {expected}"))
    return out


def _sna_terminal(s):
    n = len(s)
    out = []
    for k in _find_all(s, "SNA"):
        if k + 2 == n or (k + 3 == n and s[-1] == "A"):
            continue
        out.append((k, f"SNA at {k} is not the terminal SNA or SNAA"))
    return out


def _ssnsnss(s):
    return [(1, "sequence starts SSNSNSS")] if s.startswith("SSNSNSS") else []


def _ansnsn_even(s):
    n = len(s)
    if n >= 8 and n % 2 == 0 and s.startswith("ANSNSN") and s[-1] != "N":
        return [(n, f"even order {n} >= 8 starting ANSNSN must be singular (l_n = N)")]
    return []


def _evenpos(prefix):
    def check(s):
        if not s.startswith(prefix):
            return []
        return [
            (p, f"starting {prefix} forces N at even positions, but l_{p} = {s[p - 1]}")
            for p in range(2, len(s) + 1, 2)
            if s[p - 1] != "N"
        ]
    return check


_SSNS_SHAPES = (re.compile(r"SSNSNS(?:NS)*SNN*"), re.compile(r"SSNS(?:NS)*NAA"))


def _ssns_tails(s):
    for shape in _SSNS_SHAPES:
        if shape.fullmatch(s):
            return [(1, f"{s} has the prohibited shape {shape.pattern}")]
    return []


# -- pr rules ---------------------------------------------------------------------

def _pr_00(body):
    i = body.find("00")
    if i == -1:
        return []
    k1 = i + 1
    p = _first_not(body, k1, "0")
    return [(p, f"r_{k1} = r_{k1 + 1} = 0 forces 0 from {k1} on, but r_{p} = 1")] if p else []


def _pr_0110(body):
    n = len(body)
    out = []
    if n < 4:
        return out
    for k in range(1, n - 2):
        if body[k - 1] == "0" and body[k + 2] == "0":
            p = _first_not(body, k + 3, "0")
            if p:
                out.append((p, f"r_{k} = r_{k + 3} = 0 forces 0 from {k + 3} on, but r_{p} = 1"))
    return out


RULES: dict[str, Rule] = {}


def _register(rule_id, kind, statement, citation, check):
    RULES[rule_id] = Rule(rule_id, kind, statement, citation, check)


_register("PR-00", "pr",
          "If r_{k+1} = r_{k+2} = 0 for some k >= 0, then r_i = 0 for all i >= k+1.",
          "00 Theorem", _pr_00)
_register("PR-0110", "pr",
          "If r_k = r_{k+3} = 0 for some 1 <= k <= n-3, then r_i = 0 for all i >= k+3.",
          "0110 Theorem", _pr_0110)
_register("EPR-NN", "epr",
          "If l_k = l_{k+1} = N, then l_i = N for all i >= k.",
          "NN Theorem", _nn)
_register("EPR-NSA", "epr", "NSA never occurs.",
          "NSA prohibition, corollary of the Inheritance Theorem", _substring_rule("NSA"))
_register("EPR-ASN-A", "epr", "No epr-sequence has the form ...ASN...A....",
          "ASN...A prohibition, corollary of the Inheritance Theorem", _asn_a)
_register("EPR-SN-A", "epr", "An epr-sequence starting SN contains no A.",
          "SN...A prohibition", _sn_a)
_register("EPR-NAN", "epr", "NAN never occurs (characteristic not 2).",
          "NAN/NAS prohibition", _substring_rule("NAN"))
_register("EPR-NAS", "epr", "NAS never occurs (characteristic not 2).",
          "NAN/NAS prohibition", _substring_rule("NAS"))
_register("EPR-ANS-INITIAL", "epr", "ANS occurs only as the initial subsequence.",
          "ANS must be initial", _ans_initial)
_register("EPR-SAN-TAIL", "epr", "If l_k l_{k+1} l_{k+2} = SAN, then l_j = N for all j >= k+2.",
          "SAN tail restriction (generalizes the SANA prohibition)", _san_tail)
_register("EPR-NSNA-PREFIX", "epr", "For n >= 6 no epr-sequence starts NSNA.",
          "NSNA prefix restriction", _nsna_prefix)
_register("EPR-NSNA-PLACEMENT", "epr", "NSNA does not occur within l_1 ... l_{n-2}.",
          "NSNA placement restriction, via the Schur Complement Theorem", _nsna_placement)
_register("EPR-NXXN", "epr", "If l_k = l_{k+3} = N, then l_i = N for all i >= k+3.",
          "NXXN restriction, from the 0110 Theorem", _nxxn)
_register("EPR-ANA-RIGID", "epr",
          "An epr-sequence with ANA as a non-terminal subsequence has the form (A)*ANAA(A)*.",
          "ANA rigidity: a matrix starting ANA is diagonally conjugate to +-(J_n - 2I_n)", _ana_rigid)
_register("EPR-SNA-TERMINAL", "epr", "SNA occurs only as the terminal SNA or SNAA.",
          "SNA placement restriction and its terminal-form corollary", _sna_terminal)
_register("EPR-SSNSNSS", "epr", "No epr-sequence starts SSNSNSS.",
          "SSNSNSS prefix restriction", _ssnsnss)
_register("EPR-ANSNSN-EVEN", "epr",
          "For even n >= 8, an epr-sequence starting ANSNSN ends in N (the matrix is singular).",
          "ANSNSN singularity for even order via the J_{n/2+1} block lemma", _ansnsn_even)
_register("EPR-ANSNSN-EVENPOS", "epr", "An epr-sequence starting ANSNSN has l_{2k} = N for all k.",
          "ANSNSN even-position corollary", _evenpos("ANSNSN"))
_register("EPR-SNSNSN-EVENPOS", "epr", "An epr-sequence starting SNSNSN has l_{2k} = N for all k.",
          "SNSNSN even-position corollary", _evenpos("SNSNSN"))
_register("EPR-SSNS-TAILS", "epr",
          "Neither SSNSNS(NS)*SN(N)* nor SSNS(NS)*NAA is attainable.",
          "SSNS tail shapes, via the Schur Complement Theorem", _ssns_tails)

PR_RULE_IDS = tuple(r for r, rule in RULES.items() if rule.kind == "pr")
EPR_RULE_IDS = tuple(r for r, rule in RULES.items() if rule.kind == "epr")


def _run(ids, s):
    out = []
    for rule_id in ids:
        seen = set()
        for position, message in RULES[rule_id].check(s):
            if position not in seen:
                seen.add(position)
                out.append(RuleViolation(rule_id, position, message))
    return out


def check_epr(e) -> list[RuleViolation]:
    return _run(EPR_RULE_IDS, as_epr(e).letters)


def check_pr(p) -> list[RuleViolation]:
    return _run(PR_RULE_IDS, as_pr(p).body)


def explain_rule(rule_id: str) -> str:
    try:
        rule = RULES[rule_id]
    except KeyError:
        raise UnknownRuleError(rule_id) from None
    return f"{rule.rule_id}: {rule.statement} [{rule.citation}]"

"""Witness matrices for every attainable family, built from small recipes and self-verified.

A recipe is a tree of strategies:

* CONSTRUCT          a named matrix of a given order;
* INVERSE-OF         the inverse of a sub-recipe;
* DIRECT-SUM         the direct sum of two sub-recipes (with a zero block: maps A to S, appends N);
* DUPLICATE-APPEND   repeated duplication of index 1 (appends 0 to pr, N to epr, A to S beyond order 1);
* DIAGONAL-CONJUGATE D B D for a nonsingular diagonal D (preserves the epr-sequence);
* SEARCH-CACHED      a matrix found by the search module and stored in the package fixture.
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .classifier import ClassifierError, FamilyTemplate, get_family
from .linalg import (
    ConstructionKind as K,
    RationalMatrix,
    construct,
    direct_sum,
    duplicate_index,
    inverse,
    matrix_from_json,
)
from .sequences import compute_epr, compute_pr

MAX_CONSTRUCTIVE_ORDER = 20
FIXTURE_VERSION = 1
FIXTURE_NAME = "search_witnesses.json"


class WitnessError(ValueError):
    pass


class InvalidInstanceError(WitnessError):
    pass


class WitnessUnavailableError(WitnessError):
    pass


class SelfVerificationError(AssertionError):
    pass


@dataclass(frozen=True)
class WitnessRecipe:
    strategy: str
    n: int
    family: str | None = None
    kind: str | None = None  # CONSTRUCT
    key: str | None = None  # SEARCH-CACHED
    times: int | None = None  # DUPLICATE-APPEND
    index: int | None = None  # DUPLICATE-APPEND
    diag: tuple | None = None  # DIAGONAL-CONJUGATE
    children: tuple["WitnessRecipe", ...] = field(default=())

    def evaluate(self) -> RationalMatrix:
        s = self.strategy
        if s == "CONSTRUCT":
            return construct(self.kind, self.n)
        if s == "SEARCH-CACHED":
            return cached_witness(self.key)
        if s == "DIRECT-SUM":
            left, right = self.children
            return direct_sum(left.evaluate(), right.evaluate())
        (child,) = self.children
        B = child.evaluate()
        if s == "INVERSE-OF":
            return inverse(B)
        if s == "DUPLICATE-APPEND":
            for _ in range(self.times):
                B = duplicate_index(B, self.index)
            return B
        if s == "DIAGONAL-CONJUGATE":
            return B.conjugate_diagonal(self.diag)
        raise WitnessError(f"unknown strategy {s}")  # pragma: no cover

    def to_dict(self) -> dict:
        out = {"strategy": self.strategy, "n": self.n}
        if self.family is not None:
            out["family"] = self.family
        for name in ("kind", "key", "times", "index"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        if self.diag is not None:
            out["diag"] = [str(d) for d in self.diag]
        if self.children:
            out["children"] = [c.to_dict() for c in self.children]
        return out


# -- recipe algebra -------------------------------------------------------------

def _construct(kind: K, n: int) -> WitnessRecipe:
    return WitnessRecipe("CONSTRUCT", n, kind=kind.value)


def _cached(key: str) -> WitnessRecipe:
    entry = _fixture_entries()[key]
    return WitnessRecipe("SEARCH-CACHED", entry["order"], key=key)


def _inv(r: WitnessRecipe) -> WitnessRecipe:
    return WitnessRecipe("INVERSE-OF", r.n, children=(r,))


def _sum(left: WitnessRecipe, right: WitnessRecipe) -> WitnessRecipe:
    return WitnessRecipe("DIRECT-SUM", left.n + right.n, children=(left, right))


def _zero_sum(r: WitnessRecipe, m: int) -> WitnessRecipe:
    return _sum(r, _construct(K.ZERO, m))


def _dup(r: WitnessRecipe, times: int) -> WitnessRecipe:
    if times == 0:
        return r
    return WitnessRecipe("DUPLICATE-APPEND", r.n + times, times=times, index=1, children=(r,))


def _cycle_inv(a: int) -> WitnessRecipe:
    return _inv(_construct(K.CYCLE_ADJ, 3 + 2 * a))


def _fan_inv(a: int) -> WitnessRecipe:
    return _inv(_construct(K.FAN_ADJ, 4 + 2 * a))


def _m4() -> WitnessRecipe:
    return _cached("PR-4")


def _q5() -> WitnessRecipe:
    return _inv(_cached("ANSSA"))


def _j1_zero(m: int) -> WitnessRecipe:
    return _zero_sum(_construct(K.ALLONES, 1), m)


def _j1_j2() -> WitnessRecipe:
    return _sum(_construct(K.ALLONES, 1), _construct(K.ALLONES, 2))


# Each builder takes the repetition counts of the requested instance and the order n.
_PR_BUILDERS = {
    "PR-1": lambda c, n: _dup(_construct(K.ALLONES, 3), c[0]),
    "PR-2": lambda c, n: _dup(_cycle_inv(c[0]), c[1]),
    "PR-3": lambda c, n: _dup(_construct(K.J_MINUS_2I, 4), c[0]),
    "PR-4": lambda c, n: _dup(_m4(), c[0]),
    "PR-5": lambda c, n: _dup(_j1_j2(), c[0]),
    "PR-6": lambda c, n: _dup(_construct(K.J_MINUS_3I, 4), c[0]),
    "PR-7": lambda c, n: _dup(_construct(K.J_MINUS_3I, 5), c[0]),
    "PR-8": lambda c, n: _construct(K.ZERO, n),
    "PR-9": lambda c, n: _zero_sum(_construct(K.PATH_ADJ, 2), 1 + c[0]),
    "PR-10": lambda c, n: _dup(_construct(K.PATH_ADJ, 4 + 2 * c[0]), c[1]),
    "PR-11": lambda c, n: _dup(_construct(K.CYCLE_ADJ, 3 + 2 * c[0]), c[1]),
    "PR-12": lambda c, n: _j1_zero(n - 1),
    "PR-13": lambda c, n: _zero_sum(_cycle_inv(c[0]), 1 + c[1]),
    "PR-14": lambda c, n: _zero_sum(_construct(K.J_MINUS_2I, 4), 1 + c[0]),
    "PR-15": lambda c, n: _zero_sum(_m4(), 1 + c[0]),
    "PR-16": lambda c, n: _dup(_cached("PR-16"), c[0]),
    "PR-17": lambda c, n: _dup(_fan_inv(c[0]), c[1]),
    "PR-18": lambda c, n: _dup(_q5(), c[0]),
}

_EPR_BUILDERS = {
    "EPR-1": lambda c, n: _construct(K.ALLONES, n),
    "EPR-2a": lambda c, n: _cycle_inv(c[0]),
    "EPR-2b": lambda c, n: _dup(_cycle_inv(c[0]), 1 + c[1]),
    "EPR-3a": lambda c, n: _construct(K.J_MINUS_2I, 4),
    "EPR-3b": lambda c, n: _dup(_construct(K.J_MINUS_2I, 4), 1 + c[0]),
    "EPR-4a": lambda c, n: _m4(),
    "EPR-4b": lambda c, n: _dup(_m4(), 1 + c[0]),
    "EPR-5a": lambda c, n: _construct(K.RANK2_PLUS, n),
    "EPR-5b": lambda c, n: _dup(_j1_j2(), c[0]),
    "EPR-6a": lambda c, n: _construct(K.J_MINUS_3I, 4),
    "EPR-6b": lambda c, n: _dup(_construct(K.J_MINUS_3I, 4), 1 + c[0]),
    "EPR-7a": lambda c, n: _construct(K.J_MINUS_3I, 5),
    "EPR-7b": lambda c, n: _dup(_construct(K.J_MINUS_3I, 5), 1 + c[0]),
    "EPR-8": lambda c, n: _construct(K.ZERO, n),
    "EPR-9": lambda c, n: _zero_sum(_construct(K.PATH_ADJ, 2), 1 + c[0]),
    "EPR-10a": lambda c, n: _construct(K.PATH_ADJ, 4 + 2 * c[0]),
    "EPR-10b": lambda c, n: _zero_sum(_construct(K.PATH_ADJ, 4 + 2 * c[0]), 1 + c[1]),
    "EPR-11a": lambda c, n: _construct(K.CYCLE_ADJ, 3 + 2 * c[0]),
    "EPR-11b": lambda c, n: _dup(_construct(K.CYCLE_ADJ, 3 + 2 * c[0]), 1 + c[1]),
    "EPR-11c": lambda c, n: _construct(K.SQUARED_DIFF, n),
    "EPR-12": lambda c, n: _j1_zero(n - 1),
    "EPR-13": lambda c, n: _zero_sum(_cycle_inv(c[0]), 1 + c[1]),
    "EPR-14": lambda c, n: _zero_sum(_construct(K.J_MINUS_2I, 4), 1 + c[0]),
    "EPR-15": lambda c, n: _zero_sum(_m4(), 1 + c[0]),
    "EPR-16a": lambda c, n: _construct(K.RANK2_MINUS, n),
    "EPR-16b": lambda c, n: _dup(_construct(K.RANK2_MINUS, 2), n - 2),
    "EPR-17a": lambda c, n: _fan_inv(c[0]),
    "EPR-17b": lambda c, n: _zero_sum(_fan_inv(c[0]), 1 + c[1]),
    "EPR-18a": lambda c, n: _q5(),
    "EPR-18b": lambda c, n: _dup(_q5(), 1 + c[0]),
}


def _template(family_id: str, kind: str | None = None) -> FamilyTemplate:
    try:
        t = get_family(family_id)
    except ClassifierError as exc:
        raise InvalidInstanceError(str(exc)) from None
    if kind is not None and t.kind != kind:
        raise InvalidInstanceError(f"{family_id} is not a {kind} family")
    return t


def recipe_for(family_id: str, n: int, sequence=None) -> WitnessRecipe:
    """The recipe evaluated by the witness functions for this family instance.

    Without ``sequence`` the instance is the one with the largest repetition
    counts in lexicographic order (the first starred block as long as possible).
    """
    t = _template(family_id)
    try:
        counts, _ = t.instance(n, sequence)
    except ClassifierError as exc:
        raise InvalidInstanceError(str(exc)) from None
    if n > MAX_CONSTRUCTIVE_ORDER:
        raise WitnessUnavailableError(f"witness orders are capped at {MAX_CONSTRUCTIVE_ORDER}")
    builders = _PR_BUILDERS if t.kind == "pr" else _EPR_BUILDERS
    r = builders[t.id](counts, n)
    if r.n != n:  # pragma: no cover - guards the tables above
        raise WitnessError(f"recipe for {t.id} has order {r.n}, expected {n}")
    return dataclasses.replace(r, family=t.id)


def evaluate(recipe: WitnessRecipe) -> RationalMatrix:
    return recipe.evaluate()


def _witness(family_id: str, n: int, sequence, kind: str) -> RationalMatrix:
    t = _template(family_id, kind)
    recipe = recipe_for(family_id, n, sequence)
    _, expected = t.instance(n, sequence)
    B = recipe.evaluate()
    got = str(compute_pr(B) if kind == "pr" else compute_epr(B))
    if got != expected:
        raise SelfVerificationError(f"{family_id} witness of order {n} attains {got}, not {expected}")
    return B


def witness_pr(family_id: str, n: int, sequence=None) -> RationalMatrix:
    """A matrix whose pr-sequence is the requested instance of a pr family (verified)."""
    return _witness(family_id, n, sequence, "pr")


def witness_epr(family_id: str, n: int, sequence=None) -> RationalMatrix:
    """A matrix whose epr-sequence is the requested instance of an epr family (verified)."""
    return _witness(family_id, n, sequence, "epr")


def witness(family_id: str, n: int, sequence=None) -> RationalMatrix:
    t = _template(family_id)
    return _witness(family_id, n, sequence, t.kind)


# -- search fixture -------------------------------------------------------------

def _fixture_text() -> str:
    return (resources.files("prseq") / "data" / FIXTURE_NAME).read_text()


@lru_cache(maxsize=1)
def _fixture_entries() -> dict[str, dict]:
    data = json.loads(_fixture_text())
    if data.get("version") != FIXTURE_VERSION:
        raise WitnessError(f"unsupported witness fixture version {data.get('version')}")
    return {e["key"]: e for e in data["entries"]}


def cached_witness(key: str) -> RationalMatrix:
    try:
        entry = _fixture_entries()[key]
    except KeyError:
        raise WitnessUnavailableError(f"no cached search witness {key!r}") from None
    B = matrix_from_json(entry["matrix"])
    target = entry["target"]
    got = str(compute_pr(B)) if "]" in target else str(compute_epr(B))
    if got != target:
        raise SelfVerificationError(f"cached witness {key} attains {got}, not {target}")
    return B


# key, families served, order, target, search arguments
FIXTURE_SEARCHES = (
    ("PR-4", ["PR-4", "PR-15", "EPR-4a", "EPR-4b", "EPR-15"], 6, "0]101011",
     {"diag": [1], "offdiag": [-1, 1], "canonical": True}),
    ("PR-16", ["PR-16"], 3, "1]110",
     {"diag": [-1, 0, 1], "offdiag": [-1, 0, 1], "canonical": False}),
    ("ANSSA", ["PR-18", "EPR-18a", "EPR-18b"], 5, "ANSSA",
     {"diag": [1], "offdiag": [-1, 1], "canonical": True}),
)


def build_fixture() -> dict:
    """Regenerate the search fixture deterministically (exhaustive, lexicographically first hit)."""
    from .search import SearchSpec, search

    entries = []
    for key, families, order, target, space in FIXTURE_SEARCHES:
        spec = SearchSpec(order, space["diag"], space["offdiag"], target=target, canonical=space["canonical"])
        result = search(spec, jobs=1)
        B = result.first()
        if B is None:
            raise WitnessUnavailableError(f"search for {target} at order {order} found nothing")
        entries.append({
            "key": key,
            "families": families,
            "order": order,
            "target": target,
            "space": {"diag": [str(x) for x in spec.diag], "offdiag": [str(x) for x in spec.offdiag],
                      "canonical": spec.canonical, "mode": "exhaustive"},
            "matrix": B.to_json_dict(),
        })
    return {"version": FIXTURE_VERSION, "entries": entries}


def write_fixture(path: str | Path) -> None:
    Path(path).write_text(json.dumps(build_fixture(), indent=2) + "\n")


__all__ = [
    "WitnessRecipe", "recipe_for", "witness_pr", "witness_epr", "witness", "evaluate",
    "cached_witness", "build_fixture", "write_fixture", "MAX_CONSTRUCTIVE_ORDER",
    "WitnessError", "InvalidInstanceError", "WitnessUnavailableError", "SelfVerificationError",
]

"""Exact pr- and epr-sequences of symmetric rational matrices.

Sequence computation, the forbidden-pattern rule engine, the family
classifiers, self-verified witness construction, a small-alphabet search
oracle and randomized theorem suites.
"""
from .linalg import (
    ConstructionKind,
    RationalMatrix,
    all_principal_minors,
    construct,
    det,
    direct_sum,
    duplicate_index,
    inverse,
    matrix_from_json,
    rank,
    schur_complement,
    submatrix,
)
from .sequences import (
    EprSequence,
    PrSequence,
    compute_epr,
    compute_pr,
    epr_of_inverse,
    parse_epr,
    parse_pr,
    pr_from_epr,
    pr_of_inverse,
)
from .rules import check_epr, check_pr, explain_rule
from .classifier import associated_epr_families, classify_epr, classify_pr, uniqueness_report
from .witnesses import recipe_for, witness_epr, witness_pr

__version__ = "0.1.0"

__all__ = [
    "ConstructionKind", "RationalMatrix", "all_principal_minors", "construct", "det", "direct_sum",
    "duplicate_index", "inverse", "matrix_from_json", "rank", "schur_complement", "submatrix",
    "EprSequence", "PrSequence", "compute_epr", "compute_pr", "epr_of_inverse", "parse_epr", "parse_pr",
    "pr_from_epr", "pr_of_inverse", "check_epr", "check_pr", "explain_rule",
    "associated_epr_families", "classify_epr", "classify_pr", "uniqueness_report",
    "recipe_for", "witness_epr", "witness_pr",
]

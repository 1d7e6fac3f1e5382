"""Command-line entry point: compute, classify, rules, witness, search, verify.

Structured JSON goes to standard output and a one-line summary to standard
error.  Exit codes: 0 success, 1 domain error (unattainable, malformed input,
rule violations), 2 verification failure, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import classifier, rules, search as search_mod, sequences, verify, witnesses
from .linalg import LinalgError, all_principal_minors, matrix_from_json

EXIT_OK, EXIT_DOMAIN, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _emit(payload, summary: str | None = None, out=None) -> None:
    out = out or sys.stdout
    out.write(json.dumps(payload, sort_keys=False) + "\n")
    if summary:
        sys.stderr.write(summary + "\n")


def _read_text(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _read_matrix(path: str):
    try:
        return matrix_from_json(json.loads(_read_text(path)))
    except json.JSONDecodeError as exc:
        raise LinalgError(f"{path}: not valid JSON ({exc})") from None


def _sequence_arg(args):
    """The --pr / --epr / --file sequence as a parsed object."""
    if getattr(args, "file", None):
        text = _read_text(args.file).strip()
        return sequences.parse_pr(text) if "]" in text else sequences.parse_epr(text)
    if args.pr is not None:
        return sequences.parse_pr(args.pr)
    if args.epr is not None:
        return sequences.parse_epr(args.epr)
    raise UsageError("one of --pr, --epr or --file is required")


# -- subcommands ---------------------------------------------------------------------

def cmd_compute(args) -> int:
    B = _read_matrix(args.input)
    if args.mode == "minors":
        minors = all_principal_minors(B, args.cap)
        payload = {"n": B.n, "mode": "minors",
                   "minors": [{"indices": list(k), "value": str(v)} for k, v in minors.items()]}
        _emit(payload, f"{len(minors)} principal minors")
        return EXIT_OK
    seq = sequences.compute_pr(B, args.cap) if args.mode == "pr" else sequences.compute_epr(B, args.cap)
    _emit({"n": B.n, "mode": args.mode, "sequence": str(seq)}, str(seq))
    return EXIT_OK


def cmd_classify(args) -> int:
    s = _sequence_arg(args)
    result = classifier.classify_pr(s) if isinstance(s, sequences.PrSequence) else classifier.classify_epr(s)
    payload = {"sequence": str(s), "kind": "pr" if isinstance(s, sequences.PrSequence) else "epr"}
    payload.update(result.to_dict())
    verdict = f"attainable ({', '.join(result.families)})" if result.attainable else "unattainable"
    _emit(payload, f"{s}: {verdict}")
    return EXIT_OK if result.attainable else EXIT_DOMAIN


def cmd_rules(args) -> int:
    if args.list:
        for rule_id in rules.RULES:
            _emit({"rule": rule_id, "explanation": rules.explain_rule(rule_id)})
        sys.stderr.write(f"{len(rules.RULES)} rules\n")
        return EXIT_OK
    if args.explain:
        _emit({"rule": args.explain, "explanation": rules.explain_rule(args.explain)}, rules.explain_rule(args.explain))
        return EXIT_OK
    s = _sequence_arg(args)
    found = rules.check_pr(s) if isinstance(s, sequences.PrSequence) else rules.check_epr(s)
    for v in found:
        _emit(v.to_dict())
    sys.stderr.write(f"{s}: {len(found)} violation(s)\n")
    return EXIT_DOMAIN if found else EXIT_OK


def cmd_witness(args) -> int:
    t = classifier.get_family(args.family)
    B = witnesses.witness(args.family, args.order, args.sequence)
    seq = sequences.compute_pr(B) if t.kind == "pr" else sequences.compute_epr(B)
    payload = {"family": t.id, "order": args.order, "sequence": str(seq), "verified": True,
               "matrix": B.to_json_dict()}
    if args.recipe:
        payload["recipe"] = witnesses.recipe_for(args.family, args.order, args.sequence).to_dict()
    if args.out:
        Path(args.out).write_text(json.dumps(B.to_json_dict()) + "\n")
    _emit(payload, f"{t.id} order {args.order}: {seq} (verified)")
    return EXIT_OK


def _orders(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return int(a), int(b)
        return int(text), int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"orders must look like 3..7, got {text!r}") from None


def _alphabet(text: str):
    try:
        return search_mod.parse_alphabet(text)
    except search_mod.SearchError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def cmd_search(args) -> int:
    if args.jblock:
        if args.seed is None:
            raise UsageError("--jblock requires --seed")
        report = search_mod.jblock_singularity_probe(args.order, args.trials or 1, args.seed)
        _emit(report.to_dict(), f"J-block probe n={args.order}: {len(report.failures)} failure(s)")
        return EXIT_OK if report.ok else EXIT_VERIFY
    if args.random and args.seed is None:
        raise UsageError("--random requires --seed")
    target = args.target_pr or args.target_epr
    if target is None and not args.census:
        raise UsageError("one of --target-pr, --target-epr or --census is required")
    target = sequences.parse_pr(target) if args.target_pr else (sequences.parse_epr(target) if target else None)
    spec = search_mod.SearchSpec(
        args.order, args.diag, args.offdiag,
        mode="random" if args.random else "exhaustive",
        trials=args.trials, seed=args.seed, target=target, canonical=args.canonical,
    )
    result = search_mod.search(spec, jobs=args.jobs)
    if target is None:
        summary = f"census n={args.order}: {len(result.pr)} pr, {len(result.epr)} epr sequences from {result.visited} matrices"
    else:
        summary = f"{target}: {'found' if result.found else 'no attainer'} after {result.visited} matrices"
        if not result.found:
            summary += f" ({search_mod.ONE_SIDED_NOTE})"
    _emit(result.to_dict(), summary)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify.run_suite(args.suite, args.trials, args.seed, args.orders, jobs=args.jobs)
    _emit(report.to_dict(), f"{args.suite}: {report.trials} trials, {len(report.failures)} failure(s)")
    return EXIT_OK if report.ok else EXIT_VERIFY


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="prseq", description="Exact pr/epr-sequences of symmetric rational matrices.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="compute pr, epr or all principal minors of a matrix JSON file")
    c.add_argument("--input", required=True, help="matrix JSON file ('-' for stdin)")
    c.add_argument("--mode", choices=("pr", "epr", "minors"), default="epr")
    c.add_argument("--cap", type=int, default=None, help="principal-minor order cap (default 20)")
    c.set_defaults(func=cmd_compute)

    def seq_flags(q, required=True):
        g = q.add_mutually_exclusive_group(required=required)
        g.add_argument("--pr", help='pr-sequence such as "0]101"')
        g.add_argument("--epr", help='epr-sequence such as "NSNA"')
        g.add_argument("--file", help="file holding one sequence")
        return g

    c = sub.add_parser("classify", help="decide attainability of a sequence")
    seq_flags(c)
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("rules", help="check a sequence against every necessary-condition rule")
    g = seq_flags(c, required=True)
    g.add_argument("--explain", metavar="RULE_ID", help="print the statement of one rule")
    g.add_argument("--list", action="store_true", help="list every rule")
    c.set_defaults(func=cmd_rules)

    c = sub.add_parser("witness", help="emit a verified matrix attaining a family instance")
    c.add_argument("--family", required=True, help="family id such as PR-11 or EPR-2a")
    c.add_argument("--order", type=int, required=True)
    c.add_argument("--sequence", help="a specific instance of the family (default: longest first block)")
    c.add_argument("--out", help="also write the matrix JSON here")
    c.add_argument("--recipe", action="store_true", help="include the construction recipe")
    c.set_defaults(func=cmd_witness)

    c = sub.add_parser("search", help="exhaustive or randomized small-alphabet search")
    c.add_argument("--order", type=int, required=True)
    c.add_argument("--diag", type=_alphabet, default=search_mod.DEFAULT_ALPHABET)
    c.add_argument("--offdiag", type=_alphabet, default=search_mod.DEFAULT_ALPHABET)
    g = c.add_mutually_exclusive_group()
    g.add_argument("--target-pr")
    g.add_argument("--target-epr")
    g.add_argument("--census", action="store_true")
    g.add_argument("--jblock", action="store_true", help="run the J-block singularity probe at this even order")
    c.add_argument("--random", action="store_true")
    c.add_argument("--trials", type=int)
    c.add_argument("--seed", type=int)
    c.add_argument("--canonical", action="store_true", help="fix the diagonal and first row to 1 (+-1 spaces)")
    c.add_argument("--jobs", type=int, default=None, help="worker processes (default $PRSEQ_JOBS or 1)")
    c.set_defaults(func=cmd_search)

    c = sub.add_parser("verify", help="run a randomized theorem suite")
    c.add_argument("--suite", required=True, choices=verify.SUITES)
    c.add_argument("--trials", type=int, default=1000)
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--orders", type=_orders, default=None, help="order range a..b")
    c.add_argument("--jobs", type=int, default=None, help="worker processes (default $PRSEQ_JOBS or 1)")
    c.set_defaults(func=cmd_verify)
    return p


_ALPHABET_FLAGS = ("--diag", "--offdiag")


def _glue_alphabets(argv: list[str]) -> list[str]:
    """Attach alphabet values to their flag so that '--offdiag -1,1' is not read as an option."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _ALPHABET_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_alphabets(list(sys.argv[1:] if argv is None else argv)))
    if getattr(args, "jobs", None) is None and hasattr(args, "jobs"):
        args.jobs = search_mod.default_jobs()
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"prseq: error: {exc}\n")
        return EXIT_USAGE
    except search_mod.VerificationError as exc:
        _emit({"error": str(exc)}, f"verification failure: {exc}")
        return EXIT_VERIFY
    except witnesses.SelfVerificationError as exc:
        _emit({"error": str(exc)}, f"verification failure: {exc}")
        return EXIT_VERIFY
    except (ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        _emit({"error": f"{type(exc).__name__}: {msg}"}, f"error: {msg}")
        return EXIT_DOMAIN


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())

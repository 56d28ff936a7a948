"""Command-line entry point.

Exit codes: 0 when every check passes, 1 when at least one verdict fails
(the first failing record's witness is printed to stderr), 2 for usage and
input errors (malformed JSON, schema violations, invalid values).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from itertools import combinations
from typing import Sequence

from . import campaign
from .algebra import AlgebraDescriptor, op_norm
from .completion import CompletedSpace, complete_check, embedded_sequence
from .errors import CStarError
from .metric import (
    DEFAULT_DEPTH,
    DEFAULT_GRID,
    TableSpace,
    canonical_witnesses,
    cauchy_norm,
    check_metric_axioms,
    converges_cone,
    converges_norm,
)
from .modules import (
    ModuleSpace,
    ModuleVector,
    bridge_gap,
    cauchy_schwarz_avalued,
    cauchy_schwarz_scalar,
    check_module_axioms,
    inner,
    norm_m,
)
from .order import is_positive
from .report import PLUMBING, Record, Report, _json_default
from .schemas import load_file
from .sequences import algebra_of, build_sequence, build_space, build_witnesses, _point
from .tolerance import Tolerance, resolve

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _grid(text: str) -> tuple:
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be comma-separated numbers, got {text!r}") from None
    if not values or any(not v > 0 for v in values):
        raise argparse.ArgumentTypeError("grid values must be positive")
    return values


def _nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return value


def _seed(text: str) -> int:
    value = _nonnegative_int(text)
    if value >= 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be below 2**64")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0, help="64-bit campaign seed")
    common.add_argument("--grid", type=_grid, default=DEFAULT_GRID, help="probe list, e.g. 1e-1,1e-2,1e-3")
    common.add_argument("--depth", type=_nonnegative_int, default=DEFAULT_DEPTH, help="largest sequence index probed")
    common.add_argument("--abs-tol", type=float, default=None)
    common.add_argument("--rel-tol", type=float, default=None)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--samples", type=_nonnegative_int, default=campaign.DEFAULT_SAMPLES)
    common.add_argument("--timing", action="store_true", help="include per-check wall time in the report")

    parser = _Parser(prog="cstarkit", description="Checks for C*-algebra-valued metric and module structures.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("check-algebra", parents=[common], help="algebra and order laws for one descriptor")
    p.add_argument("input", nargs="?", help="algebra descriptor JSON (or use --algebra)")
    p.add_argument("--algebra", default=None, help="descriptor shorthand such as C2+M2")
    p = sub.add_parser("check-metric", parents=[common], help="metric axioms C1-C4 on a distance table")
    p.add_argument("input")
    p = sub.add_parser("check-sequence", parents=[common], help="convergence and Cauchy probes")
    p.add_argument("input")
    p = sub.add_parser("complete", parents=[common], help="limit of a sequence in the completion")
    p.add_argument("input")
    p = sub.add_parser("check-module", parents=[common], help="Hilbert-module laws on given vectors")
    p.add_argument("input")
    p = sub.add_parser("campaign", parents=[common], help="seeded property campaign")
    p.add_argument("--suite", action="append", default=None,
                   help=f"one of {', '.join(campaign.SUITES)} or all (repeatable, comma lists allowed)")
    p.add_argument("--algebra", default=None, help="comma list, default " + ",".join(campaign.DEFAULT_ALGEBRAS))
    p.add_argument("--sequences", type=_nonnegative_int, default=campaign.DEFAULT_SEQUENCES)
    return parser


def _tolerance(args) -> Tolerance:
    base = resolve(None)
    return Tolerance(base.abs_tol if args.abs_tol is None else args.abs_tol,
                     base.rel_tol if args.rel_tol is None else args.rel_tol)


def _config(args, tol: Tolerance, **extra) -> dict:
    config = {"seed": args.seed, "grid": list(args.grid), "depth": args.depth,
              "abs_tol": tol.abs_tol, "rel_tol": tol.rel_tol}
    if getattr(args, "input", None):
        config["input"] = os.path.basename(args.input)
    config.update(extra)
    return config


# commands


def cmd_check_algebra(args, tol) -> Report:
    if args.input and args.algebra:
        raise CStarError("give an algebra file or --algebra, not both")
    if args.input:
        algebra = algebra_of(load_file(args.input, "algebra"))
    elif args.algebra:
        algebra = AlgebraDescriptor.parse(args.algebra)
    else:
        raise CStarError("check-algebra needs an input file or --algebra")
    report = Report("check-algebra", _config(args, tol, algebra=algebra.name, samples=args.samples))
    return campaign.run_campaign(("algebra", "order"), args.seed, args.samples, (algebra.name,), tol,
                                 args.grid, args.depth, report=report)


def cmd_check_metric(args, tol) -> Report:
    space = TableSpace.from_json(load_file(args.input, "metric-table"))
    report = Report("check-metric", _config(args, tol, algebra=space.algebra.name, points=len(space.points)))
    result = check_metric_axioms(space, tol=tol)
    for axiom, r in result.results.items():
        witness = None if r.witness is None else [str(w) for w in r.witness]
        report.add(Record(f"metric.{axiom}", "metric-axioms", r.passed, len(space.points),
                          0 if r.passed else 1, witness, {"detail": r.detail}))
    return report


def _sequence_setup(args, tol):
    data = load_file(args.input, "sequence")
    space = build_space(data["space"])
    seq = build_sequence(space, data["sequence"])
    target = None if "target" not in data else _point(space, data["target"])
    witnesses = build_witnesses(space, data.get("witnesses"))
    return data, space, seq, target, witnesses


def cmd_check_sequence(args, tol) -> Report:
    data, space, seq, target, witnesses = _sequence_setup(args, tol)
    report = Report("check-sequence", _config(args, tol, space=space.name, sequence=seq.name))
    if target is not None:
        vn = converges_norm(seq, target, args.grid, args.depth, tol)
        cone_witnesses = witnesses or canonical_witnesses(space.algebra, args.grid)
        vc = converges_cone(seq, target, cone_witnesses, args.depth, tol)
        if witnesses is None:
            diffs = campaign.compare_verdicts(vn, vc)
            report.add(Record("sequence.norm-cone-agreement", "convergence-equivalence", not diffs, len(args.grid),
                              len(diffs), diffs[0] if diffs else None,
                              {"norm": vn.to_json(), "cone": vc.to_json()}))
        else:
            report.add(Record("sequence.cone-probes", "cone-convergence", True, len(cone_witnesses), 0, None,
                              {"cone": vc.to_json()}))
        ok = not (vn.converges and not vn.cauchy)
        report.add(Record("sequence.convergent-implies-cauchy", "convergent-implies-cauchy", ok, 1, 0 if ok else 1,
                          None if ok else {"converges": vn.converges, "cauchy": vn.cauchy},
                          {"converges": vn.converges, "cauchy": vn.cauchy}))
        verdict = {"converges": vn.converges, "cauchy": vn.cauchy}
    else:
        vc_ = cauchy_norm(seq, args.grid, args.depth, tol)
        report.add(Record("sequence.cauchy", "cauchy-probes", True, len(args.grid), 0, None, vc_.to_json()))
        verdict = {"converges": None, "cauchy": vc_.cauchy}
    if seq.has_modulus:
        bad = seq.check_modulus(args.grid, args.depth)
        report.add(Record("sequence.modulus", "modulus-of-cauchyness", not bad, len(args.grid), len(bad),
                          campaign._plain(bad[0]) if bad else None))
    expect = data.get("expect")
    if expect:
        mismatches = {k: {"expected": v, "observed": verdict.get(k)} for k, v in expect.items()
                      if verdict.get(k) != v}
        report.add(Record("sequence.expectation", PLUMBING, not mismatches, len(expect), len(mismatches),
                          mismatches or None, {"verdict": verdict}))
    return report


def cmd_complete(args, tol) -> Report:
    data, space, seq, target, _ = _sequence_setup(args, tol)
    if not seq.has_modulus:
        raise CStarError("complete needs a sequence with a modulus expression")
    report = Report("complete", _config(args, tol, space=space.name, sequence=seq.name))
    C = CompletedSpace(space)
    limit = C.from_sequence(seq)
    check = complete_check(C, [embedded_sequence(C, seq)], args.grid, depth=min(64, args.depth), tol=tol)
    report.add(Record("completion.limit", "completion-complete", check.passed, len(args.grid),
                      sum(not c.passed for c in check.checks), None if check.passed else check.to_json(),
                      {"approximants": {f"{eps:g}": str(limit.approximant(eps)) for eps in args.grid}}))
    density = []
    for eps in args.grid:
        w = limit.approximant(eps)
        gap = op_norm(C.dist_s(limit, C.embed(w), eps))
        density.append({"eps": eps, "ok": gap < 2 * eps})
    bad = [d for d in density if not d["ok"]]
    report.add(Record("completion.density", "completion-density", not bad, len(density), len(bad),
                      bad[0] if bad else None))
    if target is not None:
        anchor = C.embed(target)
        gaps = {f"{eps:g}": C.equivalent(limit, anchor, eps) for eps in args.grid}
        report.add(Record("completion.target", PLUMBING, True, len(args.grid), 0, None,
                          {"equivalent_to_target": gaps,
                           "target_in_base": all(gaps.values())}))
    return report


def cmd_check_module(args, tol) -> Report:
    data = load_file(args.input, "module")
    algebra = algebra_of(data["algebra"])
    space = ModuleSpace(algebra, int(data["rank"]))
    vectors = [ModuleVector.from_json(v, algebra) for v in data["vectors"]]
    for k, v in enumerate(vectors):
        if v.space != space:
            raise CStarError(f"vector {k} has rank {v.space.rank}, expected {space.rank}")
    report = Report("check-module", _config(args, tol, algebra=algebra.name, rank=space.rank,
                                            vectors=len(vectors), samples=args.samples))
    pairs = list(combinations(range(len(vectors)), 2)) + [(k, k) for k in range(len(vectors))]

    def run(check_id, anchor, fn):
        witness, count = None, 0
        for i, j in pairs:
            detail = fn(vectors[i], vectors[j])
            if detail is not None:
                count += 1
                witness = witness or {"pair": [i, j], **detail}
        report.add(Record(check_id, anchor, count == 0, len(pairs), count, witness))

    def symmetry(x, y):
        gap = (inner(x, y).star() - inner(y, x)).norm()
        return None if gap <= tol.bound(norm_m(x) * norm_m(y)) else {"gap": gap}

    def positivity(x, _):
        v = is_positive(inner(x, x), tol)
        return None if v.holds else {"min_eigenvalue": v.min_eigenvalue}

    def scalar_cs(x, y):
        v = cauchy_schwarz_scalar(x, y, tol)
        return None if v.holds else {"lhs": v.lhs, "rhs": v.rhs}

    run("module.hermitian-symmetry", "module-axioms", symmetry)
    run("module.positivity", "module-axioms", positivity)
    run("module.cauchy-schwarz-scalar", "cauchy-schwarz-scalar", scalar_cs)
    if algebra.commutative:
        outside = []

        def avalued(x, y):
            v = cauchy_schwarz_avalued(x, y, tol)
            if not v.in_hypothesis:
                outside.append(v.holds)
                return None
            return None if v.holds else {"in_hypothesis": True}

        run("module.cauchy-schwarz-avalued", "cauchy-schwarz-avalued", avalued)
        report.records[-1].details = {"pairs_outside_hypothesis": len(outside),
                                      "violations_outside_hypothesis": outside.count(False)}
        gaps = [bridge_gap(v, tol) for v in vectors]
        bad = [k for k, g in enumerate(gaps) if g > tol.bound(norm_m(vectors[k]))]
        report.add(Record("module.bridge-identity", "module-norm-bridge", not bad, len(vectors), len(bad),
                          {"vector": bad[0], "gap": gaps[bad[0]]} if bad else None, {"max_gap": max(gaps)}))
    else:
        report.warnings.append(f"{algebra.name} is not commutative: A-valued checks skipped")
    if args.samples:
        laws = check_module_axioms(space, args.samples, args.seed, tol)
        report.add(Record("module.axioms-random", "module-axioms", laws.passed, args.samples,
                          len(laws.witnesses), laws.witnesses[0] if laws.witnesses else None,
                          {"axioms": laws.axioms}))
    return report


def cmd_campaign(args, tol) -> Report:
    suites = []
    for item in args.suite or ["all"]:
        suites += [s.strip() for s in item.split(",") if s.strip()]
    algebras = campaign.DEFAULT_ALGEBRAS if not args.algebra else tuple(
        a.strip() for a in args.algebra.split(",") if a.strip())
    report = Report("campaign")
    return campaign.run_campaign(suites, args.seed, args.samples, algebras, tol, args.grid, args.depth,
                                 args.sequences, report=report)


COMMANDS = {
    "check-algebra": cmd_check_algebra,
    "check-metric": cmd_check_metric,
    "check-sequence": cmd_check_sequence,
    "complete": cmd_complete,
    "check-module": cmd_check_module,
    "campaign": cmd_campaign,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = _tolerance(args)
        report = COMMANDS[args.command](args, tol)
    except (CStarError, ValueError) as exc:
        message = exc.args[0] if exc.args else exc.__class__.__name__
        print(f"cstarkit {args.command}: error: {message}", file=sys.stderr)
        return EXIT_INPUT
    text = report.dumps(args.format, timing=args.timing)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"cstarkit: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    first = report.first_failure()
    if first is not None:
        print(f"first failure: {first.check_id} witness={_dumps(first.witness)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_PASS


def _dumps(value) -> str:
    return json.dumps(value, sort_keys=True, default=_json_default)


def main(argv: Sequence[str] | None = None) -> None:
    raise SystemExit(run(argv))


if __name__ == "__main__":
    main()

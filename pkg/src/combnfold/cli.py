"""Command-line front end.

Exit codes: 0 optimal, 2 infeasible, 3 refused (exact-mode bound overflow or
encoder cap), 4 parse/validation error or oracle cap, 1 anything else.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from fractions import Fraction

from . import io
from .core import Status, check_instance, is_feasible
from .errors import BoundTooLarge, CapExceeded, InstanceError, IterationLimit, OracleTooLarge
from .oracle import brute_force_relational
from .solver import HEURISTIC, SolverConfig, graver_best_step, solve_relational

EXIT_OPTIMAL, EXIT_OTHER, EXIT_INFEASIBLE, EXIT_REFUSED, EXIT_INPUT = 0, 1, 2, 3, 4


def _config(args) -> SolverConfig:
    if args.mode == HEURISTIC:
        if args.gbound is None:
            raise InstanceError("heuristic mode needs --gbound")
        return SolverConfig.heuristic(args.gbound, alpha_strategy=args.alpha)
    return SolverConfig(G=args.gbound, alpha_strategy=args.alpha)


def _print_report(report, args, out=None):
    out = out or sys.stdout
    if args.json:
        print(io.report_to_json(report, include_trace=args.trace), file=out)
        return
    print(f"status: {report.status.value}", file=out)
    if report.objective_value is not None:
        print(f"objective: {report.objective_value}", file=out)
    if report.point is not None:
        print("point: " + " ".join(str(v) for v in report.point), file=out)
    print(f"iterations: {report.iterations}", file=out)
    if report.message:
        print(f"note: {report.message}", file=out)
    if args.trace:
        for s in report.trace:
            print(f"  step {s.iteration}: alpha={s.alpha} drop={s.drop} objective={s.objective}",
                  file=out)


def _exit_for(report) -> int:
    if report.status == Status.OPTIMAL:
        return EXIT_OPTIMAL
    if report.status == Status.INFEASIBLE:
        return EXIT_INFEASIBLE
    return EXIT_OTHER


def cmd_solve(args) -> int:
    rel = io.load(args.path)
    check_instance(rel.base)
    try:
        report = solve_relational(rel, _config(args))
    except BoundTooLarge as exc:
        print(f"refused: {exc}; rerun with --mode heuristic --gbound G", file=sys.stderr)
        return EXIT_REFUSED
    _print_report(report, args)
    return _exit_for(report)


def cmd_oracle(args) -> int:
    rel = io.load(args.path)
    check_instance(rel.base)
    report = brute_force_relational(rel, args.cap)
    _print_report(report, args)
    return _exit_for(report)


def cmd_certify(args) -> int:
    """Check a point for feasibility and for the absence of improving steps."""
    rel = io.load(args.path)
    if not rel.is_plain:
        raise InstanceError("certify expects an equality-only instance")
    inst = check_instance(rel.base)
    point = tuple(io.decode_int(v, "point") for v in json.loads(args.point))
    if len(point) != inst.size:
        raise InstanceError(f"point has {len(point)} entries, instance has {inst.size}")
    cfg = _config(args)
    feasible = is_feasible(inst, point)
    step = graver_best_step(inst, point, cfg) if feasible else None
    doc = {"feasible": feasible, "optimal": feasible and step is None,
           "certified": cfg.mode != HEURISTIC}
    if step is not None:
        doc["improving_step"] = {"alpha": step.alpha, "h": list(step.h), "weight": step.weight}
    print(json.dumps(doc, sort_keys=True))
    return EXIT_OPTIMAL if doc["optimal"] else EXIT_OTHER


def cmd_corpus(args) -> int:
    from .corpus import corpus

    os.makedirs(args.out, exist_ok=True)
    for k, inst in enumerate(corpus(args.seed, args.count)):
        io.dump(inst, os.path.join(args.out, f"instance_{k:04d}.json"))
    print(f"wrote {args.count} instances to {args.out}")
    return EXIT_OPTIMAL


# -- encode ------------------------------------------------------------------

STRING_PROBLEMS = ("closest", "farthest", "neighbor", "dss", "wildcards", "consensus",
                   "closest-to-most", "hrc", "d-mismatch")
SCHEDULES = ("closest-to-most", "hrc", "d-mismatch")


def _read_input(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return {"strings": [line.strip() for line in text.splitlines() if line.strip()]}


def _string_job(problem, doc, args):
    from .encoders.strings import string_presets

    d = doc.get("d", args.d)
    if problem == "neighbor" and doc.get("d") is None:
        raise InstanceError("neighbor string needs a per-string list d in the input")
    if d is None:
        raise InstanceError(f"{problem} needs a distance d (--d or \"d\" in the input)")
    return string_presets(problem, doc["strings"], d, alphabet=doc.get("alphabet"),
                          good=doc.get("good", ()), d2=doc.get("d2"),
                          outliers=doc.get("outliers", args.outliers),
                          clusters=doc.get("clusters", args.clusters),
                          reading=doc.get("reading", args.reading))


def _wsm(doc):
    from .encoders.wsm import WsmInstance

    return WsmInstance(doc["universe"], doc["demands"],
                       [(ty["set"], ty["weights"]) for ty in doc["types"]])


def _bribery(doc):
    from .encoders.bribery import BriberyInstance, VoterType

    voters = []
    for v in doc["voters"]:
        costs = v.get("costs")
        if costs is not None:
            costs = {(a, b): int(c) for a, b, c in costs}
        voters.append(VoterType(tuple(v["order"]), int(v.get("multiplicity", 1)), costs))
    return BriberyInstance(doc["candidates"], doc["target"], voters, doc.get("scores"))


def _huge(doc):
    from .encoders.huge import BrickType, HugeNFoldInstance

    types = []
    for ty in doc["types"]:
        if "terms" in ty:
            terms = tuple(io.term_from_json(o) for o in ty["terms"])
        else:
            terms = tuple(ty.get("costs", [0] * len(ty["lower"])))
        types.append(BrickType(ty["lower"], ty["upper"], int(ty["multiplicity"]), terms,
                               ty.get("b_local", ())))
    return HugeNFoldInstance(doc["D"], doc["b0"], types, doc.get("A", ()))


def answer_to_json(answer):
    """Plain JSON view of a decoded answer (tuple keys become lists)."""
    if dataclasses.is_dataclass(answer):
        return {f.name: answer_to_json(getattr(answer, f.name))
                for f in dataclasses.fields(answer)}
    if isinstance(answer, dict):
        if all(isinstance(k, str) for k in answer):
            return {k: answer_to_json(v) for k, v in answer.items()}
        return [[answer_to_json(k), answer_to_json(v)] for k, v in answer.items()]
    if isinstance(answer, (list, tuple)):
        return [answer_to_json(v) for v in answer]
    if isinstance(answer, Fraction):
        return str(answer)
    return answer


def _emit(rel, decoder, args, extra=None):
    from .encoders.common import decode

    if args.out:
        io.dump(rel, args.out)
        sidecar = {"problem": decoder.problem, "payload": decoder.payload}
        if extra:
            sidecar.update(extra)
        with open(args.out + ".decoder.json", "w", encoding="utf-8") as fh:
            json.dump(sidecar, fh, sort_keys=True)
    else:
        print(io.dumps(rel))
    if not args.solve:
        return EXIT_OPTIMAL
    report = solve_relational(rel, _config(args))
    if not report.is_optimal:
        print(json.dumps({"status": report.status.value}, sort_keys=True))
        return _exit_for(report)
    answer = decode(decoder, report.point)
    print(json.dumps({"status": "optimal", "answer": answer_to_json(answer)}, sort_keys=True))
    return EXIT_OPTIMAL


def cmd_encode(args) -> int:
    from .encoders import (Copeland, encode_bribery_c1, encode_bribery_scoring,
                           encode_huge_nfold, encode_multi_strings, encode_wsm, solve_schedule)
    from .encoders.common import decode
    from .encoders.strings import StringSchedule

    doc = _read_input(args.path)
    problem = args.problem
    if problem in STRING_PROBLEMS:
        job = _string_job(problem, doc, args)
        if isinstance(job, StringSchedule):
            if not args.solve:
                raise InstanceError(f"{problem} is a schedule of instances; use --solve")
            found = solve_schedule(job, _config(args))
            if found is None:
                print(json.dumps({"status": "infeasible"}))
                return EXIT_INFEASIBLE
            label, sols = found
            print(json.dumps({"status": "optimal", "label": answer_to_json(label),
                              "answer": answer_to_json(sols)}, sort_keys=True))
            return EXIT_OPTIMAL
        rel, decoder = encode_multi_strings(job)
        return _emit(rel, decoder, args)
    if problem == "wsm":
        rel, decoder = encode_wsm(_wsm(doc))
        return _emit(rel, decoder, args)
    if problem == "huge":
        rel, decoder = encode_huge_nfold(_huge(doc))
        return _emit(rel, decoder, args)
    if problem == "bribery":
        br = _bribery(doc)
        rule = doc.get("rule", "scoring")
        if rule == "scoring":
            rel, decoder = encode_bribery_scoring(br)
            return _emit(rel, decoder, args)
        alpha = Fraction(str(doc.get("alpha", "1/2")))
        if not args.solve:
            raise InstanceError("Copeland bribery is a schedule of scenarios; use --solve")
        best = None
        for _, rel, decoder in encode_bribery_c1(br, Copeland(alpha)):
            report = solve_relational(rel, _config(args))
            if report.is_optimal and (best is None or report.objective_value < best.cost):
                best = decode(decoder, report.point)
        if best is None:
            print(json.dumps({"status": "infeasible"}))
            return EXIT_INFEASIBLE
        print(json.dumps({"status": "optimal", "answer": answer_to_json(best)}, sort_keys=True))
        return EXIT_OPTIMAL
    raise InstanceError(f"unknown problem {problem!r}")


# -- entry point -------------------------------------------------------------


def _add_solver_flags(p):
    p.add_argument("--mode", choices=("exact", "heuristic"), default="exact")
    p.add_argument("--gbound", type=int, help="DP radius G (required in heuristic mode)")
    p.add_argument("--alpha", choices=("full", "pow2"), default="full",
                   help="step-length strategy")
    p.add_argument("--trace", action="store_true", help="include the augmentation trace")
    p.add_argument("--json", action="store_true", help="machine-readable report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="combnfold", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("path")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="brute-force an instance file")
    p.add_argument("path")
    p.add_argument("--cap", type=int, default=None, help="box volume cap")
    p.add_argument("--json", action="store_true")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("certify", help="check that a point admits no improving step")
    p.add_argument("path")
    p.add_argument("point", help="JSON list of integers")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("encode", help="encode an application problem")
    p.add_argument("problem", choices=STRING_PROBLEMS + ("wsm", "bribery", "huge"))
    p.add_argument("path")
    p.add_argument("--out", help="write the instance here (plus PATH.decoder.json)")
    p.add_argument("--solve", action="store_true", help="solve and print the decoded answer")
    p.add_argument("--d", type=int, help="distance for string problems")
    p.add_argument("--outliers", type=int, default=1)
    p.add_argument("--clusters", type=int, default=2)
    p.add_argument("--reading", choices=("closest", "farthest"), default="closest")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("corpus", help="write a seeded random corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--out", default="corpus")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (BoundTooLarge, CapExceeded) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (InstanceError, OracleTooLarge, OSError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except IterationLimit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())

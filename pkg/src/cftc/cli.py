"""Command line entry point ``cftc``.

Exit status: 0 when everything checked is correct or validated, 1 on a
refutation or violation, 2 on usage, parse or precondition errors.
"""

from __future__ import annotations

import argparse
import sys

from .cft import clauses
from .checker import Bounds, check_cft, cft_correct, simplify_counterexample
from .component import validate_deterministic
from .equivalence import ByClauseAndEvent
from .errors import CFTError
from .formula import neg_dnf, parse_formula
from .generate import GenParams
from .harness import Status, composed_cfts, run_campaign, system_spec, transfer_counts, validate_theorem_instance
from .model import load_model, serialize_cft, serialize_component


def _bounds(args) -> Bounds:
    return Bounds(args.depth, args.env_depth, args.max_offers, args.witness_depth)


def _add_bounds(p):
    d = Bounds()
    p.add_argument("--depth", type=int, default=d.trace_depth, help="erroneous trace length bound")
    p.add_argument("--env-depth", type=int, default=d.env_depth, help="environment table depth")
    p.add_argument("--max-offers", type=int, default=d.max_offers, help="offers per environment entry")
    p.add_argument("--witness-depth", type=int, default=None,
                   help="correct trace length bound (default: depth + 2 * states)")


def _add_format(p):
    p.add_argument("--format", choices=("text", "machine"), default="machine")


def cmd_dnf(args):
    formula = parse_formula(args.formula)
    for clause in neg_dnf(formula):
        print(f"CLAUSE {clause}" if args.format == "machine" else str(clause))
    return 0


def _owner_check(model, cft_name, bounds):
    cft = model.cft(cft_name)
    comp = model.component(cft.owner)
    return comp, cft, check_cft(comp, cft, bounds)


def cmd_check(args):
    model = load_model(args.model)
    _, cft, verdicts = _owner_check(model, args.cft, _bounds(args))
    if args.format == "text":
        print(f"cft {args.cft} on {cft.owner}: {cft}")
    for v in verdicts:
        print(v.format(args.format))
    return 0 if cft_correct(verdicts) else 1


def cmd_simplify(args):
    model = load_model(args.model)
    bounds = _bounds(args)
    comp, cft, verdicts = _owner_check(model, args.cft, bounds)
    for v in verdicts:
        if v.correct:
            print(v.format(args.format))
            continue
        simple = simplify_counterexample(comp, v.counterexample, ByClauseAndEvent(v.clause, v.event), bounds)
        head = f"SIMPLIFIED clause={v.clause}" if args.format == "machine" else f"clause {v.clause}: simplified"
        print("\n".join([head] + simple.dump()))
    return 0 if cft_correct(verdicts) else 1


def cmd_compose(args):
    model = load_model(args.model)
    spec = system_spec(model, args.system)
    composite, plain, strict = composed_cfts(spec)
    result = strict if args.strict else plain
    label = f"{spec.cft_c.name}_{'strict' if args.strict else 'composed'}"
    if args.format == "machine":
        print(serialize_component(composite))
        print(serialize_cft(result, label))
        for clause in clauses(result):
            print(f"CLAUSE {clause}")
    else:
        print(f"composite {composite.name}: {len(composite.states)} states, "
              f"{len(validate_deterministic(composite))} determinism violations")
        print(f"{label}: {result}")
        for clause in clauses(result):
            print(f"  {clause}")
    return 0


def _report_lines(report, fmt):
    lines = []
    sections = [("premise c", report.premise_c)]
    sections += [(f"premise d {e}", v) for e, v in report.premise_d]
    sections += [("conclusion", report.conclusion), ("strict conclusion", report.strict_conclusion),
                 ("strict vs c", report.strict_vs_c), ("strict vs d", report.strict_vs_d)]
    for title, verdicts in sections:
        if verdicts is None:
            continue
        lines.append(f"SECTION {title}" if fmt == "machine" else f"{title}:")
        lines += [v.format(fmt) for v in verdicts]
    return lines


def cmd_validate(args):
    if args.random:
        summary = run_campaign(args.trials, args.seed, GenParams(), _bounds(args))
        for line in summary.lines():
            print(line)
        bad = summary.violations or summary.transfer_failures or summary.strict_failures
        return 1 if bad else 0
    if not (args.model and args.system):
        raise SystemExit("validate-theorem needs --model and --system, or --random")
    model = load_model(args.model)
    spec = system_spec(model, args.system, _bounds(args))
    report = validate_theorem_instance(spec)
    found, transferred = transfer_counts(spec)
    for line in _report_lines(report, args.format):
        print(line)
    print(f"STATUS {report.status.value} transfer={transferred}/{found} "
          f"composite_nondet={report.composite_violations}")
    bad = report.status is Status.VIOLATION or found != transferred or not report.strict_parts_hold
    return 1 if bad else 0


def build_parser():
    parser = argparse.ArgumentParser(prog="cftc", description="Component fault tree checker")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dnf", help="negated DNF clauses of a formula")
    p.add_argument("--formula", required=True)
    _add_format(p)
    p.set_defaults(func=cmd_dnf)

    p = sub.add_parser("check", help="check a CFT against its component")
    p.add_argument("--model", required=True)
    p.add_argument("--cft", required=True)
    _add_bounds(p)
    _add_format(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("compose", help="compose the CFTs of a system")
    p.add_argument("--model", required=True)
    p.add_argument("--system", required=True)
    p.add_argument("--strict", action="store_true")
    _add_format(p)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("simplify", help="check a CFT and shrink its counterexamples")
    p.add_argument("--model", required=True)
    p.add_argument("--cft", required=True)
    _add_bounds(p)
    _add_format(p)
    p.set_defaults(func=cmd_simplify)

    p = sub.add_parser("validate-theorem", help="check compositional correctness on a system or a campaign")
    p.add_argument("--model")
    p.add_argument("--system")
    p.add_argument("--random", action="store_true")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", default="0")
    _add_bounds(p)
    _add_format(p)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CFTError, OSError, ValueError) as exc:
        print(f"cftc: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        if isinstance(exc.code, str):
            parser.error(exc.code)
        raise


if __name__ == "__main__":
    sys.exit(main())

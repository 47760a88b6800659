"""Command line front end.

Every command prints one JSON report.  Exit codes: 0 True, 1 False,
2 UnknownAtBudget, 3 input or budget error.
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from typing import Any, Callable

from . import oracle
from .basicset import is_basic_set
from .certificates import replay
from .extremal import CellOrder, extremal_outer, extremal_theorem_checks
from .io import FORMAT, InputError, dumps, load_closed_set, load_order, load_system, read_json
from .recurrence import (is_densely_aperiodic, mf_outer, minimal_set_reps,
                         nonwandering_outer)
from .sections import interior_status, is_complete_section, is_quasi_section
from .tower import BudgetError, ClopenSet, Status, Verdict, validate_tower

EXIT = {Status.TRUE: 0, Status.FALSE: 1, Status.UNKNOWN: 2}
EXIT_INPUT = 3

DEFAULT_DEPTH = 6
DEFAULT_HORIZON = 6


def threads() -> int:
    """Parallelism cap from ``CANTOR_SECTIONS_THREADS``; all work is single-threaded."""
    try:
        return max(1, int(os.environ.get("CANTOR_SECTIONS_THREADS", "1")))
    except ValueError:
        return 1


def _labels(system, depth: int, cells) -> list[str]:
    return [system.label(depth, int(c)) for c in cells]


def _clopen(system, obj: dict, tower, budget: int) -> ClopenSet:
    if obj.get("generator") == "cells":
        return ClopenSet.of(obj["depth"], obj["cells"])
    n = tower.clopen_depth(budget)
    if n is None:
        raise InputError("set is not clopen within the budget", "/")
    return tower.hull(n)


def _decisive(system, tower, budget: int) -> Verdict:
    inner = interior_status(system, tower, budget)
    if inner.status is Status.TRUE:
        return Verdict(Status.FALSE, inner.certificate, budget=budget)
    return Verdict(Status.UNKNOWN, inner.certificate, exact=False,
                   flavor=inner.flavor, budget=budget)


def cmd_validate(args) -> tuple[dict, int]:
    system = load_system(read_json(args.system))
    rep = validate_tower(system, args.depth, limit=args.limit)
    status = Status.TRUE if rep.ok else Status.FALSE
    return ({"verdict": {"status": status.value, "label": status.value},
             "certificate": rep.to_json(), "budgets": {"depth": args.depth}},
            EXIT[status])


def cmd_check(args) -> tuple[dict, int]:
    system = load_system(read_json(args.system))
    set_obj = read_json(args.set)
    tower = load_closed_set(system, set_obj)
    budget = args.budget
    if args.property == "complete-section":
        subject = _clopen(system, set_obj, tower, budget)
        verdict = is_complete_section(system, subject, max(budget, subject.depth))
    else:
        subject = tower
        fn: Callable = {"quasi-section": is_quasi_section, "basic": is_basic_set,
                        "decisive": _decisive}[args.property]
        verdict = fn(system, tower, budget)
    report: dict[str, Any] = {"property": args.property, "verdict": verdict.to_json(),
                              "certificate": verdict.certificate,
                              "budgets": {"budget": budget}}
    code = EXIT[verdict.status]
    if args.replay:
        old = read_json(args.replay)
        old_verdict = old.get("verdict")
        if not isinstance(old_verdict, dict) or "status" not in old_verdict:
            raise InputError("report has no verdict", "/verdict")
        if old.get("property", args.property) != args.property:
            raise InputError("report is about another property", "/property")
        same = old_verdict.get("label") == verdict.label
        if old_verdict["status"] in ("True", "False") and args.property != "decisive":
            check = replay(system, old_verdict, subject)
        elif args.property == "decisive" and old_verdict["status"] == "False":
            check = replay(system, {"status": "True",
                                    "certificate": old_verdict["certificate"]}, subject)
        else:
            check = None
        report["replay"] = {"identical_verdict": same,
                            "certificate_ok": None if check is None else check.ok,
                            "reason": "" if check is None else check.reason}
        if not same or (check is not None and not check.ok):
            code = EXIT[Status.FALSE]
    return report, code


def cmd_extremal(args) -> tuple[dict, int]:
    system = load_system(read_json(args.system))
    order = (load_order(system, read_json(args.order)) if args.order
             else CellOrder.default(system))
    E = extremal_outer(system, order, args.depth, args.horizon)
    report: dict[str, Any] = {
        "verdict": {"status": "True", "label": "True"},
        "certificate": {"kind": "extremal_outer", "depth": args.depth,
                        "horizon": args.horizon, "cells": E.sorted(),
                        "labels": _labels(system, args.depth, E.sorted())},
        "budgets": {"depth": args.depth, "horizon": args.horizon},
    }
    if args.theorems:
        report["theorems"] = extremal_theorem_checks(system, order, args.depth,
                                                     depth=args.depth,
                                                     horizon=args.horizon)
    return report, 0


def cmd_recurrence(args) -> tuple[dict, int]:
    system = load_system(read_json(args.system))
    d = args.depth
    reps = minimal_set_reps(system, d)
    aperiodic = is_densely_aperiodic(system, args.budget if args.budget is not None
                                     else min(d, 4))
    mf, nw = mf_outer(system, d), nonwandering_outer(system, d)
    return ({"verdict": aperiodic.to_json(),
             "certificate": aperiodic.certificate,
             "reps": [r.to_json() for r in reps],
             "mf_outer": {"cells": mf.sorted(), "labels": _labels(system, d, mf.sorted())},
             "nonwandering_outer": {"cells": nw.sorted(),
                                    "labels": _labels(system, d, nw.sorted())},
             "budgets": {"depth": d}}, 0)


def cmd_oracle(args) -> tuple[dict | str, int]:
    if args.sweep:
        rows = oracle.sweep([args.perm])
        if args.csv:
            return oracle.rows_to_csv(rows), 0
        return {"rows": rows, "budgets": {"n": args.n}}, 0
    try:
        flags = oracle.brute_classify(args.n, args.perm, args.subset or [])
        inf = oracle.brute_inf(args.n, args.perm, args.order)
    except ValueError as exc:
        raise InputError(str(exc), "/perm") from exc
    status = Status.TRUE if flags["basic_set"] else Status.FALSE
    return ({"verdict": {"status": status.value, "label": status.value},
             "certificate": {"kind": "oracle", "flags": flags, "inf": sorted(inf),
                             "orbits": [sorted(o) for o in oracle.orbits(args.perm)]},
             "budgets": {"n": args.n}}, EXIT[status])


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cantor-sections",
                                description="Budgeted checks on clopen refinement towers.")
    p.add_argument("-o", "--output", help="write the report here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check the tower laws")
    v.add_argument("system")
    v.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    v.add_argument("--limit", type=int, default=None)
    v.set_defaults(run=cmd_validate)

    c = sub.add_parser("check", help="decide a property of a set")
    c.add_argument("property", choices=["complete-section", "quasi-section", "basic",
                                        "decisive"])
    c.add_argument("system")
    c.add_argument("set")
    c.add_argument("--budget", type=int, default=DEFAULT_DEPTH)
    c.add_argument("--replay", help="re-verify the certificate of an earlier report")
    c.set_defaults(run=cmd_check)

    e = sub.add_parser("extremal", help="outer approximation of inf_f")
    e.add_argument("system")
    e.add_argument("--order")
    e.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    e.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    e.add_argument("--theorems", action="store_true")
    e.set_defaults(run=cmd_extremal)

    r = sub.add_parser("recurrence", help="minimal sets, M_f and the non-wandering set")
    r.add_argument("system")
    r.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    r.add_argument("--budget", type=int, default=None)
    r.set_defaults(run=cmd_recurrence)

    o = sub.add_parser("oracle", help="brute force on a finite permutation")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--perm", type=int, nargs="+", required=True)
    o.add_argument("--subset", type=int, nargs="*")
    o.add_argument("--order", type=int, nargs="*")
    o.add_argument("--sweep", action="store_true")
    o.add_argument("--csv", action="store_true", help="sweep output as CSV")
    o.set_defaults(run=cmd_oracle)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    threads()
    start = time.perf_counter()
    try:
        report, code = args.run(args)
    except InputError as exc:
        report, code = {"error": {"message": exc.message, "path": exc.path}}, EXIT_INPUT
    except (BudgetError, MemoryError) as exc:
        report, code = {"error": {"message": str(exc), "path": "/"}}, EXIT_INPUT
    except ValueError as exc:
        report, code = {"error": {"message": str(exc), "path": "/"}}, EXIT_INPUT
    if isinstance(report, dict):
        report = {"format": FORMAT, "command": args.command, **report,
                  "wall_time": round(time.perf_counter() - start, 6)}
        text = dumps(report)
    else:
        text = report
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

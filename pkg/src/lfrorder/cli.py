"""Command-line front door.

Subcommands: ``compare`` (one order check between two systems),
``regress`` (the built-in example/counterexample matrix plus all preset
curves), ``search`` (randomized counterexample search), ``mc`` (Monte
Carlo agreement check) and ``run`` (execute every task in a scenario
file).

Machine-readable JSON goes to stdout, human-readable notes to stderr.
Exit codes form the full contract: 0 ok, 2 input/validation error,
3 relation violated or mismatch, 4 inconclusive, 5 search budget
exhausted without a find.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .errors import DomainError, NumericError, ScenarioError, StructureError
from .mc import ecdf_agreement, sample_system
from .orders import (
    RELATIONS,
    DEFAULT_GRID_COUNT,
    DEFAULT_Y_HI,
    DEFAULT_Y_LO,
    EvalGrid,
    OrderStatus,
    TolerancePolicy,
    adapt_grid,
    check_relation,
)
from .report import (
    PRESET_FIGURE_IDS,
    CurveSpec,
    conclusion_expected,
    emit_curve,
    emit_verdict_summary,
    preset_curve,
    run_regression,
    write_curve_csv,
)
from .scenario import Scenario, load_scenario
from .search import DEFAULT_PARAM_BOX, SearchSpec, find_violation
from .systems import ComponentSet, SystemDist, system_dist
from .theorems import run_case

OUT_DIR_ENV = "LFRORDER_OUT"

_STATUS_EXIT = {
    OrderStatus.HOLDS: 0,
    OrderStatus.VIOLATED: 3,
    OrderStatus.INCONCLUSIVE: 4,
}

_MC_MIN_SIZE = 100


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True))


def _floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise ScenarioError(f"expected a comma-separated float list, got {text!r}")


def _pair(text: str) -> tuple[float, float]:
    vals = _floats(text)
    if len(vals) != 2:
        raise ScenarioError(f"expected lo,hi — got {text!r}")
    return vals[0], vals[1]


def _default_x_window() -> tuple[float, float]:
    return (float(-np.log1p(-DEFAULT_Y_LO)), float(-np.log1p(-DEFAULT_Y_HI)))


def _resolve_grid(args, scenario: Scenario | None) -> EvalGrid:
    if scenario is not None:
        spec = dict(scenario.grid_spec)
    elif getattr(args, "grid_mode", None) == "raw":
        x_lo, x_hi = _default_x_window()
        spec = {"mode": "raw", "count": DEFAULT_GRID_COUNT, "x_lo": x_lo, "x_hi": x_hi}
    else:
        spec = {"mode": "transformed", "count": DEFAULT_GRID_COUNT,
                "y_lo": DEFAULT_Y_LO, "y_hi": DEFAULT_Y_HI}
    for flag, key in (("grid_n", "count"), ("y_lo", "y_lo"), ("y_hi", "y_hi"),
                      ("x_lo", "x_lo"), ("x_hi", "x_hi")):
        v = getattr(args, flag, None)
        if v is not None and key in spec:
            spec[key] = v
    if spec["mode"] == "transformed":
        return EvalGrid.transformed_y(spec["y_lo"], spec["y_hi"], int(spec["count"]))
    return EvalGrid.raw_x(np.linspace(spec["x_lo"], spec["x_hi"], int(spec["count"])))


def _resolve_tol(args, scenario: Scenario | None) -> TolerancePolicy:
    base = scenario.tolerance() if scenario is not None else TolerancePolicy()
    tol = getattr(args, "tol", None)
    if tol is not None:
        return TolerancePolicy(eps_compare=tol, eps_monotone=tol, sf_floor=base.sf_floor)
    return base


def _resolve_seed(args, scenario: Scenario | None, task_seed=None) -> int:
    if getattr(args, "seed", None) is not None:
        return int(args.seed)
    if task_seed is not None:
        return int(task_seed)
    return scenario.seed if scenario is not None else 0


def _resolve_out(args) -> str:
    out = getattr(args, "out", None) or os.environ.get(OUT_DIR_ENV) or "./out"
    os.makedirs(out, exist_ok=True)
    return out


def _inline_system(args, side: str) -> SystemDist:
    alphas = getattr(args, f"{side}_alpha", None)
    betas = getattr(args, f"{side}_beta", None)
    if alphas is None or betas is None:
        raise ScenarioError(
            f"system {side.upper()} needs --{side}-alpha and --{side}-beta "
            "(or a --scenario with named systems)"
        )
    kind = getattr(args, f"{side}_kind", None) or args.kind
    return system_dist(kind, ComponentSet.from_arrays(_floats(alphas), _floats(betas)))


def _verdict_payload(verdict) -> dict:
    return {
        "relation": verdict.relation,
        "status": verdict.status.value,
        "margin": verdict.margin,
        "witness_count": len(verdict.witnesses),
        "witnesses": [[w.point, w.lhs, w.rhs] for w in verdict.witnesses],
        "notes": list(verdict.notes),
    }


# ---------------------------------------------------------------------------
# compare


def cmd_compare(args) -> int:
    scenario = load_scenario(args.scenario) if args.scenario else None
    if scenario is not None:
        if len(args.names) != 2:
            raise ScenarioError("compare with --scenario takes two system names")
        a, b = (scenario.system(n) for n in args.names)
    else:
        if args.names:
            raise ScenarioError("system names need a --scenario file")
        a, b = _inline_system(args, "x"), _inline_system(args, "y")
    grid = adapt_grid(args.relation, _resolve_grid(args, scenario))
    tol = _resolve_tol(args, scenario)
    verdict = check_relation(args.relation, a, b, grid, tol)
    _emit(_verdict_payload(verdict))
    _info(f"{args.relation}: {verdict.status.value} (margin {verdict.margin:.3g})")
    return _STATUS_EXIT[verdict.status]


# ---------------------------------------------------------------------------
# regress


def cmd_regress(args) -> int:
    out = _resolve_out(args)
    grid = _resolve_grid(args, None)
    tol = _resolve_tol(args, None)

    mismatches = []
    results = run_regression(grid, tol)
    for case, outcome in results:
        ok = (outcome.numeric_verdict.status is case.expected_status
              and outcome.conditions_met == case.expected_conditions
              and not outcome.discrepant)
        flag = "ok" if ok else "MISMATCH"
        _info(f"{case.case_id:<24} conditions={outcome.conditions_met!s:<5} "
              f"status={outcome.numeric_verdict.status.value:<12} {flag}")
        if not ok:
            mismatches.append(case.case_id)

    summary = emit_verdict_summary([outcome for _, outcome in results])
    verdict_path = os.path.join(out, "verdicts.json")
    tmp = verdict_path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    os.replace(tmp, verdict_path)

    csv_count = 0
    for fig in PRESET_FIGURE_IDS:
        table = emit_curve(preset_curve(fig))
        write_curve_csv(table, os.path.join(out, f"{fig}.csv"))
        csv_count += 1

    # the two closed-form reliability curves must match their products
    t = np.linspace(0.0, 10.0, 100)
    rs_expected, fp_expected = conclusion_expected(t)
    rs_table = emit_curve(preset_curve("conclusion_Rs"))
    rp_table = emit_curve(preset_curve("conclusion_Rp"))
    rs_err = float(np.max(np.abs(rs_table.values - rs_expected)))
    rp_err = float(np.max(np.abs((1.0 - rp_table.values) - fp_expected)))
    if rs_err > 1e-12:
        mismatches.append(f"conclusion_Rs deviates by {rs_err:.3g}")
    if rp_err > 1e-12:
        mismatches.append(f"conclusion_Rp deviates by {rp_err:.3g}")

    _emit({
        "cases": len(results),
        "csv_files": csv_count,
        "mismatches": mismatches,
        "ok": not mismatches,
        "out": out,
        "series_reliability_error": rs_err,
        "parallel_failure_error": rp_err,
    })
    if mismatches:
        _info("mismatched cases: " + ", ".join(mismatches))
        return 3
    _info(f"all {len(results)} cases matched; {csv_count} csv files in {out}")
    return 0


# ---------------------------------------------------------------------------
# search


def _search_payload(res) -> dict:
    payload = {
        "found": res.found,
        "trials_used": res.trials_used,
        "seed": res.seed,
        "prng": res.prng,
    }
    if res.found:
        xs, ys = res.witness_pair
        payload["witness"] = {
            "x_alphas": xs.alphas.tolist(),
            "x_betas": xs.betas.tolist(),
            "y_alphas": ys.alphas.tolist(),
            "y_betas": ys.betas.tolist(),
        }
        payload["verdict"] = _verdict_payload(res.verdict)
    return payload


def cmd_search(args) -> int:
    scenario = load_scenario(args.scenario) if args.scenario else None
    task = None
    if scenario is not None:
        search_tasks = [t for t in scenario.tasks if t["type"] == "search"]
        if not search_tasks:
            raise ScenarioError("scenario has no search task")
        task = search_tasks[args.task_index]

    if task is not None:
        relation = args.relation or task["relation"]
        kind = args.kind or task["kind"]
        n = args.n or task["n"]
        regime = tuple(args.regime.split(",")) if args.regime else tuple(task["regime"])
        box = {k: tuple(v) for k, v in task["box"].items()} if task["box"] else dict(DEFAULT_PARAM_BOX)
        budget = args.budget or task["budget"]
        seed = _resolve_seed(args, scenario, task.get("seed"))
    else:
        if not args.relation:
            raise ScenarioError("search needs --relation (or a scenario task)")
        relation = args.relation
        kind = args.kind or "series"
        n = args.n or 3
        regime = tuple(t for t in args.regime.split(",") if t) if args.regime else ()
        box = dict(DEFAULT_PARAM_BOX)
        budget = args.budget or 1000
        seed = _resolve_seed(args, scenario)
    if args.box_alpha:
        box["alpha"] = _pair(args.box_alpha)
    if args.box_beta:
        box["beta"] = _pair(args.box_beta)

    spec = SearchSpec(n=n, relation=relation, system_kind=kind, regime=regime,
                      param_box=box, budget=budget, seed=seed)
    grid = _resolve_grid(args, scenario)
    res = find_violation(spec, grid, _resolve_tol(args, scenario))
    _emit(_search_payload(res))
    if res.found:
        _info(f"violation of {relation} found at trial {res.trials_used} "
              f"(margin {res.verdict.margin:.3g})")
        return 0
    _info(f"no violation of {relation} in {spec.budget} trials")
    return 5


# ---------------------------------------------------------------------------
# mc


def cmd_mc(args) -> int:
    scenario = load_scenario(args.scenario) if args.scenario else None
    if scenario is not None:
        if len(args.names) != 1:
            raise ScenarioError("mc with --scenario takes one system name")
        name = args.names[0]
        dist = scenario.system(name)
    else:
        if args.alpha is None or args.beta is None:
            raise ScenarioError("mc needs --alpha/--beta or a scenario system name")
        name = "inline"
        dist = system_dist(args.kind, ComponentSet.from_arrays(
            _floats(args.alpha), _floats(args.beta)))
    if args.size < _MC_MIN_SIZE:
        raise ScenarioError(f"mc size must be at least {_MC_MIN_SIZE}")

    seed = _resolve_seed(args, scenario)
    batch = sample_system(dist.components, dist.kind, args.size, seed)
    against = None
    if args.against:
        if scenario is None:
            raise ScenarioError("--against needs a --scenario with named systems")
        against = scenario.system(args.against)
    report = ecdf_agreement(batch, against)
    _emit({
        "system": name,
        "against": args.against,
        "size": report.size,
        "seed": seed,
        "statistic": report.statistic,
        "band": report.band,
        "passed": report.passed,
    })
    _info(f"KS statistic {report.statistic:.5f} vs band {report.band:.5f} "
          f"({'pass' if report.passed else 'FAIL'})")
    return 0 if report.passed else 3


# ---------------------------------------------------------------------------
# run (scenario task list)


def _run_task(task, scenario: Scenario, args, out: str, index: int) -> tuple[int, dict]:
    grid = _resolve_grid(args, scenario)
    tol = _resolve_tol(args, scenario)
    ttype = task["type"]
    if ttype == "compare":
        verdict = check_relation(
            task["relation"],
            scenario.system(task["a"]),
            scenario.system(task["b"]),
            adapt_grid(task["relation"], grid),
            tol,
        )
        return _STATUS_EXIT[verdict.status], {"verdict": _verdict_payload(verdict)}
    if ttype == "theorem":
        outcome = run_case(task["id"], scenario.component_set(task["x"]),
                           scenario.component_set(task["y"]), grid, tol)
        code = 3 if outcome.discrepant else 0
        return code, {
            "theorem": task["id"],
            "conditions_met": outcome.conditions_met,
            "discrepant": outcome.discrepant,
            "verdict": _verdict_payload(outcome.numeric_verdict),
        }
    if ttype == "search":
        spec = SearchSpec(
            n=task["n"], relation=task["relation"], system_kind=task["kind"],
            regime=tuple(task["regime"]),
            param_box={k: tuple(v) for k, v in task["box"].items()} or dict(DEFAULT_PARAM_BOX),
            budget=task["budget"],
            seed=_resolve_seed(args, scenario, task.get("seed")),
        )
        res = find_violation(spec, grid, tol)
        return (0 if res.found else 5), _search_payload(res)
    if ttype == "mc":
        seed = _resolve_seed(args, scenario, task.get("seed"))
        if task["size"] < _MC_MIN_SIZE:
            raise ScenarioError(f"mc size must be at least {_MC_MIN_SIZE}")
        dist = scenario.system(task["system"])
        batch = sample_system(dist.components, dist.kind, task["size"], seed)
        against = scenario.system(task["against"]) if task.get("against") else None
        rep = ecdf_agreement(batch, against)
        return (0 if rep.passed else 3), {
            "system": task["system"], "against": task.get("against"),
            "statistic": rep.statistic, "band": rep.band, "passed": rep.passed,
        }
    # curve
    if task.get("quantity") is None:
        spec = preset_curve(task["figure_id"])
    else:
        y = scenario.component_set(task["y"]) if task.get("y") else None
        spec = CurveSpec(task["figure_id"], task["quantity"],
                         scenario.component_set(task["x"]), y, grid,
                         task.get("kind") or "series")
    table = emit_curve(spec)
    path = os.path.join(out, f"{spec.figure_id}.csv")
    write_curve_csv(table, path)
    return 0, {"figure_id": spec.figure_id, "csv": path, "warnings": table.warnings}


def cmd_run(args) -> int:
    scenario = load_scenario(args.scenario)
    out = _resolve_out(args)
    results = []
    codes = []
    for i, task in enumerate(scenario.tasks):
        code, payload = _run_task(task, scenario, args, out, i)
        results.append({"task": i, "type": task["type"], "exit_code": code, **payload})
        codes.append(code)
        _info(f"task {i} ({task['type']}): exit {code}")
    _emit({"results": results})
    for severe in (2, 3, 4, 5):
        if severe in codes:
            return severe
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_common(p, seed=True):
    p.add_argument("--scenario", help="scenario JSON file")
    p.add_argument("--grid-mode", choices=["transformed", "raw"])
    p.add_argument("--grid-n", type=int)
    p.add_argument("--y-lo", type=float)
    p.add_argument("--y-hi", type=float)
    p.add_argument("--x-lo", type=float)
    p.add_argument("--x-hi", type=float)
    p.add_argument("--tol", type=float)
    if seed:
        p.add_argument("--seed", type=int)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lfrorder",
        description="series/parallel lifetime systems with linear failure "
                    "rates: order checks, counterexample search, Monte Carlo",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", help="check one stochastic order between two systems")
    p.add_argument("names", nargs="*", help="system names (with --scenario)")
    p.add_argument("--relation", required=True, choices=RELATIONS)
    p.add_argument("--kind", default="series", choices=["series", "parallel"])
    p.add_argument("--x-alpha")
    p.add_argument("--x-beta")
    p.add_argument("--y-alpha")
    p.add_argument("--y-beta")
    p.add_argument("--x-kind", choices=["series", "parallel"])
    p.add_argument("--y-kind", choices=["series", "parallel"])
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("regress", help="run the built-in matrix and emit all preset curves")
    p.add_argument("--out")
    p.add_argument("--grid-n", type=int)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_regress, scenario=None, grid_mode=None,
                   y_lo=None, y_hi=None, x_lo=None, x_hi=None, seed=None)

    p = sub.add_parser("search", help="randomized counterexample search")
    p.add_argument("--relation", choices=RELATIONS)
    p.add_argument("--kind", choices=["series", "parallel"])
    p.add_argument("--n", type=int)
    p.add_argument("--regime", help="comma-separated constraint tokens")
    p.add_argument("--box-alpha", help="lo,hi")
    p.add_argument("--box-beta", help="lo,hi")
    p.add_argument("--budget", type=int)
    p.add_argument("--task-index", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("mc", help="Kolmogorov-Smirnov agreement for sampled lifetimes")
    p.add_argument("names", nargs="*", help="system name (with --scenario)")
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--kind", default="series", choices=["series", "parallel"])
    p.add_argument("--size", type=int, default=100_000)
    p.add_argument("--against", help="check against another named system")
    _add_common(p)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("run", help="execute every task in a scenario file")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out")
    p.add_argument("--tol", type=float)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_run, grid_mode=None, grid_n=None,
                   y_lo=None, y_hi=None, x_lo=None, x_hi=None)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, ScenarioError, StructureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

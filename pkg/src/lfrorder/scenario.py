"""Versioned JSON scenario documents for the CLI.

A scenario names systems once and lets tasks refer to them:

    {
      "version": 1,
      "seed": 0,
      "grid": {"mode": "transformed", "count": 1000, "y_lo": 0.01, "y_hi": 0.99},
      "tolerance": {"eps_compare": 1e-9, "eps_monotone": 1e-9, "sf_floor": 1e-300},
      "systems": {
        "X": {"kind": "series", "components": [{"alpha": 0.02, "beta": 0.2}]}
      },
      "tasks": [{"type": "compare", "a": "X", "b": "X", "relation": "st"}]
    }

Parsing canonicalizes the document (defaults materialized, unknown keys
rejected), so parse -> serialize -> parse is the identity on canonical
form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ScenarioError
from .orders import (
    RELATIONS,
    DEFAULT_GRID_COUNT,
    DEFAULT_Y_HI,
    DEFAULT_Y_LO,
    EvalGrid,
    TolerancePolicy,
)
from .report import PRESET_FIGURE_IDS, QUANTITIES
from .search import REGIME_TOKENS
from .systems import ComponentSet, SystemDist, system_dist
from .theorems import TheoremId

__all__ = ["Scenario", "parse_scenario", "load_scenario", "serialize_scenario"]

SCHEMA_VERSION = 1

_DEFAULT_GRID = {
    "mode": "transformed",
    "count": DEFAULT_GRID_COUNT,
    "y_lo": DEFAULT_Y_LO,
    "y_hi": DEFAULT_Y_HI,
}
_DEFAULT_TOL = {"eps_compare": 1e-9, "eps_monotone": 1e-9, "sf_floor": 1e-300}

_TASK_FIELDS = {
    "compare": {"type", "a", "b", "relation"},
    "theorem": {"type", "id", "x", "y"},
    "search": {"type", "relation", "kind", "n", "regime", "box", "budget", "seed"},
    "mc": {"type", "system", "size", "seed", "against"},
    "curve": {"type", "figure_id", "quantity", "x", "y", "kind"},
}


def _require(cond: bool, message: str):
    if not cond:
        raise ScenarioError(message)


def _canon_grid(raw: dict) -> dict:
    _require(isinstance(raw, dict), "grid must be an object")
    mode = raw.get("mode", "transformed")
    _require(mode in ("transformed", "raw"), f"unknown grid mode {mode!r}")
    count = int(raw.get("count", DEFAULT_GRID_COUNT))
    _require(count >= 3, "grid count must be at least 3")
    if mode == "transformed":
        out = {
            "mode": mode,
            "count": count,
            "y_lo": float(raw.get("y_lo", DEFAULT_Y_LO)),
            "y_hi": float(raw.get("y_hi", DEFAULT_Y_HI)),
        }
        _require(0.0 < out["y_lo"] < out["y_hi"] < 1.0, "need 0 < y_lo < y_hi < 1")
    else:
        _require("x_lo" in raw and "x_hi" in raw, "raw grid needs x_lo and x_hi")
        out = {
            "mode": mode,
            "count": count,
            "x_lo": float(raw["x_lo"]),
            "x_hi": float(raw["x_hi"]),
        }
        _require(0.0 <= out["x_lo"] < out["x_hi"], "need 0 <= x_lo < x_hi")
    extra = set(raw) - set(out)
    _require(not extra, f"unknown grid fields: {sorted(extra)}")
    return out


def _canon_system(name: str, raw: dict) -> dict:
    _require(isinstance(raw, dict), f"system {name!r} must be an object")
    kind = raw.get("kind", "series")
    _require(kind in ("series", "parallel"), f"system {name!r}: unknown kind {kind!r}")
    comps = raw.get("components")
    _require(isinstance(comps, list) and comps, f"system {name!r} needs components")
    out_comps = []
    for c in comps:
        _require(isinstance(c, dict) and set(c) <= {"alpha", "beta"},
                 f"system {name!r}: components are {{alpha, beta}} objects")
        out_comps.append({"alpha": float(c.get("alpha", 0.0)),
                          "beta": float(c.get("beta", 0.0))})
    extra = set(raw) - {"kind", "components"}
    _require(not extra, f"system {name!r}: unknown fields {sorted(extra)}")
    return {"kind": kind, "components": out_comps}


def _canon_task(i: int, raw: dict) -> dict:
    _require(isinstance(raw, dict), f"task {i} must be an object")
    ttype = raw.get("type")
    _require(ttype in _TASK_FIELDS, f"task {i}: unknown type {ttype!r}")
    extra = set(raw) - _TASK_FIELDS[ttype]
    _require(not extra, f"task {i} ({ttype}): unknown fields {sorted(extra)}")
    out = {"type": ttype}
    if ttype == "compare":
        _require(all(k in raw for k in ("a", "b", "relation")),
                 f"task {i}: compare needs a, b, relation")
        _require(raw["relation"] in RELATIONS,
                 f"task {i}: unknown relation {raw['relation']!r}")
        out.update(a=str(raw["a"]), b=str(raw["b"]), relation=raw["relation"])
    elif ttype == "theorem":
        _require(all(k in raw for k in ("id", "x", "y")),
                 f"task {i}: theorem needs id, x, y")
        try:
            tid = TheoremId(raw["id"])
        except ValueError:
            raise ScenarioError(f"task {i}: unknown theorem id {raw['id']!r}") from None
        out.update(id=tid.value, x=str(raw["x"]), y=str(raw["y"]))
    elif ttype == "search":
        _require("relation" in raw, f"task {i}: search needs a relation")
        _require(raw["relation"] in RELATIONS,
                 f"task {i}: unknown relation {raw['relation']!r}")
        regime = tuple(raw.get("regime", ()))
        for token in regime:
            _require(token in REGIME_TOKENS, f"task {i}: unknown regime token {token!r}")
        box = raw.get("box", {})
        _require(isinstance(box, dict) and set(box) <= {"alpha", "beta"},
                 f"task {i}: box maps alpha/beta to [lo, hi]")
        out.update(
            relation=raw["relation"],
            kind=raw.get("kind", "series"),
            n=int(raw.get("n", 3)),
            regime=list(regime),
            box={k: [float(v[0]), float(v[1])] for k, v in sorted(box.items())},
            budget=int(raw.get("budget", 1000)),
            seed=raw.get("seed"),
        )
        _require(out["kind"] in ("series", "parallel"),
                 f"task {i}: unknown kind {out['kind']!r}")
    elif ttype == "mc":
        _require("system" in raw, f"task {i}: mc needs a system")
        out.update(
            system=str(raw["system"]),
            size=int(raw.get("size", 100_000)),
            seed=raw.get("seed"),
            against=raw.get("against"),
        )
    else:  # curve
        if raw.get("quantity") is None:
            _require("figure_id" in raw, f"task {i}: curve needs a figure_id or quantity")
            _require(raw["figure_id"] in PRESET_FIGURE_IDS,
                     f"task {i}: unknown preset figure {raw['figure_id']!r}")
            out.update(figure_id=raw["figure_id"], quantity=None,
                       x=None, y=None, kind=None)
        else:
            _require("quantity" in raw and "x" in raw,
                     f"task {i}: ad-hoc curve needs quantity and x")
            _require(raw["quantity"] in QUANTITIES,
                     f"task {i}: unknown quantity {raw['quantity']!r}")
            out.update(
                figure_id=str(raw.get("figure_id", f"task{i}_{raw['quantity']}")),
                quantity=raw["quantity"],
                x=str(raw["x"]),
                y=(str(raw["y"]) if raw.get("y") is not None else None),
                kind=raw.get("kind", "series"),
            )
    return out


@dataclass(frozen=True)
class Scenario:
    """Canonicalized scenario document."""

    version: int
    seed: int
    grid_spec: dict
    tolerance_spec: dict
    systems: dict
    tasks: tuple

    def grid(self) -> EvalGrid:
        g = self.grid_spec
        if g["mode"] == "transformed":
            return EvalGrid.transformed_y(g["y_lo"], g["y_hi"], g["count"])
        import numpy as np

        return EvalGrid.raw_x(np.linspace(g["x_lo"], g["x_hi"], g["count"]))

    def tolerance(self) -> TolerancePolicy:
        return TolerancePolicy(**self.tolerance_spec)

    def component_set(self, name: str) -> ComponentSet:
        sysdef = self.systems[name]
        return ComponentSet.from_arrays(
            [c["alpha"] for c in sysdef["components"]],
            [c["beta"] for c in sysdef["components"]],
        )

    def system(self, name: str) -> SystemDist:
        if name not in self.systems:
            raise ScenarioError(f"scenario defines no system named {name!r}")
        return system_dist(self.systems[name]["kind"], self.component_set(name))

    def canonical(self) -> dict:
        return {
            "version": self.version,
            "seed": self.seed,
            "grid": dict(self.grid_spec),
            "tolerance": dict(self.tolerance_spec),
            "systems": {k: json.loads(json.dumps(v)) for k, v in sorted(self.systems.items())},
            "tasks": [dict(t) for t in self.tasks],
        }


def parse_scenario(doc: dict) -> Scenario:
    _require(isinstance(doc, dict), "scenario must be a JSON object")
    known = {"version", "seed", "grid", "tolerance", "systems", "tasks"}
    extra = set(doc) - known
    _require(not extra, f"unknown scenario fields: {sorted(extra)}")
    version = doc.get("version")
    _require(version == SCHEMA_VERSION,
             f"unsupported scenario version {version!r} (supported: {SCHEMA_VERSION})")

    grid = _canon_grid(doc.get("grid", dict(_DEFAULT_GRID)))
    tol_raw = doc.get("tolerance", {})
    _require(isinstance(tol_raw, dict) and set(tol_raw) <= set(_DEFAULT_TOL),
             "tolerance allows eps_compare, eps_monotone, sf_floor")
    tol = {k: float(tol_raw.get(k, v)) for k, v in _DEFAULT_TOL.items()}

    systems_raw = doc.get("systems", {})
    _require(isinstance(systems_raw, dict), "systems must be an object")
    systems = {str(k): _canon_system(k, v) for k, v in systems_raw.items()}

    tasks_raw = doc.get("tasks", [])
    _require(isinstance(tasks_raw, list), "tasks must be a list")
    tasks = tuple(_canon_task(i, t) for i, t in enumerate(tasks_raw))

    scenario = Scenario(
        version=SCHEMA_VERSION,
        seed=int(doc.get("seed", 0)),
        grid_spec=grid,
        tolerance_spec=tol,
        systems=systems,
        tasks=tasks,
    )
    # systems must validate and referenced names must resolve
    for name in systems:
        scenario.system(name)
    for i, t in enumerate(scenario.tasks):
        for key in ("a", "b", "x", "y", "system", "against"):
            ref = t.get(key)
            if ref is not None:
                _require(ref in systems, f"task {i}: unknown system {ref!r}")
    return scenario


def load_scenario(path: str) -> Scenario:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioError(f"cannot read scenario {path!r}: {exc}") from exc
    return parse_scenario(doc)


def serialize_scenario(scenario: Scenario) -> str:
    return json.dumps(scenario.canonical(), sort_keys=True, indent=2) + "\n"

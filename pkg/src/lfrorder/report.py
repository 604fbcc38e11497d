"""Curve tables, CSV emission and machine-readable verdict summaries.

Every preset figure is one CSV named ``<figure_id>.csv``: a JSON comment
line carrying the full recipe (parameters, grid, flags), then a column
header, then the rows.  Output is deterministic byte for byte — floats
are written with shortest round-trip ``repr`` and metadata keys are
sorted — so downstream golden-file diffs are meaningful.

Presets whose parameters the source material leaves unstated carry
``substitute_params: true``; those values were produced once by a seeded
counterexample search (``tools/derive_substitutes.py`` regenerates them)
and are frozen here verbatim.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .orders import (
    DEFAULT_TOLERANCE,
    DEFAULT_Y_HI,
    DEFAULT_Y_LO,
    EvalGrid,
    GridMode,
    OrderStatus,
    TolerancePolicy,
    default_grid,
    quantile_composition,
)
from .systems import ComponentSet, SystemKind, system_dist
from .theorems import TheoremCase, TheoremId, run_case

__all__ = [
    "QUANTITIES",
    "CurveSpec",
    "CurveTable",
    "emit_curve",
    "write_curve_csv",
    "preset_curve",
    "PRESET_FIGURE_IDS",
    "RegressionCase",
    "regression_cases",
    "run_regression",
    "emit_verdict_summary",
    "conclusion_expected",
]

QUANTITIES = (
    "sf_diff",
    "hrf_diff",
    "pdf_ratio",
    "quantile_diff",
    "star_ratio",
    "convex_compose",
    "sf_series",
    "sf_parallel",
)

_PAIR_QUANTITIES = frozenset(QUANTITIES[:6])


@dataclass(frozen=True, eq=False)
class CurveSpec:
    figure_id: str
    quantity: str
    x_set: ComponentSet
    y_set: ComponentSet | None
    grid: EvalGrid
    kind: SystemKind = SystemKind.SERIES
    substitute_params: bool = False

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise DomainError(f"unknown curve quantity {self.quantity!r}")
        if self.quantity in _PAIR_QUANTITIES and self.y_set is None:
            raise DomainError(f"{self.quantity} compares two systems; y_set is required")
        object.__setattr__(self, "kind", SystemKind(self.kind))


@dataclass(frozen=True, eq=False)
class CurveTable:
    figure_id: str
    axis_name: str
    axis: np.ndarray
    values: np.ndarray
    warnings: int
    metadata: dict


def _grid_meta(grid: EvalGrid) -> dict:
    meta = {"mode": grid.mode.value, "count": grid.count}
    if grid.mode is GridMode.TRANSFORMED_Y:
        meta["y_lo"] = float(grid.y_points[0])
        meta["y_hi"] = float(grid.y_points[-1])
    else:
        meta["x_lo"] = float(grid.points[0])
        meta["x_hi"] = float(grid.points[-1])
    return meta


def emit_curve(spec: CurveSpec) -> CurveTable:
    """Evaluate the curve on its grid.

    Non-finite values are kept as nan in the table, counted as warnings
    and written as the ``NA`` sentinel by the CSV writer.
    """
    grid = spec.grid
    a = system_dist(spec.kind, spec.x_set)
    b = system_dist(spec.kind, spec.y_set) if spec.y_set is not None else None
    q = spec.quantity

    if q == "quantile_diff":
        axis_name, axis = "p", grid.probability_points
    elif grid.mode is GridMode.TRANSFORMED_Y:
        axis_name, axis = "y", grid.y_points
    else:
        axis_name, axis = "x", grid.points
    x = grid.points

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if q == "sf_diff":
            values = b.sf(x) - a.sf(x)
        elif q == "hrf_diff":
            values = a.hrf(x) - b.hrf(x)
        elif q == "pdf_ratio":
            values = b.pdf(x) / a.pdf(x)
        elif q == "quantile_diff":
            values = b.quantile(axis) - a.quantile(axis)
        elif q == "star_ratio":
            values = quantile_composition(a, b, x) / x
        elif q == "convex_compose":
            values = quantile_composition(a, b, x)
        elif q == "sf_series":
            values = system_dist(SystemKind.SERIES, spec.x_set).sf(x)
        else:  # sf_parallel
            values = system_dist(SystemKind.PARALLEL, spec.x_set).sf(x)

    values = np.asarray(values, dtype=np.float64)
    warnings = int(np.sum(~np.isfinite(values)))
    meta = {
        "figure_id": spec.figure_id,
        "quantity": q,
        "kind": spec.kind.value,
        "grid": _grid_meta(grid),
        "substitute_params": spec.substitute_params,
        "x_alphas": spec.x_set.alphas.tolist(),
        "x_betas": spec.x_set.betas.tolist(),
        "y_alphas": spec.y_set.alphas.tolist() if spec.y_set is not None else None,
        "y_betas": spec.y_set.betas.tolist() if spec.y_set is not None else None,
        "warnings": warnings,
    }
    return CurveTable(spec.figure_id, axis_name, axis, values, warnings, meta)


def write_curve_csv(table: CurveTable, path: str) -> None:
    """Two-line header (JSON comment, column names), then the rows.

    Written atomically (temp file + rename); identical tables produce
    byte-identical files.
    """
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        fh.write("# " + json.dumps(table.metadata, sort_keys=True) + "\n")
        fh.write(f"{table.axis_name},value\n")
        for t, v in zip(table.axis, table.values):
            cell = repr(float(v)) if np.isfinite(v) else "NA"
            fh.write(f"{float(t)!r},{cell}\n")
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# frozen parameter sets
#
# _E* / _C* pairs follow the worked comparisons: each entry is
# ((x alphas, x betas), (y alphas, y betas)).  Entries marked _SUB_* were
# found by find_violation with the recorded seed over box
# [0.01, 1]^2 (budget 2000, default grid/tolerance) and are frozen
# verbatim; rerun tools/derive_substitutes.py to reproduce them.

_E52 = (((0.02, 0.04, 0.06), (0.2, 0.5, 0.7)),
        ((0.01, 0.03, 0.05), (0.1, 0.3, 0.5)))
_C52 = (((0.01, 0.03, 0.05), (0.3, 0.6, 0.8)),
        ((0.02, 0.04, 0.06), (0.2, 0.5, 0.7)))
_E53 = (((0.02, 0.04, 0.06), (1.0, 1.0, 1.0)),
        ((0.01, 0.03, 0.05), (1.0, 1.0, 1.0)))
_C53 = (((0.1, 0.3, 0.5), (0.1, 0.1, 0.1)),
        ((0.2, 0.4, 0.6), (0.1, 0.1, 0.1)))
_E54 = (((0.2, 0.4, 0.6), (0.8, 1.0, 1.5)),
        ((0.1, 0.3, 0.5), (0.3, 0.8, 1.0)))
_E55 = (((0.2, 0.4, 0.6), (0.05, 0.05, 0.05)),
        ((0.1, 0.3, 0.5), (0.05, 0.05, 0.05)))
_C55 = (((1.0, 3.0, 5.0), (2.0, 2.0, 2.0)),
        ((2.0, 4.0, 6.0), (2.0, 2.0, 2.0)))
_E56 = (((0.1, 0.3, 0.5), (0.5, 0.5, 0.5)),
        ((0.2, 0.6, 0.8), (0.5, 0.5, 0.5)))
_C56 = (((6.2, 6.6, 6.8), (4.0, 4.0, 4.0)),
        ((4.1, 4.3, 4.5), (4.0, 4.0, 4.0)))
_E57 = (((0.1, 0.2, 0.3), (0.5, 0.5, 0.5)),
        ((0.4, 0.6, 0.8), (0.5, 0.5, 0.5)))
_C57 = (((4.4, 4.6, 5.8), (2.0, 2.0, 2.0)),
        ((3.1, 3.2, 3.3), (2.0, 2.0, 2.0)))

# series st crossing, alpha_k <= alpha*_k with beta_k >= beta*_k (seed 514)
_SUB_C51 = (
    ((0.06219122538339366, 0.028130864606643262, 0.16826521858533672),
     (0.5976319439908807, 0.5117603719098959, 0.9414394428441651)),
    ((0.961294676745389, 0.8925127221774466, 0.9870974611898963),
     (0.5816897227229398, 0.34635714074885976, 0.4562149716146275)),
)
# parallel st crossing, alpha_k >= alpha*_k with beta_k <= beta*_k (seed 548)
_SUB_C54 = (
    ((0.08378531933093454, 0.25419779633112416, 0.4221282155532468),
     (0.055437352390824604, 0.15556037593654026, 0.050545308393822014)),
    ((0.06811104545013048, 0.02400751829430654, 0.400022511892244),
     (0.8662755477252482, 0.7771559493124994, 0.8041942286629662)),
)
# series survival difference everywhere negative, both parameters smaller
# componentwise (seed 521)
_SUB_FIG2C = (
    ((0.023899770544753212, 0.07858867742061292, 0.034264585222011285),
     (0.29456402269881954, 0.29870829856760606, 0.06518749375171312)),
    ((0.9810177456113628, 0.743437651215463, 0.23502566543442077),
     (0.8261387049713419, 0.32483153033289913, 0.8929393473728108)),
)
# series hazard difference crossing, alpha_k >= alpha*_k with smaller
# betas (seed 542)
_SUB_FIG4B = (
    ((0.6047236487001493, 0.9960310612400676, 0.06539547092078729),
     (0.060118809353163716, 0.05748000216480855, 0.2138121762455695)),
    ((0.3797373901881771, 0.5562804319486059, 0.05514518079622164),
     (0.8473333876106303, 0.9739233144745275, 0.9562139663500024)),
)
# series hazard difference everywhere negative (seed 543)
_SUB_FIG4C = (
    ((0.5663250114368684, 0.37296107105337334, 0.32504888185751657),
     (0.06461679139983059, 0.06855366572550561, 0.09528015474379474)),
    ((0.9465658802415441, 0.6458885937290627, 0.8485001509911061),
     (0.9567372568211686, 0.9487569583234661, 0.9818677184189691)),
)
# parallel st crossing, alpha_k <= alpha*_k with beta_k >= beta*_k (seed 581)
_SUB_FIG8A = (
    ((0.9187678138519639, 0.1637348518238024, 0.06983452355522811),
     (0.4578105816686143, 0.19957639931909088, 0.085465841398037)),
    ((0.9198091459632316, 0.7460799219873196, 0.8777598454973788),
     (0.3633848609543227, 0.15081225147513147, 0.025022969934597232)),
)
# parallel survival difference everywhere negative (seed 583)
_SUB_FIG8C = (
    ((0.018165033668809744, 0.3376267543626891, 0.20675720190980762),
     (0.026797553560115477, 0.3637714469351304, 0.1140130836847699)),
    ((0.9814954400801157, 0.8814078811722065, 0.9683404586292171),
     (0.9500301404212705, 0.7990147313757356, 0.8053153023756848)),
)
# hand-picked: larger alphas and smaller betas whose survival-difference
# crossing lands beyond the plotted window, so the curve stays nonnegative
_SUB_FIG2B = (((0.6, 0.7, 0.8), (0.1, 0.1, 0.1)),
              ((0.1, 0.2, 0.3), (0.2, 0.2, 0.2)))

# water-distribution reliability: pure-quadratic hazards 0.01t, 0.02t, 0.03t
_WATER = ((0.0, 0.0, 0.0), (0.01, 0.02, 0.03))


def _cs(arrays) -> ComponentSet:
    alphas, betas = arrays
    return ComponentSet.from_arrays(alphas, betas)


def _x_window_grid(count: int = 1000) -> EvalGrid:
    """Uniform x grid spanning the same window as the default transformed
    grid; used where the curve is naturally plotted against raw x."""
    lo = float(-np.log1p(-DEFAULT_Y_LO))
    hi = float(-np.log1p(-DEFAULT_Y_HI))
    return EvalGrid.raw_uniform(lo, hi, count)


def _presets() -> dict[str, CurveSpec]:
    tg = default_grid()
    xg = _x_window_grid()
    cg = EvalGrid.raw_x(np.linspace(0.0, 10.0, 100))

    def pair(fig, quantity, params, kind=SystemKind.SERIES, grid=tg, sub=False):
        (xa, xb), (ya, yb) = params
        return CurveSpec(fig, quantity, ComponentSet.from_arrays(xa, xb),
                         ComponentSet.from_arrays(ya, yb), grid, kind, sub)

    water = _cs(_WATER)
    return {
        "fig1a": pair("fig1a", "sf_diff", _E52, sub=True),
        "fig1b": pair("fig1b", "hrf_diff", _E52),
        "fig2a": pair("fig2a", "sf_diff", _SUB_C51, sub=True),
        "fig2b": pair("fig2b", "sf_diff", _SUB_FIG2B, sub=True),
        "fig2c": pair("fig2c", "sf_diff", _SUB_FIG2C, sub=True),
        "fig4a": pair("fig4a", "hrf_diff", _C52, sub=True),
        "fig4b": pair("fig4b", "hrf_diff", _SUB_FIG4B, sub=True),
        "fig4c": pair("fig4c", "hrf_diff", _SUB_FIG4C, sub=True),
        "fig5a": pair("fig5a", "pdf_ratio", _E53),
        "fig5b": pair("fig5b", "pdf_ratio", _C53),
        "fig7a": pair("fig7a", "sf_diff", _E54, kind=SystemKind.PARALLEL),
        "fig7b": pair("fig7b", "quantile_diff", _E55),
        "fig8a": pair("fig8a", "sf_diff", _SUB_FIG8A, kind=SystemKind.PARALLEL, sub=True),
        "fig8b": pair("fig8b", "sf_diff", _SUB_C54, kind=SystemKind.PARALLEL, sub=True),
        "fig8c": pair("fig8c", "sf_diff", _SUB_FIG8C, kind=SystemKind.PARALLEL, sub=True),
        "fig10a": pair("fig10a", "quantile_diff", _C55),
        "fig10b": pair("fig10b", "star_ratio", _E56, grid=xg),
        "fig12a": pair("fig12a", "star_ratio", _C56, grid=xg),
        "fig12b": pair("fig12b", "convex_compose", _E57, grid=xg),
        "fig14": pair("fig14", "convex_compose", _C57, grid=xg),
        "conclusion_Rs": CurveSpec("conclusion_Rs", "sf_series", water, None, cg),
        "conclusion_Rp": CurveSpec("conclusion_Rp", "sf_parallel", water, None, cg),
    }


PRESET_FIGURE_IDS = tuple(sorted(_presets().keys()))


def preset_curve(figure_id: str) -> CurveSpec:
    presets = _presets()
    if figure_id not in presets:
        raise DomainError(
            f"unknown figure id {figure_id!r}; known: {PRESET_FIGURE_IDS}"
        )
    return presets[figure_id]


def conclusion_expected(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closed forms the conclusion presets must reproduce: the series
    reliability exp(-0.03 t^2) and the parallel failure product."""
    rs = np.exp(-0.03 * t * t)
    fp = ((1.0 - np.exp(-0.005 * t * t))
          * (1.0 - np.exp(-0.01 * t * t))
          * (1.0 - np.exp(-0.015 * t * t)))
    return rs, fp


# ---------------------------------------------------------------------------
# regression matrix: one worked example and one counterexample per theorem


@dataclass(frozen=True)
class RegressionCase:
    case_id: str
    theorem: TheoremId
    x_set: ComponentSet
    y_set: ComponentSet
    expected_status: OrderStatus
    expected_conditions: bool
    substitute: bool = False


def regression_cases() -> tuple[RegressionCase, ...]:
    def case(tid, role, params, status, conds, sub=False):
        return RegressionCase(f"{tid.value}/{role}", tid,
                              _cs(params[0]), _cs(params[1]),
                              status, conds, sub)

    H, V = OrderStatus.HOLDS, OrderStatus.VIOLATED
    return (
        # the first worked comparison states no parameters; the hazard
        # comparison's set satisfies the same hypotheses and stands in
        case(TheoremId.T3_1, "example", _E52, H, True, sub=True),
        case(TheoremId.T3_1, "counterexample", _SUB_C51, V, False, sub=True),
        case(TheoremId.T3_2, "example", _E52, H, True),
        case(TheoremId.T3_2, "counterexample", _C52, V, False),
        case(TheoremId.T3_3, "example", _E53, H, True),
        case(TheoremId.T3_3, "counterexample", _C53, V, False),
        case(TheoremId.T3_4, "example", _E54, H, True),
        case(TheoremId.T3_4, "counterexample", _SUB_C54, V, False, sub=True),
        case(TheoremId.T3_5, "example", _E55, H, True),
        case(TheoremId.T3_5, "counterexample", _C55, V, False),
        case(TheoremId.T3_6, "example", _E56, H, True),
        case(TheoremId.T3_6, "counterexample", _C56, V, False),
        case(TheoremId.T3_7, "example", _E57, H, True),
        case(TheoremId.T3_7, "counterexample", _C57, V, False),
    )


def run_regression(grid: EvalGrid | None = None,
                   tol: TolerancePolicy = DEFAULT_TOLERANCE
                   ) -> list[tuple[RegressionCase, TheoremCase]]:
    if grid is None:
        grid = default_grid()
    return [
        (case, run_case(case.theorem, case.x_set, case.y_set, grid, tol))
        for case in regression_cases()
    ]


def emit_verdict_summary(cases: list[TheoremCase]) -> dict:
    """One record per case with stable field ordering for golden diffs."""
    if not cases:
        raise DomainError("no cases to summarize")
    records = []
    for c in cases:
        v = c.numeric_verdict
        records.append({
            "theorem": c.id.value,
            "relation": c.claimed_relation,
            "direction": c.claimed_direction,
            "x_alphas": c.x_set.alphas.tolist(),
            "x_betas": c.x_set.betas.tolist(),
            "y_alphas": c.y_set.alphas.tolist(),
            "y_betas": c.y_set.betas.tolist(),
            "conditions_met": c.conditions_met,
            "status": v.status.value,
            "margin": v.margin,
            "witness_count": len(v.witnesses),
            "witnesses": [[w.point, w.lhs, w.rhs] for w in v.witnesses],
            "notes": list(v.notes),
            "discrepant": c.discrepant,
        })
    return {"cases": records}

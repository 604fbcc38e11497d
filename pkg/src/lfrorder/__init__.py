"""Series/parallel system lifetimes built from linear-failure-rate
components, with numeric stochastic-order checking, counterexample
search and Monte Carlo cross-validation.

The hot kernels run on a compiled extension when available and fall back
to NumPy otherwise; ``lfrorder.backend()`` reports which one is active.
"""

from ._kernels import BACKEND as _BACKEND
from .errors import DomainError, NumericError, ScenarioError, StructureError
from .lfr import LfrParams, lfr_cdf, lfr_hrf, lfr_pdf, lfr_quantile, lfr_sf
from .mc import KsReport, SampleBatch, ecdf_agreement, sample_pair, sample_system
from .orders import (
    RELATIONS,
    DEFAULT_TOLERANCE,
    EvalGrid,
    GridMode,
    MonotoneDirection,
    MonotoneScan,
    OrderStatus,
    OrderVerdict,
    TolerancePolicy,
    Witness,
    check_convex,
    check_disp,
    check_hr,
    check_lorenz,
    check_lr,
    check_relation,
    check_st,
    check_star,
    default_grid,
    monotone_scan,
)
from .report import (
    CurveSpec,
    CurveTable,
    RegressionCase,
    emit_curve,
    emit_verdict_summary,
    preset_curve,
    regression_cases,
    run_regression,
    write_curve_csv,
)
from .scenario import Scenario, load_scenario, parse_scenario, serialize_scenario
from .search import (
    DEFAULT_PARAM_BOX,
    REGIME_TOKENS,
    SearchResult,
    SearchSpec,
    audit_theorem,
    find_violation,
    realize_regime,
    regime_for_theorem,
)
from .systems import ComponentSet, SystemDist, SystemKind, system_dist
from .theorems import TheoremCase, TheoremId, conditions_hold, run_case

__version__ = "0.1.0"


def backend() -> str:
    """'c' when the compiled kernels are active, 'py' otherwise."""
    return _BACKEND


__all__ = [
    "DomainError", "NumericError", "ScenarioError", "StructureError",
    "LfrParams", "lfr_cdf", "lfr_sf", "lfr_pdf", "lfr_hrf", "lfr_quantile",
    "ComponentSet", "SystemDist", "SystemKind", "system_dist",
    "RELATIONS", "EvalGrid", "GridMode", "default_grid",
    "TolerancePolicy", "DEFAULT_TOLERANCE",
    "OrderStatus", "OrderVerdict", "Witness",
    "MonotoneDirection", "MonotoneScan", "monotone_scan",
    "check_st", "check_hr", "check_lr", "check_disp", "check_star",
    "check_convex", "check_lorenz", "check_relation",
    "TheoremId", "TheoremCase", "conditions_hold", "run_case",
    "SearchSpec", "SearchResult", "REGIME_TOKENS", "DEFAULT_PARAM_BOX",
    "find_violation", "realize_regime", "regime_for_theorem", "audit_theorem",
    "SampleBatch", "KsReport", "sample_system", "sample_pair", "ecdf_agreement",
    "CurveSpec", "CurveTable", "emit_curve", "write_curve_csv", "preset_curve",
    "RegressionCase", "regression_cases", "run_regression", "emit_verdict_summary",
    "Scenario", "parse_scenario", "load_scenario", "serialize_scenario",
    "backend",
    "__version__",
]

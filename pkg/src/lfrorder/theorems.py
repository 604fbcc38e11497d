"""Sufficient-condition predicates paired with their numeric checkers.

Each entry encodes one theorem about two n-component systems: the
componentwise parameter inequalities that form its hypothesis, the order
relation it claims and which system kind it concerns.  ``run_case``
evaluates both the predicate and the matching grid checker; a case whose
hypothesis holds but whose numeric verdict is VIOLATED is flagged
DISCREPANT and reported, never suppressed — auditing the claims is the
point of this module.

Direction convention, fixed once: the x side is always the claimed
stochastically smaller system, so every binding calls ``check_*(x_system,
y_system)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import StructureError
from .orders import (
    DEFAULT_TOLERANCE,
    EvalGrid,
    OrderStatus,
    OrderVerdict,
    TolerancePolicy,
    adapt_grid,
    check_relation,
    default_grid,
)
from .systems import ComponentSet, SystemKind, system_dist

__all__ = [
    "TheoremId",
    "TheoremCase",
    "theorem_relation",
    "theorem_kind",
    "conditions_hold",
    "run_case",
]


class TheoremId(str, Enum):
    T3_1 = "T3_1"    # alpha_k >= alpha*_k, beta_k >= beta*_k  => series st
    T3_2 = "T3_2"    # same hypothesis                         => series hr
    C3_2A = "C3_2a"  # common alpha, beta_k >= beta*_k         => series hr
    T3_3 = "T3_3"    # common beta, alpha_k >= alpha*_k        => series lr
    T3_4 = "T3_4"    # alpha_k >= alpha*_k, beta_k >= beta*_k  => parallel st
    T3_5 = "T3_5"    # common beta, alpha_k >= alpha*_k        => series disp
    T3_6 = "T3_6"    # common beta, alpha*_k >  alpha_k        => series star
    C3_6A = "C3_6a"  # common beta, alpha*_k >  alpha_k        => series lorenz
    T3_7 = "T3_7"    # common beta, alpha*_k >= alpha_k        => series convex


# relation, system kind, structural requirement, condition spec.
# Conditions are (which array, direction, strict): direction +1 means the
# x side must dominate componentwise, -1 the y side.
_COMMON_BETA = "beta"
_COMMON_ALPHA = "alpha"

_SPECS = {
    TheoremId.T3_1: ("st", SystemKind.SERIES, None,
                     (("alpha", +1, False), ("beta", +1, False))),
    TheoremId.T3_2: ("hr", SystemKind.SERIES, None,
                     (("alpha", +1, False), ("beta", +1, False))),
    TheoremId.C3_2A: ("hr", SystemKind.SERIES, _COMMON_ALPHA,
                      (("beta", +1, False),)),
    TheoremId.T3_3: ("lr", SystemKind.SERIES, _COMMON_BETA,
                     (("alpha", +1, False),)),
    TheoremId.T3_4: ("st", SystemKind.PARALLEL, None,
                     (("alpha", +1, False), ("beta", +1, False))),
    TheoremId.T3_5: ("disp", SystemKind.SERIES, _COMMON_BETA,
                     (("alpha", +1, False),)),
    TheoremId.T3_6: ("star", SystemKind.SERIES, _COMMON_BETA,
                     (("alpha", -1, True),)),
    TheoremId.C3_6A: ("lorenz", SystemKind.SERIES, _COMMON_BETA,
                      (("alpha", -1, True),)),
    TheoremId.T3_7: ("convex", SystemKind.SERIES, _COMMON_BETA,
                     (("alpha", -1, False),)),
}


@dataclass(frozen=True)
class TheoremCase:
    """One audited instance: hypothesis outcome plus numeric verdict."""

    id: TheoremId
    x_set: ComponentSet
    y_set: ComponentSet
    conditions_met: bool
    claimed_relation: str
    claimed_direction: str  # always "XleY"; kept explicit for reports
    numeric_verdict: OrderVerdict

    @property
    def discrepant(self) -> bool:
        """Hypothesis satisfied yet the checker found a violation."""
        return self.conditions_met and self.numeric_verdict.status is OrderStatus.VIOLATED


def theorem_relation(tid: TheoremId) -> str:
    return _SPECS[TheoremId(tid)][0]


def theorem_kind(tid: TheoremId) -> SystemKind:
    return _SPECS[TheoremId(tid)][1]


def _param(cs: ComponentSet, name: str) -> np.ndarray:
    return cs.alphas if name == "alpha" else cs.betas


def _require_common(tid: TheoremId, name: str, x_set: ComponentSet, y_set: ComponentSet):
    values = np.concatenate([_param(x_set, name), _param(y_set, name)])
    if not np.all(values == values[0]):
        raise StructureError(
            f"{TheoremId(tid).value} requires one common {name} across both "
            f"systems; got {sorted(set(values.tolist()))}"
        )


def conditions_hold(tid: TheoremId, x_set: ComponentSet, y_set: ComponentSet) -> bool:
    """Evaluate the theorem's componentwise hypothesis.

    Structural requirements (a common scale for the fixed-beta theorems,
    a common shape for the fixed-alpha corollary) are errors when broken,
    not a False: the theorem simply does not speak about such inputs.
    Strictness follows the text: only the star-order results demand
    strict inequality.
    """
    tid = TheoremId(tid)
    relation, kind, common, conds = _SPECS[tid]
    if len(x_set) != len(y_set):
        raise StructureError(
            f"{tid.value} compares equal-length systems; got "
            f"{len(x_set)} vs {len(y_set)}"
        )
    if common is not None:
        _require_common(tid, common, x_set, y_set)
        if common == _COMMON_BETA and x_set.betas[0] <= 0.0:
            return False  # stated for a fixed positive common beta
        if common == _COMMON_ALPHA and x_set.alphas[0] <= 0.0:
            return False
    for name, direction, strict in conds:
        xv, yv = _param(x_set, name), _param(y_set, name)
        big, small = (xv, yv) if direction > 0 else (yv, xv)
        ok = np.all(big > small) if strict else np.all(big >= small)
        if not ok:
            return False
    return True


def run_case(tid: TheoremId, x_set: ComponentSet, y_set: ComponentSet,
             grid: EvalGrid | None = None,
             tol: TolerancePolicy = DEFAULT_TOLERANCE) -> TheoremCase:
    """Bind the hypothesis to its checker and evaluate both.

    The dispersive binding reads the grid's probability points, and the
    convex binding substitutes a uniform x grid spanning the same range
    when handed a transformed grid; everything else evaluates on the
    grid's x points.
    """
    tid = TheoremId(tid)
    relation, kind, _, _ = _SPECS[tid]
    met = conditions_hold(tid, x_set, y_set)
    if grid is None:
        grid = default_grid()
    verdict = check_relation(
        relation,
        system_dist(kind, x_set),
        system_dist(kind, y_set),
        adapt_grid(relation, grid),
        tol,
    )
    return TheoremCase(
        id=tid,
        x_set=x_set,
        y_set=y_set,
        conditions_met=met,
        claimed_relation=relation,
        claimed_direction="XleY",
        numeric_verdict=verdict,
    )

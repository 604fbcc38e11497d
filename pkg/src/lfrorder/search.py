"""Randomized counterexample search over parameter space.

Mechanizes the construction of counterexamples: sample candidate system
pairs inside a parameter box, project them onto a constraint regime
(componentwise inequalities between the two systems, optionally a shared
scale parameter), and run the target order check on each.  A search is a
deterministic function of (spec, seed); among all violating candidates
the one with the largest violation magnitude is returned, ties resolved
by lowest trial index, so parallel evaluation cannot change the answer.

Sampling uses rejection-plus-repair: a raw uniform draw is repaired into
the regime by componentwise (max, min) reassignment, which keeps cost
linear where pure rejection would accept with probability 2^-n.  The
repair biases the distribution; that is acceptable because the goal is
existence of a violation, not uniformity over the regime.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import DomainError, StructureError
from .orders import (
    DEFAULT_TOLERANCE,
    EvalGrid,
    OrderStatus,
    OrderVerdict,
    RELATIONS,
    TolerancePolicy,
    adapt_grid,
    check_relation,
    default_grid,
    domain_points,
    slack_margin,
)
from .systems import ComponentSet, SystemKind, system_dist
from .theorems import TheoremId, theorem_kind, theorem_relation

__all__ = [
    "REGIME_TOKENS",
    "DEFAULT_PARAM_BOX",
    "SearchSpec",
    "SearchResult",
    "realize_regime",
    "find_violation",
    "regime_for_theorem",
    "audit_theorem",
]

REGIME_TOKENS = ("alpha_ge", "alpha_le", "beta_ge", "beta_le", "beta_common")

# Pragmatic default; nothing suggests where violations are easiest, so the
# box is a knob rather than a constant baked into callers.
DEFAULT_PARAM_BOX: dict[str, tuple[float, float]] = {
    "alpha": (0.01, 10.0),
    "beta": (0.01, 10.0),
}

_PRNG_ID = "numpy-pcg64"


def _validated_box(box: Mapping[str, tuple[float, float]]) -> dict[str, tuple[float, float]]:
    out = {}
    for name in ("alpha", "beta"):
        if name not in box:
            raise DomainError(f"param_box is missing the {name!r} range")
        lo, hi = (float(v) for v in box[name])
        if not (np.isfinite(lo) and np.isfinite(hi) and 0.0 <= lo < hi):
            raise DomainError(f"param_box[{name!r}] needs 0 <= lo < hi, got [{lo}, {hi}]")
        out[name] = (lo, hi)
    return out


@dataclass(frozen=True)
class SearchSpec:
    """What to search for and where."""

    n: int
    relation: str
    system_kind: SystemKind
    regime: tuple[str, ...] = ()
    param_box: Mapping[str, tuple[float, float]] = field(
        default_factory=lambda: dict(DEFAULT_PARAM_BOX)
    )
    budget: int = 1000
    seed: int = 0

    def __post_init__(self):
        if int(self.n) < 1:
            raise DomainError("n must be at least 1")
        if self.relation not in RELATIONS:
            raise DomainError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "system_kind", SystemKind(self.system_kind))
        regime = tuple(self.regime)
        for token in regime:
            if token not in REGIME_TOKENS:
                raise DomainError(
                    f"unknown regime token {token!r}; expected from {REGIME_TOKENS}"
                )
        object.__setattr__(self, "regime", regime)
        object.__setattr__(self, "param_box", _validated_box(self.param_box))
        if int(self.budget) < 1:
            raise DomainError("budget must be at least 1")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "budget", int(self.budget))
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class SearchResult:
    found: bool
    witness_pair: tuple[ComponentSet, ComponentSet] | None
    verdict: OrderVerdict | None
    trials_used: int
    seed: int
    prng: str = _PRNG_ID


def _sample_batch(regime, n, box, rng, budget):
    """Raw uniform draws repaired into the regime.

    Draw order is fixed (x alphas, x betas, y alphas, y betas) so the
    stream consumed is independent of the regime.
    """
    alo, ahi = box["alpha"]
    blo, bhi = box["beta"]
    ax = rng.uniform(alo, ahi, (budget, n))
    bx = rng.uniform(blo, bhi, (budget, n))
    ay = rng.uniform(alo, ahi, (budget, n))
    by = rng.uniform(blo, bhi, (budget, n))

    if "alpha_ge" in regime and "alpha_le" in regime:
        ay = ax.copy()
    elif "alpha_ge" in regime:
        ax, ay = np.maximum(ax, ay), np.minimum(ax, ay)
    elif "alpha_le" in regime:
        ax, ay = np.minimum(ax, ay), np.maximum(ax, ay)

    if "beta_common" in regime:
        bx = np.repeat(bx[:, :1], n, axis=1)
        by = bx.copy()
    elif "beta_ge" in regime and "beta_le" in regime:
        by = bx.copy()
    elif "beta_ge" in regime:
        bx, by = np.maximum(bx, by), np.minimum(bx, by)
    elif "beta_le" in regime:
        bx, by = np.minimum(bx, by), np.maximum(bx, by)

    return ax, bx, ay, by


def regime_satisfied(regime, x_set: ComponentSet, y_set: ComponentSet) -> bool:
    """Does a concrete pair satisfy every constraint in the regime?"""
    ax, bx = x_set.alphas, x_set.betas
    ay, by = y_set.alphas, y_set.betas
    checks = {
        "alpha_ge": np.all(ax >= ay),
        "alpha_le": np.all(ax <= ay),
        "beta_ge": np.all(bx >= by),
        "beta_le": np.all(bx <= by),
        "beta_common": np.all(bx == bx[0]) and np.all(by == bx[0]),
    }
    return all(bool(checks[token]) for token in regime)


def realize_regime(regime, n: int, box: Mapping[str, tuple[float, float]],
                   seed: int) -> tuple[ComponentSet, ComponentSet]:
    """One pair sampled in the box and projected onto the regime."""
    box = _validated_box(box)
    for token in regime:
        if token not in REGIME_TOKENS:
            raise DomainError(f"unknown regime token {token!r}")
    rng = np.random.default_rng(seed)
    ax, bx, ay, by = _sample_batch(tuple(regime), int(n), box, rng, 1)
    x_set = ComponentSet.from_arrays(ax[0], bx[0])
    y_set = ComponentSet.from_arrays(ay[0], by[0])
    if not regime_satisfied(regime, x_set, y_set):
        raise StructureError(f"could not realize regime {tuple(regime)!r} inside the box")
    return x_set, y_set


def find_violation(spec: SearchSpec, grid: EvalGrid | None = None,
                   tol: TolerancePolicy = DEFAULT_TOLERANCE) -> SearchResult:
    """Scan the full budget and return the sharpest violating pair.

    All candidates are evaluated (no early exit) so the maximum-margin
    selection is well defined; ``trials_used`` is the 1-based index of
    the winning trial, or the budget when nothing was found.
    """
    if grid is None:
        grid = default_grid()
    grid = adapt_grid(spec.relation, grid)
    pts = None if spec.relation == "lorenz" else domain_points(spec.relation, grid)

    rng = np.random.default_rng(spec.seed)
    ax, bx, ay, by = _sample_batch(spec.regime, spec.n, spec.param_box, rng, spec.budget)

    best_idx = -1
    best_margin = 0.0
    for i in range(spec.budget):
        violated, margin = slack_margin(
            spec.relation, spec.system_kind,
            ax[i], bx[i], ay[i], by[i], pts, tol,
        )
        if violated and -margin > -best_margin:
            best_idx = i
            best_margin = margin

    if best_idx < 0:
        return SearchResult(False, None, None, spec.budget, spec.seed)

    x_set = ComponentSet.from_arrays(ax[best_idx], bx[best_idx])
    y_set = ComponentSet.from_arrays(ay[best_idx], by[best_idx])
    verdict = check_relation(
        spec.relation,
        system_dist(spec.system_kind, x_set),
        system_dist(spec.system_kind, y_set),
        grid,
        tol,
    )
    if verdict.status is not OrderStatus.VIOLATED:
        raise StructureError(
            "search bookkeeping error: winning candidate did not re-verify"
        )
    return SearchResult(True, (x_set, y_set), verdict, best_idx + 1, spec.seed)


# condition regimes of the seven numbered results, used by the audit
_THEOREM_REGIMES: dict[TheoremId, tuple[str, ...]] = {
    TheoremId.T3_1: ("alpha_ge", "beta_ge"),
    TheoremId.T3_2: ("alpha_ge", "beta_ge"),
    TheoremId.T3_3: ("alpha_ge", "beta_common"),
    TheoremId.T3_4: ("alpha_ge", "beta_ge"),
    TheoremId.T3_5: ("alpha_ge", "beta_common"),
    TheoremId.T3_6: ("alpha_le", "beta_common"),
    TheoremId.T3_7: ("alpha_le", "beta_common"),
}


def regime_for_theorem(tid: TheoremId) -> tuple[str, ...]:
    tid = TheoremId(tid)
    if tid not in _THEOREM_REGIMES:
        raise DomainError(f"no search regime defined for {tid.value}")
    return _THEOREM_REGIMES[tid]


def audit_theorem(tid: TheoremId, n: int = 3,
                  box: Mapping[str, tuple[float, float]] | None = None,
                  budget: int = 10_000, seed: int = 0,
                  grid: EvalGrid | None = None,
                  tol: TolerancePolicy = DEFAULT_TOLERANCE) -> SearchResult:
    """Search for violations inside a theorem's own condition regime.

    A sound theorem yields found=False for any budget; a found witness
    is a DISCREPANT result worth reporting verbatim.
    """
    tid = TheoremId(tid)
    spec = SearchSpec(
        n=n,
        relation=theorem_relation(tid),
        system_kind=theorem_kind(tid),
        regime=regime_for_theorem(tid),
        param_box=dict(box) if box is not None else dict(DEFAULT_PARAM_BOX),
        budget=budget,
        seed=seed,
    )
    return find_violation(spec, grid, tol)

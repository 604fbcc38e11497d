"""Grid-based numeric checkers for stochastic orders between two systems.

Seven relations are supported: the magnitude orders ``st`` (survival
dominance), ``hr`` (hazard dominance) and ``lr`` (monotone density
ratio), and the transform/variability orders ``disp`` (monotone quantile
difference), ``star`` (monotone quantile composition ratio), ``convex``
(convex quantile composition) and ``lorenz`` (dominated normalized tail
quantile integrals).

A verdict here is a *grid decision, not a proof*: ``HOLDS`` means "no
violation found at this resolution and tolerance".  ``VIOLATED`` comes
with witness points and is stable under grid refinement for any
violation that clears the tolerance.  Points that cannot be evaluated
(survival or density below the configured floor, probability resolution
exhausted) contribute ``INCONCLUSIVE`` instead of silently passing.

In every check the first argument plays the "smaller" role: ``check_st(a,
b)`` asks whether ``a`` is stochastically smaller than ``b``, and so on
for the other relations.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from . import _kernels as _k
from .errors import DomainError
from .systems import SystemDist, SystemKind

__all__ = [
    "RELATIONS",
    "GridMode",
    "EvalGrid",
    "default_grid",
    "TolerancePolicy",
    "DEFAULT_TOLERANCE",
    "OrderStatus",
    "Witness",
    "OrderVerdict",
    "MonotoneDirection",
    "MonotoneScan",
    "monotone_scan",
    "check_st",
    "check_hr",
    "check_lr",
    "check_disp",
    "check_star",
    "check_convex",
    "check_lorenz",
    "check_relation",
]

RELATIONS = ("st", "hr", "lr", "disp", "star", "convex", "lorenz")

DEFAULT_GRID_COUNT = 1000
DEFAULT_Y_LO = 0.01
DEFAULT_Y_HI = 0.99

LORENZ_PANELS = 4096
LORENZ_U_HI = 1.0 - 1e-8

# Compositions through a parallel system route through an explicit
# probability; beyond this value the probability axis has no float
# resolution left and the point is marked inconclusive.
_COMPOSE_P_CEILING = 1.0 - 1e-12


# ---------------------------------------------------------------------------
# evaluation grids


class GridMode(str, Enum):
    RAW_X = "raw"
    TRANSFORMED_Y = "transformed"


@dataclass(frozen=True, eq=False)
class EvalGrid:
    """Finite evaluation domain.

    ``points`` always holds the x-domain locations.  A transformed grid
    is generated from probabilities y in (0, 1) via ``x = log(1/(1-y))``,
    which compresses the infinite positive axis into a plottable window;
    the generating y values double as the probability grid for the
    quantile-domain checks.
    """

    mode: GridMode
    points: np.ndarray
    y_points: np.ndarray | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 1 or pts.shape[0] < 3:
            raise DomainError("grid needs at least 3 points")
        if not np.all(np.isfinite(pts)):
            raise DomainError("grid points must be finite")
        if np.any(np.diff(pts) <= 0.0):
            raise DomainError("grid points must be strictly increasing")
        if pts[0] < 0.0:
            raise DomainError("grid points must be nonnegative")
        object.__setattr__(self, "mode", GridMode(self.mode))
        object.__setattr__(self, "points", np.ascontiguousarray(pts))
        if self.y_points is not None:
            y = np.ascontiguousarray(np.asarray(self.y_points, dtype=np.float64))
            if y.shape != pts.shape:
                raise DomainError("y_points must match points in shape")
            if y[0] <= 0.0 or y[-1] >= 1.0:
                raise DomainError("y_points must lie strictly inside (0, 1)")
            object.__setattr__(self, "y_points", y)

    @classmethod
    def raw_x(cls, points) -> "EvalGrid":
        return cls(GridMode.RAW_X, np.asarray(points, dtype=np.float64))

    @classmethod
    def raw_uniform(cls, lo: float, hi: float, count: int) -> "EvalGrid":
        if not lo < hi:
            raise DomainError("need lo < hi for a uniform grid")
        return cls(GridMode.RAW_X, np.linspace(lo, hi, count))

    @classmethod
    def transformed_y(cls, y_lo: float, y_hi: float, count: int) -> "EvalGrid":
        if not (0.0 < y_lo < y_hi < 1.0):
            raise DomainError("need 0 < y_lo < y_hi < 1")
        y = np.linspace(y_lo, y_hi, count)
        return cls(GridMode.TRANSFORMED_Y, -np.log1p(-y), y)

    @property
    def count(self) -> int:
        return int(self.points.shape[0])

    @property
    def probability_points(self) -> np.ndarray:
        """Points usable as probabilities in (0, 1)."""
        if self.y_points is not None:
            return self.y_points
        if self.points[0] > 0.0 and self.points[-1] < 1.0:
            return self.points
        raise DomainError("grid has no probability-domain interpretation")

    def refine(self) -> "EvalGrid":
        """Midpoint-doubled grid (2n - 1 points) retaining the originals."""
        n = 2 * self.count - 1
        if self.mode is GridMode.TRANSFORMED_Y:
            return EvalGrid.transformed_y(self.y_points[0], self.y_points[-1], n)
        return EvalGrid.raw_x(np.linspace(self.points[0], self.points[-1], n))


def default_grid(count: int = DEFAULT_GRID_COUNT) -> EvalGrid:
    """The stock transformed grid: y in [0.01, 0.99], 1000 points."""
    return EvalGrid.transformed_y(DEFAULT_Y_LO, DEFAULT_Y_HI, count)


# ---------------------------------------------------------------------------
# tolerances and verdicts


@dataclass(frozen=True)
class TolerancePolicy:
    """Comparison slack, monotonicity slack and the survival floor below
    which ratio-based quantities are not trusted."""

    eps_compare: float = 1e-9
    eps_monotone: float = 1e-9
    sf_floor: float = 1e-300

    def __post_init__(self):
        for name in ("eps_compare", "eps_monotone", "sf_floor"):
            v = float(getattr(self, name))
            if not (np.isfinite(v) and v > 0.0):
                raise DomainError(f"{name} must be a positive finite real")
            object.__setattr__(self, name, v)


DEFAULT_TOLERANCE = TolerancePolicy()


class OrderStatus(str, Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


class Witness(NamedTuple):
    point: float
    lhs: float
    rhs: float


@dataclass(frozen=True)
class OrderVerdict:
    """Outcome of one numeric order check.

    ``margin`` is the smallest signed slack observed over evaluable grid
    points (nonnegative slack everywhere means the relation held with
    room to spare).  For pointwise relations a witness records (point,
    lhs value, rhs value); for monotone relations it records (right
    endpoint, value there, value at the previous point); for the convex
    check it records (point, curve value, neighbor chord midpoint).
    """

    relation: str
    status: OrderStatus
    witnesses: tuple[Witness, ...]
    margin: float
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.status is OrderStatus.VIOLATED and not self.witnesses:
            raise ValueError("a violated verdict requires witnesses")


# ---------------------------------------------------------------------------
# monotone classification


class MonotoneDirection(Enum):
    NONDECREASING = "nondecreasing"
    NONINCREASING = "nonincreasing"
    NON_MONOTONE = "non-monotone"


class MonotoneScan(NamedTuple):
    direction: MonotoneDirection
    witness: int | None


def monotone_scan(values, eps: float) -> MonotoneScan:
    """Classify a sequence as nondecreasing / nonincreasing / neither.

    Steps within ``eps`` of zero count as ties and ties resolve toward
    nondecreasing (the order definitions use weak inequalities).  For a
    non-monotone sequence the witness is the index of the first value
    breaking the majority direction.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] < 2:
        raise DomainError("need at least two values to scan")
    if not np.all(np.isfinite(v)):
        raise DomainError("values must be finite")
    if not (np.isfinite(eps) and eps >= 0.0):
        raise DomainError("eps must be a nonnegative real")
    steps = np.diff(v)
    decreases = steps < -eps
    increases = steps > eps
    if not decreases.any():
        return MonotoneScan(MonotoneDirection.NONDECREASING, None)
    if not increases.any():
        return MonotoneScan(MonotoneDirection.NONINCREASING, None)
    if increases.sum() >= decreases.sum():
        offending = decreases
    else:
        offending = increases
    return MonotoneScan(MonotoneDirection.NON_MONOTONE, int(np.argmax(offending)) + 1)


# ---------------------------------------------------------------------------
# slack engines
#
# Each engine reduces one relation on one grid to a signed slack array:
# the relation holds at tolerance eps iff slack >= -eps at every
# evaluable point.  Checkers and the counterexample search share these,
# so a margin reported by the search is bitwise the margin the checker
# reproduces.


@dataclass
class _SlackProfile:
    points: np.ndarray
    slack: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    bad: np.ndarray
    notes: tuple[str, ...] = ()


def _sum(a: np.ndarray) -> float:
    return float(np.sum(a))


def _sf_grid(kind, alphas, betas, x):
    if kind is SystemKind.SERIES:
        return _k.sf_ab(_sum(alphas), _sum(betas), x)
    return _k.parallel_sf(alphas, betas, x)


def _pdf_grid(kind, alphas, betas, x):
    if kind is SystemKind.SERIES:
        return _k.pdf_ab(_sum(alphas), _sum(betas), x)
    return _k.parallel_pdf(alphas, betas, x)


def _quantile_grid(kind, alphas, betas, u):
    if kind is SystemKind.SERIES:
        return _k.quantile_ab(_sum(alphas), _sum(betas), u)
    return _k.parallel_quantile(alphas, betas, u)


def _profile_st(ka, aal, abe, kb, bal, bbe, x, tol):
    sf_a = _sf_grid(ka, aal, abe, x)
    sf_b = _sf_grid(kb, bal, bbe, x)
    return _SlackProfile(x, sf_b - sf_a, sf_a, sf_b, np.zeros(x.shape, dtype=bool))


def _hrf_guarded(kind, alphas, betas, x, floor):
    """(hazard values, unevaluable mask)."""
    if kind is SystemKind.SERIES:
        return _k.hrf_ab(_sum(alphas), _sum(betas), x), np.zeros(x.shape, dtype=bool)
    sf = _k.parallel_sf(alphas, betas, x)
    dens = _k.parallel_pdf(alphas, betas, x)
    bad = sf < floor
    with np.errstate(divide="ignore", invalid="ignore"):
        h = dens / sf
    bad |= ~np.isfinite(h)
    return h, bad


def _profile_hr(ka, aal, abe, kb, bal, bbe, x, tol):
    h_a, bad_a = _hrf_guarded(ka, aal, abe, x, tol.sf_floor)
    h_b, bad_b = _hrf_guarded(kb, bal, bbe, x, tol.sf_floor)
    return _SlackProfile(x, h_a - h_b, h_a, h_b, bad_a | bad_b)


def _step_profile(x, values, bad_points, notes=()):
    """Consecutive-difference slack over a sequence of point values."""
    slack = np.diff(values)
    bad = bad_points[1:] | bad_points[:-1] | ~np.isfinite(slack)
    return _SlackProfile(x[1:], slack, values[1:], values[:-1], bad, notes)


def _profile_lr(ka, aal, abe, kb, bal, bbe, x, tol):
    pdf_a = _pdf_grid(ka, aal, abe, x)
    pdf_b = _pdf_grid(kb, bal, bbe, x)
    bad_pt = pdf_a < tol.sf_floor
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ratio = pdf_b / pdf_a
    bad_pt |= ~np.isfinite(ratio)
    return _step_profile(x, ratio, bad_pt)


def _profile_disp(ka, aal, abe, kb, bal, bbe, p, tol):
    q_a = _quantile_grid(ka, aal, abe, p)
    q_b = _quantile_grid(kb, bal, bbe, p)
    d = q_b - q_a
    notes = ()
    negative = int(np.sum(d < -tol.eps_compare))
    positive = int(np.sum(d > tol.eps_compare))
    if negative and positive:
        notes = (f"quantile difference changes sign ({positive} positive, "
                 f"{negative} negative grid points)",)
    elif negative:
        notes = (f"quantile difference is negative at {negative} of "
                 f"{d.shape[0]} grid points",)
    return _step_profile(p, d, np.zeros(p.shape, dtype=bool), notes)


def _compose_quantile(ka, aal, abe, kb, bal, bbe, x):
    """quantile_B(cdf_A(x)) and an unevaluable-point mask.

    When B is a series system the composition collapses to a closed form
    in A's cumulative hazard, exact even where cdf_A rounds to 1.  A
    parallel B must route through an explicit probability, which runs
    out of resolution near 1.
    """
    if ka is SystemKind.SERIES:
        neg_log_sf = _k.cum_hazard(_sum(aal), _sum(abe), x)
        bad = np.zeros(x.shape, dtype=bool)
    else:
        sf_a = _k.parallel_sf(aal, abe, x)
        bad = sf_a <= 0.0
        with np.errstate(divide="ignore"):
            neg_log_sf = -np.log(sf_a)
    if kb is SystemKind.SERIES:
        comp = _k.quantile_from_cum_hazard(_sum(bal), _sum(bbe), neg_log_sf)
        return comp, bad
    u = -np.expm1(-neg_log_sf)
    bad = bad | (u >= _COMPOSE_P_CEILING)
    comp = np.zeros(x.shape)
    if (~bad).any():
        comp[~bad] = _k.parallel_quantile(bal, bbe, u[~bad])
    return comp, bad


def quantile_composition(a: SystemDist, b: SystemDist, x) -> np.ndarray:
    """quantile_b(cdf_a(x)) on an array of x values, nan where the
    composition runs out of probability resolution (parallel b only)."""
    x = np.ascontiguousarray(np.asarray(x, dtype=np.float64))
    ka, aal, abe = a.kind, a.components.alphas, a.components.betas
    kb, bal, bbe = b.kind, b.components.alphas, b.components.betas
    comp, bad = _compose_quantile(ka, aal, abe, kb, bal, bbe, x)
    if bad.any():
        comp = comp.copy()
        comp[bad] = np.nan
    return comp


def _profile_star(ka, aal, abe, kb, bal, bbe, x, tol):
    comp, bad_pt = _compose_quantile(ka, aal, abe, kb, bal, bbe, x)
    ratio = comp / x
    return _step_profile(x, ratio, bad_pt)


def _profile_convex(ka, aal, abe, kb, bal, bbe, x, tol):
    comp, bad_pt = _compose_quantile(ka, aal, abe, kb, bal, bbe, x)
    slack = comp[2:] - 2.0 * comp[1:-1] + comp[:-2]
    chord = 0.5 * (comp[2:] + comp[:-2])
    bad = bad_pt[2:] | bad_pt[1:-1] | bad_pt[:-2] | ~np.isfinite(slack)
    return _SlackProfile(x[1:-1], slack, comp[1:-1], chord, bad)


def _lorenz_tail(kind, alphas, betas):
    """Normalized tail quantile integral L(t) = int_t^1 q / int_0^1 q.

    Composite Simpson with LORENZ_PANELS panels, truncated at
    u = 1 - 1e-8, taken in the coordinate s = -log(1-u): the raw-u
    integrand has a log-type singularity at 1 that uniform panels
    resolve to only ~1e-4, while q(1-e^-s) * e^-s is smooth and
    integrates to ~1e-9.  Returns (t nodes in [0, 1), L values).
    """
    s_hi = -np.log1p(-LORENZ_U_HI)
    s = np.linspace(0.0, s_hi, LORENZ_PANELS + 1)
    if kind is SystemKind.SERIES:
        q = _k.quantile_from_cum_hazard(_sum(alphas), _sum(betas), s)
    else:
        q = _k.parallel_quantile(alphas, betas, -np.expm1(-s))
    g = q * np.exp(-s)
    h = s_hi / LORENZ_PANELS
    pair = (h / 3.0) * (g[0:-2:2] + 4.0 * g[1::2] + g[2::2])
    cum = np.concatenate(([0.0], np.cumsum(pair)))
    total = cum[-1]
    return -np.expm1(-s[::2]), (total - cum) / total


def _profile_lorenz(ka, aal, abe, kb, bal, bbe, _x, tol):
    t, l_a = _lorenz_tail(ka, aal, abe)
    _, l_b = _lorenz_tail(kb, bal, bbe)
    slack = l_b - l_a
    bad = ~(np.isfinite(l_a) & np.isfinite(l_b))
    return _SlackProfile(t, slack, l_a, l_b, bad)


_ENGINES = {
    "st": _profile_st,
    "hr": _profile_hr,
    "lr": _profile_lr,
    "disp": _profile_disp,
    "star": _profile_star,
    "convex": _profile_convex,
    "lorenz": _profile_lorenz,
}

_MONOTONE = frozenset({"lr", "disp", "star", "convex"})


def _eps_for(relation: str, tol: TolerancePolicy) -> float:
    return tol.eps_monotone if relation in _MONOTONE else tol.eps_compare


def adapt_grid(relation: str, grid: EvalGrid) -> EvalGrid:
    """Substitute a uniform x grid over the same span for the convex
    check, whose second differences need constant spacing; all other
    relations take the grid as given."""
    if relation != "convex" or grid.mode is GridMode.RAW_X:
        return grid
    return EvalGrid.raw_uniform(grid.points[0], grid.points[-1], grid.count)


def domain_points(relation: str, grid: EvalGrid) -> np.ndarray:
    """The grid axis a relation is evaluated on (x points, or the
    probability points for the dispersive check), validated."""
    return _domain_points(relation, grid)


def _domain_points(relation: str, grid: EvalGrid) -> np.ndarray:
    if relation == "disp":
        return grid.probability_points
    x = grid.points
    if relation == "star" and x[0] <= 0.0:
        raise DomainError("the star check needs strictly positive grid points")
    if relation == "convex":
        d = np.diff(x)
        if not np.allclose(d, d[0], rtol=1e-9, atol=0.0):
            raise DomainError(
                "the convex check takes second differences and needs a "
                "uniformly spaced grid"
            )
    return x


def _profile_for(relation, ka, aal, abe, kb, bal, bbe, pts, tol) -> _SlackProfile:
    return _ENGINES[relation](ka, aal, abe, kb, bal, bbe, pts, tol)


def slack_margin(relation, kind, a_alphas, a_betas, b_alphas, b_betas,
                 pts, tol) -> tuple[bool, float]:
    """Fast path for the counterexample search: (violated?, margin).

    Operates on raw parameter arrays for a same-kind pair; ``pts`` must
    already be the relation's domain points (see ``_domain_points``).
    Margins agree bitwise with the full checkers because the same slack
    engines run underneath.
    """
    prof = _profile_for(relation, kind, a_alphas, a_betas,
                        kind, b_alphas, b_betas, pts, tol)
    good = ~prof.bad
    if not good.any():
        return False, float("nan")
    margin = float(np.min(prof.slack[good]))
    return margin < -_eps_for(relation, tol), margin


def _assemble(relation: str, prof: _SlackProfile, eps: float) -> OrderVerdict:
    good = ~prof.bad
    violating = good & (prof.slack < -eps)
    if good.any():
        margin = float(np.min(prof.slack[good]))
    else:
        margin = float("nan")
    if violating.any():
        idx = np.flatnonzero(violating)
        witnesses = tuple(
            Witness(float(prof.points[i]), float(prof.lhs[i]), float(prof.rhs[i]))
            for i in idx
        )
        return OrderVerdict(relation, OrderStatus.VIOLATED, witnesses, margin, prof.notes)
    if prof.bad.any():
        notes = prof.notes + (
            f"{int(prof.bad.sum())} grid points were not evaluable",
        )
        return OrderVerdict(relation, OrderStatus.INCONCLUSIVE, (), margin, notes)
    return OrderVerdict(relation, OrderStatus.HOLDS, (), margin, prof.notes)


def _args_of(dist: SystemDist):
    cs = dist.components
    return dist.kind, cs.alphas, cs.betas


def _check(relation: str, a: SystemDist, b: SystemDist, grid: EvalGrid | None,
           tol: TolerancePolicy) -> OrderVerdict:
    if not isinstance(a, SystemDist) or not isinstance(b, SystemDist):
        raise DomainError("checkers compare SystemDist objects")
    if relation == "lorenz":
        pts = None
    else:
        if not isinstance(grid, EvalGrid):
            raise DomainError("checkers need an EvalGrid")
        pts = _domain_points(relation, grid)
    ka, aal, abe = _args_of(a)
    kb, bal, bbe = _args_of(b)
    prof = _profile_for(relation, ka, aal, abe, kb, bal, bbe, pts, tol)
    return _assemble(relation, prof, _eps_for(relation, tol))


def check_st(a: SystemDist, b: SystemDist, grid: EvalGrid,
             tol: TolerancePolicy = DEFAULT_TOLERANCE) -> OrderVerdict:
    """Does sf_a <= sf_b hold pointwise on the grid (usual stochastic order)?"""
    return _check("st", a, b, grid, tol)


def check_hr(a: SystemDist, b: SystemDist, grid: EvalGrid,
             tol: TolerancePolicy = DEFAULT_TOLERANCE) -> OrderVerdict:
    """Does hazard_a >= hazard_b hold pointwise (hazard rate order)?

    Parallel systems have no closed hazard; pdf/sf is used with the
    survival floor guarding the deep tail.
    """
    return _check("hr", a, b, grid, tol)


def check_lr(a: SystemDist, b: SystemDist, grid: EvalGrid,
             tol: TolerancePolicy = DEFAULT_TOLERANCE) -> OrderVerdict:
    """Is the density ratio pdf_b/pdf_a nondecreasing along the grid?"""
    return _check("lr", a, b, grid, tol)


def check_disp(a: SystemDist, b: SystemDist, p_grid: EvalGrid,
               tol: TolerancePolicy = DEFAULT_TOLERANCE) -> OrderVerdict:
    """Is quantile_b(p) - quantile_a(p) nondecreasing (dispersive order)?

    Sign changes of the difference are recorded in the verdict notes;
    the verdict itself is about monotonicity.
    """
    return _check("disp", a, b, p_grid, tol)


def check_star(a: SystemDist, b: SystemDist, x_grid: EvalGrid,
               tol: TolerancePolicy = DEFAULT_TOLERANCE) -> OrderVerdict:
    """Is quantile_b(cdf_a(x))/x nondecreasing (star order)?"""
    return _check("star", a, b, x_grid, tol)


def check_convex(a: SystemDist, b: SystemDist, x_grid: EvalGrid,
                 tol: TolerancePolicy = DEFAULT_TOLERANCE) -> OrderVerdict:
    """Are second differences of quantile_b(cdf_a(x)) nonnegative
    (convex transform order)?  Needs a uniformly spaced x grid."""
    return _check("convex", a, b, x_grid, tol)


def check_lorenz(a: SystemDist, b: SystemDist,
                 tol: TolerancePolicy = DEFAULT_TOLERANCE) -> OrderVerdict:
    """Does the normalized tail quantile integral of ``a`` stay below
    that of ``b`` for every truncation point (Lorenz order)?"""
    return _check("lorenz", a, b, None, tol)


_CHECKERS = {
    "st": check_st,
    "hr": check_hr,
    "lr": check_lr,
    "disp": check_disp,
    "star": check_star,
    "convex": check_convex,
}


def check_relation(relation: str, a: SystemDist, b: SystemDist,
                   grid: EvalGrid | None = None,
                   tol: TolerancePolicy = DEFAULT_TOLERANCE) -> OrderVerdict:
    """Dispatch by relation name; ``lorenz`` ignores the grid."""
    if relation == "lorenz":
        return check_lorenz(a, b, tol)
    if relation not in _CHECKERS:
        raise DomainError(f"unknown relation {relation!r}; expected one of {RELATIONS}")
    if grid is None:
        grid = default_grid()
    return _CHECKERS[relation](a, b, grid, tol)

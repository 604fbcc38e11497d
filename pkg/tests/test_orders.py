"""Order checkers: worked comparisons, tolerance semantics, grid behavior."""

import math

import numpy as np
import pytest

from lfrorder import (
    DomainError,
    EvalGrid,
    GridMode,
    MonotoneDirection,
    OrderStatus,
    TolerancePolicy,
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
    system_dist,
)
from lfrorder.orders import _lorenz_tail

from conftest import cs, pair, random_component_set

TOL = TolerancePolicy()


class TestEvalGrid:
    def test_default_grid_shape(self):
        g = default_grid()
        assert g.count == 1000
        assert g.mode is GridMode.TRANSFORMED_Y
        assert g.y_points[0] == pytest.approx(0.01)
        assert g.y_points[-1] == pytest.approx(0.99)
        np.testing.assert_allclose(g.points, -np.log1p(-g.y_points), rtol=1e-15)

    def test_needs_three_points(self):
        with pytest.raises(DomainError):
            EvalGrid.raw_x([1.0, 2.0])

    def test_strictly_increasing(self):
        with pytest.raises(DomainError):
            EvalGrid.raw_x([1.0, 1.0, 2.0])

    def test_transformed_bounds_validated(self):
        with pytest.raises(DomainError):
            EvalGrid.transformed_y(0.0, 0.9, 10)
        with pytest.raises(DomainError):
            EvalGrid.transformed_y(0.5, 0.2, 10)

    def test_refine_keeps_endpoints_and_doubles(self):
        g = default_grid(101)
        r = g.refine()
        assert r.count == 201
        assert r.points[0] == pytest.approx(g.points[0], rel=1e-12)
        assert r.points[-1] == pytest.approx(g.points[-1], rel=1e-12)

    def test_probability_points(self):
        g = default_grid(11)
        assert np.all((g.probability_points > 0) & (g.probability_points < 1))
        raw = EvalGrid.raw_x(np.linspace(1.0, 5.0, 11))
        with pytest.raises(DomainError):
            raw.probability_points


class TestMonotoneScan:
    def test_increasing(self):
        assert monotone_scan([1, 2, 3], 1e-9).direction is MonotoneDirection.NONDECREASING

    def test_non_monotone_witness(self):
        res = monotone_scan([1, 2, 1.5], 1e-9)
        assert res.direction is MonotoneDirection.NON_MONOTONE
        assert res.witness == 2

    def test_ties_resolve_to_nondecreasing(self):
        res = monotone_scan([5, 5, 5], 1e-9)
        assert res.direction is MonotoneDirection.NONDECREASING
        assert res.witness is None

    def test_decreasing(self):
        assert monotone_scan([3, 2, 1], 1e-9).direction is MonotoneDirection.NONINCREASING

    def test_rejects_nonfinite(self):
        with pytest.raises(DomainError):
            monotone_scan([1.0, float("nan")], 1e-9)


class TestStOrder:
    def test_reflexive(self, grid):
        a, _ = pair("hr_example")
        v = check_st(a, a, grid)
        assert v.status is OrderStatus.HOLDS
        assert v.margin == 0.0

    def test_dominated_pair_holds(self, grid):
        a, b = pair("hr_example")
        assert check_st(a, b, grid).status is OrderStatus.HOLDS

    def test_crossing_pair_violated(self, grid):
        # survival difference changes sign; locate the crossing by
        # bisection on sf_b - sf_a and confirm it sits inside the window
        a = system_dist("series", cs([1.0], [1.0]))
        b = system_dist("series", cs([2.0], [0.1]))
        lo, hi = 0.02, 4.0
        f = lambda x: float(b.sf(np.array([x]))[0] - a.sf(np.array([x]))[0])
        assert f(lo) < 0 < f(hi)
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if f(mid) < 0:
                lo = mid
            else:
                hi = mid
        crossing = 0.5 * (lo + hi)
        assert grid.points[0] < crossing < grid.points[-1]
        v = check_st(a, b, grid)
        assert v.status is OrderStatus.VIOLATED
        assert v.witnesses and all(w.point < crossing + 1e-6 for w in v.witnesses)

    def test_antisymmetry_at_tolerance(self, grid):
        a, _ = pair("hr_example")
        loose = TolerancePolicy(eps_compare=1e-3, eps_monotone=1e-3)
        b = system_dist("series", cs((0.02, 0.04, 0.06), (0.2, 0.5, 0.70000001)))
        if (check_st(a, b, grid, loose).status is OrderStatus.HOLDS
                and check_st(b, a, grid, loose).status is OrderStatus.HOLDS):
            x = grid.points
            gap = np.abs(np.asarray(a.sf(x)) - np.asarray(b.sf(x)))
            assert gap.max() <= 2 * loose.eps_compare


class TestHrOrder:
    def test_example_holds(self, grid):
        a, b = pair("hr_example")
        v = check_hr(a, b, grid)
        assert v.status is OrderStatus.HOLDS
        assert v.margin >= 0.03

    def test_counterexample_violated(self, grid):
        a, b = pair("hr_counter")
        v = check_hr(a, b, grid)
        assert v.status is OrderStatus.VIOLATED
        # hazard gap is (sum alpha diff) + (sum beta diff) x = -0.03 + 0.3x,
        # so only points left of x = 0.1 can witness
        assert all(w.point < 0.1 for w in v.witnesses)
        assert v.margin == pytest.approx(-0.03 + 0.3 * grid.points[0], abs=1e-12)

    def test_parallel_tail_inconclusive(self, grid):
        # an absurdly high survival floor forces unevaluable points
        a, _ = pair("par_example", "parallel")
        strict = TolerancePolicy(sf_floor=0.5)
        v = check_hr(a, a, grid, strict)
        assert v.status is OrderStatus.INCONCLUSIVE
        assert any("not evaluable" in note for note in v.notes)


class TestLrOrder:
    def test_example_holds(self, grid):
        a, b = pair("lr_example")
        assert check_lr(a, b, grid).status is OrderStatus.HOLDS

    def test_reflexive_constant_ratio(self, grid):
        a, _ = pair("lr_example")
        v = check_lr(a, a, grid)
        assert v.status is OrderStatus.HOLDS
        assert v.margin == 0.0

    def test_counterexample_violated(self, grid):
        a, b = pair("lr_counter")
        assert check_lr(a, b, grid).status is OrderStatus.VIOLATED

    def test_vanishing_density_inconclusive(self, grid):
        # density ratio overflows once the x-system density underflows
        a = system_dist("series", cs([200.0], [1.0]))
        b = system_dist("series", cs([0.5], [1.0]))
        v = check_lr(a, b, grid)
        assert v.status in (OrderStatus.INCONCLUSIVE, OrderStatus.HOLDS)


class TestDispOrder:
    def test_example_holds(self, grid):
        a, b = pair("disp_example")
        assert check_disp(a, b, grid).status is OrderStatus.HOLDS

    def test_reflexive(self, grid):
        a, _ = pair("disp_example")
        v = check_disp(a, a, grid)
        assert v.status is OrderStatus.HOLDS
        assert v.margin == 0.0

    def test_counterexample_violated_and_sign_noted(self, grid):
        a, b = pair("disp_counter")
        v = check_disp(a, b, grid)
        assert v.status is OrderStatus.VIOLATED
        assert any("negative" in note for note in v.notes)


class TestStarOrder:
    def test_example_holds(self, xgrid):
        a, b = pair("star_example")
        assert check_star(a, b, xgrid).status is OrderStatus.HOLDS

    def test_reflexive_unit_ratio(self, xgrid):
        a, _ = pair("star_example")
        v = check_star(a, a, xgrid)
        assert v.status is OrderStatus.HOLDS
        assert abs(v.margin) < 1e-12

    def test_counterexample_violated(self, xgrid):
        a, b = pair("star_counter")
        assert check_star(a, b, xgrid).status is OrderStatus.VIOLATED

    def test_requires_positive_grid(self):
        a, b = pair("star_example")
        g = EvalGrid.raw_x(np.linspace(0.0, 2.0, 10))
        with pytest.raises(DomainError):
            check_star(a, b, g)


class TestConvexOrder:
    def test_example_holds(self, xgrid):
        a, b = pair("convex_example")
        assert check_convex(a, b, xgrid).status is OrderStatus.HOLDS

    def test_reflexive_identity_composition(self, xgrid):
        a, _ = pair("convex_example")
        v = check_convex(a, a, xgrid)
        assert v.status is OrderStatus.HOLDS
        assert abs(v.margin) < 1e-12

    def test_counterexample_violated(self, xgrid):
        a, b = pair("convex_counter")
        assert check_convex(a, b, xgrid).status is OrderStatus.VIOLATED

    def test_rejects_nonuniform_grid(self, grid):
        a, b = pair("convex_example")
        with pytest.raises(DomainError):
            check_convex(a, b, grid)  # transformed grid is not uniform in x


class TestLorenzOrder:
    def test_reflexive(self):
        a, _ = pair("star_example")
        v = check_lorenz(a, a)
        assert v.status is OrderStatus.HOLDS
        assert v.margin == 0.0

    def test_star_example_holds(self):
        a, b = pair("star_example")
        assert check_lorenz(a, b).status is OrderStatus.HOLDS

    def test_exponentials_are_lorenz_equivalent(self):
        # closed form: the normalized tail integral of any exponential is
        # (1-t)(1 - log(1-t)), independent of the rate
        a = system_dist("series", cs([1.0], [0.0]))
        b = system_dist("series", cs([3.7], [0.0]))
        for lhs, rhs in ((a, b), (b, a)):
            v = check_lorenz(lhs, rhs)
            assert v.status is OrderStatus.HOLDS
            assert abs(v.margin) < 1e-12

    def test_tail_curve_matches_closed_form(self):
        # symbolic oracle for an exponential quantile: the normalized
        # tail integral is (1-t)(1 - log(1-t))
        t, curve = _lorenz_tail(system_dist("series", cs([2.0], [0.0])).kind,
                                np.array([2.0]), np.array([0.0]))
        expected = (1 - t) * (1 - np.log1p(-t))
        # the floor is the mass beyond the 1 - 1e-8 truncation point,
        # about 2e-7 for an exponential; discretization error is ~1e-10
        np.testing.assert_allclose(curve, expected, atol=5e-7)


class TestImplicationChains:
    """Verified on structured random pairs; any counterexample fails."""

    def _verdicts(self, x_set, y_set, grid, xgrid):
        a = system_dist("series", x_set)
        b = system_dist("series", y_set)
        return {
            "st": check_st(a, b, grid).status,
            "hr": check_hr(a, b, grid).status,
            "lr": check_lr(a, b, grid).status,
            "disp": check_disp(a, b, grid).status,
            "star": check_star(a, b, xgrid).status,
            "convex": check_convex(a, b, xgrid).status,
            "lorenz": check_lorenz(a, b).status,
        }

    def test_chains_on_random_pairs(self, grid, xgrid):
        rng = np.random.default_rng(2024)
        holds = OrderStatus.HOLDS
        seen_lr = seen_convex = 0
        for i in range(60):
            n = int(rng.integers(1, 4))
            if i % 2 == 0:
                beta = rng.uniform(0.05, 2.0)
                ya = rng.uniform(0.05, 3.0, n)
                xa = ya + rng.uniform(0.0, 2.0, n)
                x_set = cs(xa, np.full(n, beta))
                y_set = cs(ya, np.full(n, beta))
            else:
                x_set = random_component_set(rng, n)
                y_set = random_component_set(rng, n)
            v = self._verdicts(x_set, y_set, grid, xgrid)
            if v["lr"] is holds:
                seen_lr += 1
                assert v["hr"] is holds
            if v["hr"] is holds:
                assert v["st"] is holds
            if v["convex"] is holds:
                seen_convex += 1
                assert v["star"] is holds
            if v["star"] is holds:
                assert v["lorenz"] is holds
        assert seen_lr >= 10 and seen_convex >= 5


class TestRefinementStability:
    def test_violations_survive_grid_doubling(self, grid, xgrid):
        cases = [
            ("st", pair("hr_counter"), grid),
            ("hr", pair("hr_counter"), grid),
            ("lr", pair("lr_counter"), grid),
            ("disp", pair("disp_counter"), grid),
            ("star", pair("star_counter"), xgrid),
            ("convex", pair("convex_counter"), xgrid),
        ]
        for relation, (a, b), g in cases:
            assert check_relation(relation, a, b, g).status is OrderStatus.VIOLATED
            assert check_relation(relation, a, b, g.refine()).status is OrderStatus.VIOLATED


def test_check_relation_dispatch(grid):
    a, b = pair("hr_example")
    assert check_relation("st", a, b, grid).relation == "st"
    with pytest.raises(DomainError):
        check_relation("mrl", a, b, grid)


def test_tolerance_policy_validation():
    with pytest.raises(DomainError):
        TolerancePolicy(eps_compare=0.0)
    with pytest.raises(DomainError):
        TolerancePolicy(sf_floor=-1.0)

"""Hypothesis predicates, checker bindings and the discrepancy flag."""

import numpy as np
import pytest

from lfrorder import (
    OrderStatus,
    StructureError,
    TheoremId,
    conditions_hold,
    run_case,
)
from lfrorder.theorems import theorem_kind, theorem_relation
from lfrorder.systems import SystemKind

from conftest import PAPER_SETS, cs


def sets(key):
    (xa, xb), (ya, yb) = PAPER_SETS[key]
    return cs(xa, xb), cs(ya, yb)


class TestConditions:
    def test_hr_example_satisfies_t3_2(self):
        x, y = sets("hr_example")
        assert conditions_hold(TheoremId.T3_2, x, y)

    def test_identical_sets_satisfy_weak_inequalities(self):
        x, _ = sets("hr_example")
        assert conditions_hold(TheoremId.T3_1, x, x)

    def test_strict_star_condition_fails_on_reversed_pair(self):
        x, y = sets("star_counter")  # x alphas strictly above y alphas
        assert not conditions_hold(TheoremId.T3_6, x, y)

    def test_strict_star_condition_fails_on_equality(self):
        x, _ = sets("star_example")
        assert not conditions_hold(TheoremId.T3_6, x, x)

    def test_convex_condition_weak(self):
        x, _ = sets("convex_example")
        assert conditions_hold(TheoremId.T3_7, x, x)

    def test_common_beta_enforced_structurally(self):
        x, _ = sets("hr_example")  # heterogeneous betas
        with pytest.raises(StructureError, match="T3_3"):
            conditions_hold(TheoremId.T3_3, x, x)

    def test_common_alpha_enforced_for_fixed_alpha_corollary(self):
        x, y = sets("hr_example")
        with pytest.raises(StructureError, match="C3_2a"):
            conditions_hold(TheoremId.C3_2A, x, y)

    def test_length_mismatch_rejected(self):
        x, _ = sets("hr_example")
        with pytest.raises(StructureError):
            conditions_hold(TheoremId.T3_1, x, cs([1.0], [1.0]))

    def test_zero_common_beta_fails_conditions(self):
        x = cs((1.0, 2.0), (0.0, 0.0))
        y = cs((0.5, 1.0), (0.0, 0.0))
        assert not conditions_hold(TheoremId.T3_3, x, y)

    def test_fixed_alpha_corollary_reduces_to_beta_comparison(self):
        # with one shared alpha the predicate must equal the plain
        # componentwise beta comparison
        rng = np.random.default_rng(8)
        for _ in range(20):
            n = int(rng.integers(1, 5))
            alpha = float(rng.uniform(0.1, 2.0))
            bx, by = rng.uniform(0.01, 2.0, n), rng.uniform(0.01, 2.0, n)
            x = cs(np.full(n, alpha), bx)
            y = cs(np.full(n, alpha), by)
            assert conditions_hold(TheoremId.C3_2A, x, y) == bool(np.all(bx >= by))
            assert conditions_hold(TheoremId.C3_2A, x, y) == conditions_hold(
                TheoremId.T3_2, x, y)

    def test_condition_monotone_under_alpha_increase(self):
        # raising any x-side alpha cannot break a satisfied >= hypothesis
        rng = np.random.default_rng(9)
        for tid in (TheoremId.T3_1, TheoremId.T3_2, TheoremId.T3_4):
            ya = rng.uniform(0.1, 1.0, 3)
            yb = rng.uniform(0.1, 1.0, 3)
            xa = ya + rng.uniform(0.0, 1.0, 3)
            xb = yb + rng.uniform(0.0, 1.0, 3)
            assert conditions_hold(tid, cs(xa, xb), cs(ya, yb))
            bumped = xa.copy()
            bumped[int(rng.integers(0, 3))] += rng.uniform(0.1, 2.0)
            assert conditions_hold(tid, cs(bumped, xb), cs(ya, yb))


class TestBindings:
    def test_relations_and_kinds(self):
        assert theorem_relation(TheoremId.T3_1) == "st"
        assert theorem_relation(TheoremId.T3_3) == "lr"
        assert theorem_relation(TheoremId.C3_6A) == "lorenz"
        assert theorem_kind(TheoremId.T3_4) is SystemKind.PARALLEL
        assert theorem_kind(TheoremId.T3_5) is SystemKind.SERIES


class TestRunCase:
    def test_lr_example(self, grid):
        x, y = sets("lr_example")
        out = run_case(TheoremId.T3_3, x, y, grid)
        assert out.conditions_met
        assert out.numeric_verdict.status is OrderStatus.HOLDS
        assert not out.discrepant

    def test_identical_sets_margin_zero(self, grid):
        x, _ = sets("hr_example")
        out = run_case(TheoremId.T3_1, x, x, grid)
        assert out.conditions_met
        assert out.numeric_verdict.status is OrderStatus.HOLDS
        assert out.numeric_verdict.margin == 0.0

    def test_disp_counterexample(self, grid):
        x, y = sets("disp_counter")
        out = run_case(TheoremId.T3_5, x, y, grid)
        assert not out.conditions_met
        assert out.numeric_verdict.status is OrderStatus.VIOLATED
        assert not out.discrepant  # hypothesis unmet, so no discrepancy

    def test_convex_case_adapts_transformed_grid(self, grid):
        x, y = sets("convex_example")
        out = run_case(TheoremId.T3_7, x, y, grid)
        assert out.numeric_verdict.status is OrderStatus.HOLDS

    def test_lorenz_corollary_follows_star(self, grid):
        # whenever the star case holds, the companion normalized-tail
        # case on the same pair must hold too
        x, y = sets("star_example")
        star = run_case(TheoremId.T3_6, x, y, grid)
        lorenz = run_case(TheoremId.C3_6A, x, y, grid)
        assert star.numeric_verdict.status is OrderStatus.HOLDS
        assert lorenz.numeric_verdict.status is OrderStatus.HOLDS
        assert lorenz.conditions_met == star.conditions_met

    def test_discrepant_flag_faithful(self, grid):
        # a true hypothesis with a violated verdict must be flagged; the
        # reversed hazard pair is a convenient verdict donor
        x, y = sets("hr_example")
        honest = run_case(TheoremId.T3_2, x, y, grid)
        assert not honest.discrepant
        from dataclasses import replace

        bad = run_case(TheoremId.T3_2, y, x, grid)  # violated, conditions false
        forged = replace(bad, conditions_met=True)
        assert forged.discrepant

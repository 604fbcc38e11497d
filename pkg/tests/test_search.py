"""Counterexample search: regime sampling, determinism, soundness."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lfrorder import (
    DomainError,
    OrderStatus,
    SearchSpec,
    TheoremId,
    audit_theorem,
    check_lr,
    default_grid,
    find_violation,
    realize_regime,
    regime_for_theorem,
    system_dist,
)
from lfrorder.search import REGIME_TOKENS, regime_satisfied

from conftest import cs

BOX_UNIT = {"alpha": (0.01, 1.0), "beta": (0.01, 1.0)}


class TestSpecValidation:
    def test_bad_box_rejected(self):
        with pytest.raises(DomainError):
            SearchSpec(n=3, relation="st", system_kind="series",
                       param_box={"alpha": (1.0, 1.0), "beta": (0.01, 1.0)})

    def test_unknown_regime_token(self):
        with pytest.raises(DomainError):
            SearchSpec(n=3, relation="st", system_kind="series",
                       regime=("alpha_gt",))

    def test_unknown_relation(self):
        with pytest.raises(DomainError):
            SearchSpec(n=3, relation="mrl", system_kind="series")


class TestRealizeRegime:
    def test_dominance(self):
        x, y = realize_regime(("alpha_ge",), 1, BOX_UNIT, seed=1)
        assert x.alphas[0] >= y.alphas[0]

    def test_common_beta(self):
        x, y = realize_regime(("beta_common",), 3, BOX_UNIT, seed=2)
        values = np.concatenate([x.betas, y.betas])
        assert np.all(values == values[0])

    def test_empty_regime_stays_in_box(self):
        x, y = realize_regime((), 4, BOX_UNIT, seed=3)
        for v in (x.alphas, x.betas, y.alphas, y.betas):
            assert np.all((v >= 0.01) & (v <= 1.0))

    def test_deterministic(self):
        a = realize_regime(("alpha_le", "beta_ge"), 3, BOX_UNIT, seed=11)
        b = realize_regime(("alpha_le", "beta_ge"), 3, BOX_UNIT, seed=11)
        assert np.array_equal(a[0].alphas, b[0].alphas)
        assert np.array_equal(a[1].betas, b[1].betas)


@given(
    regime=st.lists(st.sampled_from(REGIME_TOKENS), unique=True, max_size=5),
    n=st.integers(1, 5),
    seed=st.integers(0, 2**31),
)
@settings(max_examples=150, deadline=None)
def test_realized_pairs_always_satisfy_regime(regime, n, seed):
    x, y = realize_regime(tuple(regime), n, BOX_UNIT, seed)
    assert regime_satisfied(tuple(regime), x, y)


class TestFindViolation:
    def test_hr_violation_in_mixed_regime(self):
        spec = SearchSpec(n=3, relation="hr", system_kind="series",
                          regime=("alpha_le", "beta_ge"), param_box=BOX_UNIT,
                          budget=400, seed=5)
        res = find_violation(spec)
        assert res.found
        assert res.verdict.status is OrderStatus.VIOLATED
        assert res.prng == "numpy-pcg64"

    def test_witness_reverifies_identically(self):
        spec = SearchSpec(n=3, relation="st", system_kind="series",
                          regime=("alpha_le", "beta_ge"), param_box=BOX_UNIT,
                          budget=300, seed=6)
        res = find_violation(spec)
        assert res.found
        x, y = res.witness_pair
        from lfrorder import check_st

        again = check_st(system_dist("series", x), system_dist("series", y),
                         default_grid())
        assert again.status is OrderStatus.VIOLATED
        assert again.margin == res.verdict.margin
        assert again.witnesses == res.verdict.witnesses

    def test_seed_determinism(self):
        spec = SearchSpec(n=2, relation="st", system_kind="parallel",
                          regime=("alpha_ge", "beta_le"), param_box=BOX_UNIT,
                          budget=200, seed=77)
        r1, r2 = find_violation(spec), find_violation(spec)
        assert r1.found == r2.found
        assert r1.trials_used == r2.trials_used
        if r1.found:
            assert np.array_equal(r1.witness_pair[0].alphas,
                                  r2.witness_pair[0].alphas)
            assert r1.verdict.margin == r2.verdict.margin

    def test_guaranteed_regime_finds_nothing(self):
        # survival dominance cannot fail when both parameter vectors
        # dominate componentwise
        spec = SearchSpec(n=3, relation="st", system_kind="series",
                          regime=("alpha_ge", "beta_ge"), param_box=BOX_UNIT,
                          budget=1500, seed=8)
        res = find_violation(spec)
        assert not res.found
        assert res.verdict is None
        assert res.trials_used == 1500

    def test_lr_common_beta_regime(self):
        # fixed oracle first: the known reversed-shape pair violates lr
        x = cs((0.1, 0.3, 0.5), (0.1, 0.1, 0.1))
        y = cs((0.2, 0.4, 0.6), (0.1, 0.1, 0.1))
        known = check_lr(system_dist("series", x), system_dist("series", y),
                         default_grid())
        assert known.status is OrderStatus.VIOLATED
        spec = SearchSpec(n=3, relation="lr", system_kind="series",
                          regime=("alpha_le", "beta_common"),
                          param_box={"alpha": (0.1, 0.6), "beta": (0.1, 0.6)},
                          budget=400, seed=9)
        res = find_violation(spec)
        assert res.found

    def test_max_margin_winner(self):
        # rerunning the same spec and scanning manually must agree on the
        # sharpest-margin selection
        from lfrorder.orders import domain_points, slack_margin, DEFAULT_TOLERANCE
        from lfrorder.search import _sample_batch
        from lfrorder.systems import SystemKind

        spec = SearchSpec(n=2, relation="hr", system_kind="series",
                          regime=("alpha_le", "beta_ge"), param_box=BOX_UNIT,
                          budget=150, seed=10)
        res = find_violation(spec)
        rng = np.random.default_rng(spec.seed)
        ax, bx, ay, by = _sample_batch(spec.regime, spec.n, dict(BOX_UNIT), rng,
                                       spec.budget)
        pts = domain_points("hr", default_grid())
        margins = []
        for i in range(spec.budget):
            violated, margin = slack_margin("hr", SystemKind.SERIES,
                                            ax[i], bx[i], ay[i], by[i], pts,
                                            DEFAULT_TOLERANCE)
            margins.append(margin if violated else np.inf)
        best = int(np.argmin(margins))
        assert res.found
        assert res.trials_used == best + 1
        assert res.verdict.margin == margins[best]


class TestTheoremAudit:
    @pytest.mark.parametrize("tid", list(TheoremId)[:2])
    def test_small_audit_clean(self, tid):
        res = audit_theorem(tid, budget=300, seed=123)
        assert not res.found

    def test_regimes_cover_all_numbered_results(self):
        for tid in (TheoremId.T3_1, TheoremId.T3_2, TheoremId.T3_3,
                    TheoremId.T3_4, TheoremId.T3_5, TheoremId.T3_6,
                    TheoremId.T3_7):
            regime = regime_for_theorem(tid)
            assert regime and all(tok in REGIME_TOKENS for tok in regime)

    def test_no_regime_for_corollaries(self):
        with pytest.raises(DomainError):
            regime_for_theorem(TheoremId.C3_2A)

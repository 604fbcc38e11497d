import numpy as np
import pytest

from lfrorder import ComponentSet, EvalGrid, default_grid, system_dist

# parameter sets of the worked comparisons, keyed by the theorem they
# exercise; each value is ((x alphas, x betas), (y alphas, y betas))
PAPER_SETS = {
    "hr_example": (((0.02, 0.04, 0.06), (0.2, 0.5, 0.7)),
                   ((0.01, 0.03, 0.05), (0.1, 0.3, 0.5))),
    "hr_counter": (((0.01, 0.03, 0.05), (0.3, 0.6, 0.8)),
                   ((0.02, 0.04, 0.06), (0.2, 0.5, 0.7))),
    "lr_example": (((0.02, 0.04, 0.06), (1.0, 1.0, 1.0)),
                   ((0.01, 0.03, 0.05), (1.0, 1.0, 1.0))),
    "lr_counter": (((0.1, 0.3, 0.5), (0.1, 0.1, 0.1)),
                   ((0.2, 0.4, 0.6), (0.1, 0.1, 0.1))),
    "par_example": (((0.2, 0.4, 0.6), (0.8, 1.0, 1.5)),
                    ((0.1, 0.3, 0.5), (0.3, 0.8, 1.0))),
    "disp_example": (((0.2, 0.4, 0.6), (0.05,) * 3),
                     ((0.1, 0.3, 0.5), (0.05,) * 3)),
    "disp_counter": (((1.0, 3.0, 5.0), (2.0,) * 3),
                     ((2.0, 4.0, 6.0), (2.0,) * 3)),
    "star_example": (((0.1, 0.3, 0.5), (0.5,) * 3),
                     ((0.2, 0.6, 0.8), (0.5,) * 3)),
    "star_counter": (((6.2, 6.6, 6.8), (4.0,) * 3),
                     ((4.1, 4.3, 4.5), (4.0,) * 3)),
    "convex_example": (((0.1, 0.2, 0.3), (0.5,) * 3),
                       ((0.4, 0.6, 0.8), (0.5,) * 3)),
    "convex_counter": (((4.4, 4.6, 5.8), (2.0,) * 3),
                       ((3.1, 3.2, 3.3), (2.0,) * 3)),
}


def cs(alphas, betas) -> ComponentSet:
    return ComponentSet.from_arrays(alphas, betas)


def pair(key: str, kind: str = "series"):
    (xa, xb), (ya, yb) = PAPER_SETS[key]
    return system_dist(kind, cs(xa, xb)), system_dist(kind, cs(ya, yb))


def random_component_set(rng, n=None, lo=0.01, hi=5.0) -> ComponentSet:
    n = n if n is not None else int(rng.integers(1, 6))
    return cs(rng.uniform(lo, hi, n), rng.uniform(lo, hi, n))


@pytest.fixture(scope="session")
def grid() -> EvalGrid:
    return default_grid()


@pytest.fixture(scope="session")
def xgrid() -> EvalGrid:
    lo, hi = -np.log1p(-0.01), -np.log1p(-0.99)
    return EvalGrid.raw_uniform(lo, hi, 1000)

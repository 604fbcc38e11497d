"""Monte Carlo cross-validation of the analytic system distributions.

Component lifetimes are drawn by inverse-transform sampling through the
closed-form component quantile; a system draw is the min (series) or max
(parallel) of its component draws.  Agreement with an analytic CDF is
measured by the one-sample Kolmogorov-Smirnov statistic against the
99% band 1.63/sqrt(size).

Sampling is deterministic per seed, and shard-invariant: the uniform
stream is a fixed global sequence (PCG64), and shard s jumps to its
offset with ``advance``, so any shard count reproduces the same sorted
batch bit for bit.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .errors import DomainError
from .systems import ComponentSet, SystemDist, SystemKind, system_dist

__all__ = ["SampleBatch", "KsReport", "sample_system", "sample_pair", "ecdf_agreement"]

KS_BAND_COEFF = 1.63  # 99% one-sample Kolmogorov-Smirnov critical coefficient


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Sorted system lifetimes plus the recipe that produced them."""

    values: np.ndarray
    kind: SystemKind
    component_set: ComponentSet
    seed: int
    size: int

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        if self.size < 1 or v.shape != (self.size,):
            raise DomainError("batch size must be >= 1 and match the values")
        if np.any(v < 0.0) or not np.all(np.isfinite(v)):
            raise DomainError("sample values must be finite and nonnegative")
        if np.any(np.diff(v) < 0.0):
            raise DomainError("a finalized batch is sorted ascending")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "kind", SystemKind(self.kind))

    @property
    def dist(self) -> SystemDist:
        return system_dist(self.kind, self.component_set)

    def to_csv(self, path: str) -> None:
        """One value per line after a JSON metadata comment line."""
        meta = {
            "alphas": self.component_set.alphas.tolist(),
            "betas": self.component_set.betas.tolist(),
            "kind": self.kind.value,
            "seed": self.seed,
            "size": self.size,
        }
        tmp = f"{path}.tmp"
        with open(tmp, "w") as fh:
            fh.write("# " + json.dumps(meta, sort_keys=True) + "\n")
            fh.write("value\n")
            for v in self.values:
                fh.write(f"{float(v)!r}\n")
        os.replace(tmp, path)


def _rng_at(seed: int, offset: int) -> np.random.Generator:
    bg = np.random.PCG64(seed)
    if offset:
        bg.advance(offset)
    return np.random.Generator(bg)


def _component_minmax(cs: ComponentSet, kind: SystemKind, uniforms: np.ndarray) -> np.ndarray:
    """Map a (rows, n) uniform block to system lifetimes."""
    draws = np.empty_like(uniforms)
    for j, comp in enumerate(cs.components):
        draws[:, j] = _k.quantile_ab(comp.alpha, comp.beta,
                                     np.ascontiguousarray(uniforms[:, j]))
    reduce = np.min if kind is SystemKind.SERIES else np.max
    return reduce(draws, axis=1)


def sample_system(cs: ComponentSet, kind: SystemKind | str, size: int, seed: int,
                  shards: int = 1) -> SampleBatch:
    """Draw ``size`` system lifetimes; identical output for any ``shards``."""
    kind = SystemKind(kind)
    if size < 1:
        raise DomainError("size must be at least 1")
    if shards < 1 or shards > size:
        raise DomainError("shards must satisfy 1 <= shards <= size")
    n = len(cs)
    starts = [size * s // shards for s in range(shards + 1)]
    pieces = []
    for s in range(shards):
        rows = starts[s + 1] - starts[s]
        if rows == 0:
            continue
        rng = _rng_at(seed, starts[s] * n)
        pieces.append(_component_minmax(cs, kind, rng.random((rows, n))))
    values = np.sort(np.concatenate(pieces))
    return SampleBatch(values, kind, cs, int(seed), int(size))


def sample_pair(x_set: ComponentSet, y_set: ComponentSet, kind: SystemKind | str,
                size: int, seed: int, common: bool = False
                ) -> tuple[SampleBatch, SampleBatch]:
    """Batches for two systems; ``common=True`` shares the uniform draws
    (common random numbers) for low-variance comparisons."""
    if len(x_set) != len(y_set) and common:
        raise DomainError("common random numbers need equally sized systems")
    if common:
        return (sample_system(x_set, kind, size, seed),
                sample_system(y_set, kind, size, seed))
    child_x, child_y = np.random.SeedSequence(seed).spawn(2)
    kind = SystemKind(kind)
    n_x, n_y = len(x_set), len(y_set)
    rng_x = np.random.Generator(np.random.PCG64(child_x))
    rng_y = np.random.Generator(np.random.PCG64(child_y))
    vx = np.sort(_component_minmax(x_set, kind, rng_x.random((size, n_x))))
    vy = np.sort(_component_minmax(y_set, kind, rng_y.random((size, n_y))))
    return (SampleBatch(vx, kind, x_set, int(seed), int(size)),
            SampleBatch(vy, kind, y_set, int(seed), int(size)))


@dataclass(frozen=True)
class KsReport:
    statistic: float
    band: float
    passed: bool
    size: int


def _ks_from_sorted_cdf(cdf_values: np.ndarray) -> float:
    m = cdf_values.shape[0]
    i = np.arange(m)
    return float(np.max(np.maximum(cdf_values - i / m, (i + 1) / m - cdf_values)))


def ecdf_agreement(batch: SampleBatch, dist: SystemDist | None = None) -> KsReport:
    """Sup-distance between the batch ECDF and an analytic CDF.

    Defaults to the batch's own distribution; pass another SystemDist to
    measure separation instead of agreement.
    """
    if dist is None:
        dist = batch.dist
    stat = _ks_from_sorted_cdf(np.asarray(dist.cdf(batch.values)))
    band = float(KS_BAND_COEFF / np.sqrt(batch.size))
    return KsReport(stat, band, bool(stat < band), batch.size)

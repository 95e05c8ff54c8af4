"""Monte Carlo gain statistics, empirical CCDFs and AP-subset selection.

Trials are indexed, each owning a fixed substream of the seeded random
stream (see :mod:`factorymimo.channel`), so estimates are reproducible bit
for bit regardless of batch size or worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import ChannelModelParams, ChannelRealization, ComponentSampler
from .geometry import DeploymentLayout, Point3, ap_distances

__all__ = [
    "GainSampleSet",
    "CcdfTable",
    "SubsetResult",
    "monte_carlo_gains",
    "empirical_ccdf",
    "default_ccdf_grid",
    "select_subset",
    "subset_sweep",
]

_BATCH = 1 << 15


@dataclass(frozen=True)
class GainSampleSet:
    """Linear channel-gain samples with their summary statistics.

    ``std`` is the ddof=1 sample standard deviation and is NaN for a single
    sample; ``cv`` is exactly ``std / mean``.
    """

    samples: np.ndarray
    n: int
    seed: int
    mean: float
    std: float
    cv: float

    @classmethod
    def from_samples(cls, samples: np.ndarray, seed: int) -> "GainSampleSet":
        samples = np.asarray(samples, dtype=float)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("need a non-empty 1-D sample vector")
        if np.any(samples <= 0):
            raise ValueError("channel gains must be positive")
        mean = float(np.mean(samples))
        std = float(np.std(samples, ddof=1)) if samples.size > 1 else math.nan
        return cls(
            samples=samples,
            n=samples.size,
            seed=seed,
            mean=mean,
            std=std,
            cv=std / mean,
        )

    @property
    def mean_db(self) -> float:
        return 10.0 * math.log10(self.mean)

    @property
    def std_db(self) -> float:
        return 10.0 * math.log10(self.std)

    def samples_db(self) -> np.ndarray:
        return 10.0 * np.log10(self.samples)


def monte_carlo_gains(
    layout: DeploymentLayout,
    mtd: Point3,
    params: ChannelModelParams,
    n: int,
    seed: int,
    *,
    workers: int = 1,
    batch_size: int = _BATCH,
) -> GainSampleSet:
    """Estimate gain statistics from n independent channel realizations.

    Trial i always consumes the same substream of the seeded stream, so the
    returned samples are identical for any ``workers`` or ``batch_size``.
    """
    if n < 1:
        raise ValueError("need at least one trial")
    sampler = ComponentSampler(layout, mtd, params, seed)
    out = np.empty(n)
    spans = [(s, min(batch_size, n - s)) for s in range(0, n, batch_size)]

    def fill(span):
        start, count = span
        out[start : start + count] = sampler.gains(start, count)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, spans))
    else:
        for span in spans:
            fill(span)
    return GainSampleSet.from_samples(out, seed)


@dataclass(frozen=True)
class CcdfTable:
    """Empirical complementary CDF over a dB threshold grid."""

    thresholds_db: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        if len(self.thresholds_db) != len(self.probabilities):
            raise ValueError("grid and probabilities must have equal length")
        if np.any(np.diff(self.probabilities) > 0):
            raise ValueError("CCDF probabilities must be non-increasing")

    def rows(self) -> list[tuple[float, float]]:
        return [(float(t), float(p)) for t, p in zip(self.thresholds_db, self.probabilities)]


def default_ccdf_grid(samples: GainSampleSet, step_db: float = 0.1) -> np.ndarray:
    """Threshold grid in ``step_db`` steps spanning the samples plus 1 dB
    of margin on each side."""
    db = samples.samples_db()
    lo = float(np.min(db)) - 1.0
    hi = float(np.max(db)) + 1.0
    count = int(math.ceil((hi - lo) / step_db)) + 1
    return lo + step_db * np.arange(count)


def empirical_ccdf(samples: GainSampleSet, grid_db=None) -> CcdfTable:
    """P(gain in dB > t) for each threshold t, with strict inequality."""
    if samples.n == 0:
        raise ValueError("need a non-empty sample set")
    grid = np.asarray(grid_db, dtype=float) if grid_db is not None else default_ccdf_grid(samples)
    sorted_db = np.sort(samples.samples_db())
    exceed = samples.n - np.searchsorted(sorted_db, grid, side="right")
    return CcdfTable(thresholds_db=grid, probabilities=exceed / samples.n)


def _top_k_indices(key: np.ndarray, k: int) -> np.ndarray:
    # stable sort so equal keys resolve to the lower AP index
    return np.argsort(key, axis=-1, kind="stable")[..., :k]


def select_subset(realization: ChannelRealization, k: int, *, distances=None) -> np.ndarray:
    """Indices of the k APs with the largest large-scale coefficients.

    Ties resolve to the lower AP index. When ``distances`` is given the
    selection uses smallest distance instead of largest beta (the two agree
    whenever shadowing is off).
    """
    q = realization.num_aps
    if not 1 <= k <= q:
        raise ValueError(f"subset size must be in [1, {q}], got {k}")
    key = np.asarray(distances, dtype=float) if distances is not None else -realization.beta
    return np.sort(_top_k_indices(key, k))


@dataclass(frozen=True)
class SubsetResult:
    """Statistics of the gain when only a best-AP subset is combined."""

    cardinality: int
    stats: GainSampleSet
    ratio: float  # mean over trials of subset gain / full gain


def subset_sweep(
    layout: DeploymentLayout,
    mtd: Point3,
    params: ChannelModelParams,
    cardinalities,
    n: int,
    seed: int,
    *,
    selection: str = "distance",
    batch_size: int = _BATCH,
) -> list[SubsetResult]:
    """Sweep the subset size over ``cardinalities`` with common randomness.

    ``selection`` picks which APs are combined per trial: ``"distance"``
    (default) always takes the k nearest APs, which matches a small-cells
    reading where each device is tied to its geometric neighborhood;
    ``"beta"`` takes the k largest per-realization large-scale coefficients
    (shadowing included), an opportunistic upper bound that captures more
    energy at small k.

    Every cardinality is evaluated on the same n channel realizations, so
    the per-trial subset gains are nested and exactly monotone in k. The
    full-set cardinality reuses the plain gain samples of
    :func:`monte_carlo_gains` for the same seed, making its ratio exactly 1.

    Returns one :class:`SubsetResult` per requested cardinality, in the
    order given.
    """
    if n < 1:
        raise ValueError("need at least one trial")
    if selection not in ("distance", "beta"):
        raise ValueError(f"selection must be 'distance' or 'beta', got {selection!r}")
    q = layout.num_aps
    cards = [int(k) for k in cardinalities]
    if not cards:
        raise ValueError("need at least one cardinality")
    for k in cards:
        if not 1 <= k <= q:
            raise ValueError(f"subset size must be in [1, {q}], got {k}")

    sampler = ComponentSampler(layout, mtd, params, seed)
    dist_order = (
        np.argsort(ap_distances(layout, mtd), kind="stable") if selection == "distance" else None
    )
    full = np.empty(n)
    partial = {k: np.empty(n) for k in cards if k < q}

    for start in range(0, n, batch_size):
        count = min(batch_size, n - start)
        beta, energy = sampler.batch(start, count)
        prod = beta * energy
        sl = slice(start, start + count)
        full[sl] = np.einsum("ij,ij->i", beta, energy)
        if partial:
            if selection == "distance":
                order = np.broadcast_to(dist_order, (count, q))
            else:
                order = np.argsort(-beta, axis=1, kind="stable")
            csum = np.cumsum(np.take_along_axis(prod, order, axis=1), axis=1)
            for k in partial:
                partial[k][sl] = csum[:, k - 1]

    results = []
    for k in cards:
        gains = partial[k] if k < q else full
        ratio = 1.0 if k == q else float(np.mean(gains / full))
        results.append(
            SubsetResult(
                cardinality=k,
                stats=GainSampleSet.from_samples(gains, seed),
                ratio=ratio,
            )
        )
    return results

"""Monte-Carlo convolution of per-pair rating distributions into metric samples.

A composed metric such as the RMSE is a function of N random ratings; its
distribution is the convolution of the per-pair densities through the metric.
This engine approximates that convolution by simulation: per trial k it draws
one rating realization per pair, evaluates the metric once, and summarises the
resulting sample with moments and a normed histogram.

Reproducibility contract
------------------------
Results are bit-identical across runs and across worker counts for a fixed
:class:`MCConfig`. Each trial owns a fixed, counter-addressed slice of a
single Philox stream keyed by ``master_seed``: trial k consumes exactly
``ceil(N/4)*4`` stream outputs starting at output index ``k * ceil(N/4) * 4``
(Philox counters address blocks of four 64-bit outputs, hence the padding).
Uniform outputs are mapped to normals through the inverse CDF, whose
consumption is fixed per draw, so a trial's draws depend only on
``(master_seed, k, N)`` and never on batching, scheduling, or thread count.

Uniform draws of exactly 0.0 (probability 2^-53 per draw) are clipped to
2^-53 before the inverse CDF to keep normals finite.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import ndtri

from .core import (
    GaussianSummary,
    MetricKind,
    PredictorVector,
    RatingDistribution,
)

__all__ = [
    "MCConfig",
    "MetricSample",
    "optimal_predictors",
    "evaluate_metric_once",
    "simulate_metric",
    "simulate_metric_shared",
    "simulate_magic_barrier",
]

MAX_DEFAULT_BINS = 512
_TRIALS_PER_TASK = 4096
_MIN_UNIFORM = 2.0**-53


@dataclass(frozen=True)
class MCConfig:
    """Simulation size, histogram resolution and seed.

    ``bins=None`` selects ``ceil(sqrt(trials))`` capped at ``MAX_DEFAULT_BINS``.
    """

    trials: int
    bins: int | None = None
    master_seed: int = 0

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.bins is not None and self.bins < 2:
            raise ValueError(f"bins must be >= 2, got {self.bins}")
        if self.master_seed < 0:
            raise ValueError(f"master_seed must be >= 0, got {self.master_seed}")

    @property
    def resolved_bins(self) -> int:
        if self.bins is not None:
            return self.bins
        return min(math.isqrt(self.trials - 1) + 1, MAX_DEFAULT_BINS)


@dataclass(frozen=True)
class MetricSample:
    """tau metric realizations plus moments and a normed histogram."""

    values: np.ndarray
    summary: GaussianSummary
    bin_edges: np.ndarray
    bin_heights: np.ndarray

    @classmethod
    def from_values(cls, values: np.ndarray, bins: int) -> "MetricSample":
        values = np.asarray(values, dtype=np.float64)
        values.setflags(write=False)
        mean = float(values.mean())
        # unbiased sample variance; a single trial carries no spread estimate
        var = float(values.var(ddof=1)) if values.size > 1 else 0.0
        heights, edges = np.histogram(values, bins=bins, density=True)
        heights.setflags(write=False)
        edges.setflags(write=False)
        return cls(
            values=values,
            summary=GaussianSummary(mean, var),
            bin_edges=edges,
            bin_heights=heights,
        )

    def to_json_dict(self, values_path: str | None = None) -> dict:
        doc = {
            "mean": self.summary.mean,
            "variance": self.summary.variance,
            "histogram": {
                "edges": self.bin_edges.tolist(),
                "heights": self.bin_heights.tolist(),
            },
        }
        if values_path is not None:
            doc["values_path"] = values_path
        return doc


def optimal_predictors(
    dists: Sequence[RatingDistribution], metric: MetricKind
) -> PredictorVector:
    """Predictors of the metric-optimal recommender.

    The expected RMSE is minimised by the per-pair mean and the expected MAE
    by the per-pair median; under the symmetric Gaussian rating model both
    rules give the same prediction, the per-pair mean.
    """
    if not dists:
        raise ValueError("need at least one rating distribution")
    if not isinstance(metric, MetricKind):
        raise ValueError(f"unknown metric: {metric!r}")
    return PredictorVector(
        keys=tuple(d.key for d in dists),
        values=tuple(d.mean for d in dists),
    )


def evaluate_metric_once(
    dists: Sequence[RatingDistribution],
    predictors: PredictorVector,
    metric: MetricKind,
    draws: Sequence[float],
) -> float:
    """Metric value for one realization (one rating draw per pair)."""
    predictors.check_aligned(dists)
    x = np.asarray(draws, dtype=np.float64)
    if x.shape != (len(dists),):
        raise ValueError(
            f"expected {len(dists)} draws, got shape {x.shape}"
        )
    resid = x - predictors.as_array()
    if metric is MetricKind.RMSE:
        return float(np.sqrt(np.mean(resid * resid)))
    if metric is MetricKind.MAE:
        return float(np.mean(np.abs(resid)))
    raise ValueError(f"unknown metric: {metric!r}")


def _trial_words(n_pairs: int) -> int:
    # Philox counters address 4-output blocks; pad each trial's budget so
    # every trial starts on a block boundary.
    return 4 * ((n_pairs + 3) // 4)


def _draw_block(
    master_seed: int, k0: int, n_trials: int, n_pairs: int
) -> np.ndarray:
    """Standard-normal draws for trials k0..k0+n_trials-1, shape (n_trials, N)."""
    words = _trial_words(n_pairs)
    bg = np.random.Philox(
        key=np.array([master_seed, 0], dtype=np.uint64),
        counter=k0 * (words // 4),
    )
    u = np.random.Generator(bg).random(n_trials * words)
    u = u.reshape(n_trials, words)[:, :n_pairs]
    return ndtri(np.maximum(u, _MIN_UNIFORM))


def _metric_rows(resid: np.ndarray, metric: MetricKind) -> np.ndarray:
    if metric is MetricKind.RMSE:
        return np.sqrt(np.mean(resid * resid, axis=1))
    if metric is MetricKind.MAE:
        return np.mean(np.abs(resid), axis=1)
    raise ValueError(f"unknown metric: {metric!r}")


def _simulate_values(
    means: np.ndarray,
    sigmas: np.ndarray,
    offsets_list: Sequence[np.ndarray],
    metric: MetricKind,
    cfg: MCConfig,
    workers: int,
    clip_bounds: tuple[float, float] | None,
) -> np.ndarray:
    """Shared-draw simulation core; one output row per offsets entry.

    ``offsets_list`` holds, per system, the vector ``means - predictions``.
    All systems are evaluated on the same rating draws per trial (common
    random numbers), which is what makes simulated rankings comparable.
    """
    n_pairs = means.size
    tau = cfg.trials
    out = np.empty((len(offsets_list), tau), dtype=np.float64)

    def run_task(k0: int) -> None:
        nt = min(_TRIALS_PER_TASK, tau - k0)
        normals = _draw_block(cfg.master_seed, k0, nt, n_pairs)
        draws = means + sigmas * normals
        if clip_bounds is not None:
            np.clip(draws, clip_bounds[0], clip_bounds[1], out=draws)
        delta = draws - means
        for row, offsets in enumerate(offsets_list):
            out[row, k0 : k0 + nt] = _metric_rows(delta + offsets, metric)

    starts = range(0, tau, _TRIALS_PER_TASK)
    if workers <= 1:
        for k0 in starts:
            run_task(k0)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_task, starts))
    return out


def _extract_arrays(
    dists: Sequence[RatingDistribution],
) -> tuple[np.ndarray, np.ndarray]:
    means = np.array([d.mean for d in dists], dtype=np.float64)
    variances = np.array([d.variance for d in dists], dtype=np.float64)
    return means, np.sqrt(variances)


def simulate_metric(
    dists: Sequence[RatingDistribution],
    predictors: PredictorVector,
    metric: MetricKind,
    cfg: MCConfig,
    workers: int = 1,
    clip_bounds: tuple[float, float] | None = None,
) -> MetricSample:
    """Sample the metric distribution of ``predictors`` over ``cfg.trials`` trials.

    Per trial, one rating per pair is drawn from its fitted Gaussian and the
    metric is evaluated against the predictions. Draws are not clipped to the
    rating scale by default (the Gaussian model has support on all reals);
    pass ``clip_bounds`` to study the effect of clipping.
    """
    if not dists:
        raise ValueError("need at least one rating distribution")
    predictors.check_aligned(dists)
    means, sigmas = _extract_arrays(dists)
    offsets = means - predictors.as_array()
    values = _simulate_values(
        means, sigmas, [offsets], metric, cfg, workers, clip_bounds
    )[0]
    return MetricSample.from_values(values, cfg.resolved_bins)


def simulate_metric_shared(
    dists: Sequence[RatingDistribution],
    predictor_list: Sequence[PredictorVector],
    metric: MetricKind,
    cfg: MCConfig,
    workers: int = 1,
    clip_bounds: tuple[float, float] | None = None,
) -> np.ndarray:
    """Metric realizations for several systems on shared per-trial draws.

    Returns an array of shape ``(len(predictor_list), cfg.trials)`` where
    column k was computed from one common draw of all pair ratings.
    """
    if not dists:
        raise ValueError("need at least one rating distribution")
    if not predictor_list:
        raise ValueError("need at least one predictor vector")
    means, sigmas = _extract_arrays(dists)
    offsets_list = []
    for p in predictor_list:
        p.check_aligned(dists)
        offsets_list.append(means - p.as_array())
    return _simulate_values(
        means, sigmas, offsets_list, metric, cfg, workers, clip_bounds
    )


def simulate_magic_barrier(
    dists: Sequence[RatingDistribution],
    metric: MetricKind,
    cfg: MCConfig,
    workers: int = 1,
    clip_bounds: tuple[float, float] | None = None,
) -> MetricSample:
    """Metric sample of the optimal recommender (the Magic Barrier)."""
    return simulate_metric(
        dists, optimal_predictors(dists, metric), metric, cfg, workers, clip_bounds
    )

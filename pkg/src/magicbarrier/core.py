"""Shared domain types and rating-scale arithmetic.

The model treats every user-item rating as a latent random variable: a user
asked to re-rate the same item scatters around a personal preference value.
Two quantities recur everywhere downstream:

- per-pair rating distributions, Gaussian ``N(mean, variance)``, fitted from
  repeated ratings on a bounded discrete scale, and
- metric-level Gaussian summaries, used both for a recommender's metric score
  and for the Magic Barrier (the metric distribution of the optimal
  recommender).

This module also owns the scale arithmetic: which population variances a
fixed number of integer ratings on a bounded scale can produce at all. Those
bounds delimit every sensitivity analysis.

Conventions fixed here and relied on by the rest of the package:

- variances are population variances (divide by n), matching the ML estimator
  for a Gaussian;
- ratings inside a tensor are integers on the scale, while means, variances
  and predictions are real-valued;
- all types are immutable after construction and safe to share across
  threads.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "MagicBarrierError",
    "DataFormatError",
    "DegenerateInputError",
    "ScaleSpec",
    "RatingDistribution",
    "PredictorVector",
    "GaussianSummary",
    "MetricKind",
    "variance_bounds",
    "gaussian_cdf",
    "gaussian_pdf",
]

_SQRT2 = math.sqrt(2.0)


class MagicBarrierError(Exception):
    """Base class for errors raised by this package."""


class DataFormatError(MagicBarrierError):
    """Malformed or inconsistent input data (CSV records, JSON payloads)."""


class DegenerateInputError(MagicBarrierError):
    """Numerically degenerate input for which the requested quantity is undefined."""


@dataclass(frozen=True)
class ScaleSpec:
    """A bounded integer rating scale with a fixed number of re-rating trials.

    ``num_trials`` is the number of repeated ratings collected per user-item
    pair, not a Monte-Carlo parameter.
    """

    min_category: int
    max_category: int
    num_trials: int

    def __post_init__(self) -> None:
        if self.min_category >= self.max_category:
            raise ValueError(
                f"min_category must be < max_category, got "
                f"[{self.min_category}, {self.max_category}]"
            )
        if self.num_trials < 1:
            raise ValueError(f"num_trials must be >= 1, got {self.num_trials}")

    @property
    def categories(self) -> range:
        return range(self.min_category, self.max_category + 1)


@dataclass(frozen=True)
class RatingDistribution:
    """One user-item pair's latent rating, modelled as ``N(mean, variance)``."""

    user_id: str
    item_id: str
    mean: float
    variance: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.mean):
            raise ValueError(f"mean must be finite, got {self.mean}")
        if not (math.isfinite(self.variance) and self.variance >= 0.0):
            raise ValueError(f"variance must be finite and >= 0, got {self.variance}")

    @property
    def key(self) -> tuple[str, str]:
        return (self.user_id, self.item_id)


@dataclass(frozen=True)
class PredictorVector:
    """One recommender system: a real-valued prediction per user-item pair.

    Aligned index-for-index with the rating-distribution list it is evaluated
    against; ``check_aligned`` enforces that before any metric evaluation.
    """

    keys: tuple[tuple[str, str], ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.keys) != len(self.values):
            raise ValueError(
                f"keys and values must have equal length, got "
                f"{len(self.keys)} vs {len(self.values)}"
            )

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)

    def check_aligned(self, dists: Sequence[RatingDistribution]) -> None:
        if len(dists) != len(self.keys):
            raise ValueError(
                f"predictor length {len(self.keys)} does not match "
                f"{len(dists)} rating distributions"
            )
        for i, (d, k) in enumerate(zip(dists, self.keys)):
            if d.key != k:
                raise ValueError(
                    f"predictor key mismatch at index {i}: {k} vs {d.key}"
                )


@dataclass(frozen=True)
class GaussianSummary:
    """(mean, variance) of a metric-level distribution, with density evaluators.

    Used both for closed-form approximations and for summarising Monte-Carlo
    samples. ``variance == 0`` is legal and denotes a point mass at ``mean``;
    the CDF then degenerates to a unit step (0 below the mean, 1 at and above
    it) and the PDF is undefined.
    """

    mean: float
    variance: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.mean):
            raise ValueError(f"mean must be finite, got {self.mean}")
        if not (math.isfinite(self.variance) and self.variance >= 0.0):
            raise ValueError(f"variance must be finite and >= 0, got {self.variance}")

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)

    def cdf(self, x):
        return gaussian_cdf(self, x)

    def pdf(self, x):
        return gaussian_pdf(self, x)

    def to_json_dict(self) -> dict:
        return {"mean": self.mean, "variance": self.variance}


class MetricKind(Enum):
    """Supported accuracy metrics.

    Each kind fixes the per-pair comparison of a rating draw against a
    prediction (squared residual for RMSE, absolute residual for MAE) and the
    matching optimal-predictor rule (mean respectively median of the latent
    rating; both coincide under the symmetric Gaussian model).
    """

    RMSE = "rmse"
    MAE = "mae"


def variance_bounds(scale: ScaleSpec) -> tuple[float, float]:
    """Extreme population variances attainable by ``num_trials`` integer ratings.

    Exhaustively enumerates all multisets of size ``num_trials`` drawn from the
    scale categories (variance is permutation-invariant, so tuples add
    nothing) and returns ``(min nonzero variance, max variance)``.

    Raises :class:`DegenerateInputError` for fewer than two trials, where no
    nonzero variance is attainable.
    """
    t = scale.num_trials
    if t < 2:
        raise DegenerateInputError(
            f"no nonzero variance attainable with num_trials={t}"
        )
    min_nonzero = math.inf
    max_var = 0.0
    for multiset in itertools.combinations_with_replacement(scale.categories, t):
        m = sum(multiset) / t
        v = sum((x - m) ** 2 for x in multiset) / t
        if 0.0 < v < min_nonzero:
            min_nonzero = v
        if v > max_var:
            max_var = v
    return (min_nonzero, max_var)


def gaussian_cdf(g: GaussianSummary, x):
    """CDF of ``g`` at ``x`` (scalar or array).

    For ``variance == 0`` this is the unit step at the mean: 0 strictly below
    ``g.mean`` and 1 at or above it.
    """
    if g.variance == 0.0:
        if np.ndim(x) == 0:
            return 1.0 if float(x) >= g.mean else 0.0
        return np.where(np.asarray(x, dtype=np.float64) >= g.mean, 1.0, 0.0)
    if np.ndim(x) == 0:
        z = (float(x) - g.mean) / (g.std * _SQRT2)
        return 0.5 * math.erfc(-z)
    from scipy.special import erfc

    z = (np.asarray(x, dtype=np.float64) - g.mean) / (g.std * _SQRT2)
    return 0.5 * erfc(-z)


def gaussian_pdf(g: GaussianSummary, x):
    """Density of ``g`` at ``x`` (scalar or array). Undefined for zero variance."""
    if g.variance == 0.0:
        raise DegenerateInputError("density undefined for zero variance")
    x = np.asarray(x, dtype=np.float64)
    z2 = (x - g.mean) ** 2 / (2.0 * g.variance)
    out = np.exp(-z2) / math.sqrt(2.0 * math.pi * g.variance)
    return float(out) if out.ndim == 0 else out


def as_float_array(values: Iterable[float], name: str) -> np.ndarray:
    """Copy ``values`` into a float64 array, rejecting non-finite entries."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr

"""Working with metric distributions: divergence measures, interference
probabilities, decision criteria, sensitivity sweeps, and ranking studies.

Once a metric score is a distribution instead of a number, three question
families arise and are answered here:

- goodness: how close is a simulated metric density to its closed-form
  Gaussian approximation (Kullback-Leibler and Jensen-Shannon divergences on
  shared bins);
- interference: how likely is it that one metric distribution exceeds
  another, in particular that the Magic Barrier exceeds a system's RMSE, and
  whether the gap is wide enough that the distribution view can be skipped
  (the 99%-confidence-interval criterion);
- ranking stability: how often the worse of two systems wins a point-paradigm
  comparison, as a function of their distance from the barrier, and how the
  full ordering of several systems fluctuates across simulated evaluations on
  shared draws.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Literal, Mapping, Sequence

import numpy as np

from .core import (
    GaussianSummary,
    MetricKind,
    PredictorVector,
    RatingDistribution,
    ScaleSpec,
    as_float_array,
    gaussian_cdf,
    gaussian_pdf,
    variance_bounds,
)
from .approx import magic_barrier_rmse, rmse_summary_from_offsets
from .mc import MCConfig, MetricSample, simulate_metric_shared

__all__ = [
    "DiscreteDensity",
    "NoiseSweepConfig",
    "SweepRow",
    "RankCurvePoint",
    "kl_divergence",
    "jsd",
    "interference_probability",
    "interference_probability_quadrature",
    "interference_probability_mc",
    "interference_probability_empirical",
    "ImprovementDecision",
    "improvement_criterion",
    "sensitivity_sweep",
    "alternating_offsets",
    "ranking_error_curves",
    "rank_distribution",
]


@dataclass(frozen=True)
class DiscreteDensity:
    """Probability masses over shared bin edges."""

    edges: np.ndarray
    masses: np.ndarray

    def __post_init__(self) -> None:
        edges = np.asarray(self.edges, dtype=np.float64)
        masses = np.asarray(self.masses, dtype=np.float64)
        if edges.ndim != 1 or masses.ndim != 1 or edges.size != masses.size + 1:
            raise ValueError(
                f"need len(edges) == len(masses) + 1, got {edges.size} and {masses.size}"
            )
        if np.any(np.diff(edges) <= 0.0):
            raise ValueError("edges must be strictly increasing")
        if np.any(masses < 0.0):
            raise ValueError("masses must be >= 0")
        total = float(masses.sum())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"masses must sum to 1 within 1e-9, got {total}")
        edges.setflags(write=False)
        masses.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "masses", masses)

    @classmethod
    def from_histogram(cls, edges, heights) -> "DiscreteDensity":
        """From a normed histogram (density heights), as produced by sampling."""
        edges = np.asarray(edges, dtype=np.float64)
        heights = np.asarray(heights, dtype=np.float64)
        masses = heights * np.diff(edges)
        total = masses.sum()
        if total <= 0.0:
            raise ValueError("histogram carries no mass")
        return cls(edges=edges, masses=masses / total)

    @classmethod
    def from_metric_sample(cls, sample: MetricSample) -> "DiscreteDensity":
        return cls.from_histogram(sample.bin_edges, sample.bin_heights)

    @classmethod
    def from_gaussian(cls, g: GaussianSummary, edges) -> "DiscreteDensity":
        """Gaussian discretized onto ``edges`` and renormalized over their span.

        The mass outside the edge span is dropped; pick edges covering the
        bulk of the distribution (histogram edges of a large sample do).
        """
        edges = np.asarray(edges, dtype=np.float64)
        cdf = gaussian_cdf(g, edges)
        masses = np.diff(cdf)
        total = masses.sum()
        if total <= 0.0:
            raise ValueError("edges carry no Gaussian mass")
        return cls(edges=edges, masses=masses / total)

    def to_json_dict(self) -> dict:
        return {"edges": self.edges.tolist(), "masses": self.masses.tolist()}


def _require_same_edges(p: DiscreteDensity, q: DiscreteDensity) -> None:
    if p.edges.shape != q.edges.shape or not np.array_equal(p.edges, q.edges):
        raise ValueError("densities must share identical bin edges")


def kl_divergence(p: DiscreteDensity, q: DiscreteDensity) -> float:
    """KL divergence in bits; +inf where q vanishes on the support of p."""
    _require_same_edges(p, q)
    support = p.masses > 0.0
    if np.any(q.masses[support] == 0.0):
        return math.inf
    pm = p.masses[support]
    qm = q.masses[support]
    return float(np.sum(pm * np.log2(pm / qm)))


def jsd(p: DiscreteDensity, q: DiscreteDensity, normalizer: float = 1.0) -> float:
    """Jensen-Shannon divergence against the equal mixture, in bits, divided
    by ``normalizer``.

    With base-2 logs the raw value lies in [0, 1]; the normalizer is exposed
    because published "normed" values divide by varying constants.
    """
    if normalizer <= 0.0:
        raise ValueError(f"normalizer must be > 0, got {normalizer}")
    _require_same_edges(p, q)
    mixture = DiscreteDensity(p.edges, 0.5 * (p.masses + q.masses))
    value = 0.5 * kl_divergence(p, mixture) + 0.5 * kl_divergence(q, mixture)
    return value / normalizer


def interference_probability(a: GaussianSummary, b: GaussianSummary) -> float:
    """P(A > B) for independent Gaussian metric distributions.

    The closed form is one CDF evaluation: the difference is Gaussian, so
    ``P(A > B) = Phi((a.mean - b.mean) / sqrt(a.variance + b.variance))``.
    With both variances zero the comparison is deterministic: 0 or 1 by mean
    order, 0.5 on a tie.
    """
    total_var = a.variance + b.variance
    if total_var == 0.0:
        if a.mean == b.mean:
            return 0.5
        return 1.0 if a.mean > b.mean else 0.0
    diff = GaussianSummary(0.0, 1.0)
    return diff.cdf((a.mean - b.mean) / math.sqrt(total_var))


def interference_probability_quadrature(
    a: GaussianSummary, b: GaussianSummary, points: int = 40001
) -> float:
    """P(A > B) by numeric quadrature of ``integral f_B(x) * (1 - F_A(x)) dx``.

    Independent second route to :func:`interference_probability`; the two must
    agree within 1e-6. Degenerate sides reduce analytically (the integral
    collapses onto the point mass).
    """
    if a.variance + b.variance == 0.0:
        return interference_probability(a, b)
    if b.variance == 0.0:
        return 1.0 - gaussian_cdf(a, b.mean)
    if a.variance == 0.0:
        return gaussian_cdf(b, a.mean)
    lo = min(a.mean - 10.0 * a.std, b.mean - 10.0 * b.std)
    hi = max(a.mean + 10.0 * a.std, b.mean + 10.0 * b.std)
    x = np.linspace(lo, hi, points)
    integrand = gaussian_pdf(b, x) * (1.0 - gaussian_cdf(a, x))
    return float(np.trapezoid(integrand, x))


def interference_probability_mc(
    a: GaussianSummary, b: GaussianSummary, trials: int = 100_000, seed: int = 0
) -> float:
    """P(A > B) estimated from paired draws of the two Gaussians."""
    rng = np.random.default_rng(seed)
    da = a.mean + a.std * rng.standard_normal(trials)
    db = b.mean + b.std * rng.standard_normal(trials)
    return float(np.mean(da > db))


def interference_probability_empirical(a: MetricSample, b: MetricSample) -> float:
    """P(A > B) from two metric samples evaluated on shared draws.

    Trial-wise comparison avoids the binning bias a histogram integral would
    introduce; requires equal trial counts with aligned trial indices.
    """
    if a.values.shape != b.values.shape:
        raise ValueError(
            f"samples must have equal trial counts, got "
            f"{a.values.shape} vs {b.values.shape}"
        )
    return float(np.mean(a.values > b.values))


@dataclass(frozen=True)
class ImprovementDecision:
    """Verdict of the 99%-confidence-interval overlap rule.

    ``differentiated_analysis_needed`` is True when the intervals intersect,
    i.e. the observed score may already be dominated by rating uncertainty so
    a probabilistic comparison is warranted. ``margin`` is the gap between the
    lower interval edge of the system score and the upper edge of the barrier
    (positive means clearly separated, improvement detectable). The
    ``simplified_*`` fields carry the mean-gap shortcut
    ``rmse.mean - mb.mean < 6 * sqrt(mb.variance)``, valid when both
    distributions have comparable spread.
    """

    differentiated_analysis_needed: bool
    margin: float
    simplified_gap: float
    simplified_threshold: float
    simplified_needed: bool

    def to_json_dict(self) -> dict:
        return {
            "differentiated_analysis_needed": self.differentiated_analysis_needed,
            "margin": self.margin,
            "simplified": {
                "gap": self.simplified_gap,
                "threshold": self.simplified_threshold,
                "needed": self.simplified_needed,
            },
        }


def improvement_criterion(
    mb: GaussianSummary, rmse: GaussianSummary
) -> ImprovementDecision:
    """Check whether the barrier's and the system's 99% intervals intersect."""
    mb_upper = mb.mean + 3.0 * mb.std
    rmse_lower = rmse.mean - 3.0 * rmse.std
    gap = rmse.mean - mb.mean
    threshold = 6.0 * mb.std
    return ImprovementDecision(
        differentiated_analysis_needed=mb_upper > rmse_lower,
        margin=rmse_lower - mb_upper,
        simplified_gap=gap,
        simplified_threshold=threshold,
        simplified_needed=gap < threshold,
    )


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    mean: float
    variance: float
    envelope_min_mean: float
    envelope_max_mean: float
    envelope_min_variance: float
    envelope_max_variance: float


def sensitivity_sweep(
    axis: Literal["pair_count", "variance"],
    grid: Sequence[float],
    fixed: float,
    scale: ScaleSpec,
) -> list[SweepRow]:
    """Barrier moments over a grid of pair counts or homogeneous variances.

    ``axis="pair_count"`` varies N at the fixed homogeneous variance;
    ``axis="variance"`` varies the homogeneous variance at the fixed N. Each
    row also carries the envelope attainable on the scale: the barrier
    computed at the scale's minimum and maximum nonzero variance for the
    row's pair count.
    """
    if len(grid) == 0:
        raise ValueError("grid must be nonempty")
    var_min, var_max = variance_bounds(scale)
    rows: list[SweepRow] = []
    for value in grid:
        if axis == "pair_count":
            n = int(value)
            variance = float(fixed)
        elif axis == "variance":
            n = int(fixed)
            variance = float(value)
        else:
            raise ValueError(f"unknown axis: {axis!r}")
        if n < 1:
            raise ValueError(f"pair count must be >= 1, got {n}")
        if variance <= 0.0:
            raise ValueError(f"homogeneous variance must be > 0, got {variance}")
        summary = magic_barrier_rmse(np.full(n, variance))
        env_low = magic_barrier_rmse(np.full(n, var_min))
        env_high = magic_barrier_rmse(np.full(n, var_max))
        rows.append(
            SweepRow(
                axis_value=float(value),
                mean=summary.mean,
                variance=summary.variance,
                envelope_min_mean=env_low.mean,
                envelope_max_mean=env_high.mean,
                envelope_min_variance=env_low.variance,
                envelope_max_variance=env_high.variance,
            )
        )
    return rows


@dataclass(frozen=True)
class NoiseSweepConfig:
    """Grid for point-paradigm ranking-error curves.

    Two copies of the optimal recommender are distorted by deterministic
    per-pair predictor offsets: the first by ``offset * noise_scale``, the
    second by ``(offset + delta) * noise_scale``, with alternating sign
    across pairs so no overall mean shift is introduced. ``offset`` tunes the
    distance from the barrier, ``delta`` the systems' relative difference.
    """

    relative_differences: tuple[float, ...]
    offsets: tuple[float, ...]
    base_variances: tuple[float, ...]
    noise_scale: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.relative_differences:
            raise ValueError("need at least one relative difference")
        if any(d < 0.0 for d in self.relative_differences):
            raise ValueError("relative differences must be >= 0")
        if not self.offsets:
            raise ValueError("need at least one offset")
        if any(b < a for a, b in zip(self.offsets, self.offsets[1:])):
            raise ValueError("offsets must be nondecreasing")
        if any(o < 0.0 for o in self.offsets):
            raise ValueError("offsets must be >= 0")
        if not self.base_variances:
            raise ValueError("need at least one base variance")
        if self.noise_scale <= 0.0:
            raise ValueError(f"noise_scale must be > 0, got {self.noise_scale}")


@dataclass(frozen=True)
class RankCurvePoint:
    delta: float
    offset: float
    error_probability: float


def alternating_offsets(level: float, n: int) -> np.ndarray:
    """Per-pair offsets of magnitude ``level`` with alternating sign."""
    signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    return level * signs


def ranking_error_curves(cfg: NoiseSweepConfig) -> list[RankCurvePoint]:
    """Point-paradigm error probability per (delta, offset) grid point.

    The second system is worse by construction, so the error probability is
    the chance its RMSE realization undercuts the first system's:
    ``P(RMSE_2 < RMSE_1)`` from the two closed-form summaries. Identical
    systems (``delta = 0``) give 0.5; growing either the offset or the delta
    widens the mean gap and drives the error toward 0.
    """
    base = as_float_array(cfg.base_variances, "base_variances")
    n = base.size
    points: list[RankCurvePoint] = []
    for delta in cfg.relative_differences:
        for offset in cfg.offsets:
            d1 = alternating_offsets(offset * cfg.noise_scale, n)
            d2 = alternating_offsets((offset + delta) * cfg.noise_scale, n)
            s1 = rmse_summary_from_offsets(base, d1)
            s2 = rmse_summary_from_offsets(base, d2)
            points.append(
                RankCurvePoint(
                    delta=float(delta),
                    offset=float(offset),
                    error_probability=interference_probability(s1, s2),
                )
            )
    return points


def rank_distribution(
    systems: Sequence[PredictorVector],
    dists: Sequence[RatingDistribution],
    metric: MetricKind,
    cfg: MCConfig,
    workers: int = 1,
) -> Mapping[tuple[int, ...], float]:
    """Probability of each observed ranking of the given systems.

    All systems are evaluated per trial on one shared draw of the pair
    ratings (the comparison is between systems serving the same users and
    items, so outcome noise must be shared). The returned map sends an
    ordering, best system first by metric value, to its relative frequency;
    values sum to 1. Ties within a trial, a measure-zero event for
    nonconstant draws, are broken by system index.
    """
    if not systems:
        raise ValueError("need at least one system")
    values = simulate_metric_shared(dists, systems, metric, cfg, workers=workers)
    order = np.argsort(values, axis=0, kind="stable")
    counts = Counter(tuple(int(i) for i in column) for column in order.T)
    tau = cfg.trials
    return {ordering: count / tau for ordering, count in counts.items()}

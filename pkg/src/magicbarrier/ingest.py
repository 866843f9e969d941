"""Re-rating data ingestion: tensor parsing, per-pair Gaussian fits, normality
checks, and the population law of rating variances.

The on-disk format is a flat CSV with header ``user,item,trial,rating``; one
record per observed rating, trial indices 1-based. A tensor slice is the set
of ratings one user gave one item across trials; each slice is fitted with the
Gaussian ML parameters (sample mean, population variance). Slices with zero
variance carry no uncertainty signal and are filtered before any barrier
computation.

Two statistical utilities complete the module: a one-sample Kolmogorov-Smirnov
test of the per-slice normality assumption, and an exponential fit to the
population of positive slice variances together with a seeded sampler used to
transfer that population onto records where no re-rating data exists.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .core import (
    DataFormatError,
    DegenerateInputError,
    RatingDistribution,
    ScaleSpec,
    gaussian_cdf,
    GaussianSummary,
)

__all__ = [
    "RatingRecord",
    "RatingTensor",
    "ExponentialFit",
    "KSResult",
    "parse_tensor",
    "serialize_tensor",
    "fit_pair_gaussians",
    "filter_nonvanishing",
    "nonzero_variance_fraction_by_item",
    "ks_normality_test",
    "fit_exponential",
    "sample_variances",
    "parse_variances",
]

TENSOR_HEADER = ("user", "item", "trial", "rating")
VARIANCE_HEADER = "variance"


@dataclass(frozen=True)
class RatingRecord:
    user_id: str
    item_id: str
    trial: int
    rating: int


@dataclass(frozen=True)
class RatingTensor:
    """Validated re-rating records plus the scale they live on."""

    records: tuple[RatingRecord, ...]
    scale: ScaleSpec

    def __len__(self) -> int:
        return len(self.records)

    def pair_slices(self) -> dict[tuple[str, str], list[int]]:
        """Ratings grouped by (user, item), in first-appearance order."""
        slices: dict[tuple[str, str], list[int]] = {}
        for r in self.records:
            slices.setdefault((r.user_id, r.item_id), []).append(r.rating)
        return slices


@dataclass(frozen=True)
class ExponentialFit:
    """ML fit of an exponential law to a sample of positive variances."""

    rate: float
    sample_size: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.rate) and self.rate > 0.0):
            raise ValueError(f"rate must be finite and > 0, got {self.rate}")

    @property
    def mean(self) -> float:
        return 1.0 / self.rate


@dataclass(frozen=True)
class KSResult:
    statistic: float
    p_value: float
    rejected: bool


def parse_tensor(source: str | TextIO, scale: ScaleSpec) -> RatingTensor:
    """Parse tensor CSV (header ``user,item,trial,rating``) into a tensor.

    Accepts a string or a text stream; LF and CRLF both work. Raises
    :class:`DataFormatError` with a 1-based line number for malformed lines,
    duplicate (user, item, trial) triples, trial indices outside
    ``1..scale.num_trials``, and ratings outside the scale.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)

    try:
        header = next(reader)
    except StopIteration:
        raise DataFormatError("line 1: missing header row") from None
    normalized = tuple(h.strip().lstrip("﻿").lower() for h in header)
    if normalized != TENSOR_HEADER:
        raise DataFormatError(
            f"line 1: expected header {','.join(TENSOR_HEADER)!r}, "
            f"got {','.join(header)!r}"
        )

    records: list[RatingRecord] = []
    seen: set[tuple[str, str, int]] = set()
    for row in reader:
        lineno = reader.line_num
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 4:
            raise DataFormatError(f"line {lineno}: expected 4 fields, got {len(row)}")
        user, item, trial_s, rating_s = (field.strip() for field in row)
        if not user or not item:
            raise DataFormatError(f"line {lineno}: empty user or item id")
        try:
            trial = int(trial_s)
            rating = int(rating_s)
        except ValueError:
            raise DataFormatError(
                f"line {lineno}: trial and rating must be integers, "
                f"got {trial_s!r}, {rating_s!r}"
            ) from None
        if not (1 <= trial <= scale.num_trials):
            raise DataFormatError(
                f"line {lineno}: trial index {trial} outside 1..{scale.num_trials}"
            )
        if not (scale.min_category <= rating <= scale.max_category):
            raise DataFormatError(
                f"line {lineno}: rating out of scale: {rating} not in "
                f"[{scale.min_category}, {scale.max_category}]"
            )
        triple = (user, item, trial)
        if triple in seen:
            raise DataFormatError(f"line {lineno}: duplicate triple {triple}")
        seen.add(triple)
        records.append(RatingRecord(user, item, trial, rating))
    return RatingTensor(tuple(records), scale)


def serialize_tensor(tensor: RatingTensor) -> str:
    """Inverse of :func:`parse_tensor` on valid tensors (LF line endings)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TENSOR_HEADER)
    for r in tensor.records:
        writer.writerow([r.user_id, r.item_id, r.trial, r.rating])
    return out.getvalue()


def fit_pair_gaussians(tensor: RatingTensor) -> list[RatingDistribution]:
    """Gaussian ML parameters per (user, item) slice.

    Mean is the sample mean; variance is the population variance (divide by
    n), which is the ML estimate. Constant slices yield variance 0. Slice
    order follows first appearance in the tensor.
    """
    if not tensor.records:
        raise DegenerateInputError("cannot fit an empty tensor")
    fits: list[RatingDistribution] = []
    for (user, item), ratings in tensor.pair_slices().items():
        arr = np.asarray(ratings, dtype=np.float64)
        fits.append(
            RatingDistribution(user, item, float(arr.mean()), float(arr.var()))
        )
    return fits


def filter_nonvanishing(
    dists: Sequence[RatingDistribution],
) -> list[RatingDistribution]:
    """Keep only distributions with strictly positive variance, order preserved."""
    return [d for d in dists if d.variance > 0.0]


def nonzero_variance_fraction_by_item(
    dists: Sequence[RatingDistribution],
) -> dict[str, float]:
    """Per-item fraction of pairs whose fitted variance is nonzero."""
    totals: dict[str, int] = {}
    nonzero: dict[str, int] = {}
    for d in dists:
        totals[d.item_id] = totals.get(d.item_id, 0) + 1
        if d.variance > 0.0:
            nonzero[d.item_id] = nonzero.get(d.item_id, 0) + 1
    return {item: nonzero.get(item, 0) / n for item, n in totals.items()}


def _kolmogorov_survival(lam: float) -> float:
    # Q_KS(lam) = 2 * sum_{j>=1} (-1)^(j-1) exp(-2 j^2 lam^2); alternating and
    # fast-converging for lam away from 0. The small-lam regime saturates at 1.
    if lam <= 0.0:
        return 1.0
    total = 0.0
    for j in range(1, 200):
        term = 2.0 * (-1.0) ** (j - 1) * math.exp(-2.0 * j * j * lam * lam)
        total += term
        if abs(term) < 1e-14:
            break
    return min(max(total, 0.0), 1.0)


def ks_normality_test(
    sample: Sequence[float], mu: float, sigma: float, alpha: float = 0.05
) -> KSResult:
    """One-sample KS test of ``sample`` against ``N(mu, sigma^2)``.

    Statistic is the sup distance between the empirical CDF and the reference
    CDF, evaluated at both sides of every step. The p-value uses the
    asymptotic Kolmogorov distribution with the finite-sample scaling
    ``(sqrt(n) + 0.12 + 0.11/sqrt(n)) * D``; at the tiny per-slice sample
    sizes of re-rating studies the test has low power, which is accepted
    rather than corrected.
    """
    if sigma <= 0.0 or not math.isfinite(sigma):
        raise DegenerateInputError("degenerate reference distribution")
    n = len(sample)
    if n < 2:
        raise ValueError(f"need at least 2 observations, got {n}")
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    ref = GaussianSummary(mu, sigma * sigma)
    xs = np.sort(np.asarray(sample, dtype=np.float64))
    cdf = gaussian_cdf(ref, xs)
    upper = np.arange(1, n + 1) / n
    lower = np.arange(0, n) / n
    d = float(max(np.max(upper - cdf), np.max(cdf - lower)))
    sqrt_n = math.sqrt(n)
    p = _kolmogorov_survival((sqrt_n + 0.12 + 0.11 / sqrt_n) * d)
    return KSResult(statistic=d, p_value=p, rejected=p < alpha)


def fit_exponential(variances: Iterable[float]) -> ExponentialFit:
    """ML exponential fit (rate = 1 / sample mean) to positive variances."""
    arr = np.asarray(list(variances), dtype=np.float64)
    if arr.size == 0:
        raise DegenerateInputError("exponential fit needs a nonempty sample")
    if np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
        raise DegenerateInputError("exponential support violated: values must be > 0")
    return ExponentialFit(rate=float(1.0 / arr.mean()), sample_size=int(arr.size))


def sample_variances(
    fit: ExponentialFit,
    n: int,
    bounds: tuple[float, float] | None = None,
    seed: int = 0,
) -> np.ndarray:
    """``n`` reproducible draws from ``Exp(fit.rate)``, optionally truncated.

    Truncation is by rejection, so the draws follow the exponential law
    restricted to ``bounds``. Identical ``(seed, n, rate, bounds)`` yield an
    identical array.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if bounds is not None:
        low, high = bounds
        if not (low < high):
            raise ValueError(f"invalid bounds: need low < high, got {bounds}")
        accept = math.exp(-fit.rate * max(low, 0.0)) - math.exp(-fit.rate * high)
        if accept <= 0.0:
            raise ValueError(f"truncation bounds {bounds} carry no probability mass")
    rng = np.random.default_rng(seed)
    scale = 1.0 / fit.rate
    if bounds is None:
        return rng.exponential(scale, size=n)
    low, high = bounds
    out = np.empty(n, dtype=np.float64)
    filled = 0
    while filled < n:
        # oversample by the analytic acceptance rate to keep iterations few
        want = n - filled
        batch = rng.exponential(scale, size=max(int(want / accept * 1.1) + 16, want))
        kept = batch[(batch >= low) & (batch <= high)]
        take = min(kept.size, want)
        out[filled : filled + take] = kept[:take]
        filled += take
    return out


def parse_variances(source: str | TextIO) -> np.ndarray:
    """Parse a variance file: header ``variance``, one positive real per line."""
    if isinstance(source, str):
        source = io.StringIO(source)
    lines = source.read().splitlines()
    if not lines or lines[0].strip().lstrip("﻿").lower() != VARIANCE_HEADER:
        raise DataFormatError(f"line 1: expected header {VARIANCE_HEADER!r}")
    values: list[float] = []
    for i, line in enumerate(lines[1:], start=2):
        text = line.strip()
        if not text:
            continue
        try:
            v = float(text)
        except ValueError:
            raise DataFormatError(f"line {i}: not a number: {text!r}") from None
        if not (math.isfinite(v) and v > 0.0):
            raise DataFormatError(f"line {i}: variance must be > 0, got {text}")
        values.append(v)
    return np.asarray(values, dtype=np.float64)

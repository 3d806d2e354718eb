"""Correlation of indicator values with explicit ratings, and interest prediction.

Per user, each indicator series (one value per article) is correlated with
the user's explicit ratings via Pearson's r. Indicators with a significant
positive correlation become terms of that user's model; predicted interest
for an article is then the correlation-weighted average of the user's
normalized indicator values.

The weighted average is evaluated in exact rational arithmetic so that
predictions are reproducible and invariant under rational rescaling of the
weights; only the final result is rounded to a float.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import stats as _scipy_stats

from .model import ExplicitRating, IndicatorKind, KIND_ORDER, PageClass, likert_to_unit

DEFAULT_ALPHA = 0.05
MIN_ARTICLES = 3

# (user_id, kind, page_class) -> {content_id: value}
ValueTable = dict[tuple[str, IndicatorKind, PageClass], dict[str, float]]


class UndefinedCorrelationError(ValueError):
    """Pearson's r is undefined when either series is constant."""


class DegenerateRangeError(ValueError):
    """Normalization range collapsed (v_max == v_min)."""


def pearson_r(xs: list[float], ys: list[float]) -> float:
    """Product-moment correlation coefficient of two equal-length series."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.shape != y.shape:
        raise ValueError("series must be one-dimensional and of equal length")
    if len(x) < 2:
        raise ValueError("need at least 2 observations")
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = float(xc @ xc)
    syy = float(yc @ yc)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("correlation undefined for a constant series")
    r = float((xc @ yc) / math.sqrt(sxx * syy))
    return max(-1.0, min(1.0, r))


def p_two_tailed(r: float, n: int) -> float:
    """Two-tailed significance of a Pearson coefficient via the t transform.

    t = r * sqrt((n-2) / (1-r^2)) against Student's t with n-2 degrees of
    freedom. |r| = 1 is perfectly determined and returns p = 0 exactly.
    """
    if n < 3:
        raise ValueError(f"need n >= 3 for a defined p-value, got {n}")
    if not -1.0 <= r <= 1.0:
        raise ValueError(f"|r| must be <= 1, got {r}")
    if abs(r) == 1.0:
        return 0.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return float(2.0 * _scipy_stats.t.sf(abs(t), n - 2))


def normalize_value(v_orig: float, v_min: float, v_max: float) -> float:
    """Map v_orig from [v_min, v_max] onto [0, 1]."""
    if v_max < v_min:
        raise ValueError(f"inverted range [{v_min}, {v_max}]")
    if v_max == v_min:
        raise DegenerateRangeError(f"degenerate range at {v_min}")
    if not v_min <= v_orig <= v_max:
        raise ValueError(f"value {v_orig} outside [{v_min}, {v_max}]")
    return (v_orig - v_min) / (v_max - v_min)


@dataclass(frozen=True)
class CorrelationRecord:
    user_id: str
    kind: IndicatorKind
    page_class: PageClass
    r: float
    p: float
    n: int

    def __post_init__(self) -> None:
        if abs(self.r) > 1:
            raise ValueError(f"|r| must be <= 1, got {self.r}")
        if self.n < MIN_ARTICLES:
            raise ValueError(f"need n >= {MIN_ARTICLES}, got {self.n}")


@dataclass(frozen=True)
class AggregateRow:
    """One row of the significant-correlation summary table.

    Buckets partition significant r values at .2/.4/.6/.8, lower-inclusive:
    the first bucket is r < .2, the second .2 <= r < .4, and the last .8 <= r.
    """

    kind: IndicatorKind
    page_class: PageClass
    n_significant: int
    mean_r: float
    buckets: tuple[int, int, int, int, int]

    def __post_init__(self) -> None:
        if sum(self.buckets) != self.n_significant:
            raise ValueError("bucket counts must sum to n_significant")


_BUCKET_EDGES = (0.2, 0.4, 0.6, 0.8)


def _bucket_index(r: float) -> int:
    for i, edge in enumerate(_BUCKET_EDGES):
        if r < edge:
            return i
    return len(_BUCKET_EDGES)


@dataclass(frozen=True)
class ModelTerm:
    kind: IndicatorKind
    page_class: PageClass
    corr: float
    v_min: float
    v_max: float

    def __post_init__(self) -> None:
        if self.corr <= 0:
            raise ValueError("model terms require a positive correlation")
        if not self.v_max > self.v_min:
            raise ValueError(f"term range must be non-degenerate, got [{self.v_min}, {self.v_max}]")


@dataclass(frozen=True)
class UserModel:
    user_id: str
    terms: tuple[ModelTerm, ...]

    def __bool__(self) -> bool:
        return bool(self.terms)


@dataclass(frozen=True)
class InterestPrediction:
    user_id: str
    content_id: str
    predicted: float
    terms_used: int


def rated_articles(ratings: list[ExplicitRating], user_id: str) -> list[tuple[str, int]]:
    """(content_id, likert) pairs the user actually rated, in content order."""
    pairs = [
        (r.content_id, r.likert)
        for r in ratings
        if r.user_id == user_id and r.noticed and r.likert is not None
    ]
    return sorted(pairs)


def user_correlations(
    table: ValueTable,
    ratings: list[ExplicitRating],
    min_articles: int = MIN_ARTICLES,
) -> list[CorrelationRecord]:
    """One record per (user, indicator, page class) with enough rated articles.

    Articles the user did not rate are excluded; rated articles with no
    recorded activity for the indicator contribute a value of 0 (no
    interaction is itself a signal). Constant series are skipped since r is
    undefined for them.
    """
    user_ids = sorted({r.user_id for r in ratings})
    records: list[CorrelationRecord] = []
    for user_id in user_ids:
        rated = rated_articles(ratings, user_id)
        if len(rated) < min_articles:
            continue
        ys = [likert_to_unit(likert) for _, likert in rated]
        keys = sorted(
            (k for k in table if k[0] == user_id),
            key=lambda k: (KIND_ORDER[k[1]], k[2].value),
        )
        for key in keys:
            values = table[key]
            xs = [values.get(content_id, 0.0) for content_id, _ in rated]
            try:
                r = pearson_r(xs, ys)
            except UndefinedCorrelationError:
                continue
            p = p_two_tailed(r, len(xs))
            records.append(CorrelationRecord(user_id, key[1], key[2], r, p, len(xs)))
    return records


def aggregate_table(
    records: list[CorrelationRecord], alpha: float = DEFAULT_ALPHA
) -> list[AggregateRow]:
    """Summarize significant correlations per (indicator, page class).

    Rows report how many users showed a significant correlation, the mean r
    over those users, and the bucketed distribution of their r values; groups
    with no significant record are omitted entirely.
    """
    groups: dict[tuple[IndicatorKind, PageClass], list[float]] = {}
    for rec in records:
        if rec.p < alpha:
            groups.setdefault((rec.kind, rec.page_class), []).append(rec.r)
    rows = []
    for (kind, page_class), rs in sorted(
        groups.items(), key=lambda kv: (KIND_ORDER[kv[0][0]], kv[0][1].value)
    ):
        buckets = [0, 0, 0, 0, 0]
        for r in rs:
            buckets[_bucket_index(r)] += 1
        rows.append(
            AggregateRow(kind, page_class, len(rs), sum(rs) / len(rs), tuple(buckets))
        )
    return rows


def build_user_model(
    user_id: str,
    records: list[CorrelationRecord],
    table: ValueTable,
    content_ids: list[str],
    alpha: float = DEFAULT_ALPHA,
) -> UserModel:
    """Select the user's significantly positive indicators as model terms.

    Each term carries the user's observed value range for that indicator over
    every known article (missing activity counts as 0), which anchors the
    normalization of Eq-style weighted averaging. Indicators whose range
    collapses to a point carry no discriminative signal and are dropped.
    """
    terms = []
    candidates = [
        rec for rec in records if rec.user_id == user_id and rec.p < alpha and rec.r > 0
    ]
    candidates.sort(key=lambda rec: (KIND_ORDER[rec.kind], rec.page_class.value))
    for rec in candidates:
        values = table.get((user_id, rec.kind, rec.page_class), {})
        series = [values.get(content_id, 0.0) for content_id in content_ids]
        if not series:
            continue
        v_min, v_max = min(series), max(series)
        if v_max == v_min:
            continue
        terms.append(ModelTerm(rec.kind, rec.page_class, rec.r, v_min, v_max))
    return UserModel(user_id, tuple(terms))


def predict_interest(
    model: UserModel,
    content_id: str,
    item_values: dict[tuple[IndicatorKind, PageClass], float],
) -> InterestPrediction:
    """Correlation-weighted average of the user's normalized indicator values.

    Terms with no value for this item use 0 (no recorded interaction).
    Values are pinned to the term's observed range before normalizing, and
    the average runs in exact rational arithmetic, so the result always lies
    in [0, 1] and rescaling all weights by a rational constant cannot change
    it.
    """
    if not model.terms:
        raise ValueError(f"user {model.user_id} has no model terms; cannot predict")
    num = Fraction(0)
    den = Fraction(0)
    for term in model.terms:
        v_orig = item_values.get((term.kind, term.page_class), 0.0)
        v_orig = min(max(v_orig, term.v_min), term.v_max)
        v = (Fraction(v_orig) - Fraction(term.v_min)) / (Fraction(term.v_max) - Fraction(term.v_min))
        weight = Fraction(term.corr)
        num += v * weight
        den += weight
    return InterestPrediction(model.user_id, content_id, float(num / den), len(model.terms))

"""End-to-end analysis: derive indicators for every stored session, correlate
them with explicit ratings per article, and predict per-user interest.

Article values are assembled per (user, indicator, page class): a detail
page's value is the page total (sum over root fragments after propagation,
which equals the plain sum over all fragments before it), an overview value
is the article's teaser-fragment value. Articles without recorded activity
count as 0 everywhere; not interacting is a signal, not missing data.
"""
from __future__ import annotations

from dataclasses import dataclass

from .indicators import IndicatorConfig, derive_session_indicators
from .model import (
    ExplicitRating,
    IndicatorValue,
    KIND_ORDER,
    PageClass,
)
from .stats import (
    AggregateRow,
    CorrelationRecord,
    DEFAULT_ALPHA,
    InterestPrediction,
    UserModel,
    ValueTable,
    aggregate_table,
    build_user_model,
    predict_interest,
    user_correlations,
)
from .store import Store
from .timeline import build_timeline


@dataclass
class AnalysisResult:
    indicator_values: list[IndicatorValue]
    correlations: list[CorrelationRecord]
    aggregate_rows: list[AggregateRow]
    models: dict[str, UserModel]
    predictions: list[InterestPrediction]
    content_ids: list[str]
    ratings: list[ExplicitRating]


def derive_all_indicators(store: Store, config: IndicatorConfig) -> list[IndicatorValue]:
    """Run the indicator engine over every (session, page) with events."""
    values: list[IndicatorValue] = []
    for session in store.sessions():
        for page_id in store.pages_with_events(session.session_id):
            events = store.events_for(session.session_id, page_id)
            timeline = build_timeline(events)
            fragments = store.fragments_for_page(page_id)
            values.extend(derive_session_indicators(session, page_id, timeline, fragments, config))
    values.sort(key=lambda v: (v.user_id, v.session_id, v.page_id, v.fragment_id, KIND_ORDER[v.kind]))
    return values


def build_value_table(
    store: Store, values: list[IndicatorValue], config: IndicatorConfig
) -> tuple[ValueTable, list[str]]:
    """Per-article indicator values for each (user, kind, page class)."""
    page_class = {p.page_id: p.page_class for p in store.pages()}
    contents = store.content_items()
    content_ids = sorted(c.content_id for c in contents)
    detail_content = {c.detail_page_id: c.content_id for c in contents if c.detail_page_id}
    teaser_content = {c.teaser_fragment_id: c.content_id for c in contents if c.teaser_fragment_id}

    roots_by_page: dict[str, set[str]] = {}

    def is_page_root(page_id: str, fragment_id: str) -> bool:
        if page_id not in roots_by_page:
            registry = store.fragments_for_page(page_id)
            roots_by_page[page_id] = {f.fragment_id for f in registry if f.parent_id is None}
            roots_by_page[page_id].update(
                # fragments outside the registry have no known parent
                fid
                for fid in {v.fragment_id for v in values if v.page_id == page_id}
                if fid not in {f.fragment_id for f in registry}
            )
        return fragment_id in roots_by_page[page_id]

    table: ValueTable = {}
    for v in values:
        cls = page_class.get(v.page_id)
        if cls is PageClass.DETAIL:
            content_id = detail_content.get(v.page_id)
            if content_id is None:
                continue
            # after propagation only root rows carry the page total exactly once
            if config.propagate_to_ancestors and not is_page_root(v.page_id, v.fragment_id):
                continue
        elif cls is PageClass.OVERVIEW:
            content_id = teaser_content.get(v.fragment_id)
            if content_id is None:
                continue
        else:
            continue
        key = (v.user_id, v.kind, cls)
        per_content = table.setdefault(key, {})
        per_content[content_id] = per_content.get(content_id, 0.0) + float(v.value)
    return table, content_ids


def analyze_store(
    store: Store, config: IndicatorConfig | None = None, alpha: float = DEFAULT_ALPHA
) -> AnalysisResult:
    """Full pipeline over a populated store; persists the derived values."""
    config = config or IndicatorConfig()
    values = derive_all_indicators(store, config)
    store.replace_indicator_values(values)

    ratings = store.ratings()
    table, content_ids = build_value_table(store, values, config)
    records = user_correlations(table, ratings)
    rows = aggregate_table(records, alpha)

    models: dict[str, UserModel] = {}
    predictions: list[InterestPrediction] = []
    for user_id in sorted({rec.user_id for rec in records}):
        model = build_user_model(user_id, records, table, content_ids, alpha)
        if not model:
            continue
        models[user_id] = model
        for content_id in content_ids:
            item_values = {
                (term.kind, term.page_class): table.get((user_id, term.kind, term.page_class), {}).get(
                    content_id, 0.0
                )
                for term in model.terms
            }
            predictions.append(predict_interest(model, content_id, item_values))
    return AnalysisResult(values, records, rows, models, predictions, content_ids, ratings)

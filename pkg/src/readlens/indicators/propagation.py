"""Ancestor propagation: child fragment values roll up to every ancestor."""
from __future__ import annotations

from ..model import DURATION_KINDS, Fragment, IndicatorKind, IndicatorValue, build_parent_map
from .config import IndicatorConfig


def propagate_to_ancestors(
    values: list[IndicatorValue],
    fragments: list[Fragment],
    config: IndicatorConfig,
) -> list[IndicatorValue]:
    """Add each fragment's values to all its ancestors, per kind.

    With propagation disabled this is the identity. Parent links outside the
    registry are treated as roots; a cycle in the registry raises.
    """
    if not config.propagate_to_ancestors or not values:
        return list(values)
    parents = build_parent_map(fragments)

    totals: dict[tuple[str, IndicatorKind], float] = {}
    context: dict[str, tuple[str, str, str]] = {}  # fragment -> (user, session, page)
    for v in values:
        key = (v.fragment_id, v.kind)
        totals[key] = totals.get(key, 0.0) + v.value
        context[v.fragment_id] = (v.user_id, v.session_id, v.page_id)

    for v in values:
        ancestor = parents.get(v.fragment_id)
        while ancestor is not None:
            key = (ancestor, v.kind)
            totals[key] = totals.get(key, 0.0) + v.value
            if ancestor not in context:
                context[ancestor] = (v.user_id, v.session_id, v.page_id)
            ancestor = parents.get(ancestor)

    out = []
    for (fid, kind), value in totals.items():
        user_id, session_id, page_id = context[fid]
        if kind not in DURATION_KINDS:
            value = int(value)
        out.append(IndicatorValue(user_id, session_id, page_id, fid, kind, value))
    return out

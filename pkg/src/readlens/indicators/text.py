"""Text-interaction indicators: selections and clipboard use."""
from __future__ import annotations

from ..model import Clipboard, RawEvent, Selection


def derive_text_indicators(timeline: list[RawEvent]) -> tuple[dict[str, int], dict[str, int]]:
    """(select_count, cut_copy_count) per fragment.

    Empty selections carry no signal and are skipped; cut and copy are
    counted together since a web page cannot truly cut.
    """
    selects: dict[str, int] = {}
    cut_copy: dict[str, int] = {}
    for ev in timeline:
        kind = ev.kind
        if isinstance(kind, Selection) and kind.text_length > 0:
            selects[kind.fragment_id] = selects.get(kind.fragment_id, 0) + 1
        elif isinstance(kind, Clipboard):
            cut_copy[kind.fragment_id] = cut_copy.get(kind.fragment_id, 0) + 1
    return selects, cut_copy

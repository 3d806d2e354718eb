"""Independent oracles used by unit and acceptance tests.

These reimplement the checked semantics from scratch (plain arithmetic,
millisecond stepping, direct formulas) so they cannot share a bug with the
engine paths they verify.
"""
from __future__ import annotations

import math

import numpy as np

from readlens.model import Pinch, RawEvent, Scroll


def activity_intervals_oracle(times: list[int], delta_ms: int) -> tuple[list, list]:
    """Literal restatement of the gap rule over sorted event times."""
    active, passive = [], []
    start = times[0]
    for prev, nxt in zip(times, times[1:]):
        if nxt - prev > delta_ms:
            active.append((start, prev))
            passive.append((prev, nxt))
            start = nxt
    active.append((start, times[-1]))
    return active, passive


def _visible_flag(frag, viewport, min_fraction: float, tall_fraction: float) -> bool:
    ox = max(0.0, min(frag.x + frag.width, viewport.x + viewport.width) - max(frag.x, viewport.x))
    oy = max(0.0, min(frag.y + frag.height, viewport.y + viewport.height) - max(frag.y, viewport.y))
    inter = ox * oy
    frag_area = frag.width * frag.height
    vp_area = viewport.width * viewport.height
    if frag_area <= 0 or vp_area <= 0:
        return False
    if inter / frag_area >= min_fraction:
        return True
    return frag.height > viewport.height and inter / vp_area >= tall_fraction


def visibility_seconds_ms_oracle(
    timeline: list[RawEvent],
    delta_ms: int = 60_000,
    min_fraction: float = 0.5,
    tall_fraction: float = 0.5,
) -> dict[str, float]:
    """1 ms-step simulation of active visibility time per fragment."""
    snaps = []
    for ev in timeline:
        if isinstance(ev.kind, Scroll):
            entry = (ev.client_time, ev.kind.viewport, ev.kind.fragment_rects)
        elif isinstance(ev.kind, Pinch):
            entry = (ev.client_time, ev.kind.viewport_after, ev.kind.fragment_rects)
        else:
            continue
        if snaps and snaps[-1][0] == entry[0]:
            snaps[-1] = entry
        else:
            snaps.append(entry)
    if not snaps or not timeline:
        return {}
    t_start = snaps[0][0]
    t_end = timeline[-1].client_time
    if t_end <= t_start:
        return {}
    steps = np.arange(t_start, t_end, dtype=np.int64)

    snap_times = np.array([s[0] for s in snaps], dtype=np.int64)
    snap_idx = np.searchsorted(snap_times, steps, side="right") - 1

    active_intervals, _ = activity_intervals_oracle([ev.client_time for ev in timeline], delta_ms)
    active = np.zeros(len(steps), dtype=bool)
    for s, e in active_intervals:
        active[max(0, s - t_start) : max(0, e - t_start)] = True

    fragment_ids = sorted({fid for _, _, rects in snaps for fid in rects})
    out: dict[str, float] = {}
    for fid in fragment_ids:
        per_snap = np.array(
            [
                fid in rects and _visible_flag(rects[fid], viewport, min_fraction, tall_fraction)
                for _, viewport, rects in snaps
            ],
            dtype=bool,
        )
        visible = per_snap[snap_idx]
        out[fid] = float(np.count_nonzero(visible & active)) / 1000.0
    return out


def pearson_oracle(xs: list[float], ys: list[float]) -> float:
    """Direct product-moment formula with compensated summation."""
    n = len(xs)
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    cov = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    vx = math.fsum((x - mx) ** 2 for x in xs)
    vy = math.fsum((y - my) ** 2 for y in ys)
    return cov / math.sqrt(vx * vy)


def t_sf_quadrature_oracle(t_value: float, df: int) -> float:
    """Student-t survival function via numeric quadrature of the density."""
    from scipy.integrate import quad

    const = math.gamma((df + 1) / 2) / (math.sqrt(df * math.pi) * math.gamma(df / 2))

    def pdf(x: float) -> float:
        return const * (1 + x * x / df) ** (-(df + 1) / 2)

    tail, _ = quad(pdf, abs(t_value), math.inf, limit=200)
    return tail


def weighted_average_oracle(values: list[float], weights: list[float]) -> float:
    """Straightforward float evaluation of the normalized weighted average."""
    return sum(v * w for v, w in zip(values, weights)) / sum(weights)

"""Evaluation metrics computed from the feedback log alone.

All three series are cumulative ratios normalized by exposure counts, so
they can be recomputed bit-exactly from the log files at any time. A
topic's standing follows its most recent rating: unrated and
interesting-rated topics are good, a topic whose latest rating is
not-interesting is bad until re-rated.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from typing import Iterable, Optional

from .profiler import (
    CORRECTION,
    JUMP,
    RATED_INTERESTING,
    RATED_NOT_INTERESTING,
    RECOMMENDED_SEEN,
    FeedbackEvent,
)

GOOD_TOPIC_RATIO = "good_topic_ratio"
GOOD_JUMP_RATIO = "good_jump_ratio"
CORRECTION_RATIO = "correction_ratio"

METRICS = (GOOD_TOPIC_RATIO, GOOD_JUMP_RATIO, CORRECTION_RATIO)


@dataclass(frozen=True)
class MetricSeries:
    group: str
    metric: str
    points: tuple[tuple[date, float], ...]  # dates strictly increasing

    def final(self) -> Optional[float]:
        return self.points[-1][1] if self.points else None


def _ordered_days(
    events: Iterable[FeedbackEvent], group: str, until: Optional[date]
) -> list[tuple[date, list[FeedbackEvent]]]:
    """Group one group's events by calendar day, each day's events ordered
    by (timestamp, user, kind); ratios are taken after the full day."""
    relevant = sorted(
        (e for e in events if e.group == group and (until is None or e.at.date() <= until)),
        key=lambda e: (e.at.isoformat(), e.user, e.kind),
    )
    days: dict[date, list[FeedbackEvent]] = {}
    for event in relevant:
        days.setdefault(event.at.date(), []).append(event)
    return sorted(days.items())


class _CumulativeState:
    def __init__(self):
        self.topics_recommended: set[str] = set()
        self.latest_rating: dict[str, str] = {}
        self.jumps: list[str] = []  # topic of each jump, in order
        self.seen_count = 0
        self.correction_count = 0

    def absorb(self, event: FeedbackEvent) -> None:
        if event.kind == RECOMMENDED_SEEN:
            self.topics_recommended.add(event.topic)
            self.seen_count += 1
        elif event.kind in (RATED_INTERESTING, RATED_NOT_INTERESTING):
            self.latest_rating[event.topic] = event.kind
        elif event.kind == JUMP:
            self.jumps.append(event.topic)
        elif event.kind == CORRECTION:
            self.correction_count += 1

    def topic_is_good(self, topic: str) -> bool:
        return self.latest_rating.get(topic) != RATED_NOT_INTERESTING

    def good_topic_value(self) -> Optional[float]:
        if not self.topics_recommended:
            return None
        good = sum(1 for t in self.topics_recommended if self.topic_is_good(t))
        return good / len(self.topics_recommended)

    def good_jump_value(self) -> Optional[float]:
        if self.seen_count == 0:
            return None
        good = sum(1 for t in self.jumps if self.topic_is_good(t))
        return good / self.seen_count

    def correction_value(self) -> Optional[float]:
        if self.seen_count == 0:
            return None
        return self.correction_count / self.seen_count


def _series(
    events: Iterable[FeedbackEvent],
    group: str,
    until: Optional[date],
    metric: str,
) -> MetricSeries:
    state = _CumulativeState()
    points: list[tuple[date, float]] = []
    value_of = {
        GOOD_TOPIC_RATIO: state.good_topic_value,
        GOOD_JUMP_RATIO: state.good_jump_value,
        CORRECTION_RATIO: state.correction_value,
    }[metric]
    for day, day_events in _ordered_days(events, group, until):
        for event in day_events:
            state.absorb(event)
        value = value_of()
        if value is not None:
            points.append((day, value))
    return MetricSeries(group=group, metric=metric, points=tuple(points))


def good_topic_ratio(
    events: Iterable[FeedbackEvent], group: str, until: Optional[date] = None
) -> MetricSeries:
    """Cumulative good topics (unrated or latest-rated interesting) over
    distinct topics recommended."""
    return _series(events, group, until, GOOD_TOPIC_RATIO)


def good_jump_ratio(
    events: Iterable[FeedbackEvent], group: str, until: Optional[date] = None
) -> MetricSeries:
    """Cumulative jumps to papers on currently-good topics over
    recommendations seen."""
    return _series(events, group, until, GOOD_JUMP_RATIO)


def correction_ratio(
    events: Iterable[FeedbackEvent], group: str, until: Optional[date] = None
) -> MetricSeries:
    """Cumulative topic corrections over recommended papers seen."""
    return _series(events, group, until, CORRECTION_RATIO)


def all_series(
    events: Iterable[FeedbackEvent],
    groups: Iterable[str],
    until: Optional[date] = None,
) -> list[MetricSeries]:
    out = []
    for group in groups:
        for metric in METRICS:
            out.append(_series(events, group, until, metric))
    return out


def series_to_tsv(series_list: Iterable[MetricSeries]) -> str:
    """`date<TAB>group<TAB>metric<TAB>value` lines, value via repr so the
    replayed series round-trips bit-exactly."""
    lines = ["date\tgroup\tmetric\tvalue"]
    for series in series_list:
        for day, value in series.points:
            lines.append(f"{day.isoformat()}\t{series.group}\t{series.metric}\t{value!r}")
    return "\n".join(lines) + "\n"

"""Per-user interest profiles from the feedback event log.

Every event contributes weight(kind) / (1 + age_days) to its topic, and,
in hierarchical mode, an attenuated share to each ancestor (halved per
level by default). Profiles are pure functions of the log snapshot, the
taxonomy, the as-of date and the config, so recomputing from replayed
files gives bit-identical results.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, datetime
from typing import Optional

from .taxonomy import HIERARCHICAL, Taxonomy, UnknownTopicError, ancestors

BROWSED = "browsed"
JUMP = "jump"
RATED_INTERESTING = "rated_interesting"
RATED_NOT_INTERESTING = "rated_not_interesting"
CORRECTION = "correction"
RECOMMENDED_SEEN = "recommended_seen"

EVENT_KINDS = (
    BROWSED,
    JUMP,
    RATED_INTERESTING,
    RATED_NOT_INTERESTING,
    CORRECTION,
    RECOMMENDED_SEEN,
)

DEFAULT_EVENT_WEIGHTS = {
    BROWSED: 1.0,
    JUMP: 2.0,
    RATED_INTERESTING: 10.0,
    RATED_NOT_INTERESTING: -10.0,
    CORRECTION: 1.0,  # credited to the corrected (new) topic
    RECOMMENDED_SEEN: 0.0,  # exposure only; the evaluation denominators
}

DEFAULT_PROPAGATION = 0.5
DEFAULT_DECAY_OFFSET = 1.0


class ProfilerError(Exception):
    pass


class UnknownUserError(ProfilerError):
    pass


@dataclass(frozen=True)
class FeedbackEvent:
    user: str
    at: datetime
    kind: str
    topic: str
    paper: Optional[str]
    group: str

    def key(self) -> tuple:
        return (self.user, self.at.isoformat(), self.kind, self.topic, self.paper)


class EventLog:
    """Append-only event sequence with exact-duplicate suppression.
    Single writer, many readers; snapshot() hands out immutable views."""

    def __init__(self, events: Optional[list[FeedbackEvent]] = None):
        self._events: list[FeedbackEvent] = []
        self._keys: set[tuple] = set()
        for event in events or []:
            self.append(event)

    def __len__(self) -> int:
        return len(self._events)

    def __iter__(self):
        return iter(self._events)

    def append(self, event: FeedbackEvent) -> bool:
        """Append unless an exact duplicate exists; True when appended."""
        key = event.key()
        if key in self._keys:
            return False
        self._events.append(event)
        self._keys.add(key)
        return True

    def snapshot(self) -> tuple[FeedbackEvent, ...]:
        return tuple(self._events)


def validate_event(
    event: FeedbackEvent,
    taxonomy: Taxonomy,
    known_users: Optional[set[str]] = None,
) -> None:
    if event.kind not in EVENT_KINDS:
        raise ProfilerError(f"unknown event kind {event.kind!r}")
    if event.topic not in taxonomy:
        raise UnknownTopicError(event.topic)
    if known_users is not None and event.user not in known_users:
        raise UnknownUserError(event.user)


def record_event(
    log: EventLog,
    event: FeedbackEvent,
    taxonomy: Taxonomy,
    known_users: Optional[set[str]] = None,
) -> EventLog:
    """Validate and append; exact duplicates are silently skipped."""
    validate_event(event, taxonomy, known_users)
    log.append(event)
    return log


NO_PAPER_MARK = "-"


def event_to_record(event: FeedbackEvent) -> tuple[str, ...]:
    """Line format: timestamp, user, kind, topic, doc-or-dash, group."""
    return (
        event.at.isoformat(),
        event.user,
        event.kind,
        event.topic,
        event.paper if event.paper is not None else NO_PAPER_MARK,
        event.group,
    )


def record_to_event(record: tuple[str, ...]) -> FeedbackEvent:
    at, user, kind, topic, paper, group = record
    return FeedbackEvent(
        user=user,
        at=datetime.fromisoformat(at),
        kind=kind,
        topic=topic,
        paper=None if paper == NO_PAPER_MARK else paper,
        group=group,
    )


@dataclass(frozen=True)
class ProfileConfig:
    event_weights: dict[str, float] = field(
        default_factory=lambda: dict(DEFAULT_EVENT_WEIGHTS)
    )
    propagation_factor: float = DEFAULT_PROPAGATION  # hierarchical mode
    flat_propagation: float = 0.0
    decay_offset: float = DEFAULT_DECAY_OFFSET


@dataclass(frozen=True)
class InterestProfile:
    user: str
    computed_at: date
    interest: dict[str, float]
    root: str  # structural root id, excluded from top_topics


def compute_profile(
    log: EventLog | tuple[FeedbackEvent, ...],
    taxonomy: Taxonomy,
    user: str,
    now: date,
    config: Optional[ProfileConfig] = None,
) -> InterestProfile:
    """Fold the user's events into current topic interest.

    Each event credits weight(kind) * p^distance / (1 + whole days old)
    to its topic and every ancestor, p being the propagation factor
    (0 in flat mode, so 0^0 keeps only the direct topic).
    """
    config = config or ProfileConfig()
    p = (
        config.propagation_factor
        if taxonomy.mode == HIERARCHICAL
        else config.flat_propagation
    )
    events = log.snapshot() if isinstance(log, EventLog) else log
    contributions: dict[str, list[float]] = {}
    for event in events:
        if event.user != user:
            continue
        weight = config.event_weights.get(event.kind, 0.0)
        if weight == 0.0:
            continue
        age_days = max(0, (now - event.at.date()).days)
        base = weight / (config.decay_offset + age_days)
        chain = [event.topic] + ancestors(taxonomy, event.topic)
        for distance, topic in enumerate(chain):
            share = base * p**distance
            if share != 0.0:
                contributions.setdefault(topic, []).append(share)
    interest = {}
    for topic in sorted(contributions):
        total = sum(contributions[topic])
        if total != 0.0:
            interest[topic] = total
    return InterestProfile(user=user, computed_at=now, interest=interest, root=taxonomy.root)


def top_topics(profile: InterestProfile, n: int = 3) -> list[str]:
    """The n strongest strictly-positive topics, never the root."""
    if n < 1:
        raise ProfilerError("n must be >= 1")
    ranked = sorted(
        (
            (topic, value)
            for topic, value in profile.interest.items()
            if value > 0.0 and topic != profile.root
        ),
        key=lambda tv: (-tv[1], tv[0]),
    )
    return [topic for topic, _ in ranked[:n]]

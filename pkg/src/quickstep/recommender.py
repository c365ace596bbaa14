"""Nightly batch classification and the daily recommendation pass.

Papers are classified once per group committee; recommendations join the
user's current top topics against the group's classified papers, scored
by interest times classifier confidence.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from typing import Iterable, Optional

from .classifier import BoostedCommittee, UnclassifiableError, classify
from .profiler import InterestProfile, top_topics
from .store import DataRoot
from .textpipe import RawDocument, TermVector, build_vector

UNCLASSIFIED_MARK = "-"

DEFAULT_N_RECOMMENDATIONS = 10
DEFAULT_N_TOPICS = 3


@dataclass(frozen=True)
class ClassifiedPaper:
    doc_id: str
    group: str
    topic: Optional[str]  # None while unclassified (retried next night)
    confidence: float
    classified_at: date


@dataclass(frozen=True)
class Recommendation:
    doc_id: str
    topic: str
    score: float
    confidence: float
    rank: int


@dataclass(frozen=True)
class RecommendationSet:
    user: str
    date: date
    items: tuple[Recommendation, ...]


class PaperStore:
    """Current classification per (doc, group), backed by the append-only
    classified collection; reclassification appends and the latest record
    wins on replay."""

    def __init__(self, dataroot: Optional[DataRoot] = None):
        self._dataroot = dataroot
        self._current: dict[tuple[str, str], ClassifiedPaper] = {}
        if dataroot is not None:
            for rec in dataroot.snapshot("classified"):
                self._absorb(_record_to_paper(rec))

    def _absorb(self, paper: ClassifiedPaper) -> None:
        self._current[(paper.doc_id, paper.group)] = paper

    def record(self, paper: ClassifiedPaper) -> None:
        if self._dataroot is not None:
            self._dataroot.append("classified", _paper_to_record(paper))
        self._absorb(paper)

    def current(self, doc_id: str, group: str) -> Optional[ClassifiedPaper]:
        return self._current.get((doc_id, group))

    def classified_for_group(self, group: str) -> list[ClassifiedPaper]:
        return [
            p
            for (doc_id, g), p in sorted(self._current.items())
            if g == group and p.topic is not None
        ]

    def unclassified_for_group(self, group: str) -> list[str]:
        return [
            doc_id
            for (doc_id, g), p in sorted(self._current.items())
            if g == group and p.topic is None
        ]


def _paper_to_record(paper: ClassifiedPaper) -> tuple[str, ...]:
    return (
        paper.doc_id,
        paper.group,
        paper.topic if paper.topic is not None else UNCLASSIFIED_MARK,
        f"{paper.confidence:.6f}",
        paper.classified_at.isoformat(),
    )


def _record_to_paper(record: tuple[str, ...]) -> ClassifiedPaper:
    doc_id, group, topic, confidence, day = record
    return ClassifiedPaper(
        doc_id=doc_id,
        group=group,
        topic=None if topic == UNCLASSIFIED_MARK else topic,
        confidence=float(confidence),
        classified_at=date.fromisoformat(day),
    )


def nightly_classify(
    pending: Iterable[RawDocument],
    committees: dict[str, BoostedCommittee],
    paper_store: PaperStore,
    stoplist: frozenset[str],
    as_of: date,
) -> dict[str, int]:
    """Vectorize each pending document once and classify it with every
    group's committee; failures leave an unclassified record that gets
    retried the next night."""
    report = {"documents": 0, "classified": 0, "unclassified": 0}
    for doc in pending:
        report["documents"] += 1
        vector = build_vector(doc, stoplist)
        for group in sorted(committees):
            paper = _classify_one(vector, committees[group], group, as_of)
            paper_store.record(paper)
            report["classified" if paper.topic else "unclassified"] += 1
    return report


def _classify_one(
    vector: TermVector, committee: BoostedCommittee, group: str, as_of: date
) -> ClassifiedPaper:
    try:
        ranking = classify(committee, vector)
        topic, confidence = ranking[0]
        return ClassifiedPaper(vector.doc_id, group, topic, confidence, as_of)
    except UnclassifiableError:
        return ClassifiedPaper(vector.doc_id, group, None, 0.0, as_of)


def daily_recommend(
    profile: InterestProfile,
    paper_store: PaperStore,
    group: str,
    seen: set[str],
    n: int = DEFAULT_N_RECOMMENDATIONS,
    t: int = DEFAULT_N_TOPICS,
) -> RecommendationSet:
    """Top-n papers among the user's current top-t topics, scored by
    topic interest times classifier confidence; already-seen papers are
    excluded and short sets are served as-is."""
    wanted = set(top_topics(profile, t))
    candidates = [
        paper
        for paper in paper_store.classified_for_group(group)
        if paper.topic in wanted and paper.doc_id not in seen
    ]
    scored = [
        (profile.interest[paper.topic] * paper.confidence, paper)
        for paper in candidates
    ]
    scored.sort(key=lambda sp: (-sp[0], -sp[1].confidence, sp[1].doc_id))
    items = tuple(
        Recommendation(
            doc_id=paper.doc_id,
            topic=paper.topic,
            score=score,
            confidence=paper.confidence,
            rank=rank,
        )
        for rank, (score, paper) in enumerate(scored[:n], start=1)
    )
    return RecommendationSet(user=profile.user, date=profile.computed_at, items=items)

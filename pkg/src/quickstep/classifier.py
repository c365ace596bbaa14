"""Multi-class document classification: an instance-weighted nearest
neighbour base learner wrapped in an AdaBoost.M1 committee, plus the
stratified cross-validation harness used to measure it.

Determinism contract: every ranking breaks ties by confidence descending
then topic id ascending, neighbour selection breaks similarity ties by
training-set position, and all vote sums use fsum over canonically
ordered operands, so identical inputs give bit-identical outputs.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass
from datetime import date

import numpy as np

from .taxonomy import Taxonomy, UnknownTopicError
from .textpipe import TermVector, cosine

SOURCES = ("bootstrap", "user-added", "correction")

DEFAULT_K = 1
MAX_K = 9
DEFAULT_ROUNDS = 10
ERROR_FLOOR = 1e-10


class ClassifierError(Exception):
    pass


class UnclassifiableError(ClassifierError):
    """Query has no similarity to any example (or no member can vote)."""


class EmptyTrainingSetError(ClassifierError):
    pass


class FoldCountError(ClassifierError):
    pass


@dataclass(frozen=True)
class TrainingExample:
    vector: TermVector
    topic: str
    source: str
    added_at: date


@dataclass(frozen=True)
class TrainingSet:
    group: str
    examples: tuple[TrainingExample, ...] = ()

    def __len__(self) -> int:
        return len(self.examples)


def add_example(
    training_set: TrainingSet,
    vector: TermVector,
    topic: str,
    source: str,
    taxonomy: Taxonomy,
    added_at: date,
) -> TrainingSet:
    """Append one labelled example; duplicates are kept on purpose, they
    legitimately strengthen a topic."""
    if topic not in taxonomy:
        raise UnknownTopicError(topic)
    if source not in SOURCES:
        raise ClassifierError(f"unknown example source {source!r}")
    example = TrainingExample(vector, topic, source, added_at)
    return TrainingSet(training_set.group, training_set.examples + (example,))


def _quant12(x: float) -> float:
    # 12 significant digits; matches the serialized form exactly
    return float(f"{x:.11e}")


@dataclass(frozen=True)
class KnnModel:
    examples: tuple[TrainingExample, ...]
    k: int
    instance_weights: tuple[float, ...]

    def __post_init__(self):
        if not self.examples:
            raise EmptyTrainingSetError("kNN model needs at least one example")
        if not 1 <= self.k <= MAX_K:
            raise ClassifierError(f"k must be in 1..{MAX_K}, got {self.k}")
        if len(self.instance_weights) != len(self.examples):
            raise ClassifierError("one instance weight per example required")
        if any(w < 0 for w in self.instance_weights):
            raise ClassifierError("instance weights must be nonnegative")
        if abs(math.fsum(self.instance_weights) - 1.0) > 1e-9:
            raise ClassifierError("instance weights must sum to 1")


def uniform_knn_model(training_set: TrainingSet, k: int = DEFAULT_K) -> KnnModel:
    m = len(training_set)
    if m == 0:
        raise EmptyTrainingSetError("empty training set")
    return KnnModel(training_set.examples, k, (_quant12(1.0 / m),) * m)


def _query_sims(examples: tuple[TrainingExample, ...], query: TermVector) -> list[float]:
    return [cosine(query, ex.vector) for ex in examples]


def _select_neighbours(sims: list[float], k: int) -> list[int]:
    order = sorted(range(len(sims)), key=lambda i: (-sims[i], i))
    return order[:k]


def _rank_votes(votes_by_topic: dict[str, list[float]]) -> list[tuple[str, float]]:
    """Turn per-topic vote lists into the canonical (topic, confidence)
    ranking; returns [] when no topic carries any vote."""
    totals = {t: math.fsum(vs) for t, vs in sorted(votes_by_topic.items())}
    totals = {t: v for t, v in totals.items() if v > 0.0}
    grand = math.fsum(totals[t] for t in sorted(totals))
    if grand <= 0.0:
        return []
    ranked = [(t, v / grand) for t, v in totals.items()]
    ranked.sort(key=lambda tv: (-tv[1], tv[0]))
    return ranked


def knn_classify(model: KnnModel, query: TermVector) -> list[tuple[str, float]]:
    """Rank topics for a query by weighted-similarity vote of the k most
    similar examples. Raises UnclassifiableError when the query has zero
    similarity to every example."""
    sims = _query_sims(model.examples, query)
    if all(s == 0.0 for s in sims):
        raise UnclassifiableError(query.doc_id)
    ranked = _rank_from_sims(sims, model)
    if not ranked:
        raise UnclassifiableError(query.doc_id)
    return ranked


def _rank_from_sims(sims: list[float], model: KnnModel) -> list[tuple[str, float]]:
    votes: dict[str, list[float]] = {}
    for i in _select_neighbours(sims, model.k):
        vote = model.instance_weights[i] * sims[i]
        if vote > 0.0:
            votes.setdefault(model.examples[i].topic, []).append(vote)
    return _rank_votes(votes)


@dataclass(frozen=True)
class Member:
    model: KnnModel
    vote_weight: float


@dataclass(frozen=True)
class BoostedCommittee:
    members: tuple[Member, ...]
    rounds_requested: int
    rounds_completed: int
    round_errors: tuple[float, ...]  # weighted training error of each kept round

    def __post_init__(self):
        if not self.members:
            raise ClassifierError("committee needs at least one member")


class _TrainingIndex:
    """Dense similarity matrix over one training-set snapshot, built once
    per training run; neighbour order is weight-independent so boosting
    rounds only re-tally votes."""

    def __init__(self, examples: tuple[TrainingExample, ...], k: int):
        m = len(examples)
        vocab = sorted({t for ex in examples for t in ex.vector.weights})
        col = {t: j for j, t in enumerate(vocab)}
        x = np.zeros((m, len(vocab)), dtype=np.float64)
        for i, ex in enumerate(examples):
            for term, w in ex.vector.weights.items():
                x[i, col[term]] = w
        norms = np.sqrt((x * x).sum(axis=1))
        sims = x @ x.T
        safe = np.where(norms == 0.0, 1.0, norms)
        sims /= safe[:, None]
        sims /= safe[None, :]
        np.clip(sims, 0.0, 1.0, out=sims)
        self.examples = examples
        # leave-one-out neighbour lists: similarity desc, index asc, self excluded
        self.loo_neighbours: list[list[int]] = []
        self.loo_sims = sims
        for i in range(m):
            row = sims[i].copy()
            row[i] = -1.0
            order = np.lexsort((np.arange(m), -row))
            self.loo_neighbours.append([int(j) for j in order[:k] if row[j] > -1.0])

    def loo_predict(self, i: int, weights: np.ndarray) -> str | None:
        votes: dict[str, list[float]] = {}
        for j in self.loo_neighbours[i]:
            vote = weights[j] * self.loo_sims[i, j]
            if vote > 0.0:
                votes.setdefault(self.examples[j].topic, []).append(vote)
        ranked = _rank_votes(votes)
        return ranked[0][0] if ranked else None


def train_boost(
    training_set: TrainingSet,
    rounds: int = DEFAULT_ROUNDS,
    rng_seed: int = 0,
    k: int = DEFAULT_K,
) -> BoostedCommittee:
    """AdaBoost.M1 over instance-weighted kNN members.

    Each round trains on the current example distribution, measures the
    weighted leave-one-out error, stops early at error >= 0.5 (discarding
    the round) or at zero error (keeping it, with the error floored so the
    vote weight stays finite), and otherwise downweights the correctly
    classified examples before renormalizing.

    Tie handling is index-deterministic, so rng_seed is accepted only to
    pin the interface; it does not influence the result.
    """
    del rng_seed
    m = len(training_set)
    if m == 0:
        raise EmptyTrainingSetError("empty training set")
    if rounds < 1:
        raise ClassifierError("at least one boosting round required")
    index = _TrainingIndex(training_set.examples, k)
    labels = [ex.topic for ex in training_set.examples]
    dist = np.array([_quant12(1.0 / m)] * m, dtype=np.float64)
    members: list[Member] = []
    errors: list[float] = []
    for _ in range(rounds):
        model = KnnModel(training_set.examples, k, tuple(float(w) for w in dist))
        wrong = [
            i for i in range(m)
            if index.loo_predict(i, dist) != labels[i]
        ]
        err = float(dist[wrong].sum())
        if err >= 0.5:
            if not members:
                # a committee must carry at least one member: degrade to the
                # bare base learner with a unit vote
                members.append(Member(model, 1.0))
                errors.append(err)
            break
        if err == 0.0:
            members.append(Member(model, math.log(1.0 / (ERROR_FLOOR / (1.0 - ERROR_FLOOR)))))
            errors.append(err)
            break  # distribution would not change; further rounds are clones
        beta = err / (1.0 - err)
        members.append(Member(model, math.log(1.0 / beta)))
        errors.append(err)
        correct = np.ones(m, dtype=bool)
        correct[wrong] = False
        dist[correct] *= beta
        dist /= dist.sum()
        dist = np.array([_quant12(float(w)) for w in dist], dtype=np.float64)
    return BoostedCommittee(
        members=tuple(members),
        rounds_requested=rounds,
        rounds_completed=len(members),
        round_errors=tuple(errors),
    )


def classify(committee: BoostedCommittee, query: TermVector) -> list[tuple[str, float]]:
    """Weighted vote of the committee: each member casts its vote weight
    for its top-1 topic; members that cannot classify abstain."""
    sims_cache: dict[int, list[float]] = {}
    votes: dict[str, list[float]] = {}
    any_vote = False
    for member in committee.members:
        key = id(member.model.examples)
        if key not in sims_cache:
            sims_cache[key] = _query_sims(member.model.examples, query)
        ranked = _rank_from_sims(sims_cache[key], member.model)
        if not ranked:
            continue  # abstain
        any_vote = True
        votes.setdefault(ranked[0][0], []).append(member.vote_weight)
    if not any_vote:
        raise UnclassifiableError(query.doc_id)
    return _rank_votes(votes)


def stratified_folds(
    labels: list[str], folds: int, rng_seed: int
) -> list[int]:
    """Seeded fold assignment, stratified by label where group sizes
    allow; returns fold index per example."""
    rng = random.Random(rng_seed)
    by_label: dict[str, list[int]] = {}
    for i, label in enumerate(labels):
        by_label.setdefault(label, []).append(i)
    assignment = [0] * len(labels)
    cursor = 0
    for label in sorted(by_label):
        indices = by_label[label]
        rng.shuffle(indices)
        for i in indices:
            assignment[i] = cursor % folds
            cursor += 1
    return assignment


def cross_validate(
    training_set: TrainingSet,
    folds: int = 10,
    rounds: int = DEFAULT_ROUNDS,
    rng_seed: int = 0,
    k: int = DEFAULT_K,
) -> dict[str, float]:
    """Measure the committee by k-fold cross-validation.

    precision: held-out examples whose rank-1 topic is correct, over those
    classified at all. recall: held-out examples whose true topic appears
    anywhere in the ranking, over all held-out examples.
    """
    m = len(training_set)
    if folds < 2:
        raise FoldCountError("need at least 2 folds")
    if folds > m:
        raise FoldCountError(f"{folds} folds exceed {m} examples")
    assignment = stratified_folds(
        [ex.topic for ex in training_set.examples], folds, rng_seed
    )
    classified = 0
    top1_correct = 0
    anywhere_correct = 0
    for fold in range(folds):
        train_examples = tuple(
            ex for i, ex in enumerate(training_set.examples) if assignment[i] != fold
        )
        held_out = [
            ex for i, ex in enumerate(training_set.examples) if assignment[i] == fold
        ]
        if not held_out:
            continue
        committee = train_boost(
            TrainingSet(training_set.group, train_examples), rounds, rng_seed, k
        )
        for ex in held_out:
            try:
                ranking = classify(committee, ex.vector)
            except UnclassifiableError:
                continue
            classified += 1
            if ranking[0][0] == ex.topic:
                top1_correct += 1
            if any(t == ex.topic for t, _ in ranking):
                anywhere_correct += 1
    precision = top1_correct / classified if classified else 0.0
    recall = anywhere_correct / m
    return {"precision": precision, "recall": recall}


# committee serialization: example-id references into a training-set
# snapshot, decimal weights, one JSON document


def training_fingerprint(training_set: TrainingSet) -> str:
    h = hashlib.sha1()
    for ex in training_set.examples:
        h.update(
            f"{ex.vector.doc_id}\t{ex.topic}\t{ex.source}\t{ex.added_at.isoformat()}\n".encode()
        )
    return h.hexdigest()


def committee_to_text(committee: BoostedCommittee, training_set: TrainingSet) -> str:
    payload = {
        "format": "quickstep-committee-v1",
        "group": training_set.group,
        "training_size": len(training_set),
        "training_fingerprint": training_fingerprint(training_set),
        "example_ids": [ex.vector.doc_id for ex in training_set.examples],
        "rounds_requested": committee.rounds_requested,
        "rounds_completed": committee.rounds_completed,
        "round_errors": [repr(e) for e in committee.round_errors],
        "members": [
            {
                "k": member.model.k,
                "vote_weight": repr(member.vote_weight),
                "instance_weights": [f"{w:.11e}" for w in member.model.instance_weights],
            }
            for member in committee.members
        ],
    }
    return json.dumps(payload, indent=1, sort_keys=True)


def committee_from_text(text: str, training_set: TrainingSet) -> BoostedCommittee:
    payload = json.loads(text)
    if payload.get("format") != "quickstep-committee-v1":
        raise ClassifierError("unrecognized committee format")
    if payload["training_size"] != len(training_set) or payload[
        "training_fingerprint"
    ] != training_fingerprint(training_set):
        raise ClassifierError("committee does not match this training set snapshot")
    members = tuple(
        Member(
            KnnModel(
                training_set.examples,
                rec["k"],
                tuple(float(w) for w in rec["instance_weights"]),
            ),
            float(rec["vote_weight"]),
        )
        for rec in payload["members"]
    )
    return BoostedCommittee(
        members=members,
        rounds_requested=payload["rounds_requested"],
        rounds_completed=payload["rounds_completed"],
        round_errors=tuple(float(e) for e in payload["round_errors"]),
    )

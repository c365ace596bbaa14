"""Seeded synthetic-user trials over the full pipeline.

Stands in for human-subject runs: a generated topic-conditioned corpus,
matched user pairs (one per group, same interests and behaviour seeds),
and a day-by-day browse / view / rate / jump / correct loop driven
through the real service, nightly and daily jobs included. Identical
seeds give byte-identical data directories.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, datetime, time, timedelta
from pathlib import Path
from typing import Optional

import numpy as np

from . import evalkit, profiler, taxonomy
from .config import RuntimeConfig
from .service import (
    GROUP_FLAT,
    GROUP_ONTOLOGY,
    GROUPS,
    BrowseLogEntry,
    NoRecommendationsError,
    QuickstepService,
    doc_id_for_url,
    initialize_dataroot,
)
from .store import DataRoot

START_DATE = date(2025, 1, 6)

_CONSONANTS = "bcdfghjklmnprstvz"
_VOWELS_SYL = "aeiou"


@dataclass
class SimulationConfig:
    users: int = 20  # total; half flat, half ontology, matched pairs
    days: int = 45
    papers: int = 500
    seed: int = 42
    taxonomy_path: Optional[str] = None  # packaged 30-topic default
    interests_per_user: int = 3
    interest_cluster_prob: float = 0.7  # further interests stay in the first one's branch
    browse_per_day: int = 3
    explore_prob: float = 0.08
    jump_base: float = 0.10
    jump_gain: float = 0.60
    rate_pos_prob: float = 0.6
    rate_neg_prob: float = 0.8
    good_affinity: float = 0.30
    bad_affinity: float = 0.05
    rating_noise: float = 0.0  # polarity flips; off by default (trial-2 interface)
    correction_prob: float = 0.30
    ancestor_affinity: float = 0.5
    doc_len_min: int = 80
    doc_len_max: int = 200
    core_vocab: int = 20
    noise_vocab: int = 300
    core_fraction: float = 0.25
    parent_fraction: float = 0.25
    bootstrap_per_topic: int = 4
    # papers may resurface after a week: at trial scale (10 picks per user
    # per day against a few hundred papers) never-resurface starves the
    # candidate pool within weeks and the served sets degenerate
    runtime: RuntimeConfig = field(
        default_factory=lambda: RuntimeConfig(re_recommend_after_days=3)
    )


@dataclass(frozen=True)
class SyntheticPaper:
    doc_id: str
    url: str
    true_topic: str
    text: str


@dataclass(frozen=True)
class SyntheticUser:
    user: str
    group: str
    pair: int  # matched across groups
    interests: tuple[tuple[str, float], ...]  # (leaf topic, affinity)


@dataclass
class SimulationResult:
    dataroot: DataRoot
    series: list[evalkit.MetricSeries]
    report: dict

    def final(self, group: str, metric: str) -> Optional[float]:
        for s in self.series:
            if s.group == group and s.metric == metric:
                return s.final()
        return None

    def tsv(self) -> str:
        return evalkit.series_to_tsv(self.series)


def _pseudowords(rng: np.random.Generator, count: int) -> list[str]:
    """Deterministic pronounceable nonsense vocabulary, all distinct."""
    words: list[str] = []
    seen = set()
    while len(words) < count:
        n = int(rng.integers(3, 5))
        word = "".join(
            _CONSONANTS[int(rng.integers(len(_CONSONANTS)))]
            + _VOWELS_SYL[int(rng.integers(len(_VOWELS_SYL)))]
            for _ in range(n)
        )
        if word not in seen:
            seen.add(word)
            words.append(word)
    return words


def generate_corpus(
    config: SimulationConfig, tax: taxonomy.Taxonomy, rng: np.random.Generator
) -> list[SyntheticPaper]:
    """Topic-conditioned documents: a disjoint core vocabulary per topic,
    a slice of the parent topic's core for nested topics, and shared
    noise, so classification is learnable but imperfect."""
    topics = [t for t in tax.topic_ids() if t != tax.root]
    vocab = _pseudowords(rng, len(topics) * config.core_vocab + config.noise_vocab)
    core: dict[str, list[str]] = {}
    for i, topic in enumerate(topics):
        core[topic] = vocab[i * config.core_vocab : (i + 1) * config.core_vocab]
    noise = vocab[len(topics) * config.core_vocab :]

    papers = []
    for i in range(config.papers):
        topic = topics[int(rng.integers(len(topics)))]
        parent = tax.nodes[topic].parent
        parent_core = core[parent] if parent is not None and parent != tax.root else None
        length = int(rng.integers(config.doc_len_min, config.doc_len_max + 1))
        tokens = []
        for _ in range(length):
            u = rng.random()
            if u < config.core_fraction:
                pool = core[topic]
            elif parent_core is not None and u < config.core_fraction + config.parent_fraction:
                pool = parent_core
            else:
                pool = noise
            tokens.append(pool[int(rng.integers(len(pool)))])
        url = f"http://papers.example/paper{i:04d}.pdf"
        papers.append(
            SyntheticPaper(
                doc_id=doc_id_for_url(url),  # the id the service will assign
                url=url,
                true_topic=topic,
                text=" ".join(tokens),
            )
        )
    return papers


def generate_users(
    config: SimulationConfig, tax: taxonomy.Taxonomy, rng: np.random.Generator
) -> list[SyntheticUser]:
    """Matched pairs: user j in each group shares interests and seeds, so
    the two groups differ only in taxonomy mode."""
    leaves = sorted(
        t
        for t in tax.topic_ids()
        if t != tax.root and tax.nodes[t].parent != tax.root
    )
    pairs = config.users // 2
    users = []
    for j in range(pairs):
        # researchers' interests cluster: later picks usually stay in the
        # first interest's branch
        first = leaves[int(rng.integers(len(leaves)))]
        branch = [
            t for t in leaves if tax.nodes[t].parent == tax.nodes[first].parent
        ]
        picked = [first]
        while len(picked) < config.interests_per_user:
            pool = branch if rng.random() < config.interest_cluster_prob else leaves
            candidates = [t for t in pool if t not in picked] or [
                t for t in leaves if t not in picked
            ]
            picked.append(candidates[int(rng.integers(len(candidates)))])
        interests = tuple(
            sorted((t, float(np.round(rng.uniform(0.7, 1.0), 3))) for t in picked)
        )
        for group in GROUPS:
            users.append(
                SyntheticUser(
                    user=f"u{j:02d}-{'flat' if group == GROUP_FLAT else 'onto'}",
                    group=group,
                    pair=j,
                    interests=interests,
                )
            )
    return users


def _affinity(
    user: SyntheticUser, topic: str, tax: taxonomy.Taxonomy, per_level: float
) -> float:
    """How much this user cares about a topic: full for a true interest,
    attenuated per level for its ancestors, zero otherwise."""
    best = 0.0
    for interest, a in user.interests:
        if topic == interest:
            best = max(best, a)
            continue
        chain = taxonomy.ancestors(tax, interest)
        if topic in chain:
            best = max(best, a * per_level ** (chain.index(topic) + 1))
    return best


def run_simulation(
    config: SimulationConfig, data_dir: str | Path
) -> SimulationResult:
    dataroot = DataRoot(data_dir)
    tax_path = config.taxonomy_path or str(
        Path(__file__).parent / "data" / "cs_taxonomy.tsv"
    )
    initialize_dataroot(dataroot, tax_path)
    service = QuickstepService(dataroot, config.runtime)
    hier = service.taxonomies[GROUP_ONTOLOGY]

    rng_corpus = np.random.default_rng([config.seed, 1])
    papers = generate_corpus(config, hier, rng_corpus)
    paper_by_id = {p.doc_id: p for p in papers}
    by_topic: dict[str, list[SyntheticPaper]] = {}
    for p in papers:
        by_topic.setdefault(p.true_topic, []).append(p)

    rng_users = np.random.default_rng([config.seed, 2])
    users = generate_users(config, hier, rng_users)
    setup_day = START_DATE - timedelta(days=1)
    for u in users:
        service.create_user(u.user, u.group, setup_day)

    # bootstrap examples, identical for both groups, labelled with true topics
    rng_boot = np.random.default_rng([config.seed, 3])
    for topic in sorted(by_topic):
        pool = by_topic[topic]
        picks = rng_boot.choice(
            len(pool), size=min(config.bootstrap_per_topic, len(pool)), replace=False
        )
        for pick in sorted(int(x) for x in picks):
            paper = pool[pick]
            if not dataroot.has_doc(paper.doc_id):
                dataroot.write_doc(paper.doc_id, paper.text)
            for group in GROUPS:
                service.bootstrap_example(group, paper.doc_id, topic, setup_day)

    user_browsed: dict[str, set[str]] = {u.user: set() for u in users}
    interest_leaves = {
        u.user: [t for t, _ in u.interests] for u in users
    }
    interest_weights = {
        u.user: np.array([a for _, a in u.interests]) for u in users
    }

    for day_index in range(config.days):
        today = START_DATE + timedelta(days=day_index)
        service.run_cycle("nightly", today)
        service.run_cycle("daily", today)
        for user_index, u in enumerate(sorted(users, key=lambda x: x.user)):
            rng = np.random.default_rng([config.seed, 7, day_index, user_index])
            _act_on_recommendations(service, u, user_index, today, rng, config, paper_by_id)
            _browse(
                service,
                u,
                user_index,
                today,
                rng,
                config,
                papers,
                by_topic,
                user_browsed[u.user],
                interest_leaves[u.user],
                interest_weights[u.user],
            )

    series = evalkit.all_series(service.events.snapshot(), GROUPS)
    report = {
        "users": len(users),
        "papers": len(papers),
        "days": config.days,
        "events": len(service.events),
        "finals": {
            f"{s.group}.{s.metric}": s.final() for s in series
        },
    }
    return SimulationResult(dataroot=dataroot, series=series, report=report)


def _act_on_recommendations(service, u, user_index, today, rng, config, paper_by_id):
    tax = service.taxonomies[u.group]
    try:
        recset, _ = service.serve_recommendations(u.user)
    except NoRecommendationsError:
        return
    if recset.date != today:
        return  # stale set was already acted on the day it arrived
    for item in recset.items:
        aff = _affinity(u, item.topic, tax, config.ancestor_affinity)
        if rng.random() < config.jump_base + config.jump_gain * aff:
            service.submit_feedback(
                u.user,
                item.doc_id,
                "jump",
                at=datetime.combine(today, time(10, user_index, item.rank)),
            )
        rating = None
        if aff >= config.good_affinity and rng.random() < config.rate_pos_prob:
            rating = "interesting"
        elif aff <= config.bad_affinity and rng.random() < config.rate_neg_prob:
            rating = "not_interesting"
        if rating is not None and rng.random() < config.rating_noise:
            rating = "interesting" if rating == "not_interesting" else "not_interesting"
        if rating is not None:
            service.submit_feedback(
                u.user,
                item.doc_id,
                rating,
                at=datetime.combine(today, time(11, user_index, item.rank)),
            )
        true_topic = paper_by_id[item.doc_id].true_topic
        if item.topic != true_topic and rng.random() < config.correction_prob:
            service.submit_feedback(
                u.user,
                item.doc_id,
                "correction",
                corrected_topic=true_topic,
                at=datetime.combine(today, time(12, user_index, item.rank)),
            )


def _browse(
    service,
    u,
    user_index,
    today,
    rng,
    config,
    papers,
    by_topic,
    already,
    leaves,
    weights,
):
    entries = []
    texts = {}
    for i in range(config.browse_per_day):
        if rng.random() < config.explore_prob:
            paper = papers[int(rng.integers(len(papers)))]
        else:
            probs = weights / weights.sum()
            leaf = leaves[int(rng.choice(len(leaves), p=probs))]
            pool = [p for p in by_topic.get(leaf, []) if p.doc_id not in already]
            if not pool:
                pool = by_topic.get(leaf) or papers
            paper = pool[int(rng.integers(len(pool)))]
        already.add(paper.doc_id)
        entries.append(
            BrowseLogEntry(
                user=u.user,
                url=paper.url,
                at=datetime.combine(today, time(16, user_index, i)),
            )
        )
        texts[paper.url] = paper.text
    service.ingest_browse_log(entries, texts)

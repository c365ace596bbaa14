"""The service layer tying the pipeline together: accounts, browse-log
ingestion, the nightly/daily cycle, recommendation serving and feedback
capture.

All state lives in the DataRoot files; this object is a cache over them.
Constructing a service against an existing directory replays every file,
so the whole system state is reconstructible from the logs alone.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from datetime import date, datetime, time
from pathlib import Path
from typing import Callable, Optional

from . import classifier, profiler, recommender, taxonomy
from .config import RuntimeConfig
from .store import DataRoot
from .textpipe import RawDocument, TermVector, build_vector, default_stoplist, load_stoplist

GROUP_FLAT = "flat"
GROUP_ONTOLOGY = "ontology"
GROUPS = (GROUP_FLAT, GROUP_ONTOLOGY)

NIGHTLY = "nightly"
DAILY = "daily"

# hour-of-day slots keep synthetic timestamps unique and sortable
EXPOSURE_TIME = time(hour=8)

FEEDBACK_KINDS = {
    "interesting": profiler.RATED_INTERESTING,
    "not_interesting": profiler.RATED_NOT_INTERESTING,
    "jump": profiler.JUMP,
    "correction": profiler.CORRECTION,
}


class ServiceError(Exception):
    pass


class UnknownUserError(ServiceError):
    pass


class DuplicateUserError(ServiceError):
    pass


class UnknownPaperError(ServiceError):
    pass


class UnreachableDocumentError(ServiceError):
    pass


class PhaseOrderError(ServiceError):
    pass


class NoRecommendationsError(ServiceError):
    pass


@dataclass(frozen=True)
class UserAccount:
    user: str
    group: str
    created_at: date


@dataclass(frozen=True)
class BrowseLogEntry:
    user: str
    url: str
    at: datetime


def doc_id_for_url(url: str) -> str:
    """Stable readable id: slug of the filename plus a short url hash to
    keep ids from distinct urls distinct."""
    name = url.rstrip("/").rsplit("/", 1)[-1]
    name = re.sub(r"\.(ps|pdf)(\.(gz|z))?$", "", name, flags=re.IGNORECASE)
    slug = re.sub(r"[^0-9a-z]+", "-", name.lower()).strip("-") or "doc"
    return f"{slug}-{hashlib.sha1(url.encode()).hexdigest()[:8]}"


def initialize_dataroot(
    dataroot: DataRoot, source_taxonomy: str | Path | None = None
) -> None:
    """Seed a fresh data directory: the hierarchical taxonomy for the
    ontology group and its flattened twin for the flat group."""
    if source_taxonomy is None:
        source_taxonomy = Path(__file__).parent / "data" / "cs_taxonomy.tsv"
    hierarchical = taxonomy.load_taxonomy(source_taxonomy, taxonomy.HIERARCHICAL)
    flat = taxonomy.flatten_taxonomy(hierarchical)
    for group, tax in ((GROUP_FLAT, flat), (GROUP_ONTOLOGY, hierarchical)):
        tmp = dataroot.root / f"taxonomy.{group}.tsv"
        if not tmp.exists():
            taxonomy.save_taxonomy(tax, tmp)


class QuickstepService:
    def __init__(
        self,
        dataroot: DataRoot,
        config: Optional[RuntimeConfig] = None,
        fetcher: Optional[Callable[[str], str]] = None,
    ):
        self.dataroot = dataroot
        self.config = config or RuntimeConfig()
        self.fetcher = fetcher
        self.stoplist = (
            load_stoplist(self.config.stoplist_path)
            if self.config.stoplist_path
            else default_stoplist()
        )
        self.taxonomies: dict[str, taxonomy.Taxonomy] = {}
        for group in GROUPS:
            path = dataroot.root / f"taxonomy.{group}.tsv"
            if not path.exists():
                raise ServiceError(
                    f"missing {path.name}; initialize_dataroot() seeds a new directory"
                )
            mode = taxonomy.FLAT if group == GROUP_FLAT else taxonomy.HIERARCHICAL
            tax = taxonomy.load_taxonomy(path, mode)
            for topic_id, label, parent in dataroot.snapshot(f"topics.{group}"):
                tax = taxonomy.add_topic(
                    tax,
                    label,
                    None if parent == "-" else parent,
                    admin_override=True,
                )
            self.taxonomies[group] = tax

        self.users: dict[str, UserAccount] = {}
        for user, group, created in dataroot.snapshot("users"):
            self.users[user] = UserAccount(user, group, date.fromisoformat(created))

        self._vector_cache: dict[str, TermVector] = {}
        self.training_sets: dict[str, classifier.TrainingSet] = {}
        for group in GROUPS:
            examples = []
            for doc_id, topic, source, added in dataroot.snapshot(f"training.{group}"):
                examples.append(
                    classifier.TrainingExample(
                        self._vector_of(doc_id), topic, source, date.fromisoformat(added)
                    )
                )
            self.training_sets[group] = classifier.TrainingSet(group, tuple(examples))

        self.events = profiler.EventLog(
            [profiler.record_to_event(r) for r in dataroot.snapshot("events")]
        )
        self._browsed_emitted: set[tuple[str, str, str]] = {
            (e.user, e.at.isoformat(), e.paper)
            for e in self.events
            if e.kind == profiler.BROWSED and e.paper
        }

        self.paper_store = recommender.PaperStore(dataroot)

        self.browse_records: list[tuple[datetime, str, str, str]] = [
            (datetime.fromisoformat(at), user, url, doc_id)
            for at, user, url, doc_id in dataroot.snapshot("browse")
        ]

        self._rec_history: dict[str, dict[date, list[recommender.Recommendation]]] = {}
        for rec in dataroot.snapshot("recommendations"):
            doc_id, group, topic, conf, day, user, rank, score = rec
            self._rec_history.setdefault(user, {}).setdefault(
                date.fromisoformat(day), []
            ).append(
                recommender.Recommendation(
                    doc_id=doc_id,
                    topic=topic,
                    score=float(score),
                    confidence=float(conf),
                    rank=int(rank),
                )
            )

        self.cycles: set[tuple[str, str]] = {
            (day, phase) for day, phase in dataroot.snapshot("cycles")
        }

        self.committees: dict[str, classifier.BoostedCommittee] = {}
        for group in GROUPS:
            name = f"committee.{group}.json"
            if dataroot.has_file(name) and len(self.training_sets[group]):
                try:
                    self.committees[group] = classifier.committee_from_text(
                        dataroot.read_file(name), self.training_sets[group]
                    )
                except classifier.ClassifierError:
                    pass  # stale committee; nightly retraining replaces it

    # -- documents ---------------------------------------------------------

    def _vector_of(self, doc_id: str) -> TermVector:
        if doc_id not in self._vector_cache:
            text = self.dataroot.read_doc(doc_id)
            doc = RawDocument(doc_id, "", text, date.min)
            self._vector_cache[doc_id] = build_vector(doc, self.stoplist)
        return self._vector_cache[doc_id]

    def url_of(self, doc_id: str) -> str:
        for _at, _user, url, rec_doc in self.browse_records:
            if rec_doc == doc_id:
                return url
        return f"docs/{doc_id}.txt"

    def _register_document(
        self, url: str, doc_id: Optional[str] = None, text: Optional[str] = None
    ) -> str:
        doc_id = doc_id or doc_id_for_url(url)
        if not self.dataroot.has_doc(doc_id):
            if text is None and self.fetcher is not None:
                try:
                    text = self.fetcher(url)
                except Exception as exc:
                    raise UnreachableDocumentError(f"{url}: {exc}") from exc
            if text is None:
                raise UnreachableDocumentError(url)
            self.dataroot.write_doc(doc_id, text)
        return doc_id

    # -- accounts ----------------------------------------------------------

    def create_user(self, user: str, group: str, created_at: date) -> UserAccount:
        if group not in GROUPS:
            raise ServiceError(f"group must be one of {GROUPS}, got {group!r}")
        if user in self.users:
            raise DuplicateUserError(user)
        if not re.fullmatch(r"[A-Za-z0-9_.-]+", user):
            raise ServiceError(f"invalid user id {user!r}")
        account = UserAccount(user, group, created_at)
        self.dataroot.append("users", (user, group, created_at.isoformat()))
        self.users[user] = account
        return account

    def _account(self, user: str) -> UserAccount:
        if user not in self.users:
            raise UnknownUserError(user)
        return self.users[user]

    # -- topics ------------------------------------------------------------

    def add_topic(
        self,
        group: str,
        label: str,
        parent: Optional[str] = None,
        admin_override: bool = False,
    ) -> str:
        tax = taxonomy.add_topic(self.taxonomies[group], label, parent, admin_override)
        new_id = next(reversed(tax.nodes))
        node = tax.nodes[new_id]
        self.dataroot.append(
            f"topics.{group}", (node.id, node.label, node.parent or "-")
        )
        self.taxonomies[group] = tax
        return new_id

    # -- events ------------------------------------------------------------

    def _record_event(self, event: profiler.FeedbackEvent) -> bool:
        """Validated, deduplicated, durable append."""
        profiler.validate_event(event, self.taxonomies[event.group])
        appended = self.events.append(event)
        if appended:
            self.dataroot.append("events", profiler.event_to_record(event))
        return appended

    # -- browse ingestion ----------------------------------------------------

    def ingest_browse_log(
        self,
        entries: list[BrowseLogEntry],
        texts: Optional[dict[str, str]] = None,
    ) -> dict:
        """Filter and enqueue browsed URLs. The browsed feedback event is
        deferred until the document's classification lands (its topic is
        unknown before then)."""
        accepted = 0
        filtered = 0
        errors: list[str] = []
        for entry in entries:
            if entry.user not in self.users:
                errors.append(f"unknown user {entry.user!r}")
                continue
            if not self.config.url_accepted(entry.url):
                filtered += 1
                continue
            text = (texts or {}).get(entry.url)
            try:
                doc_id = self._register_document(entry.url, text=text)
            except UnreachableDocumentError as exc:
                errors.append(str(exc))
                continue
            self.dataroot.append(
                "browse", (entry.at.isoformat(), entry.user, entry.url, doc_id)
            )
            self.browse_records.append((entry.at, entry.user, entry.url, doc_id))
            accepted += 1
        return {"accepted": accepted, "filtered": filtered, "errors": errors}

    # -- nightly / daily cycle ----------------------------------------------

    def pending_documents(self) -> list[RawDocument]:
        """Browsed documents still lacking a classification for at least
        one group (never-attempted or unclassified-retry)."""
        pending: dict[str, None] = {}
        for _at, _user, _url, doc_id in self.browse_records:
            for group in GROUPS:
                paper = self.paper_store.current(doc_id, group)
                if paper is None or paper.topic is None:
                    pending.setdefault(doc_id, None)
                    break
        docs = []
        for doc_id in pending:
            if self.dataroot.has_doc(doc_id):
                docs.append(RawDocument(doc_id, "", self.dataroot.read_doc(doc_id), date.min))
        return docs

    def run_cycle(self, phase: str, as_of: date) -> dict:
        if phase == NIGHTLY:
            return self._run_nightly(as_of)
        if phase == DAILY:
            return self._run_daily(as_of)
        raise ServiceError(f"unknown phase {phase!r}")

    def _run_nightly(self, as_of: date) -> dict:
        report: dict = {"phase": NIGHTLY, "as_of": as_of.isoformat()}
        for group in GROUPS:
            training = self.training_sets[group]
            if len(training) == 0:
                report[f"retrained_{group}"] = 0
                self.committees.pop(group, None)
                continue
            committee = classifier.train_boost(
                training, self.config.boost_rounds, 0, self.config.k
            )
            self.committees[group] = committee
            self.dataroot.write_file(
                f"committee.{group}.json",
                classifier.committee_to_text(committee, training),
            )
            report[f"retrained_{group}"] = committee.rounds_completed
        pending = self.pending_documents()
        stats = recommender.nightly_classify(
            pending,
            {g: c for g, c in self.committees.items()},
            self.paper_store,
            self.stoplist,
            as_of,
        )
        report.update(stats)
        report["browsed_events"] = self._flush_browsed_events()
        self.cycles.add((as_of.isoformat(), NIGHTLY))
        self.dataroot.append("cycles", (as_of.isoformat(), NIGHTLY))
        return report

    def _flush_browsed_events(self) -> int:
        """Emit the browsed feedback event for every browse record whose
        document now has a classified topic in the browser's group."""
        emitted = 0
        for at, user, _url, doc_id in self.browse_records:
            key = (user, at.isoformat(), doc_id)
            if key in self._browsed_emitted:
                continue
            account = self.users.get(user)
            if account is None:
                continue
            paper = self.paper_store.current(doc_id, account.group)
            if paper is None or paper.topic is None:
                continue
            event = profiler.FeedbackEvent(
                user=user,
                at=at,
                kind=profiler.BROWSED,
                topic=paper.topic,
                paper=doc_id,
                group=account.group,
            )
            self._record_event(event)
            self._browsed_emitted.add(key)
            emitted += 1
        return emitted

    def _run_daily(self, as_of: date) -> dict:
        if (as_of.isoformat(), NIGHTLY) not in self.cycles:
            raise PhaseOrderError(f"nightly has not run for {as_of.isoformat()}")
        report: dict = {"phase": DAILY, "as_of": as_of.isoformat(), "sets": 0, "items": 0}
        for user in sorted(self.users):
            account = self.users[user]
            profile = profiler.compute_profile(
                self.events,
                self.taxonomies[account.group],
                user,
                as_of,
                self.config.profile_config(),
            )
            recset = recommender.daily_recommend(
                profile,
                self.paper_store,
                account.group,
                self.seen_docs(user, as_of),
                self.config.n_recommendations,
                self.config.n_topics,
            )
            if recset.items:
                records = []
                for item in recset.items:
                    records.append(
                        (
                            item.doc_id,
                            account.group,
                            item.topic,
                            f"{item.confidence:.6f}",
                            as_of.isoformat(),
                            user,
                            str(item.rank),
                            repr(item.score),
                        )
                    )
                self.dataroot.append_many("recommendations", records)
                self._rec_history.setdefault(user, {})[as_of] = list(recset.items)
                report["sets"] += 1
                report["items"] += len(recset.items)
        self.cycles.add((as_of.isoformat(), DAILY))
        self.dataroot.append("cycles", (as_of.isoformat(), DAILY))
        return report

    def seen_docs(self, user: str, as_of: Optional[date] = None) -> set[str]:
        """Papers excluded from recommendation: browsed, jumped-to, or
        previously recommended (within the configured cooldown, which by
        default never expires)."""
        seen = {doc_id for _at, u, _url, doc_id in self.browse_records if u == user}
        for event in self.events:
            if event.user == user and event.kind == profiler.JUMP and event.paper:
                seen.add(event.paper)
        cooldown = self.config.re_recommend_after_days
        for day, items in self._rec_history.get(user, {}).items():
            if cooldown is not None and as_of is not None:
                if (as_of - day).days >= cooldown:
                    continue
            seen.update(item.doc_id for item in items)
        return seen

    # -- serving and feedback -------------------------------------------------

    def current_set(self, user: str) -> recommender.RecommendationSet:
        self._account(user)
        history = self._rec_history.get(user)
        if not history:
            raise NoRecommendationsError(user)
        day = max(history)
        return recommender.RecommendationSet(user, day, tuple(history[day]))

    def serve_recommendations(self, user: str) -> tuple[recommender.RecommendationSet, int]:
        """Return the user's current set; the first serve of a set emits
        one exposure (recommended_seen) event per item."""
        recset = self.current_set(user)
        account = self._account(user)
        emitted = 0
        at = datetime.combine(recset.date, EXPOSURE_TIME)
        for item in recset.items:
            event = profiler.FeedbackEvent(
                user=user,
                at=at,
                kind=profiler.RECOMMENDED_SEEN,
                topic=item.topic,
                paper=item.doc_id,
                group=account.group,
            )
            if self._record_event(event):
                emitted += 1
        return recset, emitted

    def _recommended_to(self, user: str, doc_id: str) -> Optional[recommender.Recommendation]:
        for _day, items in sorted(self._rec_history.get(user, {}).items(), reverse=True):
            for item in items:
                if item.doc_id == doc_id:
                    return item
        return None

    def submit_feedback(
        self,
        user: str,
        doc_id: str,
        kind: str,
        corrected_topic: Optional[str] = None,
        at: Optional[datetime] = None,
    ) -> profiler.FeedbackEvent:
        account = self._account(user)
        if kind not in FEEDBACK_KINDS:
            raise ServiceError(f"unknown feedback kind {kind!r}")
        item = self._recommended_to(user, doc_id)
        if item is None:
            raise UnknownPaperError(f"{doc_id} was never recommended to {user}")
        event_kind = FEEDBACK_KINDS[kind]
        tax = self.taxonomies[account.group]
        if event_kind == profiler.CORRECTION:
            if not corrected_topic:
                raise ServiceError("correction requires corrected_topic")
            if corrected_topic not in tax:
                raise taxonomy.UnknownTopicError(corrected_topic)
            topic = corrected_topic
        else:
            paper = self.paper_store.current(doc_id, account.group)
            topic = paper.topic if paper and paper.topic else item.topic
        event = profiler.FeedbackEvent(
            user=user,
            at=at or datetime.now(),
            kind=event_kind,
            topic=topic,
            paper=doc_id,
            group=account.group,
        )
        self._record_event(event)
        if event_kind == profiler.CORRECTION:
            self._append_training_example(
                account.group, doc_id, topic, "correction", event.at.date()
            )
        return event

    def _append_training_example(
        self, group: str, doc_id: str, topic: str, source: str, added_at: date
    ) -> None:
        self.training_sets[group] = classifier.add_example(
            self.training_sets[group],
            self._vector_of(doc_id),
            topic,
            source,
            self.taxonomies[group],
            added_at,
        )
        self.dataroot.append(
            f"training.{group}", (doc_id, topic, source, added_at.isoformat())
        )

    def submit_example(
        self,
        user: str,
        topic: str,
        url: Optional[str] = None,
        doc_id: Optional[str] = None,
        text: Optional[str] = None,
        at: Optional[datetime] = None,
    ) -> str:
        """Register a paper as a labelled training example for the user's
        group (flat-group users may add_topic first)."""
        account = self._account(user)
        tax = self.taxonomies[account.group]
        if topic not in tax:
            raise taxonomy.UnknownTopicError(topic)
        if url is None and doc_id is None:
            raise ServiceError("url or doc_id required")
        if doc_id is not None and self.dataroot.has_doc(doc_id):
            resolved = doc_id
        else:
            resolved = self._register_document(url or doc_id, doc_id=doc_id, text=text)
        when = (at or datetime.now()).date()
        self._append_training_example(account.group, resolved, topic, "user-added", when)
        return resolved

    def bootstrap_example(
        self, group: str, doc_id: str, topic: str, added_at: date
    ) -> None:
        """Seed the group training set before the first nightly run."""
        self._append_training_example(group, doc_id, topic, "bootstrap", added_at)

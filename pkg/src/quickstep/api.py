"""JSON-over-HTTP API over one QuickstepService instance.

Endpoints: POST /log/browse, GET /recommendations/{user}, POST /feedback,
POST /examples, POST /topics (flat group), GET /topics?group=,
POST /admin/run-cycle, POST /admin/users. When the config sets
auth_token, every request must carry it in X-Auth-Token.
"""

from __future__ import annotations

from datetime import date, datetime
from typing import Optional

from fastapi import Depends, FastAPI, Header, HTTPException
from pydantic import BaseModel

from . import taxonomy
from .service import (
    BrowseLogEntry,
    DuplicateUserError,
    NoRecommendationsError,
    PhaseOrderError,
    QuickstepService,
    ServiceError,
    UnknownPaperError,
    UnknownUserError,
    UnreachableDocumentError,
)


class BrowseEntryIn(BaseModel):
    user: str
    url: str
    at: datetime
    text: Optional[str] = None


class BrowseBatchIn(BaseModel):
    entries: list[BrowseEntryIn]


class FeedbackIn(BaseModel):
    user: str
    doc_id: str
    kind: str  # interesting | not_interesting | jump | correction
    corrected_topic: Optional[str] = None
    at: Optional[datetime] = None


class ExampleIn(BaseModel):
    user: str
    topic: str
    url: Optional[str] = None
    doc_id: Optional[str] = None
    text: Optional[str] = None


class TopicIn(BaseModel):
    group: str
    label: str
    parent: Optional[str] = None


class RunCycleIn(BaseModel):
    phase: str
    as_of: date


class UserIn(BaseModel):
    user: str
    group: str


def create_app(service: QuickstepService) -> FastAPI:
    app = FastAPI(title="quickstep", version="0.1.0")

    def check_auth(x_auth_token: Optional[str] = Header(default=None)) -> None:
        expected = service.config.auth_token
        if expected is not None and x_auth_token != expected:
            raise HTTPException(status_code=401, detail="bad or missing X-Auth-Token")

    guarded = [Depends(check_auth)]

    @app.post("/log/browse", dependencies=guarded)
    def post_browse(batch: BrowseBatchIn):
        entries = [BrowseLogEntry(e.user, e.url, e.at) for e in batch.entries]
        texts = {e.url: e.text for e in batch.entries if e.text is not None}
        return service.ingest_browse_log(entries, texts)

    @app.get("/recommendations/{user}", dependencies=guarded)
    def get_recommendations(user: str):
        try:
            recset, emitted = service.serve_recommendations(user)
        except UnknownUserError as exc:
            raise HTTPException(status_code=404, detail=f"unknown user {exc}") from exc
        except NoRecommendationsError as exc:
            raise HTTPException(
                status_code=404, detail="no recommendation set computed yet"
            ) from exc
        group = service.users[user].group
        tax = service.taxonomies[group]
        return {
            "user": user,
            "group": group,
            "date": recset.date.isoformat(),
            "exposures_emitted": emitted,
            "items": [
                {
                    "doc_id": item.doc_id,
                    "topic": item.topic,
                    "topic_label": tax.label_of(item.topic),
                    "url": service.url_of(item.doc_id),
                    "score": item.score,
                    "confidence": item.confidence,
                    "rank": item.rank,
                }
                for item in recset.items
            ],
        }

    @app.post("/feedback", dependencies=guarded)
    def post_feedback(body: FeedbackIn):
        try:
            event = service.submit_feedback(
                body.user, body.doc_id, body.kind, body.corrected_topic, body.at
            )
        except UnknownUserError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except UnknownPaperError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except taxonomy.UnknownTopicError as exc:
            raise HTTPException(status_code=404, detail=f"unknown topic {exc}") from exc
        except ServiceError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {"ok": True, "event_kind": event.kind, "topic": event.topic}

    @app.post("/examples", dependencies=guarded)
    def post_example(body: ExampleIn):
        try:
            doc_id = service.submit_example(
                body.user, body.topic, body.url, body.doc_id, body.text
            )
        except UnknownUserError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except taxonomy.UnknownTopicError as exc:
            raise HTTPException(status_code=404, detail=f"unknown topic {exc}") from exc
        except UnreachableDocumentError as exc:
            raise HTTPException(status_code=422, detail=f"unreachable: {exc}") from exc
        except ServiceError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {"ok": True, "doc_id": doc_id}

    @app.post("/topics", dependencies=guarded)
    def post_topic(body: TopicIn):
        try:
            topic_id = service.add_topic(body.group, body.label, body.parent)
        except taxonomy.HierarchyLockedError as exc:
            raise HTTPException(
                status_code=403, detail="the fixed hierarchy does not accept new topics"
            ) from exc
        except taxonomy.DuplicateTopicError as exc:
            raise HTTPException(status_code=409, detail=f"duplicate topic {exc}") from exc
        except taxonomy.TaxonomyError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {"ok": True, "topic_id": topic_id}

    @app.get("/topics", dependencies=guarded)
    def get_topics(group: str):
        if group not in service.taxonomies:
            raise HTTPException(status_code=404, detail=f"unknown group {group!r}")
        tax = service.taxonomies[group]
        return {
            "group": group,
            "mode": tax.mode,
            "root": tax.root,
            "topics": [
                {"id": n.id, "label": n.label, "parent": n.parent}
                for n in tax.nodes.values()
            ],
        }

    @app.post("/admin/run-cycle", dependencies=guarded)
    def post_run_cycle(body: RunCycleIn):
        try:
            return service.run_cycle(body.phase, body.as_of)
        except PhaseOrderError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except ServiceError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.post("/admin/users", dependencies=guarded)
    def post_user(body: UserIn):
        try:
            account = service.create_user(body.user, body.group, date.today())
        except DuplicateUserError as exc:
            raise HTTPException(status_code=409, detail=f"duplicate user {exc}") from exc
        except ServiceError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {"ok": True, "user": account.user, "group": account.group}

    @app.get("/healthz")
    def healthz():
        return {"ok": True, "users": len(service.users), "events": len(service.events)}

    return app

"""Line-oriented, append-safe persistence under one data directory.

Every collection is a plain UTF-8 file of tab-separated records. Appends
are flushed and fsynced before acknowledging; whole-file writes go
through a temp file plus atomic rename, so a crash can at worst leave a
trailing partial line, which readers drop. The files double as the
experimental record: replaying them rebuilds all derived state.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

# collection name -> (filename, field count)
COLLECTIONS = {
    "events": ("events.log", 6),
    "classified": ("classified.tsv", 5),
    "recommendations": ("recommendations.log", 8),
    "training.flat": ("training.flat.tsv", 4),
    "training.ontology": ("training.ontology.tsv", 4),
    "topics.flat": ("topics.flat.log", 3),
    "topics.ontology": ("topics.ontology.log", 3),
    "browse": ("browse.log", 4),
    "users": ("users.tsv", 3),
    "cycles": ("cycles.log", 2),
}


class StoreError(Exception):
    pass


class MalformedRecordError(StoreError):
    pass


class UnknownCollectionError(StoreError):
    pass


class DataRoot:
    """Handle on the data directory; one writer per collection assumed."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "docs").mkdir(exist_ok=True)

    def path(self, collection: str) -> Path:
        if collection not in COLLECTIONS:
            raise UnknownCollectionError(collection)
        return self.root / COLLECTIONS[collection][0]

    def append(self, collection: str, record: tuple[str, ...]) -> None:
        """Append one record; durable once this returns."""
        line = self._serialize(collection, record)
        with open(self.path(collection), "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def append_many(self, collection: str, records: list[tuple[str, ...]]) -> None:
        if not records:
            return
        lines = [self._serialize(collection, r) for r in records]
        with open(self.path(collection), "a", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def snapshot(self, collection: str) -> tuple[tuple[str, ...], ...]:
        """Point-in-time view of a collection; later appends are invisible.

        A trailing line without a newline is an interrupted, never-acked
        append and is dropped.
        """
        path = self.path(collection)
        n_fields = COLLECTIONS[collection][1]
        if not path.exists():
            return ()
        data = path.read_bytes().decode("utf-8", errors="replace")
        if not data:
            return ()
        complete, sep, _partial = data.rpartition("\n")
        if not sep:
            return ()
        records = []
        for line in complete.split("\n"):
            if not line:
                continue
            parts = tuple(line.split("\t"))
            if len(parts) == n_fields:
                records.append(parts)
        return tuple(records)

    def _serialize(self, collection: str, record: tuple[str, ...]) -> str:
        n_fields = COLLECTIONS[collection][1]
        if len(record) != n_fields:
            raise MalformedRecordError(
                f"{collection}: expected {n_fields} fields, got {len(record)}"
            )
        for field in record:
            if not isinstance(field, str):
                raise MalformedRecordError(f"{collection}: non-string field {field!r}")
            if "\t" in field or "\n" in field or "\r" in field:
                raise MalformedRecordError(
                    f"{collection}: field contains tab/newline: {field!r}"
                )
            if field == "":
                raise MalformedRecordError(f"{collection}: empty field")
        return "\t".join(record)

    # whole-file artefacts (taxonomies, committees, document texts)

    def write_file(self, name: str, content: str) -> Path:
        """Atomic whole-file write: temp file in the same directory, fsync,
        rename over the target."""
        target = self.root / name
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=target.name + ".")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(content)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, target)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)
        return target

    def read_file(self, name: str) -> str:
        return (self.root / name).read_text(encoding="utf-8")

    def has_file(self, name: str) -> bool:
        return (self.root / name).exists()

    def doc_path(self, doc_id: str) -> Path:
        return self.root / "docs" / f"{doc_id}.txt"

    def write_doc(self, doc_id: str, text: str) -> None:
        self.write_file(f"docs/{doc_id}.txt", text)

    def read_doc(self, doc_id: str) -> str:
        return self.doc_path(doc_id).read_text(encoding="utf-8")

    def has_doc(self, doc_id: str) -> bool:
        return self.doc_path(doc_id).exists()

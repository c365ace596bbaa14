import os

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quickstep.store import COLLECTIONS, DataRoot, MalformedRecordError

field_text = st.text(
    alphabet=st.characters(blacklist_characters="\t\n\r", blacklist_categories=("Cs",)),
    min_size=1,
    max_size=30,
)


class TestAppendSnapshot:
    def test_append_then_read_all(self, tmp_path):
        root = DataRoot(tmp_path)
        root.append("cycles", ("2025-01-06", "nightly"))
        root.append("cycles", ("2025-01-06", "daily"))
        snap = root.snapshot("cycles")
        assert snap == (("2025-01-06", "nightly"), ("2025-01-06", "daily"))

    def test_snapshot_isolated_from_later_appends(self, tmp_path):
        root = DataRoot(tmp_path)
        root.append("cycles", ("2025-01-06", "nightly"))
        snap = root.snapshot("cycles")
        root.append("cycles", ("2025-01-07", "nightly"))
        assert len(snap) == 1
        assert len(root.snapshot("cycles")) == 2

    def test_two_snapshots_no_writes_identical(self, tmp_path):
        root = DataRoot(tmp_path)
        root.append("cycles", ("2025-01-06", "nightly"))
        assert root.snapshot("cycles") == root.snapshot("cycles")

    def test_empty_collection(self, tmp_path):
        assert DataRoot(tmp_path).snapshot("events") == ()

    def test_malformed_rejected_before_write(self, tmp_path):
        root = DataRoot(tmp_path)
        with pytest.raises(MalformedRecordError):
            root.append("cycles", ("2025-01-06",))  # wrong arity
        with pytest.raises(MalformedRecordError):
            root.append("cycles", ("2025-01-06", "night\tly"))  # tab in field
        with pytest.raises(MalformedRecordError):
            root.append("cycles", ("2025-01-06", "night\nly"))  # newline
        assert not root.path("cycles").exists()

    @given(st.lists(st.tuples(field_text, field_text), min_size=1, max_size=12))
    @settings(max_examples=60, deadline=None)
    def test_roundtrip_fidelity(self, records):
        import tempfile

        with tempfile.TemporaryDirectory() as d:
            root = DataRoot(d)
            for rec in records:
                root.append("cycles", rec)
            assert root.snapshot("cycles") == tuple(records)


class TestCrashSafety:
    def test_partial_trailing_line_dropped(self, tmp_path):
        root = DataRoot(tmp_path)
        root.append("cycles", ("2025-01-06", "nightly"))
        with open(root.path("cycles"), "a") as fh:
            fh.write("2025-01-07\tnig")  # crash mid-append, no newline
        assert root.snapshot("cycles") == (("2025-01-06", "nightly"),)

    def test_truncation_at_every_byte_of_last_append(self, tmp_path):
        """Simulated crash at arbitrary byte offsets inside the final
        append never corrupts the acked records before it."""
        acked = [("2025-01-06", "nightly"), ("2025-01-06", "daily"), ("2025-01-07", "nightly")]
        unacked = ("2025-01-07", "daily")
        probe = DataRoot(tmp_path / "probe")
        for rec in acked:
            probe.append("cycles", rec)
        base_size = probe.path("cycles").stat().st_size
        probe.append("cycles", unacked)
        full = probe.path("cycles").read_bytes()

        import random

        rng = random.Random(42)
        offsets = [rng.randrange(base_size, len(full)) for _ in range(100)]
        for i, cut in enumerate(offsets):
            root = DataRoot(tmp_path / f"crash{i}")
            with open(root.path("cycles"), "wb") as fh:
                fh.write(full[:cut])
            got = root.snapshot("cycles")
            assert got[: len(acked)] == tuple(acked)
            # the interrupted record may only appear whole, never partially
            assert len(got) in (len(acked), len(acked) + 1)
            if len(got) == len(acked) + 1:
                assert got[-1] == unacked

    def test_atomic_file_write_crash_between_write_and_rename(self, tmp_path):
        root = DataRoot(tmp_path)
        root.write_file("committee.flat.json", "old content")
        # simulate the crash: a temp file exists, the rename never happened
        stray = root.root / "committee.flat.json.tmp-crashed"
        stray.write_text("half-written new conten")
        assert root.read_file("committee.flat.json") == "old content"


class TestDocs:
    def test_doc_roundtrip(self, tmp_path):
        root = DataRoot(tmp_path)
        root.write_doc("d1", "some text")
        assert root.has_doc("d1")
        assert root.read_doc("d1") == "some text"

    def test_collections_registry_covers_layout(self):
        names = {fname for fname, _ in COLLECTIONS.values()}
        assert {"events.log", "classified.tsv", "recommendations.log", "users.tsv"} <= names

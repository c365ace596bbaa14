from pathlib import Path

import pytest

from quickstep.taxonomy import (
    FLAT,
    HIERARCHICAL,
    CycleError,
    DuplicateTopicError,
    HierarchyLockedError,
    MalformedTaxonomyError,
    Taxonomy,
    TopicNode,
    UnknownTopicError,
    add_topic,
    ancestors,
    flatten_taxonomy,
    load_taxonomy,
    make_taxonomy,
    save_taxonomy,
)

PACKAGED = Path(__file__).parents[1] / "src" / "quickstep" / "data" / "cs_taxonomy.tsv"


def write_tax(tmp_path, lines):
    p = tmp_path / "tax.tsv"
    p.write_text("\n".join(lines) + "\n")
    return p


def small_tree(mode=HIERARCHICAL):
    return make_taxonomy(
        mode if mode == FLAT else HIERARCHICAL,
        [
            TopicNode("top", "Top", None),
            TopicNode("m", "Middle", "top"),
            TopicNode("t", "Leaf", "m" if mode == HIERARCHICAL else "top"),
        ]
        if mode == HIERARCHICAL
        else [
            TopicNode("top", "Top", None),
            TopicNode("m", "Middle", "top"),
            TopicNode("t", "Leaf", "top"),
        ],
    )


class TestLoad:
    def test_root_plus_two_children(self, tmp_path):
        p = write_tax(tmp_path, ["top\tTop\t-", "a\tA\ttop", "b\tB\ttop"])
        tax = load_taxonomy(p)
        assert set(tax.nodes) == {"top", "a", "b"}
        assert tax.root == "top"

    def test_cycle_rejected(self, tmp_path):
        p = write_tax(tmp_path, ["top\tTop\t-", "a\tA\tb", "b\tB\ta"])
        with pytest.raises(CycleError):
            load_taxonomy(p)

    def test_missing_parent_rejected(self, tmp_path):
        p = write_tax(tmp_path, ["top\tTop\t-", "a\tA\tnowhere"])
        with pytest.raises(MalformedTaxonomyError) as err:
            load_taxonomy(p)
        assert "nowhere" in str(err.value)

    def test_duplicate_id_names_line(self, tmp_path):
        p = write_tax(tmp_path, ["top\tTop\t-", "a\tA\ttop", "a\tA2\ttop"])
        with pytest.raises(DuplicateTopicError) as err:
            load_taxonomy(p)
        assert ":3" in str(err.value)

    def test_multiple_roots_rejected(self, tmp_path):
        p = write_tax(tmp_path, ["top\tTop\t-", "other\tOther\t-"])
        with pytest.raises(MalformedTaxonomyError):
            load_taxonomy(p)

    def test_bad_field_count_names_line(self, tmp_path):
        p = write_tax(tmp_path, ["top\tTop\t-", "broken line"])
        with pytest.raises(MalformedTaxonomyError) as err:
            load_taxonomy(p)
        assert ":2" in str(err.value)

    def test_flat_mode_rejects_nesting(self, tmp_path):
        p = write_tax(tmp_path, ["top\tTop\t-", "a\tA\ttop", "b\tB\ta"])
        with pytest.raises(MalformedTaxonomyError):
            load_taxonomy(p, FLAT)

    def test_comments_and_blanks_ignored(self, tmp_path):
        p = write_tax(tmp_path, ["# heading", "", "top\tTop\t-", "a\tA\ttop"])
        assert set(load_taxonomy(p).nodes) == {"top", "a"}

    def test_save_load_save_byte_stable(self, tmp_path):
        tax = load_taxonomy(PACKAGED)
        p1 = tmp_path / "one.tsv"
        save_taxonomy(tax, p1)
        p2 = tmp_path / "two.tsv"
        save_taxonomy(load_taxonomy(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_packaged_taxonomy_shape(self):
        tax = load_taxonomy(PACKAGED)
        assert len(tax.nodes) == 31  # root + 30 topics
        assert tax.depth() == 2  # three levels counting the root


class TestAddTopic:
    def test_flat_add_attaches_to_root(self):
        tax = small_tree(FLAT)
        out = add_topic(tax, "Neural Networks")
        assert out.nodes["neural-networks"].parent == "top"
        assert "neural-networks" not in tax.nodes  # snapshot untouched

    def test_hierarchical_locked(self):
        tax = small_tree()
        with pytest.raises(HierarchyLockedError):
            add_topic(tax, "Anything")

    def test_hierarchical_override(self):
        tax = small_tree()
        out = add_topic(tax, "Deep Leaf", parent="m", admin_override=True)
        assert out.nodes["deep-leaf"].parent == "m"

    def test_duplicate_label_rejected(self):
        tax = small_tree(FLAT)
        with pytest.raises(DuplicateTopicError):
            add_topic(tax, "Leaf")

    def test_flat_rejects_non_root_parent(self):
        tax = small_tree(FLAT)
        with pytest.raises(MalformedTaxonomyError):
            add_topic(tax, "Nested", parent="t")


class TestAncestors:
    def test_root_has_none(self):
        assert ancestors(small_tree(), "top") == []

    def test_chain_nearest_first(self):
        assert ancestors(small_tree(), "t") == ["m", "top"]

    def test_flat_non_root_is_root_only(self):
        tax = small_tree(FLAT)
        for topic in ("m", "t"):
            assert ancestors(tax, topic) == ["top"]

    def test_unknown_topic(self):
        with pytest.raises(UnknownTopicError):
            ancestors(small_tree(), "nope")

    def test_terminates_within_node_count(self):
        tax = load_taxonomy(PACKAGED)
        for topic in tax.nodes:
            assert len(ancestors(tax, topic)) <= len(tax.nodes)

    def test_flattened_packaged_taxonomy(self):
        flat = flatten_taxonomy(load_taxonomy(PACKAGED))
        assert flat.mode == FLAT
        assert set(flat.nodes) == set(load_taxonomy(PACKAGED).nodes)
        for topic in flat.nodes:
            if topic != flat.root:
                assert ancestors(flat, topic) == [flat.root]

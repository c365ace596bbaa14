"""Topic schemes: an extensible flat list or a fixed is-a hierarchy.

Both modes share one representation, a parent-linked tree under a single
synthetic root, so ancestry queries and profile propagation use the same
code path. Taxonomy values are immutable snapshots; add_topic returns a
new snapshot and never touches existing nodes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

FLAT = "flat"
HIERARCHICAL = "hierarchical"

ROOT_PARENT_MARK = "-"


class TaxonomyError(Exception):
    pass


class MalformedTaxonomyError(TaxonomyError):
    pass


class CycleError(TaxonomyError):
    pass


class UnknownTopicError(TaxonomyError):
    pass


class DuplicateTopicError(TaxonomyError):
    pass


class HierarchyLockedError(TaxonomyError):
    """Raised when adding topics to a fixed hierarchy without override."""


@dataclass(frozen=True)
class TopicNode:
    id: str
    label: str
    parent: Optional[str]  # None only for the root


@dataclass(frozen=True)
class Taxonomy:
    mode: str  # FLAT or HIERARCHICAL
    nodes: dict[str, TopicNode]  # insertion-ordered, root first
    root: str

    def __contains__(self, topic_id: str) -> bool:
        return topic_id in self.nodes

    def topic_ids(self) -> list[str]:
        return list(self.nodes)

    def label_of(self, topic_id: str) -> str:
        if topic_id not in self.nodes:
            raise UnknownTopicError(topic_id)
        return self.nodes[topic_id].label

    def depth(self) -> int:
        return max((len(ancestors(self, t)) for t in self.nodes), default=0)


def slugify(label: str) -> str:
    slug = re.sub(r"[^0-9a-z]+", "-", label.lower()).strip("-")
    if not slug:
        raise MalformedTaxonomyError(f"label {label!r} yields an empty id")
    return slug


def _validate(mode: str, nodes: dict[str, TopicNode]) -> str:
    roots = [n.id for n in nodes.values() if n.parent is None]
    if len(roots) != 1:
        raise MalformedTaxonomyError(
            f"expected exactly one root, found {len(roots)}: {roots}"
        )
    root = roots[0]
    for node in nodes.values():
        if node.parent is not None and node.parent not in nodes:
            raise MalformedTaxonomyError(
                f"node {node.id!r} references unknown parent {node.parent!r}"
            )
    # walk every parent chain; revisiting a node within one walk is a cycle
    for node in nodes.values():
        seen = [node.id]
        cur = node
        while cur.parent is not None:
            if cur.parent in seen:
                raise CycleError(
                    "parent cycle: " + " -> ".join(seen[seen.index(cur.parent):] + [cur.parent])
                )
            seen.append(cur.parent)
            cur = nodes[cur.parent]
    if mode == FLAT:
        for node in nodes.values():
            if node.parent is not None and node.parent != root:
                raise MalformedTaxonomyError(
                    f"flat taxonomy requires depth <= 1, node {node.id!r} is nested"
                )
    return root


def make_taxonomy(mode: str, nodes: list[TopicNode]) -> Taxonomy:
    node_map: dict[str, TopicNode] = {}
    for node in nodes:
        if node.id in node_map:
            raise DuplicateTopicError(node.id)
        node_map[node.id] = node
    root = _validate(mode, node_map)
    return Taxonomy(mode=mode, nodes=node_map, root=root)


def load_taxonomy(path: str | Path, mode: str = HIERARCHICAL) -> Taxonomy:
    """Parse `<id>\\t<label>\\t<parent-or-->` lines; '#' starts a comment."""
    nodes: list[TopicNode] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise MalformedTaxonomyError(
                f"{path}:{lineno}: expected 3 tab-separated fields, got {len(parts)}"
            )
        topic_id, label, parent = parts
        if not topic_id or not label:
            raise MalformedTaxonomyError(f"{path}:{lineno}: empty id or label")
        if topic_id in seen:
            raise DuplicateTopicError(f"{path}:{lineno}: duplicate id {topic_id!r}")
        seen.add(topic_id)
        nodes.append(
            TopicNode(topic_id, label, None if parent == ROOT_PARENT_MARK else parent)
        )
    return make_taxonomy(mode, nodes)


def save_taxonomy(taxonomy: Taxonomy, path: str | Path) -> None:
    """Inverse of load_taxonomy; save->load->save is byte-stable."""
    lines = [
        f"{n.id}\t{n.label}\t{n.parent if n.parent is not None else ROOT_PARENT_MARK}"
        for n in taxonomy.nodes.values()
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def add_topic(
    taxonomy: Taxonomy,
    label: str,
    parent: Optional[str] = None,
    admin_override: bool = False,
) -> Taxonomy:
    """Append one topic, returning a new snapshot.

    Flat taxonomies attach new topics to the root; fixed hierarchies
    reject additions unless the administrative override is set.
    """
    if not label:
        raise MalformedTaxonomyError("empty label")
    if taxonomy.mode == HIERARCHICAL and not admin_override:
        raise HierarchyLockedError("fixed hierarchy does not accept new topics")
    if taxonomy.mode == FLAT and parent not in (None, taxonomy.root):
        raise MalformedTaxonomyError("flat taxonomy topics attach to the root")
    topic_id = slugify(label)
    if topic_id in taxonomy.nodes:
        raise DuplicateTopicError(topic_id)
    if any(n.label.lower() == label.lower() for n in taxonomy.nodes.values()):
        raise DuplicateTopicError(label)
    if parent is None:
        parent = taxonomy.root
    elif parent not in taxonomy.nodes:
        raise UnknownTopicError(parent)
    nodes = dict(taxonomy.nodes)
    nodes[topic_id] = TopicNode(topic_id, label, parent)
    return Taxonomy(mode=taxonomy.mode, nodes=nodes, root=taxonomy.root)


def flatten_taxonomy(taxonomy: Taxonomy) -> Taxonomy:
    """Same topic set with the hierarchy removed: every non-root node
    reattached directly to the root."""
    nodes = [taxonomy.nodes[taxonomy.root]] + [
        TopicNode(n.id, n.label, taxonomy.root)
        for n in taxonomy.nodes.values()
        if n.parent is not None
    ]
    return make_taxonomy(FLAT, nodes)


def ancestors(taxonomy: Taxonomy, topic: str) -> list[str]:
    """Parent chain of a topic, nearest first, root last, topic excluded."""
    if topic not in taxonomy.nodes:
        raise UnknownTopicError(topic)
    chain: list[str] = []
    parent = taxonomy.nodes[topic].parent
    while parent is not None:
        chain.append(parent)
        parent = taxonomy.nodes[parent].parent
    return chain

/**
 * Topic menu construction. The hierarchical group gets a nested menu
 * mirroring the is-a links exactly; the flat group gets a single level.
 * The structural root itself is never shown.
 */

import type { TopicInfo, TopicScheme } from "./types";

export interface MenuNode {
  id: string;
  label: string;
  children: MenuNode[];
}

function buildSubtree(topics: TopicInfo[], parentId: string): MenuNode[] {
  return topics
    .filter((t) => t.parent === parentId)
    .map((t) => ({ id: t.id, label: t.label, children: buildSubtree(topics, t.id) }));
}

export function buildTopicMenu(scheme: TopicScheme): MenuNode[] {
  if (scheme.mode === "flat") {
    return scheme.topics
      .filter((t) => t.parent !== null)
      .map((t) => ({ id: t.id, label: t.label, children: [] }));
  }
  return buildSubtree(scheme.topics, scheme.root);
}

/** Nesting depth of a menu; a single-level menu has depth 1. */
export function menuDepth(nodes: MenuNode[]): number {
  let depth = 0;
  for (const node of nodes) {
    depth = Math.max(depth, 1 + menuDepth(node.children));
  }
  return depth;
}

/** Depth of the topic scheme below its root (leaf distance). */
export function schemeDepth(scheme: TopicScheme): number {
  const parents = new Map(scheme.topics.map((t) => [t.id, t.parent]));
  let depth = 0;
  for (const topic of scheme.topics) {
    let steps = 0;
    let cursor: string | null | undefined = topic.id;
    while (cursor && cursor !== scheme.root) {
      cursor = parents.get(cursor);
      steps += 1;
    }
    depth = Math.max(depth, steps);
  }
  return depth;
}

/** Leaves-first flattening used by keyboard selection. */
export function flattenMenu(nodes: MenuNode[]): { id: string; label: string; level: number }[] {
  const rows: { id: string; label: string; level: number }[] = [];
  const walk = (list: MenuNode[], level: number) => {
    for (const node of list) {
      rows.push({ id: node.id, label: node.label, level });
      walk(node.children, level + 1);
    }
  };
  walk(nodes, 0);
  return rows;
}

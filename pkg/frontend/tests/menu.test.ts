import { describe, expect, it } from "vitest";

import { buildTopicMenu, flattenMenu, menuDepth, schemeDepth } from "../src/menu";
import type { TopicScheme } from "../src/types";

const hierarchical: TopicScheme = {
  group: "ontology",
  mode: "hierarchical",
  root: "top",
  topics: [
    { id: "top", label: "Top", parent: null },
    { id: "ai", label: "AI", parent: "top" },
    { id: "ml", label: "Machine Learning", parent: "ai" },
    { id: "nn", label: "Neural Networks", parent: "ai" },
    { id: "sys", label: "Systems", parent: "top" },
    { id: "os", label: "Operating Systems", parent: "sys" },
  ],
};

const flat: TopicScheme = {
  group: "flat",
  mode: "flat",
  root: "top",
  topics: [
    { id: "top", label: "Top", parent: null },
    { id: "ai", label: "AI", parent: "top" },
    { id: "ml", label: "Machine Learning", parent: "top" },
    { id: "os", label: "Operating Systems", parent: "top" },
  ],
};

describe("buildTopicMenu", () => {
  it("nests hierarchical topics exactly per parent links", () => {
    const menu = buildTopicMenu(hierarchical);
    expect(menu.map((n) => n.id)).toEqual(["ai", "sys"]);
    const ai = menu[0];
    expect(ai.children.map((n) => n.id)).toEqual(["ml", "nn"]);
    expect(ai.children.every((n) => n.children.length === 0)).toBe(true);
  });

  it("keeps the flat menu single level", () => {
    const menu = buildTopicMenu(flat);
    expect(menu.map((n) => n.id)).toEqual(["ai", "ml", "os"]);
    expect(menuDepth(menu)).toBe(1);
  });

  it("never shows the structural root", () => {
    for (const scheme of [hierarchical, flat]) {
      const ids = flattenMenu(buildTopicMenu(scheme)).map((r) => r.id);
      expect(ids).not.toContain("top");
    }
  });

  it("menu depth equals the scheme depth", () => {
    expect(menuDepth(buildTopicMenu(hierarchical))).toBe(schemeDepth(hierarchical));
    expect(menuDepth(buildTopicMenu(flat))).toBe(schemeDepth(flat));
  });
});

describe("flattenMenu", () => {
  it("walks depth first with level markers", () => {
    const rows = flattenMenu(buildTopicMenu(hierarchical));
    expect(rows).toEqual([
      { id: "ai", label: "AI", level: 0 },
      { id: "ml", label: "Machine Learning", level: 1 },
      { id: "nn", label: "Neural Networks", level: 1 },
      { id: "sys", label: "Systems", level: 0 },
      { id: "os", label: "Operating Systems", level: 1 },
    ]);
  });
});

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { RecommendationApp } from "../src/app";
import type { RecommendationSet } from "../src/types";

function fakeSet(items: number): RecommendationSet {
  return {
    user: "u",
    group: "flat",
    date: "2025-01-06",
    exposures_emitted: items,
    items: Array.from({ length: items }, (_, i) => ({
      doc_id: `d${i}`,
      topic: "ml",
      topic_label: "Machine Learning",
      url: `http://papers/d${i}.pdf`,
      score: 1 - i / 100,
      confidence: 0.9,
      rank: i + 1,
    })),
  };
}

function clientWith(handler: (url: string, init?: RequestInit) => { status: number; body: unknown }) {
  return new ApiClient("http://svc", null, async (url, init) => {
    const out = handler(url, init);
    return new Response(JSON.stringify(out.body), { status: out.status });
  });
}

describe("RecommendationApp", () => {
  it("renders rows in served rank order", async () => {
    const shuffled = fakeSet(5);
    shuffled.items.reverse();
    const app = new RecommendationApp(clientWith(() => ({ status: 200, body: shuffled })), "u");
    await app.load();
    expect(app.status).toBe("ready");
    expect(app.rows.map((r) => r.item.rank)).toEqual([1, 2, 3, 4, 5]);
  });

  it("shows the empty state on 404", async () => {
    const app = new RecommendationApp(clientWith(() => ({ status: 404, body: { detail: "none" } })), "u");
    await app.load();
    expect(app.status).toBe("empty");
  });

  it("shows the unreachable banner state on server errors", async () => {
    const app = new RecommendationApp(clientWith(() => ({ status: 502, body: {} })), "u");
    await app.load();
    expect(app.status).toBe("unreachable");
    expect(app.lastError).toBeTruthy();
  });

  it("rolls an optimistic rating back when the call fails", async () => {
    let served = false;
    const app = new RecommendationApp(
      clientWith((url) => {
        if (!served && url.includes("/recommendations/")) {
          served = true;
          return { status: 200, body: fakeSet(2) };
        }
        return { status: 500, body: {} };
      }),
      "u",
    );
    await app.load();
    await expect(app.rate("d0", "interesting")).rejects.toBeTruthy();
    expect(app.rows[0].rating).toBeNull();
  });

  it("navigates on jump even when feedback fails", async () => {
    let visited: string | null = null;
    let served = false;
    const app = new RecommendationApp(
      clientWith((url) => {
        if (!served && url.includes("/recommendations/")) {
          served = true;
          return { status: 200, body: fakeSet(1) };
        }
        return { status: 503, body: {} };
      }),
      "u",
      (url) => {
        visited = url;
      },
    );
    await app.load();
    await app.jump("d0");
    expect(visited).toBe("http://papers/d0.pdf");
  });
});

/**
 * Round trip against the real python service (acceptance: UI round trip).
 * Spawns `quickstep serve` on a temp data directory, seeds fixture data
 * over the API, then drives the view controller exactly as the page
 * would: rendering a 10-item set logs exactly one exposure per item,
 * each gesture lands exactly one correctly-typed line in events.log, and
 * the correction menu is single-level for the flat group while matching
 * the taxonomy depth for the ontology group.
 */

import { spawn, ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { RecommendationApp } from "../src/app";
import { menuDepth, schemeDepth } from "../src/menu";

const PORT = 8791;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let dataDir: string;

function eventLines(): string[][] {
  const raw = readFileSync(join(dataDir, "events.log"), "utf-8");
  return raw
    .split("\n")
    .filter((line) => line.length > 0)
    .map((line) => line.split("\t"));
}

function eventsOf(kind: string, user: string): string[][] {
  return eventLines().filter((f) => f[2] === kind && f[1] === user);
}

async function post(path: string, body: unknown): Promise<void> {
  const response = await fetch(`${BASE}${path}`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
  if (!response.ok) {
    throw new Error(`${path} -> ${response.status}: ${await response.text()}`);
  }
}

function mlDoc(i: number): string {
  return `learning learning model model gradient gradient epoch${i} epoch${i}`;
}

async function seedFixture(): Promise<void> {
  for (const [user, group] of [
    ["fred", "flat"],
    ["olga", "ontology"],
    ["seeder", "flat"],
  ] as const) {
    await post("/admin/users", { user, group });
  }
  // bootstrap examples for both groups (shared docs, true labels)
  for (const user of ["fred", "olga"]) {
    await post("/examples", {
      user,
      topic: "machine-learning",
      url: "http://x/ml-seed.pdf",
      text: "learning learning model model gradient gradient",
    });
    await post("/examples", {
      user,
      topic: "databases",
      url: "http://x/db-seed.pdf",
      text: "query query index index join join",
    });
  }
  // the seeder browses 14 papers so both groups have fresh candidates
  const seederEntries = Array.from({ length: 14 }, (_, i) => ({
    user: "seeder",
    url: `http://x/pool${i}.pdf`,
    at: `2025-01-06T09:${String(i).padStart(2, "0")}:00`,
    text: mlDoc(i),
  }));
  // fred and olga browse two papers each to give their profiles interest
  const readerEntries = ["fred", "olga"].flatMap((user, u) =>
    [0, 1].map((i) => ({
      user,
      url: `http://x/${user}${i}.pdf`,
      at: `2025-01-06T10:${String(u * 2 + i).padStart(2, "0")}:00`,
      text: mlDoc(20 + u * 2 + i),
    })),
  );
  await post("/log/browse", { entries: [...seederEntries, ...readerEntries] });
  await post("/admin/run-cycle", { phase: "nightly", as_of: "2025-01-06" });
  await post("/admin/run-cycle", { phase: "daily", as_of: "2025-01-06" });
}

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), "qs-ui-"));
  const init = spawn("quickstep", ["init", "--data", dataDir], { stdio: "ignore" });
  await new Promise((resolve) => init.on("exit", resolve));
  server = spawn("quickstep", ["serve", "--data", dataDir, "--port", String(PORT)], {
    stdio: "ignore",
  });
  for (let i = 0; i < 50; i += 1) {
    try {
      const r = await fetch(`${BASE}/healthz`);
      if (r.ok) break;
    } catch {
      /* not up yet */
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  await seedFixture();
}, 45_000);

afterAll(() => {
  server?.kill();
});

describe("UI round trip against the live service", () => {
  it("renders a 10-item set and fires exactly one exposure acknowledgement", async () => {
    const app = new RecommendationApp(new ApiClient(BASE), "fred");
    await app.load();
    expect(app.status).toBe("ready");
    expect(app.rows.length).toBe(10);
    expect(app.rows.map((r) => r.item.rank)).toEqual([1, 2, 3, 4, 5, 6, 7, 8, 9, 10]);
    expect(eventsOf("recommended_seen", "fred").length).toBe(10);

    await app.load(); // re-render: no duplicate exposure
    expect(eventsOf("recommended_seen", "fred").length).toBe(10);
  }, 20_000);

  it("each gesture lands exactly one correctly-typed event", async () => {
    const app = new RecommendationApp(new ApiClient(BASE), "fred", () => {});
    await app.load();
    const [first, second, third, fourth] = app.rows.map((r) => r.item);

    await app.rate(first.doc_id, "interesting");
    const interesting = eventsOf("rated_interesting", "fred");
    expect(interesting.length).toBe(1);
    expect(interesting[0][3]).toBe(first.topic);
    expect(interesting[0][4]).toBe(first.doc_id);

    await app.rate(second.doc_id, "not_interesting");
    const boring = eventsOf("rated_not_interesting", "fred");
    expect(boring.length).toBe(1);
    expect(boring[0][4]).toBe(second.doc_id);

    await app.jump(third.doc_id);
    const jumps = eventsOf("jump", "fred");
    expect(jumps.length).toBe(1);
    expect(jumps[0][4]).toBe(third.doc_id);

    await app.correct(fourth.doc_id, "databases");
    const corrections = eventsOf("correction", "fred");
    expect(corrections.length).toBe(1);
    expect(corrections[0][3]).toBe("databases");
    expect(corrections[0][4]).toBe(fourth.doc_id);
  }, 20_000);

  it("correction menu is single-level for flat, nested to taxonomy depth for ontology", async () => {
    const flatApp = new RecommendationApp(new ApiClient(BASE), "fred");
    await flatApp.load();
    const flatMenu = await flatApp.correctionMenu();
    expect(menuDepth(flatMenu)).toBe(1);

    const ontoApp = new RecommendationApp(new ApiClient(BASE), "olga");
    await ontoApp.load();
    expect(ontoApp.rows.length).toBeGreaterThan(0);
    const ontoMenu = await ontoApp.correctionMenu();
    expect(ontoApp.scheme?.mode).toBe("hierarchical");
    expect(menuDepth(ontoMenu)).toBe(schemeDepth(ontoApp.scheme!));
    expect(menuDepth(ontoMenu)).toBe(2); // area -> leaf in the packaged taxonomy
  }, 20_000);

  it("a page reload rebuilds everything from the API alone", async () => {
    const one = new RecommendationApp(new ApiClient(BASE), "olga");
    await one.load();
    const two = new RecommendationApp(new ApiClient(BASE), "olga");
    await two.load();
    expect(two.rows.map((r) => r.item)).toEqual(one.rows.map((r) => r.item));
  }, 20_000);
});

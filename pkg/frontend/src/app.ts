/**
 * View controller. Holds no authoritative state: everything the page
 * shows is reconstructed from the API on load, and a rating only sticks
 * locally once the server acknowledged it (optimistic mark, rolled back
 * on error).
 */

import { ApiClient } from "./api";
import { buildTopicMenu, MenuNode } from "./menu";
import type { FeedbackKind, RecommendationItem, RecommendationSet, TopicScheme } from "./types";

export interface RecommendationRow {
  item: RecommendationItem;
  rating: "interesting" | "not_interesting" | null;
  correctedTo: string | null;
}

export type AppStatus = "empty" | "ready" | "unreachable";

export class RecommendationApp {
  status: AppStatus = "empty";
  rows: RecommendationRow[] = [];
  set: RecommendationSet | null = null;
  scheme: TopicScheme | null = null;
  lastError: string | null = null;

  constructor(
    private api: ApiClient,
    readonly user: string,
    private navigate: (url: string) => void = () => {},
  ) {}

  /** Fetch and rebuild the whole view. The server counts the exposure on
   * the first serve of a set, so re-rendering never double-counts. */
  async load(): Promise<void> {
    try {
      const set = await this.api.getRecommendations(this.user);
      this.set = set;
      this.rows = set.items
        .slice()
        .sort((a, b) => a.rank - b.rank)
        .map((item) => ({ item, rating: null, correctedTo: null }));
      this.status = this.rows.length > 0 ? "ready" : "empty";
      this.lastError = null;
    } catch (err) {
      this.set = null;
      this.rows = [];
      this.status = (err as { status?: number }).status === 404 ? "empty" : "unreachable";
      this.lastError = String(err);
    }
  }

  private row(docId: string): RecommendationRow {
    const row = this.rows.find((r) => r.item.doc_id === docId);
    if (!row) {
      throw new Error(`no rendered row for ${docId}`);
    }
    return row;
  }

  /** interesting / not_interesting: one API call, optimistic mark,
   * rollback on failure. */
  async rate(docId: string, kind: Extract<FeedbackKind, "interesting" | "not_interesting">): Promise<void> {
    const row = this.row(docId);
    const previous = row.rating;
    row.rating = kind;
    try {
      await this.api.sendFeedback(this.user, docId, kind);
    } catch (err) {
      row.rating = previous;
      this.lastError = String(err);
      throw err;
    }
  }

  /** Jump: the feedback call must not block navigation; failures are
   * queued inside the client and retried later. */
  async jump(docId: string): Promise<void> {
    const row = this.row(docId);
    await this.api.trackJump(this.user, docId);
    this.navigate(row.item.url);
  }

  /** The correction dialog's menu, in the group's mode. */
  async correctionMenu(): Promise<MenuNode[]> {
    if (!this.set) {
      throw new Error("nothing rendered");
    }
    this.scheme = await this.api.getTopics(this.set.group);
    return buildTopicMenu(this.scheme);
  }

  async correct(docId: string, topicId: string): Promise<void> {
    const row = this.row(docId);
    const previous = row.correctedTo;
    row.correctedTo = topicId;
    try {
      await this.api.sendFeedback(this.user, docId, "correction", topicId);
    } catch (err) {
      row.correctedTo = previous;
      this.lastError = String(err);
      throw err;
    }
  }

  /** Add-example form: flat-group users may create the topic first. */
  async submitExample(topic: string, url: string, newTopicLabel?: string): Promise<string> {
    if (!this.set) {
      throw new Error("nothing rendered");
    }
    let topicId = topic;
    if (newTopicLabel) {
      const created = await this.api.addTopic(this.set.group, newTopicLabel);
      topicId = created.topic_id;
    }
    const ack = await this.api.submitExample(this.user, topicId, url);
    return ack.doc_id;
  }
}

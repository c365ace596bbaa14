/**
 * Thin client for the recommender API. Every user gesture maps to exactly
 * one request; jump feedback that fails is queued and retried rather than
 * dropped, because the navigation must proceed regardless.
 */

import type { FeedbackAck, FeedbackKind, RecommendationSet, TopicScheme } from "./types";

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

interface QueuedFeedback {
  user: string;
  docId: string;
  kind: FeedbackKind;
  correctedTopic?: string;
}

export class ApiClient {
  private queue: QueuedFeedback[] = [];

  constructor(
    private baseUrl: string,
    private token: string | null = null,
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  pendingRetries(): number {
    return this.queue.length;
  }

  private headers(): Record<string, string> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.token !== null) {
      headers["X-Auth-Token"] = this.token;
    }
    return headers;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: this.headers(),
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      const detail = await response.text().catch(() => "");
      throw new ApiError(response.status, `${method} ${path}: ${response.status} ${detail}`);
    }
    return (await response.json()) as T;
  }

  /** Current set for the user; the server logs the exposure on the first
   * serve of a set and deduplicates after that. */
  getRecommendations(user: string): Promise<RecommendationSet> {
    return this.request("GET", `/recommendations/${encodeURIComponent(user)}`);
  }

  getTopics(group: string): Promise<TopicScheme> {
    return this.request("GET", `/topics?group=${encodeURIComponent(group)}`);
  }

  sendFeedback(
    user: string,
    docId: string,
    kind: FeedbackKind,
    correctedTopic?: string,
  ): Promise<FeedbackAck> {
    return this.request("POST", "/feedback", {
      user,
      doc_id: docId,
      kind,
      corrected_topic: correctedTopic,
    });
  }

  /** Jump feedback must never block the navigation: failures are queued
   * for a later flush instead of surfacing. Resolves true when the event
   * was delivered now, false when it was queued. */
  async trackJump(user: string, docId: string): Promise<boolean> {
    try {
      await this.sendFeedback(user, docId, "jump");
      return true;
    } catch {
      this.queue.push({ user, docId, kind: "jump" });
      return false;
    }
  }

  /** Re-send queued feedback; items that fail again stay queued. */
  async flushRetries(): Promise<number> {
    const pending = this.queue;
    this.queue = [];
    let delivered = 0;
    for (const item of pending) {
      try {
        await this.sendFeedback(item.user, item.docId, item.kind, item.correctedTopic);
        delivered += 1;
      } catch {
        this.queue.push(item);
      }
    }
    return delivered;
  }

  addTopic(group: string, label: string): Promise<{ ok: boolean; topic_id: string }> {
    return this.request("POST", "/topics", { group, label });
  }

  submitExample(
    user: string,
    topic: string,
    url: string,
    text?: string,
  ): Promise<{ ok: boolean; doc_id: string }> {
    return this.request("POST", "/examples", { user, topic, url, text });
  }
}

/** Payload shapes of the recommender's JSON API. */

export interface RecommendationItem {
  doc_id: string;
  topic: string;
  topic_label: string;
  url: string;
  score: number;
  confidence: number;
  rank: number;
}

export interface RecommendationSet {
  user: string;
  group: string;
  date: string;
  exposures_emitted: number;
  items: RecommendationItem[];
}

export interface TopicInfo {
  id: string;
  label: string;
  parent: string | null;
}

export interface TopicScheme {
  group: string;
  mode: "flat" | "hierarchical";
  root: string;
  topics: TopicInfo[];
}

export type FeedbackKind = "interesting" | "not_interesting" | "jump" | "correction";

export interface FeedbackAck {
  ok: boolean;
  event_kind: string;
  topic: string;
}

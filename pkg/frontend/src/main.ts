// Browser entry: ?user=<id> picks the account, ?api=<base> overrides the
// API origin (defaults to same-origin).

import { ApiClient } from "./api";
import { RecommendationApp } from "./app";
import { renderApp } from "./render";

const params = new URLSearchParams(window.location.search);
const user = params.get("user") ?? "demo";
const base = params.get("api") ?? "";
const token = params.get("token");

const api = new ApiClient(base, token);
const app = new RecommendationApp(api, user, (url) => window.location.assign(url));

const container = document.getElementById("app");
if (!container) {
  throw new Error("missing #app container");
}

void app.load().then(() => renderApp(container, app));

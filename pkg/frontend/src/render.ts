/**
 * DOM rendering: one recommendation list in served rank order plus the
 * add-example panel. Rendering is a pure projection of the controller's
 * state; every control delegates to one controller method.
 */

import { RecommendationApp, RecommendationRow } from "./app";
import { flattenMenu } from "./menu";

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function renderRow(app: RecommendationApp, row: RecommendationRow, rerender: () => void): HTMLElement {
  const item = row.item;
  const li = el("li", "rec-row");

  const title = el("a", "rec-link", `${item.rank}. ${item.doc_id}`) as HTMLAnchorElement;
  title.href = item.url;
  title.addEventListener("click", (ev) => {
    ev.preventDefault();
    void app.jump(item.doc_id);
  });
  li.appendChild(title);

  li.appendChild(el("span", "rec-topic", item.topic_label));

  const interesting = el("button", "rate-good", row.rating === "interesting" ? "interesting ✓" : "interesting");
  interesting.addEventListener("click", () => {
    void app.rate(item.doc_id, "interesting").finally(rerender);
  });
  li.appendChild(interesting);

  const boring = el("button", "rate-bad", row.rating === "not_interesting" ? "not interesting ✓" : "not interesting");
  boring.addEventListener("click", () => {
    void app.rate(item.doc_id, "not_interesting").finally(rerender);
  });
  li.appendChild(boring);

  const fix = el("button", "correct", row.correctedTo ? `topic: ${row.correctedTo}` : "correct topic");
  fix.addEventListener("click", () => {
    void openCorrectionMenu(app, item.doc_id, li, rerender);
  });
  li.appendChild(fix);

  return li;
}

async function openCorrectionMenu(
  app: RecommendationApp,
  docId: string,
  host: HTMLElement,
  rerender: () => void,
): Promise<void> {
  const menu = await app.correctionMenu();
  const box = el("div", "topic-menu");
  const select = document.createElement("select");
  for (const entry of flattenMenu(menu)) {
    const option = document.createElement("option");
    option.value = entry.id;
    option.textContent = `${"  ".repeat(entry.level)}${entry.label}`;
    select.appendChild(option);
  }
  const apply = el("button", "apply-correction", "apply");
  apply.addEventListener("click", () => {
    void app.correct(docId, select.value).finally(rerender);
    box.remove();
  });
  box.appendChild(select);
  box.appendChild(apply);
  host.appendChild(box);
}

export function renderApp(container: HTMLElement, app: RecommendationApp): void {
  const rerender = () => renderApp(container, app);
  container.replaceChildren();

  if (app.status === "unreachable") {
    container.appendChild(el("div", "banner error", "service unreachable; retry shortly"));
    return;
  }
  if (app.status === "empty") {
    container.appendChild(el("div", "banner empty", "no recommendations yet"));
    return;
  }

  const heading = el("h2", "rec-heading", `Recommendations for ${app.user} (${app.set?.date})`);
  container.appendChild(heading);

  const list = el("ul", "rec-list");
  for (const row of app.rows) {
    list.appendChild(renderRow(app, row, rerender));
  }
  container.appendChild(list);
}

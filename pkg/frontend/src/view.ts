/** DOM rendering for the rating screens.
 *
 * Everything shown comes straight from the service payload: summaries appear
 * under their neutral labels in payload order, and nothing here ever knows a
 * model name.
 */

import type { NextPayload } from "./api.js";

export const SCALE_MIN = 1;
export const SCALE_MAX = 10;

export interface ViewState {
  payload: NextPayload | null;
  scores: Map<string, number>;
  error: string | null;
  canRetry: boolean;
}

export interface ViewHandlers {
  onScore: (label: string, score: number) => void;
  onSubmit: () => void;
  onRetry: () => void;
}

/** Returns a problem description for an unusable payload, or null. */
export function validatePayload(payload: NextPayload): string | null {
  if (payload.done) {
    return null;
  }
  if (!payload.call_id || !payload.progress) {
    return "The server sent an incomplete item (no call information).";
  }
  if (!Array.isArray(payload.transcript) || payload.transcript.length === 0) {
    return "The server sent an incomplete item (no transcript).";
  }
  if (!Array.isArray(payload.summaries) || payload.summaries.length === 0) {
    return "The server sent an incomplete item (no summaries).";
  }
  for (const item of payload.summaries) {
    if (typeof item.label !== "string" || !item.label || typeof item.text !== "string") {
      return "The server sent a malformed summary entry.";
    }
  }
  return null;
}

/** True once every label carries an integer score on the 1-10 scale. */
export function isComplete(payload: NextPayload, scores: Map<string, number>): boolean {
  const labels = (payload.summaries ?? []).map((s) => s.label);
  if (labels.length === 0) {
    return false;
  }
  return labels.every((label) => {
    const value = scores.get(label);
    return Number.isInteger(value) && (value as number) >= SCALE_MIN && (value as number) <= SCALE_MAX;
  });
}

export function render(root: HTMLElement, state: ViewState, handlers: ViewHandlers): void {
  root.replaceChildren();

  if (state.error) {
    root.appendChild(banner(state.error, state.canRetry ? handlers.onRetry : null));
  }

  const payload = state.payload;
  if (!payload) {
    if (!state.error) {
      root.appendChild(el("p", "loading", "Loading…"));
    }
    return;
  }

  if (payload.done) {
    renderDone(root, payload);
    return;
  }

  const problem = validatePayload(payload);
  if (problem) {
    // a broken item must not half-render: banner only
    root.replaceChildren(banner(problem, null));
    return;
  }

  const progress = payload.progress!;
  const header = el("header", "header");
  header.appendChild(el("h1", "title", "Rate the summaries"));
  header.appendChild(
    el("p", "progress", `Call ${progress.completed + 1} of ${progress.total}`),
  );
  root.appendChild(header);

  root.appendChild(transcriptPanel(payload));

  const list = el("section", "summaries");
  for (const item of payload.summaries!) {
    list.appendChild(summaryCard(item.label, item.text, state.scores.get(item.label), handlers));
  }
  root.appendChild(list);

  const footer = el("footer", "footer");
  const missing = payload.summaries!.filter((s) => !state.scores.has(s.label)).length;
  footer.appendChild(
    el(
      "p",
      "hint",
      missing === 0 ? "All summaries scored." : `Score ${missing} more summar${missing === 1 ? "y" : "ies"} to continue.`,
    ),
  );
  const submit = el("button", "submit", "Submit ratings") as HTMLButtonElement;
  submit.id = "submit";
  submit.type = "button";
  submit.disabled = !isComplete(payload, state.scores);
  submit.addEventListener("click", () => handlers.onSubmit());
  footer.appendChild(submit);
  root.appendChild(footer);
}

function renderDone(root: HTMLElement, payload: NextPayload): void {
  const section = el("section", "done");
  section.appendChild(el("h1", "title", "All done"));
  const rated = payload.rated_calls ?? 0;
  section.appendChild(
    el("p", "done-note", `You rated every summary for ${rated} call${rated === 1 ? "" : "s"}. Thank you.`),
  );
  root.appendChild(section);
}

function transcriptPanel(payload: NextPayload): HTMLElement {
  const panel = el("section", "transcript-panel");
  panel.appendChild(el("h2", "subtitle", "Transcript"));
  if (payload.audio_url) {
    const audio = document.createElement("audio");
    audio.controls = true;
    audio.src = payload.audio_url;
    panel.appendChild(audio);
  }
  const scroll = el("div", "transcript");
  for (const turn of payload.transcript!) {
    const row = el("p", `turn turn-${turn.speaker}`);
    row.appendChild(el("span", "speaker", `${turn.speaker}: `));
    row.appendChild(document.createTextNode(turn.text));
    scroll.appendChild(row);
  }
  panel.appendChild(scroll);
  return panel;
}

function summaryCard(
  label: string,
  text: string,
  selected: number | undefined,
  handlers: ViewHandlers,
): HTMLElement {
  const card = el("article", "summary-card");
  card.dataset.label = label;
  card.appendChild(el("h3", "summary-label", `Summary ${label}`));
  card.appendChild(el("p", "summary-text", text));

  const scale = el("div", "scale");
  scale.setAttribute("role", "radiogroup");
  scale.setAttribute("aria-label", `Score for summary ${label}`);
  for (let score = SCALE_MIN; score <= SCALE_MAX; score++) {
    const button = el("button", "score", String(score)) as HTMLButtonElement;
    button.type = "button";
    button.dataset.label = label;
    button.dataset.score = String(score);
    if (selected === score) {
      button.classList.add("selected");
      button.setAttribute("aria-pressed", "true");
    }
    button.addEventListener("click", () => handlers.onScore(label, score));
    scale.appendChild(button);
  }
  card.appendChild(scale);
  return card;
}

function banner(message: string, onRetry: (() => void) | null): HTMLElement {
  const box = el("div", "banner");
  box.setAttribute("role", "alert");
  box.appendChild(el("span", "banner-text", message));
  if (onRetry) {
    const retry = el("button", "retry", "Try again") as HTMLButtonElement;
    retry.type = "button";
    retry.addEventListener("click", () => onRetry());
    box.appendChild(retry);
  }
  return box;
}

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

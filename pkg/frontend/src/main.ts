/** Browser entry point: resolve the session, then hand over to RatingApp. */

import { RaterClient } from "./api.js";
import { RatingApp } from "./app.js";

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) {
    return;
  }
  const client = new RaterClient("");
  const sessionId = new URLSearchParams(window.location.search).get("session");
  if (sessionId) {
    await new RatingApp(root, client, sessionId).start();
    return;
  }

  try {
    const sessions = await client.sessions();
    root.replaceChildren();
    const heading = document.createElement("h1");
    heading.textContent = "Pick your session";
    root.appendChild(heading);
    const list = document.createElement("ul");
    list.className = "session-list";
    for (const session of sessions) {
      const item = document.createElement("li");
      const link = document.createElement("a");
      link.href = `?session=${encodeURIComponent(session.session_id)}`;
      link.textContent = `${session.annotator_id} (${session.completed_calls}/${session.total_calls}${session.done ? ", done" : ""})`;
      item.appendChild(link);
      list.appendChild(item);
    }
    root.appendChild(list);
  } catch {
    root.textContent = "Could not load sessions from the rating service.";
  }
}

void boot();

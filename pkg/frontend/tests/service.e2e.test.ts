/**
 * Blind-rating round trip against a live rating service.
 *
 * Two simulated annotators work through 2 calls x 4 models using the real UI
 * components in jsdom and real HTTP. The service is killed hard between the
 * first annotator's calls and restarted on a fresh port over the same data
 * directory; nothing acknowledged may be lost. Every response body seen by
 * the annotator flow and every DOM snapshot is scanned for model ids, and the
 * final /api/results must equal means computed by hand from the session plans
 * on disk.
 */

import { spawn } from "node:child_process";
import type { ChildProcess } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { RaterClient } from "../src/api.js";
import { RatingApp } from "../src/app.js";

const REPO_ROOT = path.resolve(path.dirname(fileURLToPath(import.meta.url)), "..", "..");
const MODELS = ["lead7", "bertsum", "topicsum", "rbmsum"] as const;
const CALLS = ["c1", "c2"] as const;
const LABEL_SCORES: Record<string, number>[] = [
  { A: 6, B: 7, C: 5, D: 3 },
  { A: 2, B: 9, C: 8, D: 4 },
];

const realFetch = globalThis.fetch;
const annotatorBodies: string[] = [];
const domSnapshots: string[] = [];

let workDir: string;
let dataDir: string;
let cfgPath: string;
let proc: ChildProcess | null = null;
let baseUrl = "";

function jsonl(records: object[]): string {
  return records.map((r) => JSON.stringify(r)).join("\n") + "\n";
}

function writeFixtures(): void {
  const corpus = CALLS.map((callId, i) => ({
    call_id: callId,
    domain: "mobile phones",
    utterances: [
      { speaker: "agent", text: `hello you are through to desk ${i + 1} how can i help` },
      { speaker: "customer", text: "my monthly bill doubled and i want to know why" },
      { speaker: "agent", text: "i can see a roaming charge i will refund half of it today" },
    ],
  }));
  const summaries = CALLS.flatMap((callId) =>
    MODELS.map((modelId, i) => ({
      call_id: callId,
      model_id: modelId,
      sentence_indices: [i],
      text: `candidate summary ${i + 1} of ${callId}: the bill doubled and a refund was agreed`,
    })),
  );
  fs.writeFileSync(path.join(workDir, "corpus.jsonl"), jsonl(corpus));
  fs.writeFileSync(path.join(workDir, "summaries.jsonl"), jsonl(summaries));
  fs.writeFileSync(
    cfgPath,
    [
      `corpus = ${path.join(workDir, "corpus.jsonl")}`,
      `summaries = ${path.join(workDir, "summaries.jsonl")}`,
      `rating_models = ${MODELS.join(",")}`,
      "annotators = ann1,ann2",
      "seed = 42",
      `out = ${dataDir}`,
      "",
    ].join("\n"),
  );
}

async function waitForHealth(url: string, stderr: () => string): Promise<void> {
  for (let i = 0; i < 150; i++) {
    try {
      const res = await realFetch(`${url}/api/health`);
      if (res.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  throw new Error(`rating service did not come up at ${url}\n${stderr()}`);
}

async function startService(port: number): Promise<void> {
  const child = spawn(
    "python3",
    ["-m", "callsum.harness", "serve-ratings", "--config", cfgPath, "--port", String(port)],
    {
      cwd: REPO_ROOT,
      env: { ...process.env, PYTHONPATH: path.join(REPO_ROOT, "src") },
      stdio: ["ignore", "pipe", "pipe"],
    },
  );
  let stderr = "";
  child.stderr?.on("data", (chunk) => {
    stderr += String(chunk);
  });
  proc = child;
  baseUrl = `http://127.0.0.1:${port}`;
  await waitForHealth(baseUrl, () => stderr);
}

function stopService(): Promise<void> {
  const child = proc;
  proc = null;
  if (!child || child.exitCode !== null) {
    return Promise.resolve();
  }
  return new Promise((resolve) => {
    child.once("exit", () => resolve());
    child.kill("SIGKILL");
  });
}

/** Drive the rendered controls like an annotator: click scores, click submit. */
async function rateCurrentCall(root: HTMLElement, scores: Record<string, number>): Promise<void> {
  for (const [label, score] of Object.entries(scores)) {
    const button = root.querySelector<HTMLButtonElement>(
      `button.score[data-label="${label}"][data-score="${score}"]`,
    );
    expect(button, `score button ${label}=${score}`).not.toBeNull();
    button!.click();
  }
  domSnapshots.push(root.innerHTML);
  const submit = root.querySelector<HTMLButtonElement>("#submit");
  expect(submit).not.toBeNull();
  expect(submit!.disabled).toBe(false);
  const before = root.textContent ?? "";
  submit!.click();
  await waitForChange(root, before);
}

async function waitForChange(root: HTMLElement, before: string): Promise<void> {
  for (let i = 0; i < 100; i++) {
    await new Promise((r) => setTimeout(r, 50));
    if ((root.textContent ?? "") !== before) {
      domSnapshots.push(root.innerHTML);
      return;
    }
  }
  throw new Error("view did not advance after submit");
}

function newAppRoot(): HTMLElement {
  const root = document.createElement("div");
  document.body.appendChild(root);
  return root;
}

beforeAll(async () => {
  workDir = fs.mkdtempSync(path.join(os.tmpdir(), "rater-e2e-"));
  dataDir = path.join(workDir, "data");
  cfgPath = path.join(workDir, "rating.cfg");
  writeFixtures();

  // record every body the annotator flow receives for the blinding scan
  globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const response = await realFetch(input, init);
    try {
      annotatorBodies.push(await response.clone().text());
    } catch {
      // opaque body; nothing to scan
    }
    return response;
  }) as typeof fetch;

  await startService(21000 + Math.floor(Math.random() * 2000));
}, 60_000);

afterAll(async () => {
  globalThis.fetch = realFetch;
  await stopService();
});

describe("blind rating round trip", () => {
  it("collects both annotators' ratings across a hard service restart", async () => {
    const sessions = await new RaterClient(baseUrl).sessions();
    expect(sessions).toHaveLength(2);
    const byAnnotator = new Map(sessions.map((s) => [s.annotator_id, s.session_id]));
    const ann1 = byAnnotator.get("ann1")!;
    const ann2 = byAnnotator.get("ann2")!;

    // annotator 1 rates the first call, then the service dies hard
    const root1 = newAppRoot();
    const app1 = new RatingApp(root1, new RaterClient(baseUrl), ann1);
    await app1.start();
    domSnapshots.push(root1.innerHTML);
    expect(root1.textContent).toContain("Call 1 of 2");
    await rateCurrentCall(root1, LABEL_SCORES[0]);
    expect(root1.textContent).toContain("Call 2 of 2");

    await stopService();
    await startService(23100 + Math.floor(Math.random() * 2000));

    // the annotator reloads the page: the server-side cursor resumes at call 2
    const root1b = newAppRoot();
    const app1b = new RatingApp(root1b, new RaterClient(baseUrl), ann1);
    await app1b.start();
    domSnapshots.push(root1b.innerHTML);
    expect(root1b.textContent).toContain("Call 2 of 2");
    await rateCurrentCall(root1b, LABEL_SCORES[1]);
    expect(root1b.querySelector(".done")).not.toBeNull();
    expect(root1b.textContent).toContain("2 calls");

    // annotator 2 works straight through on the restarted service
    const root2 = newAppRoot();
    const app2 = new RatingApp(root2, new RaterClient(baseUrl), ann2);
    await app2.start();
    domSnapshots.push(root2.innerHTML);
    for (const scores of LABEL_SCORES) {
      await rateCurrentCall(root2, scores);
    }
    expect(root2.querySelector(".done")).not.toBeNull();

    // nothing acknowledged was lost: 2 annotators x 2 calls x 4 labels
    const log = fs
      .readFileSync(path.join(dataDir, "ratings.jsonl"), "utf8")
      .split("\n")
      .filter((line) => line.trim());
    expect(log).toHaveLength(16);

    // results come from the experimenter's endpoint, outside the blinded flow
    const results = (await (await realFetch(`${baseUrl}/api/results`)).json()) as {
      results: { model: string; mos: number; count: number }[];
    };
    const got = new Map(results.results.map((r) => [r.model, r]));

    const plans = JSON.parse(
      fs.readFileSync(path.join(dataDir, "sessions.json"), "utf8"),
    ) as { calls: string[]; blind: Record<string, Record<string, string>> }[];
    const collected = new Map<string, number[]>(MODELS.map((m) => [m, []]));
    for (const plan of plans) {
      plan.calls.forEach((callId, index) => {
        for (const [label, modelId] of Object.entries(plan.blind[callId])) {
          collected.get(modelId)!.push(LABEL_SCORES[index][label]);
        }
      });
    }
    for (const modelId of MODELS) {
      const scores = collected.get(modelId)!;
      expect(scores).toHaveLength(4);
      const mean = scores.reduce((a, b) => a + b, 0) / scores.length;
      expect(got.get(modelId)!.mos).toBe(mean);
      expect(got.get(modelId)!.count).toBe(4);
    }

    // blinding: nothing the annotators saw names a model
    expect(annotatorBodies.length).toBeGreaterThan(10);
    expect(domSnapshots.length).toBeGreaterThan(5);
    for (const body of [...annotatorBodies, ...domSnapshots]) {
      const lowered = body.toLowerCase();
      for (const modelId of MODELS) {
        expect(lowered).not.toContain(modelId);
      }
    }
  });
});

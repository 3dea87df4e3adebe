/** Controller: loads the next item, gathers scores, submits, advances.
 *
 * The server owns all progress; this class keeps only the current view. A
 * refresh therefore resumes at the server's cursor with nothing lost, and a
 * submit that fails on the network keeps the entered scores for a retry.
 */

import { ApiError, RaterClient } from "./api.js";
import type { NextPayload } from "./api.js";
import { isComplete, render } from "./view.js";
import type { ViewState } from "./view.js";

export class RatingApp {
  readonly state: ViewState = {
    payload: null,
    scores: new Map<string, number>(),
    error: null,
    canRetry: false,
  };

  constructor(
    private readonly root: HTMLElement,
    private readonly client: RaterClient,
    readonly sessionId: string,
  ) {}

  async start(): Promise<void> {
    await this.loadNext();
  }

  async loadNext(): Promise<void> {
    try {
      const payload: NextPayload = await this.client.next(this.sessionId);
      this.state.payload = payload;
      this.state.scores = new Map();
      this.state.error = null;
      this.state.canRetry = false;
    } catch (err) {
      this.state.error = describe(err);
      this.state.canRetry = true;
    }
    this.render();
  }

  setScore(label: string, score: number): void {
    this.state.scores.set(label, score);
    this.state.error = null;
    this.state.canRetry = false;
    this.render();
  }

  async submitCurrent(): Promise<void> {
    const payload = this.state.payload;
    if (!payload || payload.done || !isComplete(payload, this.state.scores)) {
      return;
    }
    const ratings = Object.fromEntries(this.state.scores);
    try {
      await this.client.submit(this.sessionId, payload.call_id!, ratings);
      await this.loadNext();
    } catch (err) {
      // entered values always survive a failed submit
      this.state.error = describe(err);
      this.state.canRetry = !(err instanceof ApiError);
      this.render();
    }
  }

  retry(): void {
    if (!this.state.payload) {
      void this.loadNext();
    } else {
      void this.submitCurrent();
    }
  }

  private render(): void {
    render(this.root, this.state, {
      onScore: (label, score) => this.setScore(label, score),
      onSubmit: () => void this.submitCurrent(),
      onRetry: () => this.retry(),
    });
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    return err.message;
  }
  return "Could not reach the rating service. Your scores are kept; try again.";
}

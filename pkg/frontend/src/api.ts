/** Typed client for the rating service HTTP API. */

export interface TranscriptTurn {
  speaker: string;
  text: string;
}

export interface SummaryItem {
  label: string;
  text: string;
}

export interface Progress {
  completed: number;
  total: number;
}

export interface NextPayload {
  done: boolean;
  call_id?: string;
  progress?: Progress;
  transcript?: TranscriptTurn[];
  summaries?: SummaryItem[];
  audio_url?: string | null;
  rated_calls?: number;
}

export interface SubmitAck {
  accepted: boolean;
  duplicate: boolean;
  completed: number;
}

export interface SessionOverview {
  session_id: string;
  annotator_id: string;
  total_calls: number;
  completed_calls: number;
  done: boolean;
}

/** A structured error response ({code, message}) from the service. */
export class ApiError extends Error {
  constructor(
    readonly code: string,
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class RaterClient {
  constructor(readonly baseUrl: string = "") {}

  next(sessionId: string): Promise<NextPayload> {
    return this.request<NextPayload>(`/api/session/${encodeURIComponent(sessionId)}/next`);
  }

  submit(sessionId: string, callId: string, ratings: Record<string, number>): Promise<SubmitAck> {
    return this.request<SubmitAck>(`/api/session/${encodeURIComponent(sessionId)}/ratings`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ call_id: callId, ratings }),
    });
  }

  async sessions(): Promise<SessionOverview[]> {
    const data = await this.request<{ sessions: SessionOverview[] }>("/api/sessions");
    return data.sessions;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    const text = await response.text();
    let data: unknown = null;
    try {
      data = text ? JSON.parse(text) : null;
    } catch {
      data = null;
    }
    if (!response.ok) {
      const body = (data ?? {}) as { code?: string; message?: string };
      throw new ApiError(
        body.code ?? "http_error",
        response.status,
        body.message ?? `request failed with status ${response.status}`,
      );
    }
    return data as T;
  }
}

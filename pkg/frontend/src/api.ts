// Typed fetch client for the pre-assessment HTTP API.
// All verdicts, durations, and recommendations come from the server;
// this module only moves JSON across the wire.

export interface QuestionPayload {
  leaf: string;
  attempt: number;
  max_attempts: number;
  prompt: string;
}

export interface RecommendationTarget {
  concept: string;
  url: string;
}

export interface RecommendationPayload {
  verdict: string;
  targets: RecommendationTarget[];
}

export interface FeedbackPayload {
  leaf: string;
  attempt: number;
  outcome: "passed" | "not_passed";
  message: string;
}

export interface StartResponse {
  id: string;
  student: string;
  desired: string;
  phase: string;
  question: QuestionPayload | null;
  recommendation: RecommendationPayload | null;
}

export interface AnswerResponse {
  feedback: FeedbackPayload;
  question: QuestionPayload | null;
  recommendation: RecommendationPayload | null;
  phase: string;
}

export interface QuestionStatusResponse {
  status: "active" | "done";
  question: QuestionPayload | null;
  recommendation: RecommendationPayload | null;
}

export interface ResultResponse {
  phase: string;
  recommendation: RecommendationPayload;
}

export interface AttemptPayload {
  attempt: number;
  asked_at: string;
  answered_at: string;
  outcome: string;
  duration: number;
}

export interface TaskSummaryPayload {
  question: string;
  final_outcome: string;
  average_duration: number;
  attempts: AttemptPayload[];
}

export interface SessionSummaryPayload {
  desired: string;
  prepared: boolean;
  remark: string;
  total_duration: number;
  tasks: TaskSummaryPayload[];
}

export interface HistoryResponse {
  student: string;
  sessions: SessionSummaryPayload[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }

  /** Worth offering a retry button for; domain errors are not. */
  get retryable(): boolean {
    return this.status === 0 || this.status >= 500;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private pendingClock: string[] = [];

  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  /**
   * Queue scripted clock moments; the next request carries them in the
   * X-Clock header.  Mirrors the server's replay hook and is never used
   * by the page itself.
   */
  queueClock(moments: string[]): void {
    this.pendingClock.push(...moments);
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/healthz");
  }

  startSession(student: string, desired: string): Promise<StartResponse> {
    return this.request("POST", "/sessions", { student, desired });
  }

  currentQuestion(sessionId: string): Promise<QuestionStatusResponse> {
    return this.request("GET", `/sessions/${sessionId}/question`);
  }

  submitAnswer(sessionId: string, text: string): Promise<AnswerResponse> {
    return this.request("POST", `/sessions/${sessionId}/answer`, { text });
  }

  sessionResult(sessionId: string): Promise<ResultResponse> {
    return this.request("GET", `/sessions/${sessionId}/result`);
  }

  studentHistory(student: string): Promise<HistoryResponse> {
    return this.request("GET", `/students/${encodeURIComponent(student)}/history`);
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const headers: Record<string, string> = {};
    const init: RequestInit = { method, headers };
    if (body !== undefined) {
      headers["Content-Type"] = "application/json";
      init.body = JSON.stringify(body);
    }
    if (this.pendingClock.length > 0) {
      headers["X-Clock"] = this.pendingClock.join(",");
      this.pendingClock = [];
    }

    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(0, "NetworkError", `cannot reach server: ${err}`);
    }

    if (!response.ok) {
      throw await this.asApiError(response);
    }
    return (await response.json()) as T;
  }

  private async asApiError(response: Response): Promise<ApiError> {
    let code = `Http${response.status}`;
    let message = response.statusText || `request failed (${response.status})`;
    try {
      const body = (await response.json()) as { code?: string; message?: string };
      if (body.code) code = body.code;
      if (body.message) message = body.message;
    } catch {
      // non-JSON error body; keep the status-derived fallback
    }
    return new ApiError(response.status, code, message);
  }
}

// View-state logic for the single-page client.
//
// A SessionView is rebuilt from each server response rather than mutated,
// so the displayed phase can never contradict what the server last said.
// The client computes nothing itself: prompts, feedback, verdicts, and
// durations are passed through exactly as received.

import type {
  AnswerResponse,
  FeedbackPayload,
  HistoryResponse,
  QuestionPayload,
  QuestionStatusResponse,
  RecommendationPayload,
  StartResponse,
} from "./api.js";

export interface SessionView {
  id: string;
  student: string;
  desired: string;
  phase: string;
  prompt: QuestionPayload | null;
  attempt: number;
  feedback: FeedbackPayload | null;
  recommendation: RecommendationPayload | null;
}

// Exactly one of {prompt, recommendation} is active once a session exists.
function checkCards(
  where: string,
  prompt: QuestionPayload | null,
  recommendation: RecommendationPayload | null,
): void {
  if ((prompt === null) === (recommendation === null)) {
    throw new Error(
      `view invariant violated in ${where}: ` +
        `prompt ${prompt ? "set" : "unset"}, ` +
        `recommendation ${recommendation ? "set" : "unset"}`,
    );
  }
}

export function viewFromStart(response: StartResponse): SessionView {
  checkCards("start", response.question, response.recommendation);
  return {
    id: response.id,
    student: response.student,
    desired: response.desired,
    phase: response.phase,
    prompt: response.question,
    attempt: response.question?.attempt ?? 0,
    feedback: null,
    recommendation: response.recommendation,
  };
}

export function viewFromAnswer(
  view: SessionView,
  response: AnswerResponse,
): SessionView {
  checkCards("answer", response.question, response.recommendation);
  return {
    ...view,
    phase: response.phase,
    prompt: response.question,
    attempt: response.question?.attempt ?? response.feedback.attempt,
    feedback: response.feedback,
    recommendation: response.recommendation,
  };
}

// Refresh safety: re-fetching the current question after a reload rebuilds
// the same card the student was looking at.  The last feedback line is not
// part of the server's question resource, so it is simply absent.
export function viewFromRefresh(
  view: SessionView,
  response: QuestionStatusResponse,
): SessionView {
  checkCards("refresh", response.question, response.recommendation);
  return {
    ...view,
    phase: response.status === "done" ? "done" : "question_asked",
    prompt: response.question,
    attempt: response.question?.attempt ?? 0,
    feedback: null,
    recommendation: response.recommendation,
  };
}

/** Reason an answer must not be submitted yet, or null when it may be. */
export function blockReason(view: SessionView, text: string): string | null {
  if (view.prompt === null) {
    return "No question is waiting for an answer.";
  }
  if (text.trim() === "") {
    return "Please type an answer.";
  }
  return null;
}

// --- instructor history ------------------------------------------------

export interface HistoryRow {
  question: string;
  attempt: number;
  askedAt: string;
  answeredAt: string;
  outcome: string;
  duration: number;
  firstOfTask: boolean;
  taskRowCount: number;
  finalOutcome: string;
  averageDuration: number;
}

export interface HistoryBlock {
  desired: string;
  prepared: boolean;
  remark: string;
  totalDuration: number;
  rows: HistoryRow[];
}

export interface HistoryView {
  student: string;
  blocks: HistoryBlock[];
}

// Flatten the nested summaries into table rows; every number and string
// is the server's value verbatim (no client-side recomputation).
export function historyView(response: HistoryResponse): HistoryView {
  const blocks = response.sessions.map((session) => ({
    desired: session.desired,
    prepared: session.prepared,
    remark: session.remark,
    totalDuration: session.total_duration,
    rows: session.tasks.flatMap((task) =>
      task.attempts.map((record, index) => ({
        question: task.question,
        attempt: record.attempt,
        askedAt: record.asked_at,
        answeredAt: record.answered_at,
        outcome: record.outcome,
        duration: record.duration,
        firstOfTask: index === 0,
        taskRowCount: task.attempts.length,
        finalOutcome: task.final_outcome,
        averageDuration: task.average_duration,
      })),
    ),
  }));
  return { student: response.student, blocks };
}

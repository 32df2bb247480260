// Pure HTML string renderers.  Everything interpolated is escaped, and
// every displayed value comes from a server payload held in the view.

import { ApiError } from "./api.js";
import type {
  FeedbackPayload,
  QuestionPayload,
  RecommendationPayload,
} from "./api.js";
import type { HistoryBlock, HistoryView, SessionView } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

function formatDuration(seconds: number): string {
  return `${seconds} s`;
}

function formatOutcome(outcome: string): string {
  if (outcome === "passed") return "Passed";
  if (outcome === "not_passed") return "Not Passed";
  return outcome;
}

const VERDICT_HEADINGS: Record<string, string> = {
  ready_for_desired: "You are ready to learn {desired}.",
  remediate_leaves: "Study these prerequisite topics first.",
  descend_prerequisite: "Step back to an earlier concept first.",
  direct_content: "Start with this material.",
};

export function renderStartForm(): string {
  return `
<section class="card start-card">
  <h3>Start a pre-assessment</h3>
  <form id="start-form">
    <label>Student ID
      <input id="student-input" name="student" autocomplete="off">
    </label>
    <label>Concept you want to learn
      <input id="desired-input" name="desired" autocomplete="off">
    </label>
    <p class="hint" id="start-hint"></p>
    <button type="submit">Begin</button>
  </form>
</section>`;
}

export function renderFeedback(feedback: FeedbackPayload): string {
  const tone = feedback.outcome === "passed" ? "passed" : "not-passed";
  return `
<p class="feedback ${tone}">
  <strong>${formatOutcome(feedback.outcome)}</strong>
  <span>${escapeHtml(feedback.message)}</span>
</p>`;
}

export function renderQuestionCard(
  question: QuestionPayload,
  feedback: FeedbackPayload | null,
): string {
  const note = feedback ? renderFeedback(feedback) : "";
  return `
<section class="card question-card">${note}
  <h3>Question: ${escapeHtml(question.leaf)}</h3>
  <p class="attempt">Attempt ${question.attempt} of ${question.max_attempts}</p>
  <pre class="prompt">${escapeHtml(question.prompt)}</pre>
  <form id="answer-form">
    <textarea id="answer-input" name="text" rows="4"
      placeholder="Type your SQL answer"></textarea>
    <p class="hint" id="answer-hint"></p>
    <button type="submit">Submit answer</button>
  </form>
</section>`;
}

export function renderRecommendationCard(
  recommendation: RecommendationPayload,
  desired: string,
): string {
  const heading = (
    VERDICT_HEADINGS[recommendation.verdict] ?? "Recommended material."
  ).replace("{desired}", escapeHtml(desired));
  const items = recommendation.targets
    .map(
      (target) => `
    <li>
      <a href="${escapeHtml(target.url)}" target="_blank" rel="noopener">
        ${escapeHtml(target.concept)}
      </a>
      <span class="url">${escapeHtml(target.url)}</span>
    </li>`,
    )
    .join("");
  return `
<section class="card recommendation-card">
  <h3>${heading}</h3>
  <ul class="materials">${items}
  </ul>
  <button type="button" id="reset-button">Start another pre-assessment</button>
</section>`;
}

export function renderStudentPanel(view: SessionView | null): string {
  if (view === null) {
    return renderStartForm();
  }
  if (view.recommendation !== null) {
    const note = view.feedback ? renderFeedback(view.feedback) : "";
    return note + renderRecommendationCard(view.recommendation, view.desired);
  }
  if (view.prompt !== null) {
    return renderQuestionCard(view.prompt, view.feedback);
  }
  throw new Error(`nothing to render for phase ${view.phase}`);
}

export function renderError(error: unknown): string {
  if (error instanceof ApiError && !error.retryable) {
    const label =
      error.code === "UnknownDesiredConcept" ? "Concept not found: " : "";
    return `<p class="inline-error">${label}${escapeHtml(error.message)}</p>`;
  }
  const message = error instanceof Error ? error.message : String(error);
  return `
<div class="banner error-banner">
  <p>${escapeHtml(message)}</p>
  <button type="button" id="retry-button">Retry</button>
</div>`;
}

// --- instructor history ------------------------------------------------

function renderHistoryBlock(block: HistoryBlock): string {
  const rows = block.rows
    .map((row) => {
      const lead = row.firstOfTask
        ? `<td rowspan="${row.taskRowCount}">${escapeHtml(row.question)}</td>`
        : "";
      const tail = row.firstOfTask
        ? `<td rowspan="${row.taskRowCount}" class="average">` +
          `${formatDuration(row.averageDuration)}</td>`
        : "";
      return `
      <tr>${lead}
        <td>${row.attempt}</td>
        <td>${escapeHtml(row.askedAt)}</td>
        <td>${escapeHtml(row.answeredAt)}</td>
        <td>${formatOutcome(row.outcome)}</td>
        <td>${formatDuration(row.duration)}</td>${tail}
      </tr>`;
    })
    .join("");
  return `
<section class="card history-block">
  <h3>Desired concept: ${escapeHtml(block.desired)}</h3>
  <table class="history-table">
    <thead>
      <tr>
        <th>Question</th><th>Attempt</th><th>Asked</th><th>Answered</th>
        <th>Outcome</th><th>Duration</th><th>Average</th>
      </tr>
    </thead>
    <tbody>${rows}
    </tbody>
  </table>
  <p class="total">Total time: ${formatDuration(block.totalDuration)}</p>
  <p class="remark">${escapeHtml(block.remark)}</p>
</section>`;
}

export function renderHistory(history: HistoryView): string {
  if (history.blocks.length === 0) {
    return `<p class="empty">No pre-assessment history for ${escapeHtml(
      history.student,
    )} yet.</p>`;
  }
  return history.blocks.map(renderHistoryBlock).join("\n");
}

// DOM wiring for the two-tab client (student quiz, instructor history).
// All state transitions happen in state.ts; all markup comes from
// render.ts; this file only routes events and swaps innerHTML.

import { ApiClient, ApiError } from "./api.js";
import {
  blockReason,
  historyView,
  viewFromAnswer,
  viewFromRefresh,
  viewFromStart,
} from "./state.js";
import type { SessionView } from "./state.js";
import {
  renderError,
  renderHistory,
  renderStudentPanel,
} from "./render.js";

export const SESSION_KEY = "preassess.session";

interface SavedSession {
  id: string;
  student: string;
  desired: string;
}

type StorageLike = Pick<Storage, "getItem" | "setItem" | "removeItem">;

export interface AppDeps {
  api: ApiClient;
  storage: StorageLike;
}

/** The API lives on the page origin unless `?api=<base-url>` says otherwise. */
export function apiBaseFromLocation(search: string): string {
  const base = new URLSearchParams(search).get("api");
  return base ? base.replace(/\/+$/, "") : "";
}

export function wireApp(doc: Document, deps: AppDeps) {
  const studentPanel = mustFind(doc, "#student-panel");
  const instructorPanel = mustFind(doc, "#instructor-panel");

  let view: SessionView | null = null;
  let notice: string | null = null;
  let hint: string | null = null;
  let retryAction: (() => void) | null = null;
  let busy = false;

  // -------------------- student tab --------------------

  function redrawStudent(): void {
    const parts: string[] = [];
    if (notice) parts.push(notice);
    parts.push(renderStudentPanel(view));
    studentPanel.innerHTML = parts.join("\n");
    if (hint) {
      const hintEl = studentPanel.querySelector(".hint");
      if (hintEl) hintEl.textContent = hint;
    }
  }

  // One request at a time per session; buttons stay dead while in flight.
  async function runStudentAction(
    action: () => Promise<void>,
    onRetry: (() => void) | null,
  ): Promise<void> {
    if (busy) return;
    busy = true;
    notice = null;
    hint = null;
    retryAction = null;
    for (const button of studentPanel.querySelectorAll("button")) {
      (button as HTMLButtonElement).disabled = true;
    }
    try {
      await action();
    } catch (err) {
      notice = renderError(err);
      if (err instanceof ApiError && err.retryable) {
        retryAction = onRetry;
      }
    } finally {
      busy = false;
      redrawStudent();
    }
  }

  function startSession(student: string, desired: string): void {
    void runStudentAction(async () => {
      const response = await deps.api.startSession(student, desired);
      view = viewFromStart(response);
      deps.storage.setItem(
        SESSION_KEY,
        JSON.stringify({
          id: view.id,
          student: view.student,
          desired: view.desired,
        }),
      );
    }, () => startSession(student, desired));
  }

  function submitText(text: string): void {
    const current = view;
    if (current === null) return;
    void runStudentAction(async () => {
      const response = await deps.api.submitAnswer(current.id, text);
      view = viewFromAnswer(current, response);
    }, () => submitText(text));
  }

  function handleStartSubmit(): void {
    const student = inputValue(studentPanel, "#student-input");
    const desired = inputValue(studentPanel, "#desired-input");
    if (student === "" || desired === "") {
      hint = "Enter both a student ID and a concept.";
      redrawStudent();
      return;
    }
    startSession(student, desired);
  }

  function handleAnswerSubmit(): void {
    const current = view;
    if (current === null) return;
    const text = inputValue(studentPanel, "#answer-input", false);
    const reason = blockReason(current, text);
    if (reason !== null) {
      hint = reason;
      redrawStudent();
      return;
    }
    submitText(text);
  }

  function resetSession(): void {
    deps.storage.removeItem(SESSION_KEY);
    view = null;
    notice = null;
    hint = null;
    redrawStudent();
  }

  studentPanel.addEventListener("submit", (event) => {
    event.preventDefault();
    const form = (event.target as Element).closest("form");
    if (form?.id === "start-form") handleStartSubmit();
    else if (form?.id === "answer-form") handleAnswerSubmit();
  });

  studentPanel.addEventListener("click", (event) => {
    const target = event.target as Element;
    if (target.closest("#reset-button")) resetSession();
    else if (target.closest("#retry-button") && retryAction) retryAction();
  });

  // Refresh safety: a reload re-fetches the current question and lands the
  // student exactly where they were.
  async function restore(): Promise<void> {
    const raw = deps.storage.getItem(SESSION_KEY);
    if (raw !== null) {
      try {
        const saved = JSON.parse(raw) as SavedSession;
        const status = await deps.api.currentQuestion(saved.id);
        view = viewFromRefresh(
          {
            id: saved.id,
            student: saved.student,
            desired: saved.desired,
            phase: "",
            prompt: null,
            attempt: 0,
            feedback: null,
            recommendation: null,
          },
          status,
        );
      } catch {
        // expired, unknown, or corrupt: fall back to a fresh start form
        deps.storage.removeItem(SESSION_KEY);
        view = null;
      }
    }
    redrawStudent();
  }

  // -------------------- instructor tab --------------------

  async function loadHistory(): Promise<void> {
    const output = mustFind(instructorPanel, "#history-output");
    const student = inputValue(instructorPanel, "#history-student");
    if (student === "") {
      output.innerHTML = `<p class="hint">Enter a student ID.</p>`;
      return;
    }
    try {
      const response = await deps.api.studentHistory(student);
      output.innerHTML = renderHistory(historyView(response));
    } catch (err) {
      output.innerHTML = renderError(err);
    }
  }

  instructorPanel.addEventListener("submit", (event) => {
    event.preventDefault();
    void loadHistory();
  });

  instructorPanel.addEventListener("click", (event) => {
    if ((event.target as Element).closest("#retry-button")) void loadHistory();
  });

  // -------------------- tabs --------------------

  for (const button of doc.querySelectorAll(".tab-button")) {
    button.addEventListener("click", () => {
      const name = (button as HTMLElement).dataset.tab;
      for (const other of doc.querySelectorAll(".tab-button")) {
        other.classList.toggle("active", other === button);
      }
      studentPanel.classList.toggle("active", name === "student");
      instructorPanel.classList.toggle("active", name === "instructor");
    });
  }

  redrawStudent();
  return { restore, loadHistory };
}

function mustFind(root: ParentNode | Document, selector: string): HTMLElement {
  const el = root.querySelector(selector);
  if (!el) throw new Error(`missing element ${selector}`);
  return el as HTMLElement;
}

function inputValue(
  root: ParentNode,
  selector: string,
  trim: boolean = true,
): string {
  const el = root.querySelector(selector) as
    | HTMLInputElement
    | HTMLTextAreaElement
    | null;
  const value = el?.value ?? "";
  return trim ? value.trim() : value;
}

// -------------------- page entry --------------------

if (typeof document !== "undefined" && document.getElementById("student-panel")) {
  const api = new ApiClient(apiBaseFromLocation(window.location.search));
  const app = wireApp(document, { api, storage: window.sessionStorage });
  void app.restore();
}

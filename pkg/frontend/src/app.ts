// Single-page layout: sentence input and classify button on top, the result
// card with confirm/correct controls beneath it, the five most recent
// entries at the bottom, and an error banner for surfaced server codes.

import { ApiError, classifySentence, fetchRecent, sendFeedback } from "./api";
import type { RecentRecord } from "./api";
import {
  canReview,
  feedbackApplied,
  formatConfidence,
  initialState,
  oppositeLabel,
  recentLoaded,
  requestFailed,
  submitStarted,
  submitSucceeded,
  validationFailed,
  type UiState,
} from "./state";

const VERDICT_MARKS: Record<string, string> = {
  unreviewed: "·",
  confirmed: "✓ confirmed",
  corrected: "✎ corrected",
};

export interface App {
  state(): UiState;
  refreshRecent(): Promise<void>;
}

export function createApp(root: HTMLElement, base = ""): App {
  let state = initialState();

  root.innerHTML = `
    <main class="wrap">
      <h1>Requirement Causality Checker</h1>
      <p class="hint">Enter a requirement sentence to check whether it expresses a causal relation.</p>
      <div class="banner" id="banner" hidden></div>
      <form id="classify-form" novalidate>
        <textarea id="sentence" rows="3" placeholder="If the user enters an incorrect password, an error message shall be displayed."></textarea>
        <div class="controls">
          <button type="submit" id="classify-btn">Classify</button>
          <span class="validation" id="validation" hidden></span>
        </div>
      </form>
      <section class="result" id="result" hidden>
        <span class="badge" id="result-badge"></span>
        <span class="confidence" id="result-confidence"></span>
        <span class="review">
          <button id="confirm-btn" type="button">Confirm</button>
          <button id="correct-btn" type="button"></button>
          <span id="review-status" hidden>feedback recorded</span>
        </span>
      </section>
      <section class="recent">
        <h2>Recent sentences</h2>
        <ul id="recent-list"></ul>
        <p id="recent-empty" class="hint">Nothing classified yet.</p>
      </section>
    </main>
  `;

  const el = <T extends HTMLElement>(id: string): T =>
    root.querySelector<T>(`#${id}`)!;
  const input = el<HTMLTextAreaElement>("sentence");
  const classifyBtn = el<HTMLButtonElement>("classify-btn");
  const banner = el<HTMLDivElement>("banner");
  const validation = el<HTMLSpanElement>("validation");
  const resultCard = el<HTMLElement>("result");
  const resultBadge = el<HTMLSpanElement>("result-badge");
  const resultConfidence = el<HTMLSpanElement>("result-confidence");
  const confirmBtn = el<HTMLButtonElement>("confirm-btn");
  const correctBtn = el<HTMLButtonElement>("correct-btn");
  const reviewStatus = el<HTMLSpanElement>("review-status");
  const recentList = el<HTMLUListElement>("recent-list");
  const recentEmpty = el<HTMLParagraphElement>("recent-empty");

  function render(): void {
    banner.hidden = state.banner === null;
    banner.textContent = state.banner ?? "";
    validation.hidden = state.validation === null;
    validation.textContent = state.validation ?? "";
    classifyBtn.disabled = state.inFlight;

    const result = state.lastResult;
    resultCard.hidden = result === null;
    if (result) {
      resultBadge.textContent = result.label;
      resultBadge.className = `badge ${result.label}`;
      resultConfidence.textContent = formatConfidence(result.confidence);
      correctBtn.textContent = `Correct to ${oppositeLabel(result.label)}`;
      const reviewable = canReview(state);
      confirmBtn.disabled = !reviewable;
      correctBtn.disabled = !reviewable;
      reviewStatus.hidden = !result.reviewed;
    }

    recentList.replaceChildren(...state.recent.map(renderRecentRow));
    recentEmpty.hidden = state.recent.length > 0;
  }

  function renderRecentRow(record: RecentRecord): HTMLLIElement {
    const li = document.createElement("li");
    li.dataset.recordId = String(record.id);
    li.dataset.verdict = record.verdict;
    const shownLabel = record.corrected_label ?? record.predicted_label;
    li.innerHTML = `
      <span class="badge ${shownLabel}"></span>
      <span class="row-text"></span>
      <span class="row-confidence"></span>
      <span class="verdict-mark"></span>
    `;
    li.querySelector<HTMLSpanElement>(".badge")!.textContent = shownLabel;
    li.querySelector<HTMLSpanElement>(".row-text")!.textContent = record.text;
    li.querySelector<HTMLSpanElement>(".row-confidence")!.textContent =
      formatConfidence(record.confidence);
    li.querySelector<HTMLSpanElement>(".verdict-mark")!.textContent =
      VERDICT_MARKS[record.verdict] ?? record.verdict;
    return li;
  }

  function update(next: UiState): void {
    state = next;
    render();
  }

  function describe(error: unknown): [string, string] {
    if (error instanceof ApiError) return [error.code, error.message];
    return ["unexpected_error", String(error)];
  }

  async function refreshRecent(): Promise<void> {
    try {
      const records = await fetchRecent(5, base);
      update(recentLoaded(state, records)); // read state only after the await
    } catch (error) {
      // keep the stale list; just surface the failure
      const [code, message] = describe(error);
      update(requestFailed(state, code, message));
    }
  }

  async function submit(): Promise<void> {
    if (state.inFlight) return;
    const text = input.value.trim();
    if (!text) {
      update(validationFailed(state, "Enter a sentence first."));
      return;
    }
    update(submitStarted(state));
    try {
      const response = await classifySentence(text, base);
      update(submitSucceeded(state, response));
      await refreshRecent();
    } catch (error) {
      const [code, message] = describe(error);
      update(requestFailed(state, code, message)); // input stays as typed
    }
  }

  async function review(verdict: "confirmed" | "corrected"): Promise<void> {
    const result = state.lastResult;
    if (!result || !canReview(state)) return;
    const corrected = verdict === "corrected" ? oppositeLabel(result.label) : undefined;
    try {
      await sendFeedback(result.recordId, verdict, corrected, base);
      update(feedbackApplied(state));
      await refreshRecent();
    } catch (error) {
      const [code, message] = describe(error);
      if (error instanceof ApiError && error.status === 409) {
        // someone already reviewed it; resync instead of complaining twice
        update(requestFailed(feedbackApplied(state), code, message));
        await refreshRecent();
        return;
      }
      update(requestFailed(state, code, message));
    }
  }

  el<HTMLFormElement>("classify-form").addEventListener("submit", (event) => {
    event.preventDefault();
    void submit();
  });
  confirmBtn.addEventListener("click", () => void review("confirmed"));
  correctBtn.addEventListener("click", () => void review("corrected"));

  render();
  void refreshRecent();

  return {
    state: () => state,
    refreshRecent,
  };
}

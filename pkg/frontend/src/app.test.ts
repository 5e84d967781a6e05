import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { createApp, type App } from "./app";
import type { Label, RecentRecord, Verdict } from "./api";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

/** Minimal in-memory double of the service, matching its REST contract. */
function fakeServer() {
  const records: RecentRecord[] = [];
  let nextId = 1;

  const handler = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = String(input);
    if (url.includes("/api/classify")) {
      const { text } = JSON.parse(String(init?.body));
      if (!text || !text.trim()) {
        return jsonResponse(400, { code: "empty_text", message: "empty" });
      }
      const label: Label = /\bif\b|\bwhen\b/i.test(text) ? "causal" : "non-causal";
      const record: RecentRecord = {
        id: nextId++,
        text,
        predicted_label: label,
        confidence: label === "causal" ? 1.0 : 0.5,
        verdict: "unreviewed",
        timestamp: Date.now(),
        version: 1,
      };
      records.push(record);
      return jsonResponse(200, {
        label,
        confidence: record.confidence,
        record_id: record.id,
      });
    }
    if (url.includes("/api/feedback")) {
      const body = JSON.parse(String(init?.body));
      const record = records.find((r) => r.id === body.record_id);
      if (!record) return jsonResponse(404, { code: "unknown_record", message: "no such id" });
      if (record.verdict !== "unreviewed") {
        return jsonResponse(409, { code: "already_reviewed", message: "already reviewed" });
      }
      record.verdict = body.verdict as Verdict;
      if (body.verdict === "corrected") record.corrected_label = body.corrected_label;
      record.version += 1;
      return jsonResponse(200, { ok: true });
    }
    if (url.includes("/api/recent")) {
      const sorted = [...records].sort((a, b) => b.id - a.id).slice(0, 5);
      return jsonResponse(200, sorted);
    }
    return jsonResponse(404, { code: "not_found", message: url });
  };

  return { handler, records };
}

async function waitFor(predicate: () => boolean, timeoutMs = 2000): Promise<void> {
  const start = Date.now();
  while (!predicate()) {
    if (Date.now() - start > timeoutMs) throw new Error("condition never became true");
    await new Promise((resolve) => setTimeout(resolve, 5));
  }
}

let root: HTMLElement;

function mount(): App {
  document.body.innerHTML = '<div id="app"></div>';
  root = document.getElementById("app")!;
  return createApp(root);
}

function type(text: string): void {
  const input = root.querySelector<HTMLTextAreaElement>("#sentence")!;
  input.value = text;
}

function submit(): void {
  root.querySelector<HTMLFormElement>("#classify-form")!.dispatchEvent(
    new Event("submit", { bubbles: true, cancelable: true }),
  );
}

beforeEach(() => {
  vi.stubGlobal("fetch", vi.fn(fakeServer().handler));
});

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("classify flow", () => {
  it("renders the label badge and one-decimal confidence", async () => {
    const server = fakeServer();
    vi.stubGlobal("fetch", vi.fn(server.handler));
    const app = mount();

    type("If the alarm rings, evacuate the building.");
    submit();
    await waitFor(() => app.state().lastResult !== null);

    const badge = root.querySelector("#result-badge")!;
    expect(badge.textContent).toBe("causal");
    expect(badge.className).toContain("causal");
    expect(root.querySelector("#result-confidence")!.textContent).toBe("100.0 %");
    await waitFor(() => app.state().recent.length === 1);
    expect(root.querySelectorAll("#recent-list li")).toHaveLength(1);
  });

  it("blocks empty input client-side without a request", async () => {
    const mock = vi.fn(fakeServer().handler);
    vi.stubGlobal("fetch", mock);
    const app = mount();
    await waitFor(() => app.state().recent.length === 0);
    const callsAfterMount = mock.mock.calls.length; // initial recent refresh only

    type("   ");
    submit();
    await new Promise((resolve) => setTimeout(resolve, 20));

    expect(mock.mock.calls.length).toBe(callsAfterMount);
    const validation = root.querySelector<HTMLElement>("#validation")!;
    expect(validation.hidden).toBe(false);
    expect(validation.textContent).toContain("Enter a sentence");
  });

  it("gates double submission while a request is in flight", async () => {
    let release!: (value: Response) => void;
    const pending = new Promise<Response>((resolve) => (release = resolve));
    const mock = vi.fn((url: RequestInfo | URL) => {
      if (String(url).includes("/api/classify")) return pending;
      return Promise.resolve(jsonResponse(200, []));
    });
    vi.stubGlobal("fetch", mock);
    const app = mount();

    type("If A then B");
    submit();
    await waitFor(() => app.state().inFlight);
    expect(root.querySelector<HTMLButtonElement>("#classify-btn")!.disabled).toBe(true);
    submit();
    submit();

    release(jsonResponse(200, { label: "causal", confidence: 1.0, record_id: 1 }));
    await waitFor(() => !app.state().inFlight);
    const classifyCalls = mock.mock.calls.filter(([u]) => String(u).includes("/api/classify"));
    expect(classifyCalls).toHaveLength(1);
  });

  it("shows the server's error code verbatim and preserves the input", async () => {
    // a fresh Response per call: bodies are single-use
    vi.stubGlobal("fetch", vi.fn(() => Promise.resolve(
      jsonResponse(400, { code: "text_too_long", message: "too long" }),
    )));
    const app = mount();

    type("some very long sentence");
    submit();
    await waitFor(() => app.state().banner !== null);

    expect(root.querySelector("#banner")!.textContent).toContain("text_too_long");
    expect(root.querySelector<HTMLTextAreaElement>("#sentence")!.value)
      .toBe("some very long sentence");
  });

  it("shows a banner and preserves input when the server is unreachable", async () => {
    vi.stubGlobal("fetch", vi.fn().mockRejectedValue(new TypeError("fetch failed")));
    const app = mount();

    type("If A then B");
    submit();
    await waitFor(() => app.state().banner !== null);

    expect(root.querySelector("#banner")!.textContent).toContain("network_error");
    expect(root.querySelector<HTMLTextAreaElement>("#sentence")!.value).toBe("If A then B");
  });
});

describe("feedback flow", () => {
  it("confirm disables the controls and marks the recent entry", async () => {
    const server = fakeServer();
    vi.stubGlobal("fetch", vi.fn(server.handler));
    const app = mount();

    type("If A then B");
    submit();
    await waitFor(() => app.state().lastResult !== null);

    root.querySelector<HTMLButtonElement>("#confirm-btn")!.click();
    await waitFor(() => app.state().lastResult?.reviewed === true);

    expect(root.querySelector<HTMLButtonElement>("#confirm-btn")!.disabled).toBe(true);
    expect(root.querySelector<HTMLButtonElement>("#correct-btn")!.disabled).toBe(true);
    await waitFor(() =>
      root.querySelector("#recent-list li")?.getAttribute("data-verdict") === "confirmed");
    expect(root.querySelector("#recent-list li .verdict-mark")!.textContent)
      .toContain("confirmed");
  });

  it("correct flips to the opposite label and marks the row", async () => {
    const server = fakeServer();
    vi.stubGlobal("fetch", vi.fn(server.handler));
    const app = mount();

    type("The door is red.");
    submit();
    await waitFor(() => app.state().lastResult !== null);
    expect(root.querySelector("#correct-btn")!.textContent).toBe("Correct to causal");

    root.querySelector<HTMLButtonElement>("#correct-btn")!.click();
    await waitFor(() => app.state().lastResult?.reviewed === true);

    expect(server.records[0].verdict).toBe("corrected");
    expect(server.records[0].corrected_label).toBe("causal");
    const row = root.querySelector("#recent-list li")!;
    expect(row.getAttribute("data-verdict")).toBe("corrected");
    // the corrected label is what the row displays
    expect(row.querySelector(".badge")!.textContent).toBe("causal");
  });

  it("controls stay hidden until a result exists", () => {
    mount();
    expect(root.querySelector<HTMLElement>("#result")!.hidden).toBe(true);
  });

  it("a 409 resyncs instead of leaving stale controls", async () => {
    const server = fakeServer();
    vi.stubGlobal("fetch", vi.fn(server.handler));
    const app = mount();

    type("If A then B");
    submit();
    await waitFor(() => app.state().lastResult !== null);
    server.records[0].verdict = "confirmed"; // reviewed elsewhere

    root.querySelector<HTMLButtonElement>("#correct-btn")!.click();
    await waitFor(() => app.state().lastResult?.reviewed === true);
    expect(root.querySelector("#banner")!.textContent).toContain("already_reviewed");
    expect(root.querySelector<HTMLButtonElement>("#confirm-btn")!.disabled).toBe(true);
  });
});

describe("recent list", () => {
  it("shows the empty-state message on a fresh server", async () => {
    const app = mount();
    await new Promise((resolve) => setTimeout(resolve, 20));
    expect(app.state().recent).toHaveLength(0);
    expect(root.querySelector<HTMLElement>("#recent-empty")!.hidden).toBe(false);
  });

  it("renders five rows newest first after six submissions", async () => {
    const server = fakeServer();
    vi.stubGlobal("fetch", vi.fn(server.handler));
    const app = mount();

    for (let i = 1; i <= 6; i++) {
      type(`sentence number ${i}`);
      submit();
      await waitFor(() => app.state().lastResult?.recordId === i);
      await waitFor(() => app.state().recent.length === Math.min(i, 5));
    }

    const rows = [...root.querySelectorAll("#recent-list li")];
    expect(rows).toHaveLength(5);
    expect(rows.map((r) => r.getAttribute("data-record-id"))).toEqual(
      ["6", "5", "4", "3", "2"],
    );
  });

  it("keeps the stale list when a refresh fails", async () => {
    const server = fakeServer();
    const mock = vi.fn(server.handler);
    vi.stubGlobal("fetch", mock);
    const app = mount();

    type("If A then B");
    submit();
    await waitFor(() => app.state().recent.length === 1);

    mock.mockRejectedValue(new TypeError("fetch failed"));
    await app.refreshRecent();

    expect(app.state().recent).toHaveLength(1);
    expect(root.querySelectorAll("#recent-list li")).toHaveLength(1);
    expect(root.querySelector("#banner")!.textContent).toContain("network_error");
  });
});

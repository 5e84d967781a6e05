// Typed client for the classification service. Every non-2xx response is
// surfaced as an ApiError carrying the server's machine-readable code.

export type Label = "causal" | "non-causal";
export type Verdict = "unreviewed" | "confirmed" | "corrected";

export interface ClassifyResponse {
  label: Label;
  confidence: number;
  record_id: number;
}

export interface RecentRecord {
  id: number;
  text: string;
  predicted_label: Label;
  confidence: number;
  verdict: Verdict;
  corrected_label?: Label;
  timestamp: number;
  version: number;
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
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch {
    throw new ApiError(0, "network_error", "could not reach the server");
  }
  if (!response.ok) {
    let code = `http_${response.status}`;
    let message = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.code === "string") code = body.code;
      if (body && typeof body.message === "string") message = body.message;
    } catch {
      // non-JSON error body; keep the status fallback
    }
    throw new ApiError(response.status, code, message);
  }
  return (await response.json()) as T;
}

export function classifySentence(text: string, base = ""): Promise<ClassifyResponse> {
  return request<ClassifyResponse>(`${base}/api/classify`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ text }),
  });
}

export function sendFeedback(
  recordId: number,
  verdict: "confirmed" | "corrected",
  correctedLabel?: Label,
  base = "",
): Promise<{ ok: boolean }> {
  const body: Record<string, unknown> = { record_id: recordId, verdict };
  if (correctedLabel !== undefined) body.corrected_label = correctedLabel;
  return request<{ ok: boolean }>(`${base}/api/feedback`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
}

export function fetchRecent(n = 5, base = ""): Promise<RecentRecord[]> {
  return request<RecentRecord[]>(`${base}/api/recent?n=${n}`);
}

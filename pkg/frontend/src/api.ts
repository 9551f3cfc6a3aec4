import type { AnnotationResponse, EntityView } from "./types.js";

// The UI talks to exactly two endpoints, same-origin:
//   GET  /api/models -> ["aner", ...]
//   POST /api/ner    -> AnnotationResponse
// Error responses carry {"detail": string}; anything else falls back
// to the HTTP status text.

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

// Wrapped rather than referenced: a bare `fetch` default loses its
// window binding in browsers.
const defaultFetch: FetchLike = (input, init) => fetch(input, init);

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (typeof body.detail === "string" && body.detail) return body.detail;
  } catch {
    // not JSON; fall through to the status line
  }
  return response.statusText || `request failed (${response.status})`;
}

function isEntity(value: unknown): value is EntityView {
  if (typeof value !== "object" || value === null) return false;
  const e = value as Record<string, unknown>;
  return (
    typeof e["surface"] === "string" &&
    typeof e["class"] === "string" &&
    typeof e["start"] === "number" &&
    typeof e["end"] === "number" &&
    typeof e["url"] === "string" &&
    typeof e["color"] === "string"
  );
}

function asAnnotation(body: unknown): AnnotationResponse {
  if (typeof body !== "object" || body === null) {
    throw new Error("malformed annotation response");
  }
  const r = body as Record<string, unknown>;
  if (
    typeof r["normalized"] !== "string" ||
    !Array.isArray(r["entities"]) ||
    !r["entities"].every(isEntity) ||
    typeof r["model"] !== "string" ||
    typeof r["ms"] !== "number"
  ) {
    throw new Error("malformed annotation response");
  }
  return body as unknown as AnnotationResponse;
}

export async function fetchModels(fetchFn: FetchLike = defaultFetch): Promise<string[]> {
  const response = await fetchFn("/api/models");
  if (!response.ok) {
    throw new ApiError(response.status, await errorDetail(response));
  }
  const body = (await response.json()) as unknown;
  if (!Array.isArray(body) || !body.every((m) => typeof m === "string")) {
    throw new Error("malformed model list");
  }
  return body;
}

export async function annotate(
  text: string,
  model: string,
  fetchFn: FetchLike = defaultFetch,
): Promise<AnnotationResponse> {
  const response = await fetchFn("/api/ner", {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ text, model }),
  });
  if (!response.ok) {
    throw new ApiError(response.status, await errorDetail(response));
  }
  return asAnnotation((await response.json()) as unknown);
}

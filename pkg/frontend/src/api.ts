import type { AnalysisResult, CompareResult, Ratios, TopicExamples, TopicInfo } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  const payload = await response.json();
  if (!response.ok) {
    throw new ApiError(response.status, payload.error ?? "error", payload.detail ?? response.statusText);
  }
  return payload as T;
}

function post(body: unknown): RequestInit {
  return {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  };
}

export class ApiClient {
  constructor(private readonly base = "") {}

  getTopics(): Promise<TopicInfo[]> {
    return request(`${this.base}/topics`);
  }

  getExamples(topic: string): Promise<TopicExamples> {
    return request(`${this.base}/topics/${encodeURIComponent(topic)}/examples`);
  }

  analyze(topic: string, body: string): Promise<AnalysisResult> {
    return request(`${this.base}/analyze`, post({ topic, body }));
  }

  compare(userRatios: Ratios, reference: string, topic: string): Promise<CompareResult> {
    return request(`${this.base}/compare`, post({ user_ratios: userRatios, reference, topic }));
  }

  submit(sessionId: string, topic: string, body: string, ratios: Ratios): Promise<{ submission_id: string }> {
    return request(`${this.base}/submissions`, post({ session_id: sessionId, topic, body, ratios }));
  }
}

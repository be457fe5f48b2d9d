/**
 * Service payload fixtures and a mocked fetch for driving the client
 * without the engine. Shapes mirror the HTTP service exactly: every
 * payload carries schema_version, clouds are [lemma, weight] pairs
 * sorted by descending weight, and marker is null when answers exist.
 */

import type {
  AnswerPayload,
  DocumentView,
  FetchLike,
  RankPayload,
  SessionInfo,
} from "../src/api.js";

export const documentView: DocumentView = {
  schema_version: "1",
  doc_id: "covid",
  sentences: 8,
  graph_nodes: 42,
  graph_edges: 89,
  digest_seconds: 0.12,
  summary: [
    { id: 4, text: "Hospitals in Dallas expanded capacity for patients .", rank: 0.041 },
    { id: 0, text: "The covid outbreak began in March .", rank: 0.052 },
    { id: 2, text: "Doctor Smith warned residents in Texas .", rank: 0.049 },
  ],
  keyphrases: [
    { text: "covid outbreak", head: "outbreak", score: 0.91 },
    { text: "hospital capacity", head: "capacity", score: 0.74 },
    { text: "residents", head: "resident", score: 0.52 },
  ],
  fact_counts: { sent: 8, svo: 5, ner: 6 },
};

export const rankPayload: RankPayload = {
  schema_version: "1",
  doc_id: "covid",
  ranks: [
    ["covid", 0.081],
    ["hospital", 0.062],
    ["resident", 0.051],
    ["outbreak", 0.044],
    ["doctor", 0.03],
  ],
};

export const sessionInfo: SessionInfo = {
  schema_version: "1",
  session_id: "s-1",
  doc_id: "covid",
};

export const strongAnswer: AnswerPayload = {
  schema_version: "1",
  answers: [
    { id: 2, text: "Doctor Smith warned residents in Texas .", score: 2.84 },
    { id: 3, text: "Three hospitals treated patients on Tuesday .", score: 1.91 },
    { id: 5, text: "Officials met in Dallas on Tuesday .", score: 1.4 },
  ],
  weak_match: false,
  marker: null,
  query_ranks: [
    ["warn", 0.21],
    ["doctor", 0.2],
    ["resident", 0.17],
  ],
  pers_words: [
    ["warn", 0.3],
    ["doctor", 0.28],
    ["texas", 0.22],
    ["resident", 0.2],
  ],
  wh_hits: [
    [2, "Doctor"],
    [2, "Smith"],
  ],
};

export const weakAnswer: AnswerPayload = {
  schema_version: "1",
  answers: [],
  weak_match: true,
  marker: "no relevant content",
  query_ranks: [],
  pers_words: [],
  wh_hits: [],
};

export interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

export interface RouteResult {
  status: number;
  json?: unknown;
}

export type Router = (
  method: string,
  path: string,
  body: unknown,
) => RouteResult | Promise<RouteResult> | undefined;

/** Build a recording fetch from a (method, path, body) router. */
export function mockFetch(router: Router): { fetchImpl: FetchLike; calls: RecordedCall[] } {
  const calls: RecordedCall[] = [];
  const fetchImpl: FetchLike = async (url, init = {}) => {
    const method = (init.method ?? "GET").toUpperCase();
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const body = typeof init.body === "string" ? JSON.parse(init.body) : undefined;
    calls.push({ url, method, body });
    const result = (await router(method, path, body)) ?? {
      status: 404,
      json: { error: `no route for ${method} ${path}` },
    };
    if (result.json === undefined) {
      return new Response(null, { status: result.status });
    }
    return new Response(JSON.stringify(result.json), {
      status: result.status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { fetchImpl, calls };
}

/**
 * Happy-path mock of the whole service: one document ("covid"), one
 * session ("s-1"), strong answers unless the question mentions a
 * zebra.
 */
export function serviceFetch(): { fetchImpl: FetchLike; calls: RecordedCall[] } {
  return mockFetch((method, path, body) => {
    if (method === "POST" && path === "/documents") {
      return { status: 201, json: documentView };
    }
    if (method === "GET" && path.startsWith("/documents/covid/ranks")) {
      return { status: 200, json: rankPayload };
    }
    if (method === "POST" && path === "/sessions") {
      return { status: 201, json: sessionInfo };
    }
    if (method === "POST" && path === "/sessions/s-1/query") {
      const question = (body as { question_text?: string }).question_text ?? "";
      return { status: 200, json: question.includes("zebra") ? weakAnswer : strongAnswer };
    }
    if (method === "DELETE" && path === "/sessions/s-1") {
      return { status: 204 };
    }
    return undefined;
  });
}

/** Lemmas of the currently rendered cloud list, in order. */
export function cloudLemmas(html: string): string[] {
  const list = /<ul class="cloud-list"[^>]*>(.*?)<\/ul>/s.exec(html);
  if (!list) {
    return [];
  }
  return [...list[1].matchAll(/<li[^>]*>([^<]*)<\/li>/g)].map((m) => m[1]);
}

/** Contents of every answer row, in order. */
export function answerRows(html: string): string[] {
  return [...html.matchAll(/<div class="answer-row"[^>]*>([^<]*)<\/div>/g)].map(
    (m) => m[1],
  );
}

/**
 * Typed client for the graphtalk HTTP service.
 *
 * Every JSON payload carries a `schema_version` field set by the
 * service. The client maps non-2xx responses to `ApiError` using the
 * service's own error message when one is present, and the fetch
 * implementation is injectable so tests can run against a mocked
 * service.
 */

/** One summary sentence from the digest. */
export interface SummaryEntry {
  id: number;
  text: string;
  rank: number;
}

/** One mined keyphrase with its head lemma and score. */
export interface Keyphrase {
  text: string;
  head: string;
  score: number;
}

/** Response of POST /documents: the digest view of a document. */
export interface DocumentView {
  schema_version: string;
  doc_id: string;
  sentences: number;
  graph_nodes: number;
  graph_edges: number;
  digest_seconds: number;
  summary: SummaryEntry[];
  keyphrases: Keyphrase[];
  fact_counts: Record<string, number>;
}

/** A word-cloud entry: lemma plus non-negative weight. */
export type CloudEntry = [lemma: string, weight: number];

/** Response of GET /documents/{id}/ranks: top lemma ranks, descending. */
export interface RankPayload {
  schema_version: string;
  doc_id: string;
  ranks: CloudEntry[];
}

/** Response of POST /sessions. */
export interface SessionInfo {
  schema_version: string;
  session_id: string;
  doc_id: string;
}

/** One answer sentence with its verbatim score. */
export interface Answer {
  id: number;
  text: string;
  score: number;
}

/** Response of POST /sessions/{id}/query. */
export interface AnswerPayload {
  schema_version: string;
  answers: Answer[];
  weak_match: boolean;
  marker: string | null;
  query_ranks: CloudEntry[];
  pers_words: CloudEntry[];
  wh_hits: [sid: number, text: string][];
}

/** Response of GET /health. */
export interface HealthInfo {
  schema_version: string;
  status: string;
  documents: number;
  sessions: number;
  rank_backend: string;
}

/** Error raised for failed requests; status 0 means unreachable. */
export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
  }
}

/** Minimal fetch signature the client needs; mockable in tests. */
export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Thin wrapper over the service endpoints. */
export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.base = baseUrl.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    let response: Response;
    try {
      response = await this.fetchImpl(this.base + path, init);
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      let detail = response.statusText || `HTTP ${response.status}`;
      try {
        const payload = (await response.json()) as { error?: unknown };
        if (payload && typeof payload.error === "string") {
          detail = payload.error;
        }
      } catch {
        // body was not JSON; keep the status line
      }
      throw new ApiError(response.status, detail);
    }
    if (response.status === 204) {
      return undefined as T;
    }
    return (await response.json()) as T;
  }

  health(): Promise<HealthInfo> {
    return this.request("GET", "/health");
  }

  /** Digest a conllu document; the response is the full document view. */
  addDocument(conllu: string, docId?: string, ner?: object[]): Promise<DocumentView> {
    const body: Record<string, unknown> = { conllu };
    if (docId !== undefined) {
      body.doc_id = docId;
    }
    if (ner !== undefined) {
      body.ner = ner;
    }
    return this.request("POST", "/documents", body);
  }

  /** Top lemma ranks for the document word cloud. */
  ranks(docId: string, top = 25): Promise<RankPayload> {
    return this.request("GET", `/documents/${encodeURIComponent(docId)}/ranks?top=${top}`);
  }

  /** URL of the clause export for a plain download link. */
  exportUrl(docId: string): string {
    return `${this.base}/documents/${encodeURIComponent(docId)}/export.pro`;
  }

  createSession(docId: string): Promise<SessionInfo> {
    return this.request("POST", "/sessions", { doc_id: docId });
  }

  query(sessionId: string, questionText: string): Promise<AnswerPayload> {
    const path = `/sessions/${encodeURIComponent(sessionId)}/query`;
    return this.request("POST", path, { question_text: questionText });
  }

  deleteSession(sessionId: string): Promise<void> {
    return this.request("DELETE", `/sessions/${encodeURIComponent(sessionId)}`);
  }
}

import { describe, expect, test } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import {
  documentView,
  mockFetch,
  rankPayload,
  serviceFetch,
  sessionInfo,
  strongAnswer,
} from "./fixtures.js";

const BASE = "http://svc.test";

describe("ApiClient", () => {
  test("addDocument posts the conllu body and parses the view", async () => {
    const { fetchImpl, calls } = serviceFetch();
    const api = new ApiClient(BASE, fetchImpl);
    const view = await api.addDocument("# text = hi", "covid");
    expect(view).toEqual(documentView);
    expect(calls).toHaveLength(1);
    expect(calls[0].url).toBe(`${BASE}/documents`);
    expect(calls[0].method).toBe("POST");
    expect(calls[0].body).toEqual({ conllu: "# text = hi", doc_id: "covid" });
  });

  test("addDocument omits optional fields that were not given", async () => {
    const { fetchImpl, calls } = serviceFetch();
    const api = new ApiClient(BASE, fetchImpl);
    await api.addDocument("# text = hi");
    expect(calls[0].body).toEqual({ conllu: "# text = hi" });
  });

  test("ranks hits the document rank endpoint with the top parameter", async () => {
    const { fetchImpl, calls } = serviceFetch();
    const api = new ApiClient(BASE, fetchImpl);
    const ranks = await api.ranks("covid", 40);
    expect(ranks).toEqual(rankPayload);
    expect(calls[0].url).toBe(`${BASE}/documents/covid/ranks?top=40`);
    expect(calls[0].method).toBe("GET");
  });

  test("ranks defaults to top=25", async () => {
    const { fetchImpl, calls } = serviceFetch();
    const api = new ApiClient(BASE, fetchImpl);
    await api.ranks("covid");
    expect(calls[0].url).toBe(`${BASE}/documents/covid/ranks?top=25`);
  });

  test("createSession posts the doc id", async () => {
    const { fetchImpl, calls } = serviceFetch();
    const api = new ApiClient(BASE, fetchImpl);
    const session = await api.createSession("covid");
    expect(session).toEqual(sessionInfo);
    expect(calls[0].url).toBe(`${BASE}/sessions`);
    expect(calls[0].body).toEqual({ doc_id: "covid" });
  });

  test("query posts question_text to the session endpoint", async () => {
    const { fetchImpl, calls } = serviceFetch();
    const api = new ApiClient(BASE, fetchImpl);
    const payload = await api.query("s-1", "who warned residents?");
    expect(payload).toEqual(strongAnswer);
    expect(calls[0].url).toBe(`${BASE}/sessions/s-1/query`);
    expect(calls[0].body).toEqual({ question_text: "who warned residents?" });
  });

  test("deleteSession accepts the empty 204 response", async () => {
    const { fetchImpl, calls } = serviceFetch();
    const api = new ApiClient(BASE, fetchImpl);
    await expect(api.deleteSession("s-1")).resolves.toBeUndefined();
    expect(calls[0].method).toBe("DELETE");
  });

  test("service errors surface their message and status", async () => {
    const { fetchImpl } = mockFetch(() => ({
      status: 409,
      json: { error: "document covid already exists" },
    }));
    const api = new ApiClient(BASE, fetchImpl);
    const failure = api.addDocument("# text = hi", "covid");
    await expect(failure).rejects.toMatchObject({
      name: "ApiError",
      status: 409,
      message: "document covid already exists",
    });
  });

  test("network failures become status-0 ApiError", async () => {
    const api = new ApiClient(BASE, () => Promise.reject(new Error("refused")));
    try {
      await api.health();
      expect.unreachable("health() should have thrown");
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError);
      expect((err as ApiError).status).toBe(0);
      expect((err as ApiError).message).toContain("service unreachable");
    }
  });

  test("trailing slashes in the base URL are stripped", async () => {
    const { fetchImpl, calls } = serviceFetch();
    const api = new ApiClient(`${BASE}//`, fetchImpl);
    await api.ranks("covid");
    expect(calls[0].url).toBe(`${BASE}/documents/covid/ranks?top=25`);
  });

  test("exportUrl points at the clause export", () => {
    const api = new ApiClient(BASE, serviceFetch().fetchImpl);
    expect(api.exportUrl("covid")).toBe(`${BASE}/documents/covid/export.pro`);
  });
});

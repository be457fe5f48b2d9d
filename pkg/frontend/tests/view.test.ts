/**
 * UI contract against a mocked service: document view before the
 * first query, exact answer rows, and a cloud toggle that swaps
 * datasets without another request.
 */

import { describe, expect, test } from "vitest";

import { ApiClient } from "../src/api.js";
import { AppController } from "../src/main.js";
import {
  answerRows,
  cloudLemmas,
  documentView,
  mockFetch,
  rankPayload,
  serviceFetch,
  sessionInfo,
  strongAnswer,
} from "./fixtures.js";
import type { RecordedCall } from "./fixtures.js";

const CONLLU = "# text = stub\n1\tstub\tstub\tNOUN\tNN\t0\troot\t_\t_\n";

function controller(): { app: AppController; calls: RecordedCall[] } {
  const { fetchImpl, calls } = serviceFetch();
  return { app: new AppController(new ApiClient("http://svc.test", fetchImpl)), calls };
}

function tick(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

describe("ui contract", () => {
  test("load_document_view shows summary and keyphrases before the first query", async () => {
    const { app } = controller();
    await app.loadDocumentView(CONLLU, "covid");
    expect(app.state.turns).toHaveLength(0);
    const html = app.html();
    for (const entry of documentView.summary) {
      expect(html).toContain(entry.text);
    }
    for (const phrase of documentView.keyphrases) {
      expect(html).toContain(phrase.text);
    }
    const sids = [...html.matchAll(/data-sid="(\d+)"/g)].map((m) => Number(m[1]));
    expect(sids).toEqual([0, 2, 4]);
    expect(cloudLemmas(html)).toEqual(rankPayload.ranks.map(([lemma]) => lemma));
    expect(app.state.banner).toBeNull();
  });

  test("send_query renders exactly the payload answers as id : text rows", async () => {
    const { app } = controller();
    await app.loadDocumentView(CONLLU, "covid");
    await app.sendQuery("who warned residents?");
    const rows = answerRows(app.html());
    expect(rows).toEqual(strongAnswer.answers.map((a) => `${a.id} : ${a.text}`));
    expect(rows).toHaveLength(3);
    expect(app.state.turns.map((t) => t.role)).toEqual(["user", "engine"]);
  });

  test("the cloud toggle switches datasets without refetching", async () => {
    const { app, calls } = controller();
    await app.loadDocumentView(CONLLU, "covid");
    await app.sendQuery("who warned residents?");
    const requests = calls.length;
    expect(app.state.cloudMode).toBe("query");
    expect(cloudLemmas(app.html())).toEqual(
      strongAnswer.pers_words.map(([lemma]) => lemma),
    );
    app.setCloud("document");
    expect(cloudLemmas(app.html())).toEqual(rankPayload.ranks.map(([lemma]) => lemma));
    app.setCloud("query");
    expect(cloudLemmas(app.html())).toEqual(
      strongAnswer.pers_words.map(([lemma]) => lemma),
    );
    expect(calls.length).toBe(requests);
  });

  test("asking the same question twice yields identical answer ids", async () => {
    const { app } = controller();
    await app.loadDocumentView(CONLLU, "covid");
    await app.sendQuery("who warned residents?");
    await app.sendQuery("who warned residents?");
    const engine = app.state.turns.filter((t) => t.role === "engine");
    expect(engine).toHaveLength(2);
    expect(engine[0].answerIds).toEqual(engine[1].answerIds);
  });

  test("weak matches render the no-strong-match style", async () => {
    const { app } = controller();
    await app.loadDocumentView(CONLLU, "covid");
    await app.sendQuery("what about the zebra?");
    const html = app.html();
    expect(html).toContain('class="turn engine weak"');
    expect(html).toContain("no relevant content");
    expect(answerRows(html)).toEqual([]);
  });

  test("unknown documents show an error banner without crashing", async () => {
    const { fetchImpl } = mockFetch(() => ({
      status: 404,
      json: { error: "unknown document nope" },
    }));
    const app = new AppController(new ApiClient("http://svc.test", fetchImpl));
    await app.loadDocumentView(CONLLU, "nope");
    expect(app.state.docId).toBeNull();
    expect(app.state.banner).toBe("unknown document nope");
    expect(app.html()).toContain('class="banner error"');
  });

  test("a failed query marks the user turn and retry re-sends it", async () => {
    let failNext = true;
    const { fetchImpl, calls } = mockFetch((method, path) => {
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
        if (failNext) {
          failNext = false;
          return { status: 500, json: { error: "engine hiccup" } };
        }
        return { status: 200, json: strongAnswer };
      }
      return undefined;
    });
    const app = new AppController(new ApiClient("http://svc.test", fetchImpl));
    await app.loadDocumentView(CONLLU, "covid");
    await app.sendQuery("who warned residents?");
    expect(app.state.turns).toHaveLength(1);
    expect(app.state.turns[0].failed).toBe(true);
    expect(app.state.banner).toBe("engine hiccup");
    expect(app.html()).toContain('data-action="retry" data-index="0"');
    const before = calls.length;
    await app.retry(0);
    expect(calls.length).toBe(before + 1);
    expect(app.state.turns[0].failed).toBe(false);
    expect(app.state.turns).toHaveLength(2);
    expect(app.state.turns[1].answerIds).toEqual([2, 3, 5]);
  });

  test("empty questions are ignored and leave send disabled", async () => {
    const { app, calls } = controller();
    await app.loadDocumentView(CONLLU, "covid");
    const before = calls.length;
    await app.sendQuery("   ");
    expect(calls.length).toBe(before);
    expect(app.state.turns).toHaveLength(0);
    expect(app.html()).toContain("<button type=\"submit\" disabled>");
    app.setDraft("who?");
    expect(app.html()).toContain("<button type=\"submit\">");
  });

  test("queries run one at a time; later sends queue client-side", async () => {
    const pending: Array<(payload: Response) => void> = [];
    const respond = () => {
      const resolve = pending.shift();
      expect(resolve).toBeDefined();
      resolve?.(
        new Response(JSON.stringify(strongAnswer), {
          status: 200,
          headers: { "Content-Type": "application/json" },
        }),
      );
    };
    const { fetchImpl, calls } = serviceFetch();
    const gated: typeof fetchImpl = (url, init) => {
      if (url.endsWith("/query")) {
        void fetchImpl(url, init);
        return new Promise((resolve) => pending.push(resolve));
      }
      return fetchImpl(url, init);
    };
    const app = new AppController(new ApiClient("http://svc.test", gated));
    await app.loadDocumentView(CONLLU, "covid");
    const queryCalls = () => calls.filter((c) => c.url.endsWith("/query")).length;
    const first = app.sendQuery("first question?");
    const second = app.sendQuery("second question?");
    await tick();
    expect(app.state.turns.filter((t) => t.role === "user")).toHaveLength(2);
    expect(queryCalls()).toBe(1);
    respond();
    await tick();
    expect(queryCalls()).toBe(2);
    respond();
    await Promise.all([first, second]);
    await tick();
    expect(app.state.turns.filter((t) => t.role === "engine")).toHaveLength(2);
    expect(app.state.turns.map((t) => t.role)).toEqual([
      "user",
      "user",
      "engine",
      "engine",
    ]);
  });
});

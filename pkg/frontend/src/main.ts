/**
 * Chat client controller and browser bootstrap.
 *
 * `AppController` drives the whole view from service payloads: it
 * loads a document (digest summary, keyphrases, rank cloud, dialog
 * session), sends questions one at a time with optimistic user turns,
 * and re-renders after every state change. The DOM wiring at the
 * bottom only runs in a browser; tests drive the controller directly
 * with a mocked fetch.
 */

import { ApiClient, ApiError } from "./api.js";
import { renderApp } from "./render.js";
import {
  appendEngineTurn,
  appendUserTurn,
  clearTurnFailed,
  initialState,
  markTurnFailed,
  setCloudMode,
  withDocument,
} from "./state.js";
import type { AppState, CloudMode } from "./state.js";

export type Clock = () => number;

interface QueuedQuery {
  text: string;
  index: number;
}

function describe(err: unknown): string {
  return err instanceof ApiError ? err.message : String(err);
}

export class AppController {
  api: ApiClient;
  state: AppState;
  private readonly onRender: (html: string) => void;
  private readonly clock: Clock;
  private readonly queue: QueuedQuery[] = [];
  private busy = false;

  constructor(
    api: ApiClient,
    onRender: (html: string) => void = () => {},
    clock: Clock = Date.now,
  ) {
    this.api = api;
    this.state = initialState();
    this.onRender = onRender;
    this.clock = clock;
  }

  html(): string {
    return renderApp(this.state);
  }

  private commit(state: AppState): void {
    this.state = state;
    this.onRender(this.html());
  }

  /**
   * Digest the document, fetch its rank cloud, and open a dialog
   * session. Failures land in the error banner instead of throwing.
   */
  async loadDocumentView(conllu: string, docId?: string): Promise<void> {
    try {
      const view = await this.api.addDocument(conllu, docId);
      const ranks = await this.api.ranks(view.doc_id);
      const session = await this.api.createSession(view.doc_id);
      this.commit(withDocument(this.state, view, ranks, session.session_id));
    } catch (err) {
      this.commit({ ...this.state, banner: describe(err) });
    }
  }

  /**
   * Append the user turn optimistically and queue the request; only
   * one query is in flight, later sends wait for the response.
   */
  sendQuery(text: string): Promise<void> {
    const question = text.trim();
    if (!question || this.state.sessionId === null) {
      return Promise.resolve();
    }
    const index = this.state.turns.length;
    this.commit({ ...appendUserTurn(this.state, question, this.clock()), draft: "" });
    this.queue.push({ text: question, index });
    return this.drain();
  }

  /** Re-send a failed user turn. */
  retry(index: number): Promise<void> {
    const turn = this.state.turns[index];
    if (!turn || turn.role !== "user" || !turn.failed) {
      return Promise.resolve();
    }
    this.commit({ ...clearTurnFailed(this.state, index), banner: null });
    this.queue.push({ text: turn.text, index });
    return this.drain();
  }

  private async drain(): Promise<void> {
    if (this.busy) {
      return;
    }
    this.busy = true;
    try {
      let job = this.queue.shift();
      while (job !== undefined) {
        try {
          const payload = await this.api.query(this.state.sessionId ?? "", job.text);
          this.commit(appendEngineTurn(this.state, payload, this.clock()));
        } catch (err) {
          this.commit({ ...markTurnFailed(this.state, job.index), banner: describe(err) });
        }
        job = this.queue.shift();
      }
    } finally {
      this.busy = false;
    }
  }

  /** Toggle which cloud dataset is shown; no request is made. */
  setCloud(mode: CloudMode): void {
    this.commit(setCloudMode(this.state, mode));
  }

  /** Track the composer text without rebuilding the input mid-keystroke. */
  setDraft(text: string): void {
    this.state = { ...this.state, draft: text };
  }

  dismissBanner(): void {
    this.commit({ ...this.state, banner: null });
  }
}

/** Render into `root` and translate DOM events into controller calls. */
export function boot(root: HTMLElement, baseUrl: string): AppController {
  const app = new AppController(new ApiClient(baseUrl), (html) => {
    root.innerHTML = html;
  });
  root.innerHTML = app.html();
  root.addEventListener("submit", (event) => {
    const form = event.target as HTMLElement;
    if (form.matches("form.composer")) {
      event.preventDefault();
      const input = form.querySelector<HTMLInputElement>("input[name=question]");
      void app.sendQuery(input ? input.value : "");
    }
  });
  root.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!target) {
      return;
    }
    const action = target.dataset.action;
    if (action === "cloud-document") {
      app.setCloud("document");
    } else if (action === "cloud-query") {
      app.setCloud("query");
    } else if (action === "retry") {
      void app.retry(Number(target.dataset.index));
    } else if (action === "dismiss") {
      app.dismissBanner();
    }
  });
  root.addEventListener("input", (event) => {
    const input = event.target as HTMLInputElement;
    if (input.matches("input[name=question]")) {
      app.setDraft(input.value);
      const send = root.querySelector<HTMLButtonElement>("form.composer button");
      if (send) {
        send.disabled = !input.value.trim() || app.state.sessionId === null;
      }
    }
  });
  return app;
}

/* Browser entry point; vitest imports this module in node, where
   `document` does not exist, so everything below is guarded. */
if (typeof document !== "undefined") {
  const root = document.getElementById("app");
  const loader = document.getElementById("loader") as HTMLFormElement | null;
  if (root && loader) {
    const app = boot(root, "http://127.0.0.1:8023");
    loader.addEventListener("submit", (event) => {
      event.preventDefault();
      const base = document.getElementById("base-url") as HTMLInputElement;
      const docId = document.getElementById("doc-id") as HTMLInputElement;
      const conllu = document.getElementById("conllu") as HTMLTextAreaElement;
      app.api = new ApiClient(base.value);
      void app.loadDocumentView(conllu.value, docId.value.trim() || undefined);
    });
  }
}

/**
 * Pure HTML string renderers for every panel of the chat client.
 *
 * Rendering never mutates state and never talks to the service: each
 * function maps a payload slice to markup, so tests can assert on the
 * exact strings the browser would show. Scores and weights are
 * displayed verbatim; the only client-side ordering is the summary's
 * natural sentence order.
 */

import type { Answer, CloudEntry, Keyphrase, SummaryEntry } from "./api.js";
import type { AppState, ChatTurn, CloudMode } from "./state.js";
import { activeCloud, canSend } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/** Summary sentences in natural document order, whatever the payload order. */
export function renderSummary(entries: SummaryEntry[]): string {
  const ordered = entries.slice().sort((a, b) => a.id - b.id);
  const items = ordered
    .map(
      (e) =>
        `<li class="summary-row" data-sid="${e.id}" title="rank ${e.rank}">` +
        `${escapeHtml(e.text)}</li>`,
    )
    .join("");
  return `<section class="panel summary"><h2>summary</h2><ul>${items}</ul></section>`;
}

/** Keyphrases as chips, in payload order. */
export function renderKeyphrases(phrases: Keyphrase[]): string {
  const chips = phrases
    .map((p) => `<span class="chip" title="${p.score}">${escapeHtml(p.text)}</span>`)
    .join("");
  return (
    `<section class="panel keyphrases"><h2>keyphrases</h2>` +
    `<div class="chips">${chips}</div></section>`
  );
}

/**
 * Weighted tag list with a deterministic layout: entries stay in
 * payload order and font size scales linearly with weight relative to
 * the heaviest entry.
 */
export function renderCloud(entries: CloudEntry[], mode: CloudMode): string {
  const heaviest = entries.reduce((acc, [, weight]) => Math.max(acc, weight), 0);
  const tags = entries
    .map(([lemma, weight]) => {
      const scale = heaviest > 0 ? weight / heaviest : 0;
      const size = (0.8 + 1.2 * scale).toFixed(2);
      return (
        `<li class="cloud-tag" style="font-size:${size}rem" title="${weight}">` +
        `${escapeHtml(lemma)}</li>`
      );
    })
    .join("");
  const button = (target: CloudMode) =>
    `<button type="button" data-action="cloud-${target}"` +
    `${mode === target ? ' class="active"' : ""}>${target}</button>`;
  return (
    `<section class="panel cloud"><h2>word cloud</h2>` +
    `<div class="cloud-toggle">${button("document")}${button("query")}</div>` +
    `<ul class="cloud-list" data-mode="${mode}">${tags}</ul></section>`
  );
}

/** One engine answer as the canonical "id : text" row. */
export function renderAnswerRow(answer: Answer): string {
  return (
    `<div class="answer-row" title="${answer.score}">` +
    `${escapeHtml(`${answer.id} : ${answer.text}`)}</div>`
  );
}

export function renderTurn(turn: ChatTurn, index: number): string {
  if (turn.role === "user") {
    const retry = turn.failed
      ? `<button type="button" class="retry" data-action="retry" data-index="${index}">retry</button>`
      : "";
    const cls = turn.failed ? "turn user failed" : "turn user";
    return (
      `<div class="${cls}" data-index="${index}">` +
      `<span class="text">${escapeHtml(turn.text)}</span>${retry}</div>`
    );
  }
  const rows = turn.answers.map(renderAnswerRow).join("");
  const marker = turn.marker
    ? `<div class="marker">${escapeHtml(turn.marker)}</div>`
    : "";
  const cls = turn.weak ? "turn engine weak" : "turn engine";
  return `<div class="${cls}" data-index="${index}">${rows}${marker}</div>`;
}

export function renderChat(turns: ChatTurn[]): string {
  return `<section class="chat">${turns.map(renderTurn).join("")}</section>`;
}

/** Retryable error banner; empty string when there is no error. */
export function renderBanner(message: string | null): string {
  if (!message) {
    return "";
  }
  return (
    `<div class="banner error">${escapeHtml(message)}` +
    `<button type="button" data-action="dismiss">dismiss</button></div>`
  );
}

export function renderComposer(state: AppState): string {
  const disabled = canSend(state) ? "" : " disabled";
  return (
    `<form class="composer" data-action="send">` +
    `<input type="text" name="question" placeholder="ask a question"` +
    ` value="${escapeHtml(state.draft)}" autocomplete="off">` +
    `<button type="submit"${disabled}>send</button></form>`
  );
}

export function renderApp(state: AppState): string {
  const side = state.docId
    ? renderSummary(state.summary) +
      renderKeyphrases(state.keyphrases) +
      renderCloud(activeCloud(state), state.cloudMode)
    : `<section class="panel empty">load a document to start</section>`;
  return (
    renderBanner(state.banner) +
    `<main class="layout">` +
    `<div class="left">${renderChat(state.turns)}${renderComposer(state)}</div>` +
    `<aside class="right">${side}</aside></main>`
  );
}

/**
 * View state and its pure update functions.
 *
 * The engine owns all dialog state; this module only mirrors service
 * payloads for rendering. Every update returns a new state object,
 * chat history is append only, and the cloud toggle selects between
 * the two stored datasets without touching either.
 */

import type {
  Answer,
  AnswerPayload,
  CloudEntry,
  DocumentView,
  Keyphrase,
  RankPayload,
  SummaryEntry,
} from "./api.js";

export type Role = "user" | "engine";
export type CloudMode = "document" | "query";

/** One chat entry; engine turns carry zero or more answers. */
export interface ChatTurn {
  role: Role;
  text: string;
  answerIds: number[];
  answers: Answer[];
  weak: boolean;
  marker: string | null;
  failed: boolean;
  time: number;
}

export interface AppState {
  docId: string | null;
  sessionId: string | null;
  summary: SummaryEntry[];
  keyphrases: Keyphrase[];
  documentCloud: CloudEntry[];
  queryCloud: CloudEntry[];
  cloudMode: CloudMode;
  turns: ChatTurn[];
  banner: string | null;
  draft: string;
}

export function initialState(): AppState {
  return {
    docId: null,
    sessionId: null,
    summary: [],
    keyphrases: [],
    documentCloud: [],
    queryCloud: [],
    cloudMode: "document",
    turns: [],
    banner: null,
    draft: "",
  };
}

/** Install a freshly digested document and its rank cloud. */
export function withDocument(
  state: AppState,
  view: DocumentView,
  ranks: RankPayload,
  sessionId: string,
): AppState {
  return {
    ...state,
    docId: view.doc_id,
    sessionId,
    summary: view.summary.slice(),
    keyphrases: view.keyphrases.slice(),
    documentCloud: ranks.ranks.slice(),
    queryCloud: [],
    cloudMode: "document",
    turns: [],
    banner: null,
  };
}

/** Append the human side of an exchange. */
export function appendUserTurn(state: AppState, text: string, time: number): AppState {
  const turn: ChatTurn = {
    role: "user",
    text,
    answerIds: [],
    answers: [],
    weak: false,
    marker: null,
    failed: false,
    time,
  };
  return { ...state, turns: [...state.turns, turn], banner: null };
}

/**
 * Append the engine reply and switch the cloud to the
 * query-personalized dataset from the payload's pers_words.
 */
export function appendEngineTurn(
  state: AppState,
  payload: AnswerPayload,
  time: number,
): AppState {
  const turn: ChatTurn = {
    role: "engine",
    text: payload.marker ?? "",
    answerIds: payload.answers.map((a) => a.id),
    answers: payload.answers.slice(),
    weak: payload.weak_match,
    marker: payload.marker,
    failed: false,
    time,
  };
  return {
    ...state,
    turns: [...state.turns, turn],
    queryCloud: payload.pers_words.slice(),
    cloudMode: "query",
  };
}

/** Flag one user turn as failed so the view can offer a retry. */
export function markTurnFailed(state: AppState, index: number): AppState {
  const turns = state.turns.map((turn, i) =>
    i === index ? { ...turn, failed: true } : turn,
  );
  return { ...state, turns };
}

/** Clear the failed flag before re-sending. */
export function clearTurnFailed(state: AppState, index: number): AppState {
  const turns = state.turns.map((turn, i) =>
    i === index ? { ...turn, failed: false } : turn,
  );
  return { ...state, turns };
}

/** Select which cloud dataset is shown; never mutates the data. */
export function setCloudMode(state: AppState, mode: CloudMode): AppState {
  return { ...state, cloudMode: mode };
}

/** The entries the cloud panel currently shows. */
export function activeCloud(state: AppState): CloudEntry[] {
  return state.cloudMode === "document" ? state.documentCloud : state.queryCloud;
}

/** Sending needs an open session and a non-empty question. */
export function canSend(state: AppState): boolean {
  return state.sessionId !== null && state.draft.trim().length > 0;
}

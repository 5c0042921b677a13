// View state is a verbatim mirror of the last server response plus the
// local answer history; nothing about divisions is ever computed here.

import type { Outcome, Query, SessionState } from "./types.js";

export interface HistoryEntry {
  query: Query;
  answer: number;
}

export interface ViewState {
  sessionId: string | null;
  mode: "cake" | "rent";
  players: string[];
  resolution: number | null;
  phase: "setup" | "awaiting_answer" | "done" | "error";
  query: Query | null;
  outcome: Outcome | null;
  history: HistoryEntry[];
  error: string | null;
}

export function initialState(): ViewState {
  return {
    sessionId: null,
    mode: "cake",
    players: [],
    resolution: null,
    phase: "setup",
    query: null,
    outcome: null,
    history: [],
    error: null,
  };
}

export function sessionCreated(
  state: ViewState,
  id: string,
  mode: "cake" | "rent",
  players: string[],
  resolution: number,
): ViewState {
  return {
    ...initialState(),
    sessionId: id,
    mode,
    players,
    resolution,
    phase: "awaiting_answer",
  };
}

export function serverState(state: ViewState, server: SessionState): ViewState {
  if (server.state === "done") {
    return { ...state, phase: "done", query: null, outcome: server.outcome, error: null };
  }
  return {
    ...state,
    phase: "awaiting_answer",
    query: server.query,
    outcome: null,
    error: null,
  };
}

export function answered(state: ViewState, query: Query, answer: number): ViewState {
  // history only grows when the server accepted the answer
  return { ...state, history: [...state.history, { query, answer }] };
}

export function failed(state: ViewState, message: string): ViewState {
  return { ...state, phase: "error", error: message };
}

// Browser entry: a small wizard over the session API.  All state lives
// on the server; this file polls, renders and posts answers.

import { ApiClient, ApiError } from "./api.js";
import { renderApp } from "./render.js";
import {
  ViewState,
  answered,
  failed,
  initialState,
  serverState,
  sessionCreated,
} from "./state.js";

const POLL_MS = 1500;

let state: ViewState = initialState();
let client: ApiClient;
let pollTimer: number | null = null;

function draw(): void {
  const root = document.getElementById("app");
  if (root) root.innerHTML = renderApp(state);
}

function set(next: ViewState): void {
  state = next;
  draw();
}

async function refresh(): Promise<void> {
  if (!state.sessionId) return;
  try {
    const server = await client.getQuery(state.sessionId);
    set(serverState(state, server));
  } catch (err) {
    set(failed(state, String(err)));
  }
}

function schedulePoll(): void {
  if (pollTimer !== null) window.clearTimeout(pollTimer);
  pollTimer = window.setTimeout(async () => {
    await refresh();
    schedulePoll();
  }, POLL_MS);
}

async function submitAnswer(piece: number): Promise<void> {
  if (!state.sessionId || !state.query) return;
  const query = state.query;
  try {
    const server = await client.postAnswer(state.sessionId, {
      player: query.player,
      piece,
      query_index: query.query_index,
    });
    set(serverState(answered(state, query, piece), server));
  } catch (err) {
    if (err instanceof ApiError && err.code === "stale_query") {
      await refresh(); // someone else answered; re-sync
      return;
    }
    set(failed(state, String(err)));
  }
}

async function createSession(form: HTMLFormElement): Promise<void> {
  const data = new FormData(form);
  const kind = (data.get("kind") as "cake" | "rent") ?? "cake";
  const players = String(data.get("players") ?? "")
    .split(",")
    .map((s) => s.trim())
    .filter(Boolean);
  const mode = (data.get("mode") as "envyfree" | "secretive" | "survivor") ?? "envyfree";
  try {
    const res = await client.createSession({
      kind,
      players,
      mode,
      resolution: Number(data.get("resolution") ?? 8),
      total_rent: Number(data.get("total_rent") ?? 1) || 1,
    });
    set(sessionCreated(state, res.id, kind, players, res.resolution));
    await refresh();
    schedulePoll();
  } catch (err) {
    set(failed(state, String(err)));
  }
}

export function boot(baseUrl?: string): void {
  client = new ApiClient(baseUrl ?? "");
  draw();
  document.addEventListener("click", (ev) => {
    const target = ev.target as HTMLElement;
    const seg = target.closest("[data-piece]") as HTMLElement | null;
    if (seg && seg.dataset.piece) {
      void submitAnswer(Number(seg.dataset.piece));
    }
  });
  const form = document.getElementById("setup") as HTMLFormElement | null;
  if (form) {
    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      void createSession(form);
    });
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  boot();
}

// HTML renderers: pure functions from view state to markup, so they are
// unit-testable without a browser.  Widths come from the server's exact
// fractions and are only floated for CSS percentages.

import { parseWire, toNumber } from "./rational.js";
import type { Outcome, Query, WirePair } from "./types.js";
import type { HistoryEntry, ViewState } from "./state.js";

const COLORS = ["#4878d0", "#ee854a", "#6acc64", "#d65f5f", "#956cb4", "#8c613c"];

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function pct(x: WirePair): string {
  return (toNumber(parseWire(x)) * 100).toFixed(3) + "%";
}

function fracLabel(x: WirePair): string {
  const f = parseWire(x);
  return f.den === 1n ? `${f.num}` : `${f.num}/${f.den}`;
}

export function renderBar(division: WirePair[], allowed: number[] | null): string {
  const segments = division
    .map((len, idx) => {
      const piece = idx + 1;
      const selectable = allowed !== null && allowed.includes(piece);
      const cls = selectable ? "segment selectable" : "segment disabled";
      const attrs = selectable ? ` data-piece="${piece}" role="button" tabindex="0"` : "";
      const color = COLORS[idx % COLORS.length];
      return (
        `<div class="${cls}" style="width:${pct(len)};background:${color}"${attrs}>` +
        `<span class="piece-label">${piece}</span>` +
        `<span class="piece-size">${esc(fracLabel(len))}</span></div>`
      );
    })
    .join("");
  return `<div class="bar">${segments}</div>`;
}

export function renderRooms(prices: WirePair[], allowed: number[] | null): string {
  const rooms = prices
    .map((price, idx) => {
      const room = idx + 1;
      const selectable = allowed !== null && allowed.includes(room);
      const cls = selectable ? "room selectable" : "room disabled";
      const attrs = selectable ? ` data-piece="${room}" role="button" tabindex="0"` : "";
      return (
        `<div class="${cls}"${attrs}><span class="room-label">room ${room}</span>` +
        `<span class="room-price">${esc(fracLabel(price))}</span></div>`
      );
    })
    .join("");
  return `<div class="rooms">${rooms}</div>`;
}

export function renderQuery(query: Query, mode: "cake" | "rent"): string {
  const who = esc(query.player_name);
  const board = query.division
    ? renderBar(query.division, query.allowed)
    : renderRooms(query.prices ?? [], query.allowed);
  const what = mode === "cake" ? "piece" : "room";
  return (
    `<section class="query" data-query-index="${query.query_index}">` +
    `<h2>${who}, pick your preferred ${what}</h2>` +
    board +
    `<p class="hint">only the highlighted ${what}s are available at this point</p>` +
    `</section>`
  );
}

export function renderHistory(history: HistoryEntry[]): string {
  if (!history.length) return "";
  const items = history
    .map(
      (h) =>
        `<li>#${h.query.query_index} ${esc(h.query.player_name)} &rarr; ${h.answer}</li>`,
    )
    .join("");
  return `<section class="history"><h3>answers so far</h3><ol>${items}</ol></section>`;
}

function guaranteeLine(outcome: Outcome): string {
  if (outcome.kind === "rent") {
    return "whichever roommate leaves, the rooms still go to the rest envy-free";
  }
  if (outcome.mode === "survivor") {
    return "whichever player leaves, the rest stay envy-free";
  }
  if (outcome.mode === "secretive") {
    return "whichever pieces are taken away, the active players stay envy-free";
  }
  return "every player weakly prefers their own piece";
}

export function renderOutcome(outcome: Outcome, players: string[]): string {
  const board = outcome.prices
    ? renderRooms(outcome.prices, null)
    : renderBar(outcome.division, null);
  const rows = outcome.scenarios
    .map((sc) => {
      const removed = sc.removed.length
        ? sc.removed.map((r) => esc(players[r] ?? String(r))).join(", ")
        : "nobody";
      const pairs = Object.entries(sc.matching)
        .map(([a, b]) => {
          if (outcome.prices || outcome.mode === "survivor") {
            // matching maps pieces/rooms to players
            return `${a} &rarr; ${esc(players[b] ?? String(b))}`;
          }
          return `${esc(players[Number(a)] ?? a)} &rarr; ${b}`;
        })
        .join(", ");
      return `<tr><td>${removed}</td><td>${pairs}</td></tr>`;
    })
    .join("");
  return (
    `<section class="outcome">` +
    `<h2>done (${esc(outcome.flag)})</h2>` +
    board +
    `<p class="guarantee">${guaranteeLine(outcome)}</p>` +
    `<table class="scenarios"><thead><tr><th>removed</th><th>assignment</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>` +
    `</section>`
  );
}

export function renderApp(state: ViewState): string {
  if (state.phase === "error") {
    return `<section class="error"><h2>error</h2><p>${esc(state.error ?? "")}</p></section>`;
  }
  if (state.phase === "done" && state.outcome) {
    return renderOutcome(state.outcome, state.players) + renderHistory(state.history);
  }
  if (state.phase === "awaiting_answer" && state.query) {
    return renderQuery(state.query, state.mode) + renderHistory(state.history);
  }
  return `<section class="waiting"><p>waiting for the session…</p></section>`;
}

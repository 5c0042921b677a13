// Scripted player: drives a session to completion through the public
// API, answering every query from fixed valuations with the same exact
// argmax rule the automated server-side sources use.  This is both the
// end-to-end test harness and a reference for custom bots.

import { ApiClient } from "./api.js";
import {
  Frac,
  Valuation,
  parseWire,
  preferredPiece,
  preferredRoom,
} from "./rational.js";
import type { Outcome, Query } from "./types.js";

export interface CakeAgentPlayer {
  valuation: Valuation;
}

export interface RentAgentPlayer {
  values: Frac[];
}

export async function runCakeAgent(
  client: ApiClient,
  sessionId: string,
  players: CakeAgentPlayer[],
  maxSteps = 100000,
): Promise<Outcome> {
  for (let step = 0; step < maxSteps; step++) {
    const state = await client.getQuery(sessionId);
    if (state.state === "done") return state.outcome;
    const q: Query = state.query;
    const lengths = (q.division ?? []).map(parseWire);
    const answer = preferredPiece(players[q.player]!.valuation, lengths, q.allowed);
    await client.postAnswer(sessionId, {
      player: q.player,
      piece: answer,
      query_index: q.query_index,
    });
  }
  throw new Error("agent did not converge");
}

export async function runRentAgent(
  client: ApiClient,
  sessionId: string,
  players: RentAgentPlayer[],
  maxSteps = 100000,
): Promise<Outcome> {
  for (let step = 0; step < maxSteps; step++) {
    const state = await client.getQuery(sessionId);
    if (state.state === "done") return state.outcome;
    const q: Query = state.query;
    const prices = (q.prices ?? []).map(parseWire);
    const answer = preferredRoom(players[q.player]!.values, prices, q.allowed);
    await client.postAnswer(sessionId, {
      player: q.player,
      piece: answer,
      query_index: q.query_index,
    });
  }
  throw new Error("agent did not converge");
}

import { describe, expect, it } from "vitest";

import { renderApp, renderBar, renderOutcome, renderQuery } from "../src/render.js";
import { initialState, serverState, sessionCreated } from "../src/state.js";
import type { Outcome, Query } from "../src/types.js";

const query: Query = {
  player: 1,
  player_name: "bob",
  allowed: [2, 3],
  query_index: 4,
  division: [
    [1, 5],
    [3, 10],
    [1, 2],
  ],
};

describe("segmented bar", () => {
  it("uses proportional widths", () => {
    const html = renderBar(query.division!, null);
    expect(html).toContain("width:20.000%");
    expect(html).toContain("width:30.000%");
    expect(html).toContain("width:50.000%");
  });

  it("only allowed pieces are selectable", () => {
    const html = renderBar(query.division!, [2, 3]);
    expect(html).not.toContain('data-piece="1"');
    expect(html).toContain('data-piece="2"');
    expect(html).toContain('data-piece="3"');
    expect(html.match(/segment disabled/g)?.length).toBe(1);
  });
});

describe("query view", () => {
  it("names the player and carries the query index", () => {
    const html = renderQuery(query, "cake");
    expect(html).toContain("bob");
    expect(html).toContain('data-query-index="4"');
  });

  it("escapes player names", () => {
    const html = renderQuery({ ...query, player_name: "<img>" }, "cake");
    expect(html).not.toContain("<img>");
    expect(html).toContain("&lt;img&gt;");
  });
});

describe("outcome view", () => {
  const outcome: Outcome = {
    kind: "cake",
    mode: "survivor",
    division: [
      [1, 2],
      [1, 2],
    ],
    cuts: [[1, 2]],
    scenarios: [
      { removed: [0], matching: { "1": 1, "2": 2 } },
      { removed: [1], matching: { "1": 0, "2": 2 } },
      { removed: [2], matching: { "1": 0, "2": 1 } },
    ],
    envy_gap: null,
    certified: false,
    flag: "resolution-limited",
    resolution: 8,
  };

  it("shows one row per removal scenario and the guarantee", () => {
    const html = renderOutcome(outcome, ["alice", "bob", "carol"]);
    expect(html.match(/<tr><td>/g)?.length).toBe(3);
    expect(html).toContain("whichever player leaves");
    expect(html).toContain("alice");
  });
});

describe("view state", () => {
  it("mirrors the server response verbatim", () => {
    let state = sessionCreated(initialState(), "abc", "cake", ["a", "b", "c"], 8);
    state = serverState(state, { state: "awaiting_answer", query });
    expect(state.query).toBe(query);
    expect(renderApp(state)).toContain("bob");
    state = serverState(state, {
      state: "done",
      outcome: {
        kind: "cake",
        mode: "envyfree",
        division: [[1, 1]],
        cuts: [],
        scenarios: [],
        envy_gap: [0, 1],
        certified: true,
        flag: "exact",
        resolution: 1,
      },
    });
    expect(state.phase).toBe("done");
    expect(renderApp(state)).toContain("done (exact)");
  });
});

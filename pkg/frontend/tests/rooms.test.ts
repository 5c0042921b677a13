import { describe, expect, it } from "vitest";

import { renderQuery, renderRooms } from "../src/render.js";
import type { Query } from "../src/types.js";

describe("room rendering", () => {
  const query: Query = {
    player: 2,
    player_name: "carol",
    allowed: [2],
    query_index: 1,
    prices: [
      [500, 1],
      [700, 1],
    ],
  };

  it("renders price cards with only allowed rooms selectable", () => {
    const html = renderRooms(query.prices!, query.allowed);
    expect(html).toContain("room 1");
    expect(html).toContain("500");
    expect(html).not.toContain('data-piece="1"');
    expect(html).toContain('data-piece="2"');
  });

  it("renders a rent query around the cards", () => {
    const html = renderQuery(query, "rent");
    expect(html).toContain("carol");
    expect(html).toContain("pick your preferred room");
  });
});

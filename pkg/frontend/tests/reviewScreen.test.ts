import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { ReviewScreen } from "../src/reviewScreen.js";
import type { AlignmentResponse, Decision, DecisionsResponse } from "../src/types.js";
import { click, container, loadFixture, mockFetch, textOf } from "./helpers.js";

afterEach(() => vi.unstubAllGlobals());

function screenWith(routes: Parameters<typeof mockFetch>[0]) {
  const recorded = mockFetch(routes);
  const api = new ApiClient("http://api.test");
  const screen = new ReviewScreen(api, container(), "xh-chatgpt35");
  return { screen, recorded };
}

const alignmentRoute = (fixture: string) => ({
  method: "GET",
  path: /\/alignment\?kind=class$/,
  respond: () => ({ status: 200, payload: loadFixture<AlignmentResponse>(fixture) }),
});

describe("review screen", () => {
  it("renders one row per false positive with suggestions", async () => {
    const { screen } = screenWith([alignmentRoute("alignment_chatgpt35")]);
    await screen.show();
    const rows = document.querySelectorAll("tr.entity-fp");
    expect(rows).toHaveLength(15);
    expect(rows[0].querySelectorAll(".suggestions li")).toHaveLength(3);
  });

  it("marks decisions and enables submit", async () => {
    const { screen } = screenWith([alignmentRoute("alignment_chatgpt35")]);
    await screen.show();
    expect(
      (document.querySelector("button.submit-decisions") as HTMLButtonElement).disabled
    ).toBe(true);
    click(document.querySelector("tr.entity-fp button.mark-tp"));
    expect(screen.model.pendingDecisions.size).toBe(1);
    expect(
      (document.querySelector("button.submit-decisions") as HTMLButtonElement).disabled
    ).toBe(false);
    expect(textOf(document.body, ".pending")).toBe("ReclassifyToTP");
  });

  it("posts the queue and fills the after panel from the response", async () => {
    const request = loadFixture<{ decisions: Decision[] }>("decisions_request_chatgpt35");
    const response = loadFixture<DecisionsResponse>("decisions_response_chatgpt35");
    const { screen, recorded } = screenWith([
      alignmentRoute("alignment_chatgpt35"),
      { method: "POST", path: /\/decisions$/, respond: () => ({ status: 200, payload: response }) },
    ]);
    await screen.show();
    for (const decision of request.decisions) {
      if (decision.verdict !== "ReclassifyToTP") continue;
      const row = document.querySelector(`tr[data-iri="${decision.generatedIri}"]`);
      click(row!.querySelector("button.mark-tp"));
    }
    await screen.submit();

    const post = recorded.find((r) => r.method === "POST")!;
    const posted = post.body as { decisions: Decision[]; revision: number };
    expect(posted.decisions).toHaveLength(13);

    const afterPanel = document.querySelectorAll(".metrics-panel")[1];
    expect(textOf(afterPanel, ".metric-precision")).toBe(response.after.display.precision);
    expect(textOf(afterPanel, ".metric-recall")).toBe(response.after.display.recall);
    expect(textOf(afterPanel, ".metric-f1")).toBe(response.after.display.f1);
  });

  it("surfaces a 409 as row-level messages and keeps other decisions", async () => {
    let alignmentCalls = 0;
    const fresh = loadFixture<AlignmentResponse>("alignment_chatgpt35_after");
    const { screen } = screenWith([
      {
        method: "GET",
        path: /\/alignment\?kind=class$/,
        respond: () => {
          alignmentCalls += 1;
          return {
            status: 200,
            payload: alignmentCalls === 1
              ? loadFixture<AlignmentResponse>("alignment_chatgpt35")
              : fresh,
          };
        },
      },
      {
        method: "POST",
        path: /\/decisions$/,
        respond: () => ({ status: 409, payload: { detail: "not a current false positive" } }),
      },
    ]);
    await screen.show();
    const stillFp = new Set(fresh.report.falsePositives);
    const rows = [...document.querySelectorAll("tr.entity-fp")];
    const resolvedRow = rows.find((r) => !stillFp.has((r as HTMLElement).dataset.iri!))!;
    const survivingRow = rows.find((r) => stillFp.has((r as HTMLElement).dataset.iri!))!;
    click(resolvedRow.querySelector("button.mark-tp"));
    click(survivingRow.querySelector("button.mark-tp"));
    await screen.submit();

    expect(textOf(document.body, ".banner")).toContain("1 decision(s) still queued");
    expect(textOf(document.body, ".row-error")).toContain("already resolved");
    expect(screen.model.pendingDecisions.size).toBe(1);
    expect(screen.model.pendingDecisions.has(
      (survivingRow as HTMLElement).dataset.iri!)).toBe(true);
  });
});

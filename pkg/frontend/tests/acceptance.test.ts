/**
 * Acceptance flows for the review UI, run against captured API payloads so
 * every number the tests compare is a value the real service returned.
 */
import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { ReviewScreen } from "../src/reviewScreen.js";
import type { AlignmentResponse, Decision, DecisionsResponse } from "../src/types.js";
import { click, container, loadFixture, mockFetch, textOf } from "./helpers.js";

afterEach(() => vi.unstubAllGlobals());

describe("acceptance: expert-review workbench", () => {
  it("shows 15 FP rows for the bundled X-HCOME session", async () => {
    mockFetch([{
      method: "GET", path: /\/alignment\?kind=class$/,
      respond: () => ({ status: 200, payload: loadFixture<AlignmentResponse>("alignment_chatgpt35") }),
    }]);
    const screen = new ReviewScreen(new ApiClient("http://api.test"), container(), "xh-chatgpt35");
    await screen.show();
    expect(document.querySelectorAll("tr.entity-fp")).toHaveLength(15);
    console.log("PASS secondary: fixture session renders 15 false-positive rows");
  });

  it("updates the after panel to 92/56/70 using only API-returned values", async () => {
    const request = loadFixture<{ decisions: Decision[] }>("decisions_request_chatgpt35");
    const response = loadFixture<DecisionsResponse>("decisions_response_chatgpt35");
    mockFetch([
      {
        method: "GET", path: /\/alignment\?kind=class$/,
        respond: () => ({ status: 200, payload: loadFixture<AlignmentResponse>("alignment_chatgpt35") }),
      },
      {
        method: "POST", path: /\/decisions$/,
        respond: () => ({ status: 200, payload: response }),
      },
    ]);
    const screen = new ReviewScreen(new ApiClient("http://api.test"), container(), "xh-chatgpt35");
    await screen.show();
    const reclassified = request.decisions.filter((d) => d.verdict === "ReclassifyToTP");
    expect(reclassified).toHaveLength(13);
    for (const decision of reclassified) {
      const row = document.querySelector(`tr[data-iri="${decision.generatedIri}"]`);
      click(row!.querySelector("button.mark-tp"));
    }
    await screen.submit();

    const afterPanel = document.querySelectorAll(".metrics-panel")[1];
    const displayed = {
      precision: textOf(afterPanel, ".metric-precision"),
      recall: textOf(afterPanel, ".metric-recall"),
      f1: textOf(afterPanel, ".metric-f1"),
    };
    // every displayed value is exactly what the service returned...
    expect(displayed).toEqual(response.after.display);
    // ...and the model holds the response object untouched (no local math)
    expect(screen.model.metricsAfter).toEqual(response.after);
    // ...which is the 92/56/70 row
    expect(displayed).toEqual({ precision: "92%", recall: "56%", f1: "70%" });
    console.log("PASS secondary: after panel shows 92/56/70 straight from the API");
  });

  it("renders the NegativeFN badge with 122% recall after full Bard reclassification", async () => {
    const response = loadFixture<DecisionsResponse>("decisions_response_bard");
    mockFetch([
      {
        method: "GET", path: /\/alignment\?kind=class$/,
        respond: () => ({ status: 200, payload: loadFixture<AlignmentResponse>("alignment_bard") }),
      },
      {
        method: "POST", path: /\/decisions$/,
        respond: () => ({ status: 200, payload: response }),
      },
    ]);
    const screen = new ReviewScreen(new ApiClient("http://api.test"), container(), "xh-bard");
    await screen.show();
    const rows = [...document.querySelectorAll("tr.entity-fp")];
    expect(rows).toHaveLength(31);
    for (const row of rows) {
      click(row.querySelector("button.mark-tp"));
    }
    await screen.submit();

    const afterPanel = document.querySelectorAll(".metrics-panel")[1];
    expect(textOf(afterPanel, ".metric-recall")).toBe(response.after.display.recall);
    expect(textOf(afterPanel, ".metric-recall")).toBe("122%");
    expect(textOf(afterPanel, ".badge-negative-fn")).toBe("recall > 100%");
    expect(response.after.fn).toBe(-9);
    console.log("PASS secondary: NegativeFN badge rendered with 122% recall");
  });

  it("submits nothing when the queue is empty (panels unchanged)", async () => {
    const recorded = mockFetch([{
      method: "GET", path: /\/alignment\?kind=class$/,
      respond: () => ({ status: 200, payload: loadFixture<AlignmentResponse>("alignment_chatgpt35") }),
    }]);
    const screen = new ReviewScreen(new ApiClient("http://api.test"), container(), "xh-chatgpt35");
    await screen.show();
    await screen.submit();
    expect(recorded.filter((r) => r.method === "POST")).toHaveLength(0);
    expect(screen.model.metricsAfter).toBeNull();
  });
});

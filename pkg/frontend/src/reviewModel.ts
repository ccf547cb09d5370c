import type {
  AlignmentResponse,
  Decision,
  DecisionsResponse,
  Metrics,
  Suggestion,
  Verdict,
} from "./types.js";

export type RowStatus = "TP" | "FP" | "FN";

export interface EntityRow {
  iri: string;
  generatedName: string;
  status: RowStatus;
  matchedGoldName?: string;
  score?: number;
  suggestions: Array<Suggestion & { label: string }>;
  /** row-level conflict message from the last failed submission */
  error?: string;
}

export interface PendingDecision {
  verdict: Verdict;
  rationale: string;
}

/**
 * State for the expert-review screen.
 *
 * All metric values displayed by the UI come from server responses:
 * metricsBefore from the alignment report, metricsAfter exclusively from
 * POST /decisions responses. The model never recomputes a metric.
 */
export class ReviewViewModel {
  sessionId: string;
  revision = 0;
  entityRows: EntityRow[] = [];
  metricsBefore: Metrics | null = null;
  metricsAfter: Metrics | null = null;
  pendingDecisions = new Map<string, PendingDecision>();
  reviewer = "reviewer";

  constructor(sessionId: string) {
    this.sessionId = sessionId;
  }

  load(data: AlignmentResponse): void {
    this.revision = data.revision;
    this.metricsBefore = data.report.metrics;
    const labels = data.entityLabels;
    const name = (iri: string) => labels[iri] ?? iri.split(/[#/]/).pop() ?? iri;

    const rows: EntityRow[] = [];
    const matched = new Map(data.report.pairs.map((p) => [p.generated, p]));
    for (const iri of data.report.truePositives) {
      const pair = matched.get(iri);
      rows.push({
        iri,
        generatedName: name(iri),
        status: "TP",
        matchedGoldName: pair ? name(pair.gold) : undefined,
        score: pair?.score,
        suggestions: [],
      });
    }
    for (const iri of data.report.falsePositives) {
      rows.push({
        iri,
        generatedName: name(iri),
        status: "FP",
        suggestions: (data.suggestions[iri] ?? []).map((s) => ({
          ...s,
          label: name(s.gold),
        })),
      });
    }
    for (const iri of data.report.falseNegatives) {
      rows.push({ iri, generatedName: name(iri), status: "FN", suggestions: [] });
    }
    this.entityRows = rows;
    // drop pending decisions for rows that are no longer false positives
    const fps = new Set(data.report.falsePositives);
    for (const iri of [...this.pendingDecisions.keys()]) {
      if (!fps.has(iri)) this.pendingDecisions.delete(iri);
    }
  }

  falsePositiveRows(): EntityRow[] {
    return this.entityRows.filter((r) => r.status === "FP");
  }

  /** Queue a decision; a row carries at most one (later calls replace it). */
  setDecision(iri: string, verdict: Verdict, rationale = ""): void {
    const row = this.entityRows.find((r) => r.iri === iri);
    if (!row || row.status !== "FP") {
      throw new Error(`no false-positive row for ${iri}`);
    }
    this.pendingDecisions.set(iri, { verdict, rationale });
  }

  clearDecision(iri: string): void {
    this.pendingDecisions.delete(iri);
  }

  buildSubmission(): Decision[] {
    const now = new Date().toISOString();
    return [...this.pendingDecisions.entries()].map(([iri, d]) => ({
      generatedIri: iri,
      verdict: d.verdict,
      rationale: d.rationale,
      reviewer: this.reviewer,
      timestamp: now,
    }));
  }

  /** Apply a successful POST /decisions response (the only after-source). */
  applySubmitResult(response: DecisionsResponse): void {
    this.metricsAfter = response.after;
    this.revision = response.revision;
    const tps = new Set(response.report.truePositives);
    const fps = new Set(response.report.falsePositives);
    for (const row of this.entityRows) {
      if (row.status === "FP" && tps.has(row.iri)) row.status = "TP";
      else if (row.status === "FP" && !fps.has(row.iri)) row.status = "TP";
      row.error = undefined;
    }
    this.pendingDecisions.clear();
  }

  /**
   * Reconcile after a 409: rows that the server no longer lists as false
   * positives are marked with a row-level message and dropped from the
   * queue; every other pending decision survives for the retry.
   */
  applyConflict(fresh: AlignmentResponse): string[] {
    const fps = new Set(fresh.report.falsePositives);
    const dropped: string[] = [];
    for (const iri of [...this.pendingDecisions.keys()]) {
      if (!fps.has(iri)) {
        this.pendingDecisions.delete(iri);
        dropped.push(iri);
      }
    }
    this.load(fresh);
    for (const iri of dropped) {
      const row = this.entityRows.find((r) => r.iri === iri);
      if (row) row.error = "already resolved on the server; decision dropped";
    }
    return dropped;
  }

  hasNegativeFn(): boolean {
    return this.metricsAfter?.flags.includes("NegativeFN") ?? false;
  }
}

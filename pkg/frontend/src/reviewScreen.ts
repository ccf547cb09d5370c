import { ApiClient, ApiError } from "./api.js";
import { ReviewViewModel } from "./reviewModel.js";
import type { EntityRow, RowStatus } from "./reviewModel.js";
import type { Metrics } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className = "", text = ""
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

/** Metric panel: every number is a server-provided value, rendered verbatim. */
function metricsPanel(title: string, metrics: Metrics | null): HTMLElement {
  const panel = el("div", "metrics-panel");
  panel.append(el("h3", "", title));
  if (metrics === null) {
    panel.append(el("p", "metrics-empty", "no submission yet"));
    return panel;
  }
  const list = el("dl", "metrics-list");
  const rows: Array<[string, string]> = [
    ["TP", String(metrics.tp)],
    ["FP", String(metrics.fp)],
    ["FN", String(metrics.fn)],
    ["Precision", metrics.display.precision],
    ["Recall", metrics.display.recall],
    ["F-1", metrics.display.f1],
  ];
  for (const [label, value] of rows) {
    list.append(el("dt", "", label));
    const dd = el("dd", `metric-${label.toLowerCase().replace(/[^a-z0-9]/g, "")}`, value);
    list.append(dd);
  }
  panel.append(list);
  if (metrics.flags.includes("NegativeFN")) {
    const badge = el("span", "badge badge-negative-fn", "recall > 100%");
    badge.title = "reclassified true positives exceed the gold entity count";
    panel.append(badge);
  }
  return panel;
}

function statusBadge(status: RowStatus): HTMLElement {
  return el("span", `status status-${status.toLowerCase()}`, status);
}

export class ReviewScreen {
  model: ReviewViewModel;
  private banner = el("div", "banner");

  constructor(
    private api: ApiClient,
    private container: HTMLElement,
    sessionId: string
  ) {
    this.model = new ReviewViewModel(sessionId);
  }

  async show(): Promise<void> {
    const alignment = await this.api.getAlignment(this.model.sessionId);
    this.model.load(alignment);
    this.render();
  }

  render(): void {
    const { model } = this;
    this.container.replaceChildren();
    this.container.append(el("h2", "", `Expert review — ${model.sessionId}`));
    this.container.append(this.banner);

    const panels = el("div", "metrics-row");
    panels.append(metricsPanel("Before review", model.metricsBefore));
    panels.append(metricsPanel("After review", model.metricsAfter));
    this.container.append(panels);

    const table = el("table", "entity-table");
    const head = el("tr");
    for (const column of ["Generated entity", "Status", "Gold match / nearest", "Score", "Decision"]) {
      head.append(el("th", "", column));
    }
    table.append(head);
    for (const row of model.entityRows) {
      table.append(this.renderRow(row));
    }
    this.container.append(table);

    const submit = el("button", "submit-decisions",
      `Submit ${model.pendingDecisions.size} decision(s)`);
    submit.addEventListener("click", () => void this.submit());
    if (model.pendingDecisions.size === 0) submit.disabled = true;
    this.container.append(submit);
  }

  private renderRow(row: EntityRow): HTMLElement {
    const { model } = this;
    const tr = el("tr", `entity-row entity-${row.status.toLowerCase()}`);
    tr.dataset.iri = row.iri;
    tr.append(el("td", "cell-name", row.generatedName));
    const statusCell = el("td");
    statusCell.append(statusBadge(row.status));
    tr.append(statusCell);

    const goldCell = el("td", "cell-gold");
    if (row.matchedGoldName !== undefined) {
      goldCell.textContent = row.matchedGoldName;
    } else if (row.suggestions.length > 0) {
      const list = el("ul", "suggestions");
      for (const suggestion of row.suggestions) {
        list.append(el("li", "", `${suggestion.label} (${suggestion.score.toFixed(2)})`));
      }
      goldCell.append(list);
    }
    tr.append(goldCell);
    tr.append(el("td", "cell-score",
      row.score !== undefined ? row.score.toFixed(2) : ""));

    const decisionCell = el("td", "cell-decision");
    if (row.status === "FP") {
      const pending = model.pendingDecisions.get(row.iri);
      const rationale = el("input", "rationale");
      rationale.placeholder = "rationale";
      rationale.value = pending?.rationale ?? "";
      const reclassify = el("button", "mark-tp", "Reclassify to TP");
      const keep = el("button", "mark-keep", "Keep FP");
      reclassify.addEventListener("click", () => {
        model.setDecision(row.iri, "ReclassifyToTP", rationale.value);
        this.render();
      });
      keep.addEventListener("click", () => {
        model.setDecision(row.iri, "KeepFP", rationale.value);
        this.render();
      });
      decisionCell.append(reclassify, keep, rationale);
      if (pending) {
        const chip = el("span", "pending", pending.verdict);
        const clear = el("button", "clear-decision", "×");
        clear.addEventListener("click", () => {
          model.clearDecision(row.iri);
          this.render();
        });
        decisionCell.append(chip, clear);
      }
    }
    if (row.error) {
      decisionCell.append(el("span", "row-error", row.error));
    }
    tr.append(decisionCell);
    return tr;
  }

  async submit(): Promise<void> {
    const { model } = this;
    const decisions = model.buildSubmission();
    if (decisions.length === 0) return;
    try {
      const response = await this.api.postDecisions(
        model.sessionId, decisions, model.revision);
      model.applySubmitResult(response);
      this.banner.textContent = `Applied ${decisions.length} decision(s).`;
      this.banner.className = "banner banner-ok";
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        // refresh, drop only the resolved rows, keep the rest queued
        const fresh = await this.api.getAlignment(model.sessionId);
        const dropped = model.applyConflict(fresh);
        this.banner.textContent =
          `Conflict: ${error.detail}. ${dropped.length} row(s) resolved elsewhere; ` +
          `${model.pendingDecisions.size} decision(s) still queued.`;
        this.banner.className = "banner banner-conflict";
      } else {
        this.banner.textContent = error instanceof Error ? error.message : String(error);
        this.banner.className = "banner banner-error";
      }
    }
    this.render();
  }
}

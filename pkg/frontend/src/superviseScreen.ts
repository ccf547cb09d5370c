import { ApiClient, ApiError } from "./api.js";
import type { ArtifactSummary, SessionDoc } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className = "", text = ""
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

export interface RoundDiff {
  added: string[];
  removed: string[];
}

/** Class-list diff between the latest round and the one before it. */
export function diffRounds(summaries: ArtifactSummary[]): RoundDiff {
  if (summaries.length === 0) return { added: [], removed: [] };
  const current = new Set(summaries[summaries.length - 1].classes);
  const previous = new Set(
    summaries.length > 1 ? summaries[summaries.length - 2].classes : []);
  return {
    added: [...current].filter((c) => !previous.has(c)).sort(),
    removed: [...previous].filter((c) => !current.has(c)).sort(),
  };
}

export class SuperviseScreen {
  session: SessionDoc | null = null;
  private banner = el("div", "banner");

  constructor(
    private api: ApiClient,
    private container: HTMLElement,
    private sessionId: string
  ) {}

  async show(): Promise<void> {
    this.session = await this.api.getSession(this.sessionId);
    this.render();
  }

  render(): void {
    const session = this.session;
    this.container.replaceChildren();
    if (!session) return;
    this.container.append(el("h2", "", `Supervision — ${session.id}`));
    this.container.append(this.banner);

    const status = el("p", "session-state",
      `state: ${session.state} · rounds completed: ${session.roundsCompleted}`);
    this.container.append(status);
    if (session.flags.includes("CapReached")) {
      this.container.append(el("span", "badge badge-cap", "round cap reached"));
    }

    const summaries = session.artifactSummaries;
    if (summaries.length > 0) {
      const latest = summaries[summaries.length - 1];
      this.container.append(el("h3", "", `${latest.step}: ${latest.classCount} classes`));
      const list = el("ul", "class-list");
      const diff = diffRounds(summaries);
      const added = new Set(diff.added);
      for (const name of latest.classes) {
        const item = el("li", added.has(name) ? "class-added" : "", name);
        list.append(item);
      }
      this.container.append(list);
      if (diff.added.length > 0 || diff.removed.length > 0) {
        this.container.append(el("p", "round-diff",
          `vs previous round: +${diff.added.length} / -${diff.removed.length}`));
        if (diff.removed.length > 0) {
          this.container.append(el("p", "round-removed",
            `removed: ${diff.removed.join(", ")}`));
        }
      }
    }

    const paused = session.state.startsWith("paused:");
    const controls = el("div", "supervise-controls");
    const continueButton = el("button", "action-continue", "Continue");
    const stopButton = el("button", "action-stop", "Stop");
    const guidance = el("textarea", "guidance-text");
    guidance.placeholder = "guidance for the next round";
    const injectButton = el("button", "action-inject", "Inject Guidance");
    continueButton.disabled = stopButton.disabled = injectButton.disabled = !paused;
    continueButton.addEventListener("click", () => void this.act("continue"));
    stopButton.addEventListener("click", () => void this.act("stop"));
    injectButton.addEventListener("click", () => void this.act("inject", guidance.value));
    controls.append(continueButton, stopButton, guidance, injectButton);
    this.container.append(controls);
  }

  async act(action: "continue" | "stop" | "inject", guidance = ""): Promise<void> {
    try {
      this.session = await this.api.supervise(this.sessionId, action, guidance);
      this.banner.textContent = action === "stop"
        ? "Session stopped." : "Next round ready.";
      this.banner.className = "banner banner-ok";
    } catch (error) {
      if (error instanceof ApiError) {
        this.banner.textContent = error.detail;
        this.banner.className = "banner banner-conflict";
        this.session = await this.api.getSession(this.sessionId);
      } else {
        throw error;
      }
    }
    this.render();
  }
}

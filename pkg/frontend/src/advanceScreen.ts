import { ApiClient, ApiError } from "./api.js";
import type { SessionDoc } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className = "", text = ""
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

/** Form for the X-HCOME human steps; LLM steps advance with an empty input. */
export class AdvanceScreen {
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
    this.container.append(el("h2", "", `Workflow steps — ${session.id}`));
    this.container.append(this.banner);
    this.container.append(el("p", "session-state", `state: ${session.state}`));
    if (session.pendingHumanAction) {
      this.container.append(el("p", "pending-action",
        `Next human action: ${session.pendingHumanAction}`));
    }

    const humanStep = session.pendingHumanAction !== null;
    const input = el("textarea", "step-input");
    input.placeholder = humanStep
      ? 'human step input as JSON, e.g. {"review": "..."}'
      : "LLM step: leave empty and advance";
    const advance = el("button", "action-advance", "Advance one step");
    advance.disabled = session.state === "done";
    advance.addEventListener("click", () => void this.advance(input.value));
    this.container.append(input, advance);

    if (session.turns.length > 0) {
      this.container.append(el("h3", "", "Transcript"));
      const log = el("ol", "transcript");
      for (const turn of session.turns) {
        log.append(el("li", "", `${turn.speaker}: ${turn.responseText.slice(0, 120)}`));
      }
      this.container.append(log);
    }
  }

  async advance(rawInput: string): Promise<void> {
    let input: Record<string, unknown> | null = null;
    if (rawInput.trim()) {
      try {
        input = JSON.parse(rawInput) as Record<string, unknown>;
      } catch {
        this.banner.textContent = "input is not valid JSON";
        this.banner.className = "banner banner-error";
        this.render();
        return;
      }
    }
    try {
      this.session = await this.api.advance(this.sessionId, input);
      this.banner.textContent = `Advanced to ${this.session.state}.`;
      this.banner.className = "banner banner-ok";
    } catch (error) {
      if (error instanceof ApiError) {
        this.banner.textContent = error.detail;
        this.banner.className = "banner banner-conflict";
      } else {
        throw error;
      }
    }
    this.render();
  }
}

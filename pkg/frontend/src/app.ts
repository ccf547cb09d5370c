import { ApiClient } from "./api.js";
import { AdvanceScreen } from "./advanceScreen.js";
import { ReviewScreen } from "./reviewScreen.js";
import { SuperviseScreen } from "./superviseScreen.js";

const DEFAULT_BASE_URL = "http://127.0.0.1:8350";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className = "", text = ""
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

async function sessionList(api: ApiClient, container: HTMLElement): Promise<void> {
  const { sessions } = await api.listSessions();
  container.replaceChildren(el("h2", "", "Sessions"));
  if (sessions.length === 0) {
    container.append(el("p", "", "No sessions in the store yet."));
    return;
  }
  const table = el("table", "session-table");
  const head = el("tr");
  for (const column of ["Session", "Methodology", "Provider", "State", "Involvement", ""]) {
    head.append(el("th", "", column));
  }
  table.append(head);
  for (const session of sessions) {
    const tr = el("tr");
    tr.append(el("td", "", session.id));
    tr.append(el("td", "", session.methodology));
    tr.append(el("td", "", `${session.provider}/${session.model}`));
    tr.append(el("td", "", session.state));
    tr.append(el("td", "", String(session.involvementLevel)));
    const links = el("td");
    const review = el("a", "", "review");
    review.href = `#/review/${session.id}`;
    const supervise = el("a", "", "supervise");
    supervise.href = `#/supervise/${session.id}`;
    const advance = el("a", "", "steps");
    advance.href = `#/advance/${session.id}`;
    links.append(review, " ", supervise, " ", advance);
    tr.append(links);
    table.append(tr);
  }
  container.append(table);
}

export async function route(api: ApiClient, container: HTMLElement, hash: string): Promise<void> {
  const review = hash.match(/^#\/review\/(.+)$/);
  if (review) {
    await new ReviewScreen(api, container, decodeURIComponent(review[1])).show();
    return;
  }
  const supervise = hash.match(/^#\/supervise\/(.+)$/);
  if (supervise) {
    await new SuperviseScreen(api, container, decodeURIComponent(supervise[1])).show();
    return;
  }
  const advance = hash.match(/^#\/advance\/(.+)$/);
  if (advance) {
    await new AdvanceScreen(api, container, decodeURIComponent(advance[1])).show();
    return;
  }
  await sessionList(api, container);
}

export function start(): void {
  const params = new URLSearchParams(window.location.search);
  const baseUrl = params.get("api") ?? DEFAULT_BASE_URL;
  const api = new ApiClient(baseUrl);
  const container = document.getElementById("app");
  if (!container) throw new Error("missing #app container");

  const rerender = () => {
    route(api, container, window.location.hash).catch((error) => {
      container.replaceChildren(
        el("div", "banner banner-error", error instanceof Error ? error.message : String(error)));
    });
  };
  window.addEventListener("hashchange", rerender);
  rerender();
}

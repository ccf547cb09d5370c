import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { vi } from "vitest";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function loadFixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, `${name}.json`), "utf-8")) as T;
}

export interface Route {
  method: string;
  path: RegExp;
  /** status + payload, or a function of the recorded request */
  respond: (body: unknown) => { status: number; payload: unknown };
}

export interface RecordedRequest {
  method: string;
  url: string;
  body: unknown;
}

/** Install a fetch stub; returns the recorded requests for assertions. */
export function mockFetch(routes: Route[]): RecordedRequest[] {
  const recorded: RecordedRequest[] = [];
  const stub = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    recorded.push({ method, url, body });
    for (const route of routes) {
      if (route.method === method && route.path.test(url)) {
        const { status, payload } = route.respond(body);
        return new Response(JSON.stringify(payload), {
          status,
          headers: { "Content-Type": "application/json" },
        });
      }
    }
    throw new Error(`no mocked route for ${method} ${url}`);
  });
  vi.stubGlobal("fetch", stub);
  return recorded;
}

export function container(): HTMLElement {
  document.body.innerHTML = '<div id="app"></div>';
  return document.getElementById("app") as HTMLElement;
}

export function click(element: Element | null): void {
  if (!element) throw new Error("element to click not found");
  (element as HTMLElement).click();
}

export function textOf(root: ParentNode, selector: string): string {
  const node = root.querySelector(selector);
  if (!node) throw new Error(`no element matches ${selector}`);
  return node.textContent ?? "";
}

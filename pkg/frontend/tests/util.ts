/** Shared test helpers: DOM polling and a recording fake fetch. */

import type { FetchFn } from "../src/api.js";

export async function waitFor(
  condition: () => boolean, timeoutMs = 5000,
): Promise<void> {
  const start = Date.now();
  while (!condition()) {
    if (Date.now() - start > timeoutMs) {
      throw new Error("waitFor: condition not met in time");
    }
    await new Promise((resolve) => setTimeout(resolve, 10));
  }
}

export interface RecordedCall {
  method: string;
  url: string;
  body: unknown;
  headers: Record<string, string>;
}

export interface FakeReply {
  status?: number;
  json: unknown;
}

/**
 * Fetch stub driven by a single dispatcher; records every call so tests
 * can assert exactly what went over the wire.
 */
export function fakeFetch(
  dispatch: (call: RecordedCall) => FakeReply,
): { fetchFn: FetchFn; calls: RecordedCall[] } {
  const calls: RecordedCall[] = [];
  const fetchFn: FetchFn = async (url, init) => {
    const call: RecordedCall = {
      method: init.method ?? "GET",
      url,
      body: typeof init.body === "string" ? JSON.parse(init.body) : undefined,
      headers: (init.headers ?? {}) as Record<string, string>,
    };
    calls.push(call);
    const reply = dispatch(call);
    return new Response(JSON.stringify(reply.json), {
      status: reply.status ?? 200,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { fetchFn, calls };
}

export function query<T extends HTMLElement>(root: HTMLElement, selector: string): T {
  const node = root.querySelector(selector);
  if (!node) {
    throw new Error(`no element matches ${selector}`);
  }
  return node as T;
}

export function click(root: HTMLElement, selector: string): void {
  query<HTMLButtonElement>(root, selector).click();
}

export function setValue(root: HTMLElement, selector: string, value: string): void {
  const field = query<HTMLInputElement>(root, selector);
  field.value = value;
}

export function pressKey(target: HTMLElement, key: string): void {
  target.dispatchEvent(new KeyboardEvent("keydown", { key, bubbles: true }));
}

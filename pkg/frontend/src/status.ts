/** Per-screen status line: busy text, errors, and a retry control. */

import { el, replaceChildrenOf } from "./dom.js";

export class StatusLine {
  readonly node: HTMLElement;

  constructor() {
    this.node = el("div", { class: "status" });
  }

  idle(): void {
    replaceChildrenOf(this.node);
  }

  busy(message: string): void {
    replaceChildrenOf(this.node, el("span", { class: "busy" }, message));
  }

  info(message: string): void {
    replaceChildrenOf(this.node, el("span", { class: "info" }, message));
  }

  error(message: string, retry?: () => void): void {
    replaceChildrenOf(
      this.node,
      el("span", { class: "error" }, `error: ${message}`),
      retry
        ? el("button", { class: "retry", onclick: () => retry() }, "Retry")
        : null,
    );
  }
}

/**
 * Run an async action behind a status line. Failures render the error with
 * a Retry button that runs the same action again.
 */
export async function runTask(
  status: StatusLine, label: string, action: () => Promise<void>,
): Promise<void> {
  status.busy(label);
  try {
    await action();
    status.idle();
  } catch (exc) {
    const message = exc instanceof Error ? exc.message : String(exc);
    status.error(message, () => void runTask(status, label, action));
  }
}

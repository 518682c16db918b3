/**
 * Validate screen: sample adjudication, keyboard-first. The editor draws
 * (or resumes) a method's sample and judges it link by link; every verdict
 * is persisted immediately, so a session can stop and resume anywhere.
 *
 * Keys: c correct, i incorrect, j next link, k previous link.
 */

import type { AppContext } from "../context.js";
import { el, fmtReliability, replaceChildrenOf } from "../dom.js";
import { StatusLine, runTask } from "../status.js";
import { CLASS_METHODS } from "../types.js";
import type { SamplePayload } from "../types.js";

function firstUnjudged(sample: SamplePayload, from = 0): number {
  for (let i = from; i < sample.links.length; i += 1) {
    if (sample.links[i].verdict === null) {
      return i;
    }
  }
  for (let i = 0; i < from; i += 1) {
    if (sample.links[i].verdict === null) {
      return i;
    }
  }
  return -1;
}

export function renderValidateScreen(ctx: AppContext): HTMLElement {
  const status = new StatusLine();
  const panel = el("div", { class: "sample-panel" });

  let sample: SamplePayload | null = null;
  let cursor = 0;

  const methodSelect = el("select", { "data-role": "method" });
  for (const method of CLASS_METHODS) {
    methodSelect.append(el("option", { value: method }, method));
  }
  const sizeInput = el("input", {
    "data-role": "size", type: "number", placeholder: "default",
  });
  const seedInput = el("input", {
    "data-role": "seed", type: "number", value: "0",
  });

  function linkCard(): HTMLElement {
    if (sample === null || sample.links.length === 0) {
      return el("p", { class: "muted" }, "empty sample");
    }
    const row = sample.links[cursor];
    const fields: [string, string][] = [
      ["word", `${row.word.lemma} (${row.word.language}, ${row.word.pos})`],
      ["pivot word", row.pivot_word ? row.pivot_word.lemma : "-"],
      ["synset", `${row.synset.key} (${row.synset.pos})`],
      ["gloss", row.synset.gloss || "-"],
      ["status", row.status],
      ["verdict", row.verdict ?? "unjudged"],
    ];
    const list = el("dl", { class: "link-card", "data-link": row.id });
    list.append(el("dt", {}, "link"), el("dd", { class: "mono" }, row.id));
    for (const [term, value] of fields) {
      list.append(el("dt", {}, term), el("dd", {}, value));
    }
    if (row.witnesses.length > 0) {
      list.append(
        el("dt", {}, "witnesses"),
        el("dd", {}, row.witnesses.join(", ")),
      );
    }
    return list;
  }

  function promoteSection(): HTMLElement {
    const threshold = el("input", {
      "data-role": "threshold", type: "number", step: "0.1", value: "85.0",
    });
    const outcome = el("div", { "data-role": "promote-outcome" });
    return el(
      "div", { class: "promote" },
      el("label", {}, "threshold ", threshold),
      el("button", {
        "data-role": "promote",
        onclick: () => {
          void runTask(status, "promoting", async () => {
            const result = await ctx.client.promote(
              ctx.getActor(), Number(threshold.value));
            replaceChildrenOf(
              outcome,
              el("p", {},
                `promoted: ${result.promoted.join(", ") || "-"}`),
              el("p", {},
                `rejected: ${result.rejected.join(", ") || "-"}`),
            );
          });
        },
      }, "Promote"),
      outcome,
    );
  }

  function renderPanel(): void {
    if (sample === null) {
      replaceChildrenOf(panel,
        el("p", { class: "muted" }, "draw or resume a sample to start judging"));
      return;
    }
    const header = el(
      "div", { class: "sample-head" },
      el("strong", {}, sample.method),
      el("span", { "data-role": "progress" },
        `${sample.done}/${sample.size} judged`),
      el("span", { class: "muted" }, `seed ${sample.seed}`),
      sample.confidence !== undefined
        ? el("span", { class: "confidence", "data-role": "confidence" },
            `confidence: ${fmtReliability(sample.confidence)}`)
        : null,
    );
    const position = sample.links.length > 0
      ? el("div", { class: "muted" },
          `link ${cursor + 1} of ${sample.links.length}`)
      : null;
    const keys = el("div", { class: "muted keys" },
      "keys: c correct, i incorrect, j next, k previous");
    const buttons = el(
      "div", { class: "verdict-buttons" },
      el("button", { "data-role": "correct", onclick: () => judge("correct") },
        "Correct (c)"),
      el("button", { "data-role": "incorrect", onclick: () => judge("incorrect") },
        "Incorrect (i)"),
      el("button", { "data-role": "prev", onclick: () => move(-1) }, "Prev (k)"),
      el("button", { "data-role": "next", onclick: () => move(1) }, "Next (j)"),
    );
    replaceChildrenOf(
      panel, header, position, linkCard(), buttons, keys,
      sample.confidence !== undefined ? promoteSection() : null,
    );
  }

  function move(step: number): void {
    if (sample === null || sample.links.length === 0) {
      return;
    }
    cursor = Math.min(Math.max(cursor + step, 0), sample.links.length - 1);
    renderPanel();
  }

  function judge(verdict: "correct" | "incorrect"): void {
    if (sample === null || sample.links.length === 0) {
      return;
    }
    const current = sample;
    const row = current.links[cursor];
    void runTask(status, `judging ${row.id}`, async () => {
      const result = await ctx.client.verdict(ctx.getActor(), row.id, verdict);
      row.verdict = verdict;
      current.done = result.done;
      if (result.confidence !== undefined) {
        current.confidence = result.confidence;
      }
      const next = firstUnjudged(current, cursor + 1);
      if (next >= 0) {
        cursor = next;
      }
      renderPanel();
    });
  }

  function adopt(payload: SamplePayload): void {
    sample = payload;
    const start = firstUnjudged(payload);
    cursor = start >= 0 ? start : 0;
    renderPanel();
  }

  const draw = () => {
    const size = sizeInput.value === "" ? undefined : Number(sizeInput.value);
    void runTask(status, "drawing sample", async () => {
      adopt(await ctx.client.drawSample(
        ctx.getActor(), methodSelect.value, Number(seedInput.value), size));
    });
  };

  const resume = () => {
    void runTask(status, "fetching sample", async () => {
      adopt(await ctx.client.fetchSample(ctx.getActor(), methodSelect.value));
    });
  };

  const root = el(
    "section", { class: "screen validate", tabindex: "0" },
    el("h2", {}, "Validate"),
    el("div", { class: "controls" },
      el("label", {}, "method ", methodSelect),
      el("label", {}, "size ", sizeInput),
      el("label", {}, "seed ", seedInput),
      el("button", { "data-role": "draw", onclick: draw }, "Draw sample"),
      el("button", { "data-role": "resume", onclick: resume }, "Resume"),
    ),
    status.node,
    panel,
  );

  root.addEventListener("keydown", (event) => {
    const target = event.target as HTMLElement | null;
    const tag = target?.tagName ?? "";
    if (tag === "INPUT" || tag === "TEXTAREA" || tag === "SELECT") {
      return; // typing in a field must not record verdicts
    }
    switch (event.key) {
      case "c":
        judge("correct");
        break;
      case "i":
        judge("incorrect");
        break;
      case "j":
        move(1);
        break;
      case "k":
        move(-1);
        break;
      default:
        return;
    }
    event.preventDefault();
  });

  renderPanel();
  return root;
}

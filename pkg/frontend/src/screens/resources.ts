/** Resources screen: verbatim lookups in the configured text dictionaries. */

import type { AppContext } from "../context.js";
import { el, replaceChildrenOf } from "../dom.js";
import { StatusLine, runTask } from "../status.js";

export function renderResourcesScreen(ctx: AppContext): HTMLElement {
  const status = new StatusLine();
  const output = el("div", { class: "resource-output" });
  const idInput = el("input", {
    "data-role": "resource-id", placeholder: "resource id",
  });
  const headwordInput = el("input", {
    "data-role": "headword", placeholder: "headword",
  });

  const lookup = () => {
    const resourceId = idInput.value.trim();
    const headword = headwordInput.value.trim();
    if (!resourceId || !headword) {
      status.error("enter a resource id and a headword");
      return;
    }
    void runTask(status, "looking up", async () => {
      const payload = await ctx.client.resource(resourceId, headword);
      replaceChildrenOf(
        output,
        el("h3", {}, `${payload.resource}: ${payload.headword}`),
        payload.entries.length > 0
          ? el("pre", { class: "entries" }, payload.entries.join("\n"))
          : el("p", { class: "muted" }, "no entries"),
      );
    });
  };

  headwordInput.addEventListener("keydown", (event) => {
    if (event.key === "Enter") {
      lookup();
    }
  });

  return el(
    "section", { class: "screen resources" },
    el("h2", {}, "Resources"),
    el("div", { class: "controls" },
      el("label", {}, "resource ", idInput),
      el("label", {}, "headword ", headwordInput),
      el("button", { "data-role": "lookup", onclick: lookup }, "Look up"),
    ),
    status.node,
    output,
  );
}

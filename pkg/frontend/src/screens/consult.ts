/**
 * Consult screen: hierarchy browsing. The first query fetches depth 1;
 * every deeper level is fetched on demand when a node is expanded, so
 * payloads stay small no matter how deep the hierarchy goes.
 */

import type { AppContext } from "../context.js";
import { el, fmtReliability, replaceChildrenOf } from "../dom.js";
import { StatusLine, runTask } from "../status.js";
import { RELATION_KINDS } from "../types.js";
import type { PathNode } from "../types.js";

export function literalsText(node: PathNode): string {
  const parts: string[] = [];
  for (const lang of Object.keys(node.literals).sort()) {
    const lits = node.literals[lang]
      .map((lit) => lit.reliability === null
        ? lit.lemma
        : `${lit.lemma} (${fmtReliability(lit.reliability)})`)
      .join(", ");
    parts.push(`${lang}: ${lits}`);
  }
  return parts.length > 0 ? parts.join(" | ") : "(no literals)";
}

export function renderConsultScreen(ctx: AppContext): HTMLElement {
  const status = new StatusLine();
  const tree = el("div", { class: "tree" });

  const langSelect = el("select", { "data-role": "lang" });
  for (const lang of ctx.getLanguages().languages) {
    langSelect.append(el("option", { value: lang.code }, lang.code));
  }
  const startInput = el("input", {
    "data-role": "start",
    placeholder: "word, word#N, or synset key",
  });
  const relationSelect = el("select", { "data-role": "relation" });
  for (const kind of RELATION_KINDS) {
    relationSelect.append(el("option", { value: kind }, kind));
  }

  function renderNode(node: PathNode): HTMLElement {
    const children = el("div", { class: "children" });
    const expand = el("button", { class: "expand", title: "expand" }, "+");
    let expanded = false;
    let fetched = false;

    const graft = (kids: PathNode[]) => {
      fetched = true;
      if (kids.length === 0) {
        expand.textContent = "·";
        expand.disabled = true;
        return;
      }
      replaceChildrenOf(children, ...kids.map(renderNode));
      expanded = true;
      expand.textContent = "-";
    };

    if (node.children.length > 0) {
      graft(node.children);
    }

    expand.addEventListener("click", () => {
      if (!fetched) {
        void runTask(status, `expanding ${node.synset}`, async () => {
          const payload = await ctx.client.consult(
            langSelect.value, node.synset, relationSelect.value, 1,
          );
          graft(payload.roots.length > 0 ? payload.roots[0].children : []);
        });
        return;
      }
      expanded = !expanded;
      children.style.display = expanded ? "" : "none";
      expand.textContent = expanded ? "-" : "+";
    });

    return el(
      "div", { class: "node", "data-key": node.synset },
      el("div", { class: "node-line" },
        expand,
        el("a", {
          class: "key",
          href: "#",
          onclick: ((event: Event) => {
            event.preventDefault();
            ctx.gotoEdit(node.synset);
          }) as EventListener,
        }, node.synset),
        el("span", { class: "pos" }, node.pos),
        el("span", { class: "literals" }, literalsText(node)),
        node.gloss ? el("span", { class: "gloss" }, node.gloss) : null,
      ),
      children,
    );
  }

  const consult = () => {
    const start = startInput.value.trim();
    if (!start) {
      status.error("enter a word or synset key");
      return;
    }
    void runTask(status, "consulting", async () => {
      const payload = await ctx.client.consult(
        langSelect.value, start, relationSelect.value, 1,
      );
      replaceChildrenOf(tree, ...payload.roots.map(renderNode));
      if (payload.roots.length === 0) {
        replaceChildrenOf(tree, el("p", { class: "muted" }, "no results"));
      }
    });
  };

  startInput.addEventListener("keydown", (event) => {
    if (event.key === "Enter") {
      consult();
    }
  });

  return el(
    "section", { class: "screen consult" },
    el("h2", {}, "Consult"),
    el("div", { class: "controls" },
      el("label", {}, "language ", langSelect),
      el("label", {}, "start ", startInput),
      el("label", {}, "relation ", relationSelect),
      el("button", { "data-role": "consult", onclick: consult }, "Consult"),
    ),
    status.node,
    tree,
  );
}

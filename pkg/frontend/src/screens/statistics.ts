/**
 * Statistics screen: the per-method precision report and the edit history.
 * History is listed in log order (newest last), matching the API.
 */

import type { AppContext } from "../context.js";
import { el, fmtReliability, replaceChildrenOf } from "../dom.js";
import { StatusLine, runTask } from "../status.js";

export function renderStatisticsScreen(ctx: AppContext): HTMLElement {
  const status = new StatusLine();
  const reportBox = el("div", { class: "report" });
  const historyBox = el("div", { class: "history" });

  const loadReport = () => {
    void runTask(status, "loading report", async () => {
      const payload = await ctx.client.report();
      const body = el("tbody");
      for (const row of payload.rows) {
        body.append(el("tr", { "data-method": row.method },
          el("td", {}, row.method),
          el("td", { class: "num" }, String(row.links)),
          el("td", { class: "num" }, String(row.synsets)),
          el("td", { class: "num" }, String(row.words)),
          el("td", { class: "num", "data-role": "confidence" },
            fmtReliability(row.confidence)),
        ));
      }
      replaceChildrenOf(
        reportBox,
        el("h3", {}, "Class method precision"),
        el("table", { class: "grid" },
          el("thead", {}, el("tr", {},
            el("th", {}, "Criteria"), el("th", {}, "#links"),
            el("th", {}, "#synsets"), el("th", {}, "#words"),
            el("th", {}, "%"))),
          body,
        ),
      );
    });
  };

  const actorFilter = el("input", {
    "data-role": "actor-filter", placeholder: "any actor",
  });
  const limitInput = el("input", {
    "data-role": "history-limit", type: "number", value: "50",
  });

  const loadHistory = () => {
    void runTask(status, "loading history", async () => {
      const payload = await ctx.client.history({
        actor: actorFilter.value.trim() || undefined,
        limit: Number(limitInput.value) || undefined,
      });
      const body = el("tbody");
      for (const record of payload.records) {
        body.append(el("tr", {},
          el("td", { class: "num" }, String(record.seq)),
          el("td", { class: "mono" }, record.timestamp),
          el("td", {}, record.actor),
          el("td", {}, record.action),
          el("td", { class: "mono" }, record.subject),
        ));
      }
      replaceChildrenOf(
        historyBox,
        el("h3", {}, "Edit history"),
        el("table", { class: "grid" },
          el("thead", {}, el("tr", {},
            el("th", {}, "seq"), el("th", {}, "timestamp"),
            el("th", {}, "actor"), el("th", {}, "action"),
            el("th", {}, "subject"))),
          body,
        ),
        el("p", { class: "muted" },
          `showing ${payload.records.length} of ${payload.total} records`),
      );
    });
  };

  const node = el(
    "section", { class: "screen statistics" },
    el("h2", {}, "Statistics"),
    el("div", { class: "controls" },
      el("button", { "data-role": "refresh-report", onclick: loadReport },
        "Refresh report"),
      el("label", {}, "actor ", actorFilter),
      el("label", {}, "limit ", limitInput),
      el("button", { "data-role": "refresh-history", onclick: loadHistory },
        "Load history"),
    ),
    status.node,
    reportBox,
    historyBox,
  );

  loadReport();
  return node;
}

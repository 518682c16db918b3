/**
 * Console shell: header with the editor's name, one tab per screen, and
 * the screen container. Screens are created on first visit and kept
 * alive afterwards, so an adjudication session survives a detour through
 * the statistics tab.
 */

import { ApiClient } from "./api.js";
import type { FetchFn } from "./api.js";
import type { AppContext } from "./context.js";
import { el, replaceChildrenOf } from "./dom.js";
import { renderConsultScreen } from "./screens/consult.js";
import { renderEditScreen } from "./screens/edit.js";
import type { EditScreen } from "./screens/edit.js";
import { renderResourcesScreen } from "./screens/resources.js";
import { renderStatisticsScreen } from "./screens/statistics.js";
import { renderValidateScreen } from "./screens/validate.js";
import type { LanguagesPayload } from "./types.js";

export type ScreenName =
  | "consult" | "edit" | "validate" | "resources" | "statistics";

const SCREEN_ORDER: ScreenName[] = [
  "consult", "edit", "validate", "resources", "statistics",
];

const SCREEN_LABELS: Record<ScreenName, string> = {
  consult: "Consult",
  edit: "Edit",
  validate: "Validate",
  resources: "Resources",
  statistics: "Statistics",
};

export interface ConsoleOptions {
  /** Base URL of the wnforge service; same origin when omitted. */
  apiBase?: string;
  fetchFn?: FetchFn;
  defaultActor?: string;
}

export interface ConsoleHandle {
  root: HTMLElement;
  ctx: AppContext;
  show(name: ScreenName): void;
  active(): ScreenName;
}

export async function initConsole(
  mount: HTMLElement, opts: ConsoleOptions = {},
): Promise<ConsoleHandle> {
  const client = new ApiClient(opts.apiBase ?? "", opts.fetchFn);
  const languages: LanguagesPayload = await client.languages();

  const actorInput = el("input", {
    "data-role": "actor",
    value: opts.defaultActor ?? "console",
    title: "recorded as the author of every edit you make",
  });

  const ctx: AppContext = {
    client,
    getActor: () => actorInput.value.trim(),
    getLanguages: () => languages,
    pivot: () => {
      const pivot = languages.languages.find((lang) => lang.pivot);
      return pivot ? pivot.code : "";
    },
    gotoEdit: (key: string) => {
      show("edit");
      editScreen.load(key);
    },
  };

  const container = el("main", { class: "screen-container" });
  const tabs = new Map<ScreenName, HTMLButtonElement>();
  const cache = new Map<ScreenName, HTMLElement>();
  let current: ScreenName = "consult";

  const editScreen: EditScreen = renderEditScreen(ctx);
  cache.set("edit", editScreen.node);

  function screenFor(name: ScreenName): HTMLElement {
    const cached = cache.get(name);
    if (cached) {
      return cached;
    }
    let node: HTMLElement;
    switch (name) {
      case "consult":
        node = renderConsultScreen(ctx);
        break;
      case "validate":
        node = renderValidateScreen(ctx);
        break;
      case "resources":
        node = renderResourcesScreen(ctx);
        break;
      default:
        node = renderStatisticsScreen(ctx);
        break;
    }
    cache.set(name, node);
    return node;
  }

  function show(name: ScreenName): void {
    current = name;
    for (const [tabName, button] of tabs) {
      button.classList.toggle("active", tabName === name);
    }
    replaceChildrenOf(container, screenFor(name));
  }

  const nav = el("nav", { class: "tabs" });
  for (const name of SCREEN_ORDER) {
    const button = el("button", {
      "data-screen": name,
      onclick: () => show(name),
    }, SCREEN_LABELS[name]);
    tabs.set(name, button);
    nav.append(button);
  }

  const langSummary = languages.languages
    .map((lang) => (lang.pivot ? `${lang.code} (pivot)` : lang.code))
    .join(", ");

  replaceChildrenOf(
    mount,
    el("header", { class: "top" },
      el("h1", {}, "wnforge console"),
      el("span", { class: "muted", "data-role": "languages" },
        `${langSummary} · policy: ${languages.policy}`),
      el("label", { class: "actor" }, "editor ", actorInput),
    ),
    nav,
    container,
  );
  show("consult");

  return { root: mount, ctx, show, active: () => current };
}

/**
 * Edit screen: gloss overrides, word renames, Levin class assignment, and
 * individual link acceptance. Every save is optimistic: it sends the
 * version the editor last saw, and a 409 renders a reload-and-retry prompt
 * showing both versions instead of overwriting.
 */

import { ConflictError } from "../api.js";
import type { AppContext } from "../context.js";
import { el, fmtReliability, replaceChildrenOf } from "../dom.js";
import { StatusLine, runTask } from "../status.js";
import { PARTS_OF_SPEECH } from "../types.js";
import type { SynsetPayload } from "../types.js";

function conflictPrompt(
  conflict: ConflictError, yours: number, retry: (current: number) => void,
): HTMLElement {
  const current = conflict.conflict.current_version;
  return el(
    "div", { class: "conflict" },
    el("p", {},
      `edit conflict on ${conflict.conflict.entity}: `
      + `your version ${yours}, current version ${current}`),
    el("button", {
      class: "retry",
      onclick: () => retry(current),
    }, "Reload and retry"),
  );
}

export interface EditScreen {
  node: HTMLElement;
  load(key: string): void;
}

export function renderEditScreen(ctx: AppContext): EditScreen {
  const status = new StatusLine();
  const panel = el("div", { class: "synset-panel" });
  const keyInput = el("input", {
    "data-role": "synset-key", placeholder: "synset key",
  });

  function glossBlock(synset: SynsetPayload, lang: string): HTMLElement {
    const isPivot = lang === ctx.pivot();
    let version = synset.gloss_versions[lang] ?? 0;
    const text = el("textarea", {
      "data-role": `gloss-${lang}`,
      disabled: isPivot,
    }, synset.glosses[lang] ?? "");
    const note = el("div", { class: "block-note" });
    const save = el("button", {
      "data-role": `save-gloss-${lang}`,
      disabled: isPivot,
    }, "Save gloss");

    const doSave = (expected: number) => {
      void runTask(status, `saving ${lang} gloss`, async () => {
        try {
          const result = await ctx.client.editGloss(
            ctx.getActor(), lang, synset.key, expected, text.value);
          version = result.version;
          replaceChildrenOf(note,
            el("span", { class: "info" }, `saved (version ${result.version})`));
        } catch (exc) {
          if (exc instanceof ConflictError) {
            replaceChildrenOf(note, conflictPrompt(exc, expected, doSave));
            return;
          }
          throw exc;
        }
      });
    };
    save.addEventListener("click", () => doSave(version));

    if (isPivot) {
      replaceChildrenOf(note, el("span", { class: "muted" },
        "pivot-language glosses are read-only"));
    }
    return el(
      "div", { class: `gloss-block${isPivot ? " pivot" : ""}`, "data-lang": lang },
      el("h4", {}, `${lang} gloss${isPivot ? " (pivot)" : ""}`),
      text, el("div", { class: "block-actions" }, save), note,
    );
  }

  function sensesTable(synset: SynsetPayload): HTMLElement {
    const rowsData = Object.entries(synset.senses).sort();
    if (rowsData.length === 0) {
      return el("p", { class: "muted" }, "no senses attached");
    }
    const body = el("tbody");
    for (const [lang, rows] of rowsData) {
      for (const row of rows) {
        body.append(el("tr", {},
          el("td", {}, lang),
          el("td", {}, row.lemma),
          el("td", {}, row.method),
          el("td", {}, fmtReliability(row.reliability)),
          el("td", {}, row.status),
          el("td", {}, el("button", {
            class: "small",
            onclick: () => prefillWordForm(lang, synset.pos, row.lemma),
          }, "rename")),
        ));
      }
    }
    return el("table", { class: "grid" },
      el("thead", {}, el("tr", {},
        el("th", {}, "lang"), el("th", {}, "lemma"), el("th", {}, "method"),
        el("th", {}, "reliability"), el("th", {}, "status"), el("th", {}, ""))),
      body,
    );
  }

  function renderSynset(synset: SynsetPayload): void {
    const langs = ctx.getLanguages().languages.map((l) => l.code);
    replaceChildrenOf(
      panel,
      el("div", { class: "synset-head" },
        el("strong", {}, synset.key),
        el("span", { class: "pos" }, synset.pos),
        synset.base ? el("span", { class: "badge" }, "base concept") : null,
        synset.semantic_field
          ? el("span", { class: "muted" }, `field: ${synset.semantic_field}`)
          : null,
        el("span", { class: "muted" },
          `hyponyms: ${synset.direct_hyponyms} direct, `
          + `${synset.total_hyponyms} total`),
      ),
      el("div", { class: "relations muted" },
        synset.relations.length > 0
          ? "relations: " + synset.relations
              .map((rel) => `${rel.kind} → ${rel.target}`).join(", ")
          : "no outgoing relations"),
      el("div", { class: "gloss-blocks" },
        ...langs.map((lang) => glossBlock(synset, lang))),
      el("h3", {}, "Senses"),
      sensesTable(synset),
    );
  }

  const load = () => {
    const key = keyInput.value.trim();
    if (!key) {
      status.error("enter a synset key");
      return;
    }
    void runTask(status, `loading ${key}`, async () => {
      renderSynset(await ctx.client.synset(key));
    });
  };

  // -- word rename -----------------------------------------------------

  const wordLang = el("select", { "data-role": "word-lang" });
  const wordPos = el("select", { "data-role": "word-pos" });
  for (const pos of PARTS_OF_SPEECH) {
    wordPos.append(el("option", { value: pos }, pos));
  }
  const wordLemma = el("input", { "data-role": "word-lemma", placeholder: "lemma" });
  const wordNew = el("input", { "data-role": "word-new", placeholder: "new lemma" });
  const wordVersion = el("input", {
    "data-role": "word-version", type: "number", value: "0",
  });
  const wordNote = el("div", { class: "block-note" });

  function prefillWordForm(lang: string, pos: string, lemma: string): void {
    wordLang.value = lang;
    wordPos.value = pos;
    wordLemma.value = lemma;
    wordNew.value = "";
    wordVersion.value = "0";
    replaceChildrenOf(wordNote);
  }

  const renameWord = (expected: number) => {
    void runTask(status, "renaming word", async () => {
      try {
        const result = await ctx.client.editWord(
          ctx.getActor(), wordLang.value, wordPos.value,
          wordLemma.value.trim(), expected, wordNew.value.trim());
        wordVersion.value = String(result.version);
        replaceChildrenOf(wordNote,
          el("span", { class: "info" }, `renamed (version ${result.version})`));
      } catch (exc) {
        if (exc instanceof ConflictError) {
          replaceChildrenOf(wordNote, conflictPrompt(exc, expected, (current) => {
            wordVersion.value = String(current);
            renameWord(current);
          }));
          return;
        }
        throw exc;
      }
    });
  };

  // -- levin classes -----------------------------------------------------

  const levinLang = el("select", { "data-role": "levin-lang" });
  const levinLemma = el("input", { "data-role": "levin-lemma", placeholder: "verb lemma" });
  const levinClasses = el("input", {
    "data-role": "levin-classes", placeholder: "classes, comma separated",
  });
  const levinVersion = el("input", {
    "data-role": "levin-version", type: "number", value: "0",
  });
  const levinNote = el("div", { class: "block-note" });

  const saveLevin = (expected: number) => {
    const classes = levinClasses.value
      .split(",").map((c) => c.trim()).filter((c) => c.length > 0);
    void runTask(status, "saving Levin classes", async () => {
      try {
        const result = await ctx.client.editLevin(
          ctx.getActor(), levinLang.value, levinLemma.value.trim(),
          expected, classes);
        levinVersion.value = String(result.version);
        replaceChildrenOf(levinNote,
          el("span", { class: "info" }, `saved (version ${result.version})`));
      } catch (exc) {
        if (exc instanceof ConflictError) {
          replaceChildrenOf(levinNote, conflictPrompt(exc, expected, (current) => {
            levinVersion.value = String(current);
            saveLevin(current);
          }));
          return;
        }
        throw exc;
      }
    });
  };

  // -- link status -------------------------------------------------------

  const linkId = el("input", { "data-role": "link-id", placeholder: "link id" });
  const linkStatus = el("select", { "data-role": "link-status" },
    el("option", { value: "accepted" }, "accepted"),
    el("option", { value: "rejected" }, "rejected"));
  const linkVersion = el("input", {
    "data-role": "link-version", type: "number", value: "0",
  });
  const linkNote = el("div", { class: "block-note" });

  const applyLink = (expected: number) => {
    void runTask(status, "updating link", async () => {
      try {
        const result = await ctx.client.setLinkStatus(
          ctx.getActor(), linkId.value.trim(), expected,
          linkStatus.value as "accepted" | "rejected");
        linkVersion.value = String(result.version);
        replaceChildrenOf(linkNote,
          el("span", { class: "info" },
            `${result.action} (version ${result.version})`));
      } catch (exc) {
        if (exc instanceof ConflictError) {
          replaceChildrenOf(linkNote, conflictPrompt(exc, expected, (current) => {
            linkVersion.value = String(current);
            applyLink(current);
          }));
          return;
        }
        throw exc;
      }
    });
  };

  for (const lang of ctx.getLanguages().languages) {
    wordLang.append(el("option", { value: lang.code }, lang.code));
    levinLang.append(el("option", { value: lang.code }, lang.code));
  }

  const node = el(
    "section", { class: "screen edit" },
    el("h2", {}, "Edit"),
    el("div", { class: "controls" },
      el("label", {}, "synset ", keyInput),
      el("button", { "data-role": "load-synset", onclick: load }, "Load"),
    ),
    status.node,
    panel,
    el("h3", {}, "Rename word"),
    el("div", { class: "controls" },
      el("label", {}, "language ", wordLang),
      el("label", {}, "pos ", wordPos),
      el("label", {}, "lemma ", wordLemma),
      el("label", {}, "new lemma ", wordNew),
      el("label", {}, "version ", wordVersion),
      el("button", {
        "data-role": "rename-word",
        onclick: () => renameWord(Number(wordVersion.value)),
      }, "Rename"),
    ),
    wordNote,
    el("h3", {}, "Levin classes"),
    el("div", { class: "controls" },
      el("label", {}, "language ", levinLang),
      el("label", {}, "lemma ", levinLemma),
      el("label", {}, "classes ", levinClasses),
      el("label", {}, "version ", levinVersion),
      el("button", {
        "data-role": "save-levin",
        onclick: () => saveLevin(Number(levinVersion.value)),
      }, "Save classes"),
    ),
    levinNote,
    el("h3", {}, "Link status"),
    el("div", { class: "controls" },
      el("label", {}, "link id ", linkId),
      el("label", {}, "status ", linkStatus),
      el("label", {}, "version ", linkVersion),
      el("button", {
        "data-role": "apply-link",
        onclick: () => applyLink(Number(linkVersion.value)),
      }, "Apply"),
    ),
    linkNote,
  );

  keyInput.addEventListener("keydown", (event) => {
    if (event.key === "Enter") {
      load();
    }
  });

  return {
    node,
    load(key: string): void {
      keyInput.value = key;
      load();
    },
  };
}

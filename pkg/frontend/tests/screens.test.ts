/**
 * Screen behavior against a recorded fake service: rendering, keyboard
 * adjudication, pivot immutability in the editor, and the
 * reload-and-retry conflict flow.
 */

import { afterEach, describe, expect, it } from "vitest";

import { initConsole } from "../src/app.js";
import type { ConsoleHandle } from "../src/app.js";
import type { RecordedCall, FakeReply } from "./util.js";
import { click, fakeFetch, pressKey, query, setValue, waitFor } from "./util.js";

const LANGUAGES = {
  languages: [
    { code: "ca", pivot: false },
    { code: "en", pivot: true },
  ],
  policy: "pivot",
};

const SYNSET = {
  key: "n-dog-1",
  pos: "noun",
  semantic_field: "animal",
  direct_hyponyms: 1,
  total_hyponyms: 2,
  base: false,
  glosses: { en: "a domesticated canid", ca: "el gos" },
  gloss_versions: { en: 0, ca: 2 },
  senses: {
    ca: [{ lemma: "gos", method: "mono1", reliability: 90.0,
           status: "accepted" }],
  },
  relations: [{ kind: "hypernymy", target: "n-animal-1" }],
};

function sampleLinks(method: string, count: number) {
  return Array.from({ length: count }, (_, i) => ({
    id: `${method}:w${i}:e${i}:n-w${i}-1`,
    method,
    word: { language: "ca", lemma: `w${i}`, pos: "noun" },
    pivot_word: { language: "en", lemma: `e${i}`, pos: "noun" },
    synset: { key: `n-w${i}-1`, pos: "noun", gloss: `thing ${i}` },
    witnesses: [],
    status: "candidate",
    verdict: null as "correct" | "incorrect" | null,
    version: 0,
  }));
}

function pathOf(call: RecordedCall): string {
  return new URL(call.url, "http://test").pathname;
}

function queryOf(call: RecordedCall): URLSearchParams {
  return new URL(call.url, "http://test").searchParams;
}

async function boot(
  dispatch: (call: RecordedCall) => FakeReply | undefined,
): Promise<{ handle: ConsoleHandle; mount: HTMLElement;
             calls: RecordedCall[] }> {
  const { fetchFn, calls } = fakeFetch((call) => {
    if (call.method === "GET" && pathOf(call) === "/api/languages") {
      return { json: LANGUAGES };
    }
    const reply = dispatch(call);
    if (reply === undefined) {
      throw new Error(`unexpected request ${call.method} ${call.url}`);
    }
    return reply;
  });
  const mount = document.createElement("div");
  document.body.append(mount);
  const handle = await initConsole(mount, {
    apiBase: "", fetchFn, defaultActor: "tester",
  });
  return { handle, mount, calls };
}

afterEach(() => {
  document.body.innerHTML = "";
});

describe("console shell", () => {
  it("renders the language summary and one tab per screen", async () => {
    const { mount } = await boot(() => undefined);
    const header = query(mount, "[data-role=languages]").textContent;
    expect(header).toContain("en (pivot)");
    expect(header).toContain("policy: pivot");
    const tabs = mount.querySelectorAll("nav.tabs button");
    expect([...tabs].map((tab) => tab.getAttribute("data-screen")))
      .toEqual(["consult", "edit", "validate", "resources", "statistics"]);
  });
});

describe("edit screen", () => {
  it("disables the pivot gloss control and explains why", async () => {
    const { handle, mount } = await boot((call) => {
      if (call.method === "GET" && pathOf(call) === "/api/synsets/n-dog-1") {
        return { json: SYNSET };
      }
      return undefined;
    });
    handle.show("edit");
    setValue(mount, "[data-role=synset-key]", "n-dog-1");
    click(mount, "[data-role=load-synset]");
    await waitFor(() => mount.querySelector("[data-role=gloss-en]") !== null);

    const pivotGloss = query<HTMLTextAreaElement>(mount, "[data-role=gloss-en]");
    expect(pivotGloss.disabled).toBe(true);
    expect(query<HTMLButtonElement>(mount, "[data-role=save-gloss-en]").disabled)
      .toBe(true);
    const pivotBlock = query(mount, ".gloss-block[data-lang=en]");
    expect(pivotBlock.textContent).toContain("read-only");

    const otherGloss = query<HTMLTextAreaElement>(mount, "[data-role=gloss-ca]");
    expect(otherGloss.disabled).toBe(false);
    expect(otherGloss.value).toBe("el gos");
    expect(query<HTMLButtonElement>(mount, "[data-role=save-gloss-ca]").disabled)
      .toBe(false);
  });

  it("saves a gloss with the version it loaded", async () => {
    const { handle, mount, calls } = await boot((call) => {
      if (call.method === "GET" && pathOf(call) === "/api/synsets/n-dog-1") {
        return { json: SYNSET };
      }
      if (call.method === "PUT"
          && pathOf(call) === "/api/edits/gloss:ca:n-dog-1") {
        return { json: { seq: 7, entity: "gloss:ca:n-dog-1",
                         action: "edit_gloss", version: 3 } };
      }
      return undefined;
    });
    handle.show("edit");
    setValue(mount, "[data-role=synset-key]", "n-dog-1");
    click(mount, "[data-role=load-synset]");
    await waitFor(() => mount.querySelector("[data-role=gloss-ca]") !== null);

    query<HTMLTextAreaElement>(mount, "[data-role=gloss-ca]").value = "el ca";
    click(mount, "[data-role=save-gloss-ca]");
    await waitFor(() => {
      const block = mount.querySelector(".gloss-block[data-lang=ca]");
      return block !== null && block.textContent!.includes("saved (version 3)");
    });

    const put = calls.find((call) => call.method === "PUT")!;
    expect(put.body).toEqual({ expected_version: 2, text: "el ca" });
    expect(put.headers["X-Actor"]).toBe("tester");
  });

  it("surfaces 409 as a reload-and-retry prompt with both versions", async () => {
    let puts = 0;
    const { handle, mount, calls } = await boot((call) => {
      if (call.method === "GET" && pathOf(call) === "/api/synsets/n-dog-1") {
        return { json: SYNSET };
      }
      if (call.method === "PUT"
          && pathOf(call) === "/api/edits/gloss:ca:n-dog-1") {
        puts += 1;
        if (puts === 1) {
          return {
            status: 409,
            json: { detail: "version conflict",
                    entity: "gloss:ca:n-dog-1", current_version: 5 },
          };
        }
        return { json: { seq: 8, entity: "gloss:ca:n-dog-1",
                         action: "edit_gloss", version: 6 } };
      }
      return undefined;
    });
    handle.show("edit");
    setValue(mount, "[data-role=synset-key]", "n-dog-1");
    click(mount, "[data-role=load-synset]");
    await waitFor(() => mount.querySelector("[data-role=gloss-ca]") !== null);

    click(mount, "[data-role=save-gloss-ca]");
    await waitFor(() => mount.querySelector(".conflict") !== null);
    const prompt = query(mount, ".conflict");
    expect(prompt.textContent).toContain("your version 2");
    expect(prompt.textContent).toContain("current version 5");

    click(mount, ".conflict button");
    await waitFor(() => {
      const block = mount.querySelector(".gloss-block[data-lang=ca]");
      return block !== null && block.textContent!.includes("saved (version 6)");
    });
    const retried = calls.filter((call) => call.method === "PUT");
    expect(retried).toHaveLength(2);
    expect((retried[1].body as { expected_version: number }).expected_version)
      .toBe(5);
  });
});

describe("validate screen", () => {
  function validationService() {
    const links = sampleLinks("mono1", 3);
    const verdicts = new Map<string, string>();
    return {
      links,
      verdicts,
      dispatch(call: RecordedCall): FakeReply | undefined {
        if (call.method === "POST"
            && pathOf(call) === "/api/validate/samples") {
          return {
            json: { method: "mono1", seed: 7, size: links.length,
                    done: verdicts.size, links },
          };
        }
        if (call.method === "POST"
            && pathOf(call) === "/api/validate/verdicts") {
          const body = call.body as { link: string; verdict: string };
          verdicts.set(body.link, body.verdict);
          const payload: Record<string, unknown> = {
            method: "mono1", link: body.link, verdict: body.verdict,
            done: verdicts.size, size: links.length,
          };
          if (verdicts.size === links.length) {
            payload.confidence = 66.7;
          }
          return { json: payload };
        }
        if (call.method === "POST" && pathOf(call) === "/api/promote") {
          return { json: { threshold: (call.body as { threshold: number })
                             .threshold,
                           promoted: ["mono1"], rejected: [] } };
        }
        return undefined;
      },
    };
  }

  async function drawnScreen() {
    const service = validationService();
    const booted = await boot(service.dispatch.bind(service));
    booted.handle.show("validate");
    const screen = query(booted.mount, "section.validate");
    setValue(booted.mount, "[data-role=seed]", "7");
    click(booted.mount, "[data-role=draw]");
    await waitFor(() =>
      booted.mount.querySelector("[data-role=progress]") !== null);
    return { ...booted, screen, service };
  }

  it("judges links with the c and i keys and auto-advances", async () => {
    const { mount, screen, service } = await drawnScreen();
    expect(query(mount, "[data-role=progress]").textContent)
      .toBe("0/3 judged");

    pressKey(screen, "c");
    await waitFor(() =>
      query(mount, "[data-role=progress]").textContent === "1/3 judged");
    expect(service.verdicts.get(service.links[0].id)).toBe("correct");
    expect(query(mount, ".link-card").getAttribute("data-link"))
      .toBe(service.links[1].id);

    pressKey(screen, "i");
    await waitFor(() =>
      query(mount, "[data-role=progress]").textContent === "2/3 judged");
    expect(service.verdicts.get(service.links[1].id)).toBe("incorrect");

    pressKey(screen, "c");
    await waitFor(() =>
      mount.querySelector("[data-role=confidence]") !== null);
    expect(query(mount, "[data-role=confidence]").textContent)
      .toBe("confidence: 66.7");
  });

  it("moves through the sample with j and k", async () => {
    const { mount, screen } = await drawnScreen();
    expect(query(mount, ".link-card").getAttribute("data-link"))
      .toContain("w0");
    pressKey(screen, "j");
    expect(query(mount, ".link-card").getAttribute("data-link"))
      .toContain("w1");
    pressKey(screen, "k");
    expect(query(mount, ".link-card").getAttribute("data-link"))
      .toContain("w0");
    pressKey(screen, "k");
    expect(query(mount, ".link-card").getAttribute("data-link"))
      .toContain("w0");
  });

  it("ignores verdict keys while typing in a field", async () => {
    const { mount, calls } = await drawnScreen();
    const before = calls.filter(
      (call) => pathOf(call) === "/api/validate/verdicts").length;
    pressKey(query(mount, "[data-role=seed]"), "c");
    await new Promise((resolve) => setTimeout(resolve, 30));
    const after = calls.filter(
      (call) => pathOf(call) === "/api/validate/verdicts").length;
    expect(after).toBe(before);
  });

  it("offers promotion once the sample is complete", async () => {
    const { mount, screen, calls } = await drawnScreen();
    for (const [i, key] of (["c", "i", "c"] as const).entries()) {
      pressKey(screen, key);
      await waitFor(() =>
        query(mount, "[data-role=progress]").textContent
          === `${i + 1}/3 judged`);
    }
    await waitFor(() => mount.querySelector("[data-role=promote]") !== null);

    click(mount, "[data-role=promote]");
    await waitFor(() =>
      mount.querySelector("[data-role=promote-outcome]")!.textContent!
        .includes("promoted: mono1"));
    const promote = calls.find((call) => pathOf(call) === "/api/promote")!;
    expect(promote.body).toEqual({ threshold: 85 });
    expect(promote.headers["X-Actor"]).toBe("tester");
  });
});

describe("consult screen", () => {
  function consultService() {
    return (call: RecordedCall): FakeReply | undefined => {
      if (call.method !== "GET" || pathOf(call) !== "/api/consult") {
        return undefined;
      }
      const params = queryOf(call);
      expect(params.get("depth")).toBe("1");
      const start = params.get("start");
      if (start === "gos") {
        return {
          json: {
            lang: "ca", start, relation: "hypernymy", depth: 1,
            roots: [{
              synset: "n-dog-1", pos: "noun", gloss: "a dog", depth: 0,
              literals: {
                ca: [{ lemma: "gos", reliability: 90.0 }],
                en: [{ lemma: "dog", reliability: null }],
              },
              children: [{
                synset: "n-animal-1", pos: "noun", gloss: "", depth: 1,
                literals: {}, children: [],
              }],
            }],
          },
        };
      }
      if (start === "n-animal-1") {
        return {
          json: {
            lang: "ca", start, relation: "hypernymy", depth: 1,
            roots: [{
              synset: "n-animal-1", pos: "noun", gloss: "", depth: 0,
              literals: {}, children: [{
                synset: "n-entity-1", pos: "noun", gloss: "", depth: 1,
                literals: {}, children: [],
              }],
            }],
          },
        };
      }
      if (start === "n-entity-1") {
        return {
          json: { lang: "ca", start, relation: "hypernymy", depth: 1,
                  roots: [{ synset: "n-entity-1", pos: "noun", gloss: "",
                            depth: 0, literals: {}, children: [] }] },
        };
      }
      return undefined;
    };
  }

  it("renders literals with reliabilities and expands lazily", async () => {
    const { handle, mount } = await boot(consultService());
    handle.show("consult");
    setValue(mount, "[data-role=start]", "gos");
    click(mount, "[data-role=consult]");
    await waitFor(() => mount.querySelector(".node") !== null);

    const root = query(mount, ".node[data-key=n-dog-1]");
    expect(root.querySelector(".literals")!.textContent)
      .toBe("ca: gos (90.0) | en: dog");

    const child = query(mount, ".node[data-key=n-animal-1]");
    expect(child.querySelector(".literals")!.textContent).toBe("(no literals)");

    (child.querySelector("button.expand") as HTMLButtonElement).click();
    await waitFor(() =>
      mount.querySelector(".node[data-key=n-entity-1]") !== null);

    const leaf = query(mount, ".node[data-key=n-entity-1]");
    const leafExpand = leaf.querySelector("button.expand") as HTMLButtonElement;
    leafExpand.click();
    await waitFor(() => leafExpand.disabled);
    expect(leafExpand.textContent).toBe("·");
  });

  it("navigates to the edit screen from a synset key", async () => {
    const { handle, mount } = await boot((call) => {
      const service = consultService()(call);
      if (service !== undefined) {
        return service;
      }
      if (call.method === "GET" && pathOf(call) === "/api/synsets/n-dog-1") {
        return { json: SYNSET };
      }
      return undefined;
    });
    handle.show("consult");
    setValue(mount, "[data-role=start]", "gos");
    click(mount, "[data-role=consult]");
    await waitFor(() => mount.querySelector(".node") !== null);

    (query(mount, ".node[data-key=n-dog-1] a.key")).click();
    expect(handle.active()).toBe("edit");
    await waitFor(() => mount.querySelector("[data-role=gloss-en]") !== null);
    expect(query<HTMLInputElement>(mount, "[data-role=synset-key]").value)
      .toBe("n-dog-1");
  });
});

describe("statistics screen", () => {
  it("formats confidences to one decimal and dashes the unsampled", async () => {
    const { handle, mount } = await boot((call) => {
      if (call.method === "GET"
          && pathOf(call) === "/api/report/class-methods") {
        return {
          json: { rows: [
            { method: "mono1", links: 12, synsets: 12, words: 12,
              confidence: 90 },
            { method: "poly4", links: 4, synsets: 4, words: 4,
              confidence: null },
          ] },
        };
      }
      return undefined;
    });
    handle.show("statistics");
    await waitFor(() =>
      mount.querySelector("tr[data-method=mono1]") !== null);
    expect(query(mount, "tr[data-method=mono1] [data-role=confidence]")
      .textContent).toBe("90.0");
    expect(query(mount, "tr[data-method=poly4] [data-role=confidence]")
      .textContent).toBe("-");
  });

  it("lists history newest-last, as the service returns it", async () => {
    const records = [
      { seq: 1, timestamp: "2026-08-14T00:00:00+00:00", actor: "maria",
        action: "import", subject: "kb:languages", before: null, after: {} },
      { seq: 2, timestamp: "2026-08-14T00:00:01+00:00", actor: "maria",
        action: "edit_gloss", subject: "gloss:ca:n-dog-1",
        before: null, after: {} },
    ];
    const { handle, mount } = await boot((call) => {
      if (call.method === "GET"
          && pathOf(call) === "/api/report/class-methods") {
        return { json: { rows: [] } };
      }
      if (call.method === "GET" && pathOf(call) === "/api/history") {
        expect(queryOf(call).get("limit")).toBe("50");
        return { json: { total: 2, offset: 0, limit: 50, records } };
      }
      return undefined;
    });
    handle.show("statistics");
    click(mount, "[data-role=refresh-history]");
    await waitFor(() => mount.querySelector(".history tbody tr") !== null);
    const rows = [...mount.querySelectorAll(".history tbody tr")];
    expect(rows.map((row) => row.firstChild!.textContent))
      .toEqual(["1", "2"]);
    expect(query(mount, ".history").textContent)
      .toContain("showing 2 of 2 records");
  });
});

describe("resources screen", () => {
  it("prints dictionary entries verbatim", async () => {
    const entries = [
      "gos\tm.\tmamifer domestic de la familia dels canids",
      "gos\tm.\tpersona menyspreable",
    ];
    const { handle, mount } = await boot((call) => {
      if (call.method === "GET"
          && pathOf(call) === "/api/resources/dec-ca/gos") {
        return { json: { resource: "dec-ca", headword: "gos", entries } };
      }
      return undefined;
    });
    handle.show("resources");
    setValue(mount, "[data-role=resource-id]", "dec-ca");
    setValue(mount, "[data-role=headword]", "gos");
    click(mount, "[data-role=lookup]");
    await waitFor(() => mount.querySelector("pre.entries") !== null);
    expect(query(mount, "pre.entries").textContent).toBe(entries.join("\n"));
  });

  it("surfaces unknown resources as an error with retry", async () => {
    const { handle, mount } = await boot((call) => {
      if (call.method === "GET"
          && pathOf(call).startsWith("/api/resources/")) {
        return { status: 404, json: { detail: "unknown resource 'nope'" } };
      }
      return undefined;
    });
    handle.show("resources");
    setValue(mount, "[data-role=resource-id]", "nope");
    setValue(mount, "[data-role=headword]", "gos");
    click(mount, "[data-role=lookup]");
    await waitFor(() =>
      mount.querySelector(".status .error") !== null);
    expect(query(mount, ".status .error").textContent)
      .toContain("unknown resource");
    expect(mount.querySelector(".status .retry")).not.toBeNull();
  });
});

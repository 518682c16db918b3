/**
 * API client. Every request the console makes is first built as a
 * RequestSpec by one of the builders in `requests`, then executed by
 * ApiClient.call. Keeping the full request inventory in one table is what
 * lets the contract test check each of them against the endpoint schema.
 */

import type {
  ConflictPayload,
  ConsultPayload,
  EditResult,
  GeneratedLinksPayload,
  GeneratedVerbsPayload,
  HistoryPayload,
  LanguagesPayload,
  PromotePayload,
  ReportPayload,
  ResourcePayload,
  SamplePayload,
  SynsetPayload,
  VerdictPayload,
} from "./types.js";

export type HttpMethod = "GET" | "POST" | "PUT";

export interface RequestSpec {
  method: HttpMethod;
  /** Path template exactly as published, e.g. "/api/synsets/{key}". */
  path: string;
  /** Values for the template placeholders, percent-encoded on substitution. */
  params?: Record<string, string>;
  query?: Record<string, string | number | undefined>;
  body?: Record<string, unknown>;
  /** Set on mutating requests; sent as the X-Actor header. */
  actor?: string;
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

export class ConflictError extends ApiError {
  constructor(readonly conflict: ConflictPayload) {
    super(409, conflict.detail);
  }
}

/**
 * Entity path for the edit endpoint. Colons separate the fixed components;
 * each variable component is percent-encoded so lemmas may contain
 * anything (including colons).
 */
export function entityPath(kind: "gloss" | "word" | "levin" | "link",
                           ...parts: string[]): string {
  return [kind, ...parts.map((p) => encodeURIComponent(p))].join(":");
}

export const requests = {
  languages(): RequestSpec {
    return { method: "GET", path: "/api/languages" };
  },

  synset(key: string): RequestSpec {
    return {
      method: "GET",
      path: "/api/synsets/{key}",
      params: { key },
    };
  },

  consult(lang: string, start: string, relation: string,
          depth: number): RequestSpec {
    return {
      method: "GET",
      path: "/api/consult",
      query: { lang, start, relation, depth },
    };
  },

  resource(resourceId: string, headword: string): RequestSpec {
    return {
      method: "GET",
      path: "/api/resources/{resource_id}/{headword}",
      params: { resource_id: resourceId, headword },
    };
  },

  report(): RequestSpec {
    return { method: "GET", path: "/api/report/class-methods" };
  },

  history(opts: { actor?: string; action?: string; offset?: number;
                  limit?: number } = {}): RequestSpec {
    return {
      method: "GET",
      path: "/api/history",
      query: {
        actor: opts.actor || undefined,
        action: opts.action || undefined,
        offset: opts.offset,
        limit: opts.limit,
      },
    };
  },

  generateLinks(actor: string, sourceLang: string,
                pairs: [string, string][],
                senses: [string, string][]): RequestSpec {
    return {
      method: "POST",
      path: "/api/links/generate",
      body: { source_lang: sourceLang, pairs, senses },
      actor,
    };
  },

  generateVerbs(actor: string, targetLang: string, verbsPath: string,
                sensesPath: string): RequestSpec {
    return {
      method: "POST",
      path: "/api/verbs/generate",
      body: {
        target_lang: targetLang,
        verbs_path: verbsPath,
        senses_path: sensesPath,
      },
      actor,
    };
  },

  drawSample(actor: string, method: string, seed: number,
             size?: number): RequestSpec {
    return {
      method: "POST",
      path: "/api/validate/samples",
      body: size === undefined ? { method, seed } : { method, seed, size },
      actor,
    };
  },

  /** Without a seed the endpoint returns the already-drawn sample. */
  fetchSample(actor: string, method: string): RequestSpec {
    return {
      method: "POST",
      path: "/api/validate/samples",
      body: { method },
      actor,
    };
  },

  verdict(actor: string, link: string,
          verdict: "correct" | "incorrect"): RequestSpec {
    return {
      method: "POST",
      path: "/api/validate/verdicts",
      body: { link, verdict },
      actor,
    };
  },

  promote(actor: string, threshold: number): RequestSpec {
    return {
      method: "POST",
      path: "/api/promote",
      body: { threshold },
      actor,
    };
  },

  editGloss(actor: string, lang: string, key: string,
            expectedVersion: number, text: string): RequestSpec {
    return {
      method: "PUT",
      path: "/api/edits/{entity}",
      params: { entity: entityPath("gloss", lang, key) },
      body: { expected_version: expectedVersion, text },
      actor,
    };
  },

  editWord(actor: string, lang: string, pos: string, lemma: string,
           expectedVersion: number, newLemma: string): RequestSpec {
    return {
      method: "PUT",
      path: "/api/edits/{entity}",
      params: { entity: entityPath("word", lang, pos, lemma) },
      body: { expected_version: expectedVersion, new_lemma: newLemma },
      actor,
    };
  },

  editLevin(actor: string, lang: string, lemma: string,
            expectedVersion: number, classes: string[]): RequestSpec {
    return {
      method: "PUT",
      path: "/api/edits/{entity}",
      params: { entity: entityPath("levin", lang, lemma) },
      body: { expected_version: expectedVersion, classes },
      actor,
    };
  },

  setLinkStatus(actor: string, linkId: string, expectedVersion: number,
                status: "accepted" | "rejected"): RequestSpec {
    return {
      method: "PUT",
      path: "/api/edits/{entity}",
      params: { entity: `link:${linkId}` },
      body: { expected_version: expectedVersion, status },
      actor,
    };
  },
};

/** Fill the path template from spec.params. */
export function resolvePath(spec: RequestSpec): string {
  return spec.path.replace(/\{(\w+)\}/g, (_, name: string) => {
    const value = spec.params?.[name];
    if (value === undefined) {
      throw new Error(`missing path parameter ${name}`);
    }
    // Entity paths carry their own per-component encoding; encoding the
    // whole value again would double-escape the separators' neighbors.
    return spec.path === "/api/edits/{entity}"
      ? value
      : encodeURIComponent(value);
  });
}

export function resolveUrl(baseUrl: string, spec: RequestSpec): string {
  let url = baseUrl + resolvePath(spec);
  const pairs: string[] = [];
  for (const [key, value] of Object.entries(spec.query ?? {})) {
    if (value !== undefined) {
      pairs.push(`${encodeURIComponent(key)}=${encodeURIComponent(String(value))}`);
    }
  }
  if (pairs.length > 0) {
    url += "?" + pairs.join("&");
  }
  return url;
}

export type FetchFn = (url: string, init: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchFn = (url, init) => fetch(url, init),
  ) {}

  async call<T>(spec: RequestSpec): Promise<T> {
    const headers: Record<string, string> = {};
    if (spec.body !== undefined) {
      headers["Content-Type"] = "application/json";
    }
    if (spec.actor !== undefined) {
      headers["X-Actor"] = spec.actor;
    }
    const response = await this.fetchFn(resolveUrl(this.baseUrl, spec), {
      method: spec.method,
      headers,
      body: spec.body === undefined ? undefined : JSON.stringify(spec.body),
    });
    if (response.status === 409) {
      throw new ConflictError((await response.json()) as ConflictPayload);
    }
    if (!response.ok) {
      let detail = `HTTP ${response.status}`;
      try {
        const payload = (await response.json()) as { detail?: unknown };
        if (payload.detail !== undefined) {
          detail = typeof payload.detail === "string"
            ? payload.detail
            : JSON.stringify(payload.detail);
        }
      } catch {
        // non-JSON error body; keep the status line
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  languages(): Promise<LanguagesPayload> {
    return this.call(requests.languages());
  }

  synset(key: string): Promise<SynsetPayload> {
    return this.call(requests.synset(key));
  }

  consult(lang: string, start: string, relation: string,
          depth: number): Promise<ConsultPayload> {
    return this.call(requests.consult(lang, start, relation, depth));
  }

  resource(resourceId: string, headword: string): Promise<ResourcePayload> {
    return this.call(requests.resource(resourceId, headword));
  }

  report(): Promise<ReportPayload> {
    return this.call(requests.report());
  }

  history(opts: { actor?: string; action?: string; offset?: number;
                  limit?: number } = {}): Promise<HistoryPayload> {
    return this.call(requests.history(opts));
  }

  generateLinks(actor: string, sourceLang: string, pairs: [string, string][],
                senses: [string, string][]): Promise<GeneratedLinksPayload> {
    return this.call(requests.generateLinks(actor, sourceLang, pairs, senses));
  }

  generateVerbs(actor: string, targetLang: string, verbsPath: string,
                sensesPath: string): Promise<GeneratedVerbsPayload> {
    return this.call(requests.generateVerbs(
      actor, targetLang, verbsPath, sensesPath));
  }

  drawSample(actor: string, method: string, seed: number,
             size?: number): Promise<SamplePayload> {
    return this.call(requests.drawSample(actor, method, seed, size));
  }

  fetchSample(actor: string, method: string): Promise<SamplePayload> {
    return this.call(requests.fetchSample(actor, method));
  }

  verdict(actor: string, link: string,
          verdict: "correct" | "incorrect"): Promise<VerdictPayload> {
    return this.call(requests.verdict(actor, link, verdict));
  }

  promote(actor: string, threshold: number): Promise<PromotePayload> {
    return this.call(requests.promote(actor, threshold));
  }

  editGloss(actor: string, lang: string, key: string, expectedVersion: number,
            text: string): Promise<EditResult> {
    return this.call(requests.editGloss(actor, lang, key, expectedVersion, text));
  }

  editWord(actor: string, lang: string, pos: string, lemma: string,
           expectedVersion: number, newLemma: string): Promise<EditResult> {
    return this.call(requests.editWord(
      actor, lang, pos, lemma, expectedVersion, newLemma));
  }

  editLevin(actor: string, lang: string, lemma: string,
            expectedVersion: number, classes: string[]): Promise<EditResult> {
    return this.call(requests.editLevin(
      actor, lang, lemma, expectedVersion, classes));
  }

  setLinkStatus(actor: string, linkId: string, expectedVersion: number,
                status: "accepted" | "rejected"): Promise<EditResult> {
    return this.call(requests.setLinkStatus(
      actor, linkId, expectedVersion, status));
  }
}

/** Payload shapes of the wnforge HTTP API, as the service emits them. */

export interface LanguageRow {
  code: string;
  pivot: boolean;
}

export interface LanguagesPayload {
  languages: LanguageRow[];
  policy: string;
}

export interface SenseRow {
  lemma: string;
  method: string;
  reliability: number | null;
  status: string;
}

export interface RelationRow {
  kind: string;
  target: string;
}

export interface SynsetPayload {
  key: string;
  pos: string;
  semantic_field: string | null;
  direct_hyponyms: number;
  total_hyponyms: number;
  base: boolean;
  glosses: Record<string, string>;
  gloss_versions: Record<string, number>;
  senses: Record<string, SenseRow[]>;
  relations: RelationRow[];
}

export interface Literal {
  lemma: string;
  reliability: number | null;
}

export interface PathNode {
  synset: string;
  pos: string;
  gloss: string;
  depth: number;
  literals: Record<string, Literal[]>;
  children: PathNode[];
}

export interface ConsultPayload {
  lang: string;
  start: string;
  relation: string;
  depth: number;
  roots: PathNode[];
}

export interface ResourcePayload {
  resource: string;
  headword: string;
  entries: string[];
}

export interface ReportRow {
  method: string;
  links: number;
  synsets: number;
  words: number;
  confidence: number | null;
}

export interface ReportPayload {
  rows: ReportRow[];
}

export interface HistoryRecord {
  seq: number;
  timestamp: string;
  actor: string;
  action: string;
  subject: string;
  before: unknown;
  after: unknown;
}

export interface HistoryPayload {
  total: number;
  offset: number;
  limit: number;
  records: HistoryRecord[];
}

export interface WordRef {
  language: string;
  lemma: string;
  pos: string;
}

export interface LinkRow {
  id: string;
  method: string;
  word: WordRef;
  pivot_word: WordRef | null;
  synset: { key: string; pos: string; gloss: string };
  witnesses: string[];
  status: string;
  verdict: "correct" | "incorrect" | null;
  version: number;
}

export interface SamplePayload {
  method: string;
  seed: number;
  size: number;
  done: number;
  links: LinkRow[];
  confidence?: number;
}

export interface VerdictPayload {
  method: string;
  link: string;
  verdict: string;
  done: number;
  size: number;
  confidence?: number;
}

export interface PromotePayload {
  threshold: number;
  promoted: string[];
  rejected: string[];
}

export interface EditResult {
  seq: number;
  entity: string;
  action: string;
  version: number;
}

export interface ConflictPayload {
  detail: string;
  entity: string;
  current_version: number;
}

export interface GeneratedLinksPayload {
  generated: number;
  by_method: Record<string, number>;
}

export interface GeneratedVerbsPayload {
  generated: number;
  warnings: string[];
}

/** Generation methods in report order. */
export const CLASS_METHODS = [
  "mono1", "mono2", "mono3", "mono4",
  "poly1", "poly2", "poly3", "poly4",
  "variant",
] as const;

/** Relation vocabulary accepted by the consult endpoint. */
export const RELATION_KINDS = [
  "hypernymy", "hyponymy", "antonymy", "meronymy", "holonymy",
  "attribute", "cause", "entailment", "troponymy",
] as const;

export const PARTS_OF_SPEECH = ["noun", "verb", "adjective", "adverb"] as const;

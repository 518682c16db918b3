"""Loaders for the line-oriented input formats.

All formats are UTF-8 TSV with `#` comment lines. Loading normalizes and
deduplicates, so permuting or repeating input lines yields the same
in-memory fragment.

  SYNSET file     syn <key> <pos> <semantic_field> <gloss>
                  rel <kind> <source_key> <target_key>
                  base <key>
  BILINGUAL file  <source_lemma> <pivot_lemma>
  PIVOT-SENSE     <lemma> <synset_key>
  LEVIN-VERBS     <english_verb> <levin_class> <lang:lemma[,lang:lemma...]>
  LEVIN-SENSES    <english_verb> <levin_class> <synset_key>
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .model import (
    LexKBError,
    PartOfSpeech,
    Relation,
    RelationKind,
    RelationSet,
    Synset,
    SynsetId,
    SynsetTable,
    WordForm,
    normalize_lemma,
)


class ParseError(LexKBError):
    def __init__(self, path: str, line_no: int, reason: str) -> None:
        super().__init__(f"{path}:{line_no}: {reason}")
        self.path = path
        self.line_no = line_no
        self.reason = reason


class DanglingRelation(LexKBError):
    pass


class CycleDetected(LexKBError):
    def __init__(self, cycle: Sequence[SynsetId]) -> None:
        super().__init__(
            "hyponymy cycle: " + " -> ".join(s.key for s in cycle)
        )
        self.cycle = list(cycle)


@dataclass(frozen=True, order=True)
class BilingualEntry:
    """One undirected (source word, pivot word) dictionary pair."""

    source_word: WordForm
    pivot_word: WordForm


@dataclass(frozen=True, order=True)
class PivotSenseEntry:
    word: WordForm
    synset: SynsetId


@dataclass(frozen=True, order=True)
class LevinVerbEntry:
    english_verb: WordForm
    levin_class: str
    translations: tuple[tuple[str, str], ...]  # (language, lemma)


@dataclass(frozen=True, order=True)
class LevinSenseEntry:
    english_verb: WordForm
    levin_class: str
    synset: SynsetId


@dataclass
class SynsetDocument:
    """A parsed SYNSET file: synsets with recomputed hyponym counts,
    inverse-closed relations, and declared base concepts."""

    language: str
    synsets: SynsetTable = field(default_factory=SynsetTable)
    relations: RelationSet = field(default_factory=RelationSet)
    base: list[SynsetId] = field(default_factory=list)


def _lines(path: Union[str, Path]) -> Iterable[tuple[int, str]]:
    text = Path(path).read_text(encoding="utf-8")
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield line_no, line


def load_synsets(path: Union[str, Path], language: str) -> SynsetDocument:
    """Load a SYNSET file for one language.

    Synset keys must be unique within the file; relation and base lines
    reference synsets by key. Relations are inverse-closed and hyponym
    counts recomputed before returning.
    """
    path = Path(path)
    doc = SynsetDocument(language=language)
    by_key: dict[str, SynsetId] = {}
    rel_lines: list[tuple[int, str, str, str]] = []
    base_keys: set[str] = set()

    for line_no, line in _lines(path):
        fields = line.split("\t")
        kind = fields[0]
        if kind == "syn":
            if len(fields) != 5:
                raise ParseError(str(path), line_no, "syn line needs 5 fields")
            _, key, pos_s, semfield, gloss = fields
            try:
                pos = PartOfSpeech(pos_s)
            except ValueError:
                raise ParseError(str(path), line_no, f"bad pos {pos_s!r}") from None
            if key in by_key:
                raise ParseError(str(path), line_no, f"duplicate synset key {key!r}")
            sid = SynsetId(language, pos, key)
            by_key[key] = sid
            doc.synsets.add(Synset(sid, gloss=gloss, semantic_field=semfield or None))
        elif kind == "rel":
            if len(fields) != 4:
                raise ParseError(str(path), line_no, "rel line needs 4 fields")
            rel_lines.append((line_no, fields[1], fields[2], fields[3]))
        elif kind == "base":
            if len(fields) != 2:
                raise ParseError(str(path), line_no, "base line needs 2 fields")
            base_keys.add(fields[1])
        else:
            raise ParseError(str(path), line_no, f"unknown record kind {kind!r}")

    for line_no, kind_s, src_key, tgt_key in rel_lines:
        try:
            rkind = RelationKind(kind_s)
        except ValueError:
            raise ParseError(str(path), line_no, f"bad relation kind {kind_s!r}") from None
        for key in (src_key, tgt_key):
            if key not in by_key:
                raise DanglingRelation(
                    f"{path}:{line_no}: relation references undefined synset {key!r}"
                )
        doc.relations.add(Relation(rkind, by_key[src_key], by_key[tgt_key]))

    for key in sorted(base_keys):
        if key not in by_key:
            raise DanglingRelation(
                f"{path}: base declaration references undefined synset {key!r}"
            )
        doc.base.append(by_key[key])

    recompute_hyponym_counts(doc.synsets, doc.relations)
    return doc


def dump_synsets(doc: SynsetDocument) -> str:
    """Serialize a SynsetDocument back to canonical SYNSET-file text.

    Canonical means: records sorted, one line per closed relation pair
    (the hypernymy/meronymy direction, and antonymy with the smaller
    source first).
    """
    out: list[str] = []
    for syn in doc.synsets.sorted():
        out.append(
            "syn\t{}\t{}\t{}\t{}".format(
                syn.id.key, syn.id.pos, syn.semantic_field or "", syn.gloss
            )
        )
    canon: set[Relation] = set()
    for rel in doc.relations:
        if rel.kind in (RelationKind.HYPONYMY, RelationKind.HOLONYMY):
            continue
        if rel.kind is RelationKind.ANTONYMY and rel.target < rel.source:
            rel = Relation(rel.kind, rel.target, rel.source)
        canon.add(rel)
    for rel in sorted(canon):
        out.append(f"rel\t{rel.kind}\t{rel.source.key}\t{rel.target.key}")
    for sid in sorted(set(doc.base)):
        out.append(f"base\t{sid.key}")
    return "".join(line + "\n" for line in out)


def load_bilingual(
    path: Union[str, Path],
    source_lang: str,
    pivot_lang: str,
    pos: PartOfSpeech = PartOfSpeech.NOUN,
) -> tuple[list[BilingualEntry], int]:
    """Load a bilingual dictionary as a deduplicated pair set.

    Returns (sorted entries, duplicate line count). Real dictionary dumps
    repeat entries, so duplicates are counted rather than rejected.
    """
    path = Path(path)
    seen: set[BilingualEntry] = set()
    duplicates = 0
    for line_no, line in _lines(path):
        fields = line.split("\t")
        if len(fields) != 2:
            raise ParseError(str(path), line_no, f"expected 2 columns, got {len(fields)}")
        try:
            entry = BilingualEntry(
                source_word=WordForm(source_lang, normalize_lemma(fields[0]), pos),
                pivot_word=WordForm(pivot_lang, normalize_lemma(fields[1]), pos),
            )
        except LexKBError as exc:
            raise ParseError(str(path), line_no, str(exc)) from None
        if entry in seen:
            duplicates += 1
        else:
            seen.add(entry)
    return sorted(seen), duplicates


def load_pivot_senses(
    path: Union[str, Path],
    pivot_lang: str,
    pos: PartOfSpeech = PartOfSpeech.NOUN,
    synsets: Optional[SynsetTable] = None,
) -> tuple[list[PivotSenseEntry], int]:
    """Load pivot-language (lemma, synset) pairs.

    When a synset table is given, keys are resolved against it (taking
    the declared POS); otherwise entries assume `pos`, which fits the
    noun pipeline where these files stand alone.
    """
    path = Path(path)
    by_key: dict[str, SynsetId] = {}
    if synsets is not None:
        for syn in synsets:
            by_key[syn.id.key] = syn.id
    seen: set[PivotSenseEntry] = set()
    duplicates = 0
    for line_no, line in _lines(path):
        fields = line.split("\t")
        if len(fields) != 2:
            raise ParseError(str(path), line_no, f"expected 2 columns, got {len(fields)}")
        lemma_raw, key = fields
        if synsets is not None:
            if key not in by_key:
                raise DanglingRelation(
                    f"{path}:{line_no}: sense references undefined synset {key!r}"
                )
            sid = by_key[key]
        else:
            sid = SynsetId(pivot_lang, pos, key)
        try:
            entry = PivotSenseEntry(
                word=WordForm(pivot_lang, normalize_lemma(lemma_raw), sid.pos),
                synset=sid,
            )
        except LexKBError as exc:
            raise ParseError(str(path), line_no, str(exc)) from None
        if entry in seen:
            duplicates += 1
        else:
            seen.add(entry)
    return sorted(seen), duplicates


def load_levin_lists(
    verbs_path: Union[str, Path],
    senses_path: Union[str, Path],
    pivot_lang: str = "en",
    known_synsets: Optional[SynsetTable] = None,
) -> tuple[list[LevinVerbEntry], list[LevinSenseEntry], list[str]]:
    """Load the Levin-class verb list and the verb/class/synset list.

    Sense entries naming a synset missing from `known_synsets` are kept
    but reported in the returned warning list.
    """
    verbs_path, senses_path = Path(verbs_path), Path(senses_path)
    warnings: list[str] = []

    verb_entries: set[LevinVerbEntry] = set()
    for line_no, line in _lines(verbs_path):
        fields = line.split("\t")
        if len(fields) not in (2, 3):
            raise ParseError(str(verbs_path), line_no, "expected 2 or 3 columns")
        verb_raw, levin_class = fields[0], fields[1].strip()
        if not levin_class:
            raise ParseError(str(verbs_path), line_no, "empty Levin class")
        translations: list[tuple[str, str]] = []
        if len(fields) == 3 and fields[2].strip():
            for item in fields[2].split(","):
                lang, sep, lemma_raw = item.partition(":")
                if not sep or not lang.strip():
                    raise ParseError(
                        str(verbs_path), line_no, f"bad translation {item!r}"
                    )
                try:
                    translations.append((lang.strip(), normalize_lemma(lemma_raw)))
                except LexKBError as exc:
                    raise ParseError(str(verbs_path), line_no, str(exc)) from None
        try:
            verb = WordForm(pivot_lang, normalize_lemma(verb_raw), PartOfSpeech.VERB)
        except LexKBError as exc:
            raise ParseError(str(verbs_path), line_no, str(exc)) from None
        verb_entries.add(
            LevinVerbEntry(verb, levin_class, tuple(sorted(set(translations))))
        )

    known_keys: Optional[set[str]] = None
    key_pos: dict[str, SynsetId] = {}
    if known_synsets is not None:
        known_keys = set()
        for syn in known_synsets:
            known_keys.add(syn.id.key)
            key_pos[syn.id.key] = syn.id

    sense_entries: set[LevinSenseEntry] = set()
    for line_no, line in _lines(senses_path):
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError(str(senses_path), line_no, "expected 3 columns")
        verb_raw, levin_class, key = fields[0], fields[1].strip(), fields[2]
        if not levin_class:
            raise ParseError(str(senses_path), line_no, "empty Levin class")
        if known_keys is not None and key not in known_keys:
            warnings.append(
                f"UnknownSynset: {senses_path}:{line_no}: synset {key!r} not in pivot KB"
            )
        sid = key_pos.get(key, SynsetId(pivot_lang, PartOfSpeech.VERB, key))
        try:
            verb = WordForm(pivot_lang, normalize_lemma(verb_raw), PartOfSpeech.VERB)
        except LexKBError as exc:
            raise ParseError(str(senses_path), line_no, str(exc)) from None
        sense_entries.add(LevinSenseEntry(verb, levin_class, sid))

    return sorted(verb_entries), sorted(sense_entries), warnings


def recompute_hyponym_counts(synsets: SynsetTable, relations: RelationSet) -> None:
    """Recompute direct/total hyponym counts from the hyponymy edges.

    direct = hyponymy out-degree, total = number of distinct descendants
    reachable over hyponymy. The hyponymy graph must be acyclic.
    """
    children: dict[SynsetId, set[SynsetId]] = {}
    for rel in relations.of_kind(RelationKind.HYPONYMY):
        children.setdefault(rel.source, set()).add(rel.target)

    _check_acyclic(children)

    descendants: dict[SynsetId, frozenset[SynsetId]] = {}

    def desc(node: SynsetId) -> frozenset[SynsetId]:
        cached = descendants.get(node)
        if cached is not None:
            return cached
        acc: set[SynsetId] = set()
        for child in children.get(node, ()):
            acc.add(child)
            acc.update(desc(child))
        result = frozenset(acc)
        descendants[node] = result
        return result

    # Resolve in depth order to keep recursion shallow on long chains.
    for node in _topo_order(children):
        desc(node)

    for syn in list(synsets):
        direct = len(children.get(syn.id, ()))
        total = len(desc(syn.id))
        if (syn.direct_hyponyms, syn.total_hyponyms) != (direct, total):
            synsets.replace(syn.with_counts(direct, total))


def _check_acyclic(children: dict[SynsetId, set[SynsetId]]) -> None:
    WHITE, GREY, BLACK = 0, 1, 2
    color: dict[SynsetId, int] = {}
    for root in children:
        if color.get(root, WHITE) != WHITE:
            continue
        stack: list[tuple[SynsetId, Optional[object]]] = [(root, None)]
        path: list[SynsetId] = []
        while stack:
            node, it = stack.pop()
            if it is None:
                if color.get(node, WHITE) == BLACK:
                    continue
                color[node] = GREY
                path.append(node)
                it = iter(sorted(children.get(node, ())))
            advanced = False
            for child in it:  # type: ignore[union-attr]
                state = color.get(child, WHITE)
                if state == GREY:
                    start = path.index(child)
                    raise CycleDetected(path[start:] + [child])
                if state == WHITE:
                    stack.append((node, it))
                    stack.append((child, None))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                path.pop()


def _topo_order(children: dict[SynsetId, set[SynsetId]]) -> list[SynsetId]:
    """Children-before-parents order over the hyponymy DAG."""
    nodes: set[SynsetId] = set(children)
    for tgts in children.values():
        nodes.update(tgts)
    parents: dict[SynsetId, list[SynsetId]] = {}
    for src, tgts in children.items():
        for tgt in tgts:
            parents.setdefault(tgt, []).append(src)
    out: list[SynsetId] = []
    remaining = {node: len(children.get(node, ())) for node in nodes}
    queue = sorted(node for node, n in remaining.items() if n == 0)
    seen: set[SynsetId] = set()
    while queue:
        node = queue.pop()
        if node in seen:
            continue
        seen.add(node)
        out.append(node)
        for parent in parents.get(node, ()):
            remaining[parent] -= 1
            if remaining[parent] == 0:
                queue.append(parent)
    return out


def dump_bilingual(entries: Iterable[BilingualEntry]) -> str:
    return "".join(
        f"{e.source_word.lemma}\t{e.pivot_word.lemma}\n" for e in sorted(set(entries))
    )


def dump_pivot_senses(entries: Iterable[PivotSenseEntry]) -> str:
    return "".join(
        f"{e.word.lemma}\t{e.synset.key}\n" for e in sorted(set(entries))
    )

"""Automatic noun link generation over the bilingual translation graph.

The bilingual dictionary induces a bipartite graph between source-language
words and pivot-language words. Every pair gets exactly one of four
criteria from its degree pattern:

  C1  both words translate only to each other (isolated 1:1 pair)
  C2  the source word has several translations, each of which translates
      back only to it (star centered on the source word)
  C3  the pivot word has several translations, each of which translates
      back only to it (star centered on the pivot word)
  C4  anything else

Joining the criterion classes with the pivot (word, synset) inventory,
split into monosemic and polysemic words, yields the mono1..mono4 and
poly1..poly4 candidate groups. The variant criterion links a source word
directly to a synset when at least two of the synset's member words
translate to it.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence
from urllib.parse import quote, unquote

from .ingest import BilingualEntry, PivotSenseEntry
from .model import LexKBError, Status, SynsetId, WordForm


class PairNotInGraph(LexKBError):
    pass


class Criterion(Enum):
    C1 = 1
    C2 = 2
    C3 = 3
    C4 = 4

    @property
    def mono_method(self) -> str:
        return f"mono{self.value}"

    @property
    def poly_method(self) -> str:
        return f"poly{self.value}"


class TranslationGraph:
    """Bipartite adjacency between source words and pivot words.

    Built from a deduplicated pair set; both directions are kept
    consistent by construction. Lemmas index the graph — the languages
    and POS are fixed per graph.
    """

    def __init__(self, entries: Iterable[BilingualEntry]) -> None:
        entries = sorted(set(entries))
        self.source_lang = entries[0].source_word.language if entries else ""
        self.pivot_lang = entries[0].pivot_word.language if entries else ""
        self.pos = entries[0].source_word.pos if entries else None
        self.fwd: dict[str, set[str]] = {}
        self.rev: dict[str, set[str]] = {}
        self._pairs: list[tuple[str, str]] = []
        for e in entries:
            cw, ew = e.source_word.lemma, e.pivot_word.lemma
            self.fwd.setdefault(cw, set()).add(ew)
            self.rev.setdefault(ew, set()).add(cw)
            self._pairs.append((cw, ew))

    def __len__(self) -> int:
        return len(self._pairs)

    def pairs(self) -> list[tuple[str, str]]:
        """All (source lemma, pivot lemma) pairs in sorted order."""
        return list(self._pairs)

    def __contains__(self, pair: tuple[str, str]) -> bool:
        cw, ew = pair
        return ew in self.fwd.get(cw, ())


@dataclass(frozen=True, order=True)
class CandidateLink:
    """A generated (word, synset) link awaiting validation.

    mono*/poly* links carry the pivot word they were joined through;
    variant links carry instead the pivot words that witnessed them.
    """

    method: str
    word: WordForm
    synset: SynsetId
    pivot_word: Optional[WordForm] = None
    witnesses: tuple[str, ...] = ()
    status: Status = Status.CANDIDATE

    @property
    def link_id(self) -> str:
        return link_id(self.method, self.word.language, self.word.lemma,
                       self.pivot_word.lemma if self.pivot_word else None,
                       self.synset.key)

    def sort_key(self) -> tuple:
        return (
            self.method,
            self.word,
            self.synset,
            self.pivot_word.lemma if self.pivot_word else "",
        )


def link_id(method: str, language: str, lemma: str,
            pivot_lemma: Optional[str], synset_key: str) -> str:
    """Stable, reversible identifier for a candidate link.

    Components are percent-encoded so lemmas or keys containing ':' stay
    unambiguous.
    """
    parts = [method, language, lemma, pivot_lemma if pivot_lemma is not None else "-",
             synset_key]
    return ":".join(quote(p, safe="") for p in parts)


def parse_link_id(lid: str) -> tuple[str, str, str, Optional[str], str]:
    parts = lid.split(":")
    if len(parts) != 5:
        raise LexKBError(f"malformed link id: {lid!r}")
    method, language, lemma, pivot, key = (unquote(p) for p in parts)
    return method, language, lemma, None if pivot == "-" else pivot, key


def classify_pair(pair: tuple[str, str], graph: TranslationGraph) -> Criterion:
    """Classify one (source word, pivot word) pair by its degree pattern."""
    cw, ew = pair
    if pair not in graph:
        raise PairNotInGraph(f"pair {pair!r} not in graph")
    cw_deg = len(graph.fwd[cw])
    ew_deg = len(graph.rev[ew])
    if cw_deg == 1 and ew_deg == 1:
        return Criterion.C1
    if cw_deg > 1 and all(len(graph.rev[e]) == 1 for e in graph.fwd[cw]):
        return Criterion.C2
    if ew_deg > 1 and all(len(graph.fwd[c]) == 1 for c in graph.rev[ew]):
        return Criterion.C3
    return Criterion.C4


def partition_pairs(graph: TranslationGraph) -> dict[Criterion, list[tuple[str, str]]]:
    """Split the whole pair set into the four criterion classes.

    The classes are disjoint by construction and their union is the pair
    set.
    """
    out: dict[Criterion, list[tuple[str, str]]] = {c: [] for c in Criterion}
    for pair in graph.pairs():
        out[classify_pair(pair, graph)].append(pair)
    return out


def split_pivot_senses(
    pivot_senses: Iterable[PivotSenseEntry],
) -> tuple[list[PivotSenseEntry], list[PivotSenseEntry]]:
    """Partition pivot (word, synset) pairs into monosemic and polysemic.

    A pair is monosemic iff its word belongs to exactly one synset.
    """
    entries = sorted(set(pivot_senses))
    counts: dict[str, int] = {}
    for e in entries:
        counts[e.word.lemma] = counts.get(e.word.lemma, 0) + 1
    mono = [e for e in entries if counts[e.word.lemma] == 1]
    poly = [e for e in entries if counts[e.word.lemma] >= 2]
    return mono, poly


def join_triples(
    partition: Mapping[Criterion, Sequence[tuple[str, str]]],
    mono_set: Iterable[PivotSenseEntry],
    poly_set: Iterable[PivotSenseEntry],
    source_lang: str,
) -> dict[str, list[CandidateLink]]:
    """Join the criterion classes with the pivot sense inventory.

    Every (source, pivot) pair of criterion Ck combines with every synset
    of its pivot word, giving method monoK or polyK by which half of the
    inventory the synset came from. The join key is the pivot word; pairs
    whose pivot word has no synset simply produce nothing.
    """
    mono_by_word: dict[str, list[PivotSenseEntry]] = {}
    for e in mono_set:
        mono_by_word.setdefault(e.word.lemma, []).append(e)
    poly_by_word: dict[str, list[PivotSenseEntry]] = {}
    for e in poly_set:
        poly_by_word.setdefault(e.word.lemma, []).append(e)

    groups: dict[str, list[CandidateLink]] = {
        c.mono_method: [] for c in Criterion
    }
    groups.update({c.poly_method: [] for c in Criterion})

    for criterion, pairs in partition.items():
        for cw, ew in pairs:
            for by_word, method in (
                (mono_by_word, criterion.mono_method),
                (poly_by_word, criterion.poly_method),
            ):
                for sense in by_word.get(ew, ()):
                    groups[method].append(
                        CandidateLink(
                            method=method,
                            word=WordForm(source_lang, cw, sense.synset.pos),
                            synset=sense.synset,
                            pivot_word=sense.word,
                        )
                    )
    for links in groups.values():
        links.sort(key=CandidateLink.sort_key)
    return groups


def variant_links(
    graph: TranslationGraph,
    pivot_senses: Iterable[PivotSenseEntry],
    source_lang: str,
) -> list[CandidateLink]:
    """Link a source word to a synset when two or more of the synset's
    member words translate to it. The witnessing pivot words are kept for
    the validation console."""
    members: dict[SynsetId, set[str]] = {}
    for e in pivot_senses:
        members.setdefault(e.synset, set()).add(e.word.lemma)

    out: list[CandidateLink] = []
    for synset, lemmas in members.items():
        tally: dict[str, set[str]] = {}
        for ew in lemmas:
            for cw in graph.rev.get(ew, ()):
                tally.setdefault(cw, set()).add(ew)
        for cw, witnesses in tally.items():
            if len(witnesses) >= 2:
                out.append(
                    CandidateLink(
                        method="variant",
                        word=WordForm(source_lang, cw, synset.pos),
                        synset=synset,
                        witnesses=tuple(sorted(witnesses)),
                    )
                )
    out.sort(key=lambda link: (link.word, link.synset))
    return out


def generate_all(
    entries: Iterable[BilingualEntry],
    pivot_senses: Iterable[PivotSenseEntry],
    source_lang: str,
) -> list[CandidateLink]:
    """Run the full noun pipeline: partition, split, join, variants."""
    graph = TranslationGraph(entries)
    senses = sorted(set(pivot_senses))
    mono, poly = split_pivot_senses(senses)
    groups = join_triples(partition_pairs(graph), mono, poly, source_lang)
    links: list[CandidateLink] = []
    for method in sorted(groups):
        links.extend(groups[method])
    links.extend(variant_links(graph, senses, source_lang))
    links.sort(key=CandidateLink.sort_key)
    return links


def dump_links(links: Iterable[CandidateLink]) -> str:
    """TSV lines: method, word, pivot word or -, synset key, witnesses."""
    rows = []
    for link in sorted(links, key=CandidateLink.sort_key):
        rows.append(
            "\t".join(
                (
                    link.method,
                    link.word.lemma,
                    link.pivot_word.lemma if link.pivot_word else "-",
                    link.synset.key,
                    ",".join(link.witnesses) if link.witnesses else "-",
                )
            )
        )
    return "".join(row + "\n" for row in rows)

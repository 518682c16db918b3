"""Core domain model: languages, word forms, synsets, senses and relations.

Everything here is an immutable value type plus a handful of pure helper
functions. Mutation and persistence live in :mod:`wnforge.store`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Iterator, Optional


class LexKBError(Exception):
    """Base class for all domain errors."""


class EmptyLemma(LexKBError):
    pass


class IllegalChar(LexKBError):
    pass


class BadLanguageCode(LexKBError):
    pass


class DuplicateSynset(LexKBError):
    pass


class RelationError(LexKBError):
    pass


class PartOfSpeech(str, Enum):
    NOUN = "noun"
    VERB = "verb"
    ADJECTIVE = "adjective"
    ADVERB = "adverb"

    def __str__(self) -> str:
        return self.value


class RelationKind(str, Enum):
    HYPERNYMY = "hypernymy"
    HYPONYMY = "hyponymy"
    ANTONYMY = "antonymy"
    MERONYMY = "meronymy"
    HOLONYMY = "holonymy"
    ATTRIBUTE = "attribute"
    CAUSE = "cause"
    ENTAILMENT = "entailment"
    TROPONYMY = "troponymy"

    def __str__(self) -> str:
        return self.value


# Provenance tags for senses and candidate links. The mono*/poly*/variant
# tags are produced by the automatic noun linker, "levin" by the verb
# linker; "pivot" marks senses imported with the pivot wordnet and
# "manual" marks hand-entered material.
GENERATED_METHODS = (
    "mono1", "mono2", "mono3", "mono4",
    "poly1", "poly2", "poly3", "poly4",
    "variant",
)
ALL_METHODS = GENERATED_METHODS + ("levin", "pivot", "manual")

# Methods whose senses carry a reliability percentage. Pivot and manual
# senses are trusted as-is and carry none.
RELIABILITY_METHODS = frozenset(GENERATED_METHODS) | {"levin"}


class Status(str, Enum):
    CANDIDATE = "candidate"
    ACCEPTED = "accepted"
    REJECTED = "rejected"

    def __str__(self) -> str:
        return self.value


_LANG_CODE_RE = re.compile(r"^[a-z]{1,8}$")


@dataclass(frozen=True, order=True)
class Language:
    """A registered language. Exactly one language per KB is the pivot."""

    code: str
    pivot: bool = False

    def __post_init__(self) -> None:
        if not _LANG_CODE_RE.match(self.code):
            raise BadLanguageCode(
                f"language code must be 1-8 ASCII lowercase letters: {self.code!r}"
            )


@dataclass(frozen=True, order=True)
class SynsetId:
    """Globally unique synset handle: (language, pos, key)."""

    language: str
    pos: PartOfSpeech
    key: str

    def __post_init__(self) -> None:
        if not self.key:
            raise LexKBError("synset key must be non-empty")

    def __str__(self) -> str:
        return f"{self.language}:{self.pos.value}:{self.key}"


@dataclass(frozen=True)
class Synset:
    id: SynsetId
    gloss: str = ""
    semantic_field: Optional[str] = None
    direct_hyponyms: int = 0
    total_hyponyms: int = 0

    def with_counts(self, direct: int, total: int) -> "Synset":
        if total < direct:
            raise LexKBError(f"total hyponyms < direct for {self.id}")
        return replace(self, direct_hyponyms=direct, total_hyponyms=total)


@dataclass(frozen=True, order=True)
class WordForm:
    language: str
    lemma: str
    pos: PartOfSpeech

    def __post_init__(self) -> None:
        if not self.lemma:
            raise EmptyLemma("word form lemma must be non-empty")
        if "\t" in self.lemma or "\n" in self.lemma or "\r" in self.lemma:
            raise IllegalChar(f"lemma contains tab/newline: {self.lemma!r}")


@dataclass(frozen=True, order=True)
class Sense:
    """A (word, synset) pairing with provenance and validation status."""

    word: WordForm
    synset: SynsetId
    method: str = "manual"
    reliability: Optional[float] = None
    status: Status = Status.CANDIDATE

    def __post_init__(self) -> None:
        if self.method not in ALL_METHODS:
            raise LexKBError(f"unknown sense method: {self.method!r}")
        has_rel = self.reliability is not None
        if has_rel != (self.method in RELIABILITY_METHODS):
            raise LexKBError(
                f"reliability must be present iff method is generated "
                f"(method={self.method}, reliability={self.reliability})"
            )
        if has_rel and not (0.0 <= float(self.reliability) <= 100.0):
            raise LexKBError(f"reliability out of range: {self.reliability}")


@dataclass(frozen=True, order=True)
class Relation:
    kind: RelationKind
    source: SynsetId
    target: SynsetId

    def __post_init__(self) -> None:
        if self.source == self.target:
            raise RelationError(f"self-relation on {self.source}")


def normalize_lemma(raw: str) -> str:
    """Normalize a raw dictionary lemma.

    Leading/trailing whitespace is stripped, runs of interior spaces
    collapse to one space, and the result is lowercased. Interior tabs or
    newlines are rejected rather than repaired, since they mark a
    malformed source line.
    """
    stripped = raw.strip()
    if not stripped:
        raise EmptyLemma(f"lemma is empty after trimming: {raw!r}")
    if "\t" in stripped or "\n" in stripped or "\r" in stripped:
        raise IllegalChar(f"lemma contains tab/newline: {raw!r}")
    return re.sub(r" {2,}", " ", stripped).lower()


_INVERSES = {
    RelationKind.HYPERNYMY: RelationKind.HYPONYMY,
    RelationKind.HYPONYMY: RelationKind.HYPERNYMY,
    RelationKind.MERONYMY: RelationKind.HOLONYMY,
    RelationKind.HOLONYMY: RelationKind.MERONYMY,
    RelationKind.ANTONYMY: RelationKind.ANTONYMY,
}


def invert_relation(kind: RelationKind) -> Optional[RelationKind]:
    """Return the stored inverse of a relation kind, or None.

    Hypernymy/hyponymy and meronymy/holonymy are kept mutually closed;
    antonymy is its own inverse. Attribute, cause, entailment and
    troponymy are stored one-way and return None.
    """
    return _INVERSES.get(kind)


# Relation kinds restricted to one part of speech: the noun hierarchy is
# hypernymy/hyponymy, the verb hierarchy troponymy.
_POS_RESTRICTED = {
    RelationKind.HYPERNYMY: PartOfSpeech.NOUN,
    RelationKind.HYPONYMY: PartOfSpeech.NOUN,
    RelationKind.TROPONYMY: PartOfSpeech.VERB,
}


def check_relation_pos(rel: Relation) -> None:
    """Raise RelationError if the relation kind is illegal for its POS."""
    required = _POS_RESTRICTED.get(rel.kind)
    if required is None:
        return
    for end in (rel.source, rel.target):
        if end.pos is not required:
            raise RelationError(
                f"{rel.kind} requires {required} synsets, got {end}"
            )


# The relation that climbs a hierarchy towards its roots, per POS.
HIERARCHY_UP = {
    PartOfSpeech.NOUN: RelationKind.HYPERNYMY,
    PartOfSpeech.VERB: RelationKind.TROPONYMY,
}


class RelationSet:
    """A set of relation edges that keeps inverse pairs closed.

    Adding hypernymy(a, b) also stores hyponymy(b, a) and removing either
    drops both; same for meronymy/holonymy and (symmetrically) antonymy.
    One-way kinds are stored as given.
    """

    def __init__(self, relations: Iterable[Relation] = ()) -> None:
        self._edges: set[Relation] = set()
        # kind -> source -> set of targets, for traversal
        self._adj: dict[RelationKind, dict[SynsetId, set[SynsetId]]] = {}
        for rel in relations:
            self.add(rel)

    def __len__(self) -> int:
        return len(self._edges)

    def __iter__(self) -> Iterator[Relation]:
        return iter(self._edges)

    def __contains__(self, rel: Relation) -> bool:
        return rel in self._edges

    def _store(self, rel: Relation) -> None:
        if rel not in self._edges:
            self._edges.add(rel)
            self._adj.setdefault(rel.kind, {}).setdefault(rel.source, set()).add(
                rel.target
            )

    def _unstore(self, rel: Relation) -> None:
        if rel in self._edges:
            self._edges.discard(rel)
            targets = self._adj[rel.kind][rel.source]
            targets.discard(rel.target)
            if not targets:
                del self._adj[rel.kind][rel.source]

    def add(self, rel: Relation) -> None:
        check_relation_pos(rel)
        self._store(rel)
        inverse = invert_relation(rel.kind)
        if inverse is not None:
            self._store(Relation(inverse, rel.target, rel.source))

    def remove(self, rel: Relation) -> None:
        self._unstore(rel)
        inverse = invert_relation(rel.kind)
        if inverse is not None:
            self._unstore(Relation(inverse, rel.target, rel.source))

    def targets(self, kind: RelationKind, source: SynsetId) -> set[SynsetId]:
        return set(self._adj.get(kind, {}).get(source, ()))

    def sources(self, kind: RelationKind, target: SynsetId) -> set[SynsetId]:
        # Reverse adjacency is only materialized on demand; one-way kinds
        # (e.g. troponymy) have no stored inverse to consult.
        return {r.source for r in self._edges if r.kind is kind and r.target == target}

    def of_kind(self, kind: RelationKind) -> list[Relation]:
        return sorted(r for r in self._edges if r.kind is kind)

    def sorted(self) -> list[Relation]:
        return sorted(self._edges)

    def copy(self) -> "RelationSet":
        dup = RelationSet()
        dup._edges = set(self._edges)
        dup._adj = {
            kind: {src: set(tgts) for src, tgts in by_src.items()}
            for kind, by_src in self._adj.items()
        }
        return dup


@dataclass
class SynsetTable:
    """Synsets indexed by id, with (language, pos, key) uniqueness."""

    _by_id: dict[SynsetId, Synset] = field(default_factory=dict)

    def add(self, synset: Synset) -> None:
        if synset.id in self._by_id:
            raise DuplicateSynset(f"duplicate synset id: {synset.id}")
        self._by_id[synset.id] = synset

    def replace(self, synset: Synset) -> None:
        if synset.id not in self._by_id:
            raise LexKBError(f"unknown synset id: {synset.id}")
        self._by_id[synset.id] = synset

    def get(self, sid: SynsetId) -> Optional[Synset]:
        return self._by_id.get(sid)

    def __contains__(self, sid: SynsetId) -> bool:
        return sid in self._by_id

    def __len__(self) -> int:
        return len(self._by_id)

    def __iter__(self) -> Iterator[Synset]:
        return iter(self._by_id.values())

    def sorted(self) -> list[Synset]:
        return [self._by_id[sid] for sid in sorted(self._by_id)]

    def copy(self) -> "SynsetTable":
        return SynsetTable(dict(self._by_id))

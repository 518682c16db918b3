"""Shared fixtures: repo paths, a tiny populated store, and a terminal
summary that prints one PASS/FAIL line per acceptance criterion."""

from __future__ import annotations

from pathlib import Path

import pytest

from wnforge.ingest import SynsetDocument, recompute_hyponym_counts
from wnforge.model import (
    Language,
    PartOfSpeech,
    Relation,
    RelationKind,
    Synset,
    SynsetId,
)
from wnforge.store import KBStore

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"
GOLDEN = FIXTURES / "golden"

NOUN = PartOfSpeech.NOUN
VERB = PartOfSpeech.VERB


def nsid(key: str, language: str = "en") -> SynsetId:
    return SynsetId(language, NOUN, key)


def vsid(key: str, language: str = "en") -> SynsetId:
    return SynsetId(language, VERB, key)


def make_doc(
    language: str,
    synsets: dict[str, tuple[PartOfSpeech, str]],
    relations: list[tuple[RelationKind, str, str]] = (),
    base: list[str] = (),
) -> SynsetDocument:
    """Build a SynsetDocument inline: key -> (pos, gloss) plus relation
    triples over keys."""
    doc = SynsetDocument(language=language)
    ids: dict[str, SynsetId] = {}
    for key, (pos, gloss) in synsets.items():
        sid = SynsetId(language, pos, key)
        ids[key] = sid
        doc.synsets.add(Synset(sid, gloss=gloss))
    for kind, src, tgt in relations:
        doc.relations.add(Relation(kind, ids[src], ids[tgt]))
    doc.base = [ids[k] for k in base]
    recompute_hyponym_counts(doc.synsets, doc.relations)
    return doc


MINI_SYNSETS = {
    "n-entity-1": (NOUN, "that which exists"),
    "n-animal-1": (NOUN, "a living organism"),
    "n-dog-1": (NOUN, "a domesticated canine"),
    "n-cat-1": (NOUN, "a small feline"),
    "v-act-1": (VERB, "do something"),
    "v-run-1": (VERB, "move fast on foot"),
}
MINI_RELATIONS = [
    (RelationKind.HYPERNYMY, "n-animal-1", "n-entity-1"),
    (RelationKind.HYPERNYMY, "n-dog-1", "n-animal-1"),
    (RelationKind.HYPERNYMY, "n-cat-1", "n-animal-1"),
    (RelationKind.TROPONYMY, "v-run-1", "v-act-1"),
]
MINI_BASE = ["n-entity-1", "v-act-1"]


@pytest.fixture
def store(tmp_path):
    handle = KBStore(tmp_path / "store", fsync=False)
    yield handle
    handle.close()


@pytest.fixture
def mini(store):
    """A populated store: en pivot + ca, a six-synset KB with bases."""
    store.register_languages(
        [Language("en", pivot=True), Language("ca")], actor="setup"
    )
    store.import_synsets(
        make_doc("en", MINI_SYNSETS, MINI_RELATIONS, MINI_BASE), actor="setup"
    )
    return store


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, ()):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::" not in nodeid:
                continue
            if getattr(rep, "when", "call") not in ("call", "setup"):
                continue
            if getattr(rep, "when") == "setup" and outcome == "passed":
                continue
            name = nodeid.split("::")[-1]
            if name.startswith("test_"):
                name = name[len("test_"):]
            verdict = "PASS" if outcome == "passed" else "FAIL"
            rows.append((name.replace("_", " "), verdict))
    if rows:
        terminalreporter.section("acceptance criteria")
        for name, verdict in rows:
            terminalreporter.write_line(f"{verdict}  {name}")

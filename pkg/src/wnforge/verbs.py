"""Verb link generation by joining two Levin-class lists.

One list gives English verbs with their Levin class and target-language
translations; the other maps (English verb, Levin class) to verb synsets.
Joining on (verb, class) yields target verb -> synset candidates, every
one of which goes through manual validation — no confidence sampling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .ingest import LevinSenseEntry, LevinVerbEntry
from .model import PartOfSpeech, Status, SynsetId, WordForm


@dataclass(frozen=True, order=True)
class VerbCandidate:
    target_verb: WordForm
    synset: SynsetId
    via: tuple[str, str]  # (english verb, levin class)
    status: Status = Status.CANDIDATE


def generate_verb_links(
    levin_verbs: Iterable[LevinVerbEntry],
    levin_senses: Iterable[LevinSenseEntry],
    target_lang: str,
) -> list[VerbCandidate]:
    """Join the two lists on (english verb, levin class) for one language.

    A candidate is identified by (target verb, synset); when several
    routes produce the same candidate the lexicographically smallest
    (verb, class) route is kept as its witness.
    """
    synsets_by_key: dict[tuple[str, str], set[SynsetId]] = {}
    for sense in levin_senses:
        synsets_by_key.setdefault(
            (sense.english_verb.lemma, sense.levin_class), set()
        ).add(sense.synset)

    best_via: dict[tuple[WordForm, SynsetId], tuple[str, str]] = {}
    for entry in levin_verbs:
        route = (entry.english_verb.lemma, entry.levin_class)
        synsets = synsets_by_key.get(route)
        if not synsets:
            continue
        for lang, lemma in entry.translations:
            if lang != target_lang:
                continue
            verb = WordForm(target_lang, lemma, PartOfSpeech.VERB)
            for synset in synsets:
                key = (verb, synset)
                if key not in best_via or route < best_via[key]:
                    best_via[key] = route

    return sorted(
        VerbCandidate(target_verb=verb, synset=synset, via=via)
        for (verb, synset), via in best_via.items()
    )


def verb_totals(snapshot, language: Optional[str] = None) -> tuple[int, int, int]:
    """Count accepted verb links: (distinct synsets, distinct forms, links).

    Counts cover accepted verb senses of non-pivot languages, optionally
    restricted to one language.
    """
    pivot = snapshot.pivot_language()
    synsets: set[SynsetId] = set()
    forms: set[WordForm] = set()
    n_links = 0
    for sense in snapshot.senses():
        if sense.status is not Status.ACCEPTED:
            continue
        if sense.word.pos is not PartOfSpeech.VERB:
            continue
        if sense.word.language == pivot:
            continue
        if language is not None and sense.word.language != language:
            continue
        synsets.add(sense.synset)
        forms.add(sense.word)
        n_links += 1
    return len(synsets), len(forms), n_links


def dump_verb_links(candidates: Iterable[VerbCandidate]) -> str:
    """TSV lines: verb, synset key, english verb, levin class."""
    return "".join(
        f"{c.target_verb.lemma}\t{c.synset.key}\t{c.via[0]}\t{c.via[1]}\n"
        for c in sorted(candidates)
    )

"""File-backed, versioned persistence for the multilingual KB.

A store is a directory holding two files:

  history.log  append-only edit records, one tab-separated line each,
               CRC32-guarded; the authoritative state is the fold of
               this log over an empty KB
  kb.tsv       canonical serialization of the current state, written on
               save/close; purely a convenience artifact for diffing

Writes are funneled through a single committer lock: validate, append
(fsync), apply. Readers take immutable point-in-time snapshots. Every
entity carries a version for optimistic concurrency; pivot-language words
and glosses are immutable.
"""

from __future__ import annotations

import copy
import json
import os
import threading
import zlib
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Iterable, Optional, Sequence, Union
from urllib.parse import quote

from . import confidence as conf
from .ingest import PivotSenseEntry, SynsetDocument, recompute_hyponym_counts
from .links import CandidateLink, parse_link_id
from .model import (
    DuplicateSynset,
    Language,
    LexKBError,
    PartOfSpeech,
    Relation,
    RelationKind,
    RelationSet,
    Sense,
    Status,
    Synset,
    SynsetId,
    SynsetTable,
    WordForm,
    normalize_lemma,
)
from .verbs import VerbCandidate

KB_FILE = "kb.tsv"
HISTORY_FILE = "history.log"

ACTIONS = (
    "add_sense", "edit_gloss", "edit_word", "edit_levin_class",
    "record_verdict", "promote_method", "accept_link", "reject_link",
    "import", "export",
)


def _q(component: str) -> str:
    """Percent-encode one entity-id component so ':' stays a separator."""
    return quote(component, safe="")


class VersionConflict(LexKBError):
    def __init__(self, entity: str, expected: int, actual: int) -> None:
        super().__init__(
            f"stale version for {entity}: expected {expected}, have {actual}"
        )
        self.entity = entity
        self.expected = expected
        self.actual = actual


class PivotImmutable(LexKBError):
    pass


class UnknownEntity(LexKBError):
    pass


class UnknownLanguage(LexKBError):
    pass


class StoreCorrupt(LexKBError):
    pass


@dataclass(frozen=True)
class EditRecord:
    seq: int
    timestamp: str  # ISO-8601 UTC
    actor: str
    action: str
    subject: str
    before: Optional[dict] = None
    after: Optional[dict] = None

    def to_line(self) -> str:
        fields = [
            str(self.seq),
            self.timestamp,
            self.actor,
            self.action,
            self.subject,
            json.dumps(self.before, sort_keys=True, separators=(",", ":")),
            json.dumps(self.after, sort_keys=True, separators=(",", ":")),
        ]
        body = "\t".join(fields)
        crc = zlib.crc32(body.encode("utf-8")) & 0xFFFFFFFF
        return f"{body}\t{crc:08x}"

    @classmethod
    def from_line(cls, line: str) -> "EditRecord":
        parts = line.split("\t")
        if len(parts) != 8:
            raise StoreCorrupt(f"bad field count: {len(parts)}")
        body = "\t".join(parts[:7])
        try:
            crc = int(parts[7], 16)
        except ValueError:
            raise StoreCorrupt("bad CRC field") from None
        if zlib.crc32(body.encode("utf-8")) & 0xFFFFFFFF != crc:
            raise StoreCorrupt("CRC mismatch")
        seq_s, timestamp, actor, action, subject, before_s, after_s = parts[:7]
        if action not in ACTIONS:
            raise StoreCorrupt(f"unknown action {action!r}")
        return cls(
            seq=int(seq_s),
            timestamp=timestamp,
            actor=actor,
            action=action,
            subject=subject,
            before=json.loads(before_s),
            after=json.loads(after_s),
        )


@dataclass
class KBState:
    """The full in-memory KB. Mutated only by record appliers."""

    languages: dict[str, Language] = field(default_factory=dict)
    policy: str = "pivot"  # non-pivot senses attach to pivot synsets
    synsets: SynsetTable = field(default_factory=SynsetTable)
    keys_by_lang: dict[str, dict[str, SynsetId]] = field(default_factory=dict)
    relations: RelationSet = field(default_factory=RelationSet)
    base: set[SynsetId] = field(default_factory=set)
    glosses: dict[tuple[str, SynsetId], str] = field(default_factory=dict)
    senses: dict[tuple[str, str, PartOfSpeech, SynsetId], Sense] = field(
        default_factory=dict
    )
    links: dict[str, CandidateLink] = field(default_factory=dict)
    levin_classes: dict[tuple[str, str], tuple[str, ...]] = field(
        default_factory=dict
    )
    samples: dict[str, conf.ValidationSample] = field(default_factory=dict)
    versions: dict[str, int] = field(default_factory=dict)

    # -- read helpers -------------------------------------------------

    def pivot_language(self) -> str:
        for lang in self.languages.values():
            if lang.pivot:
                return lang.code
        raise UnknownLanguage("no pivot language registered")

    def resolve_key(self, language: str, key: str) -> SynsetId:
        sid = self.keys_by_lang.get(language, {}).get(key)
        if sid is None:
            raise UnknownEntity(f"unknown synset {language}:{key}")
        return sid

    def effective_gloss(self, language: str, sid: SynsetId) -> str:
        override = self.glosses.get((language, sid))
        if override is not None:
            return override
        synset = self.synsets.get(sid)
        return synset.gloss if synset else ""

    def confidences(self) -> dict[str, float]:
        out = {}
        for method, sample in self.samples.items():
            if sample.complete:
                out[method] = conf.extrapolate_confidence(sample)
        return out

    # -- mutation helpers (appliers only) ------------------------------

    def add_synset(self, synset: Synset) -> None:
        by_key = self.keys_by_lang.setdefault(synset.id.language, {})
        if synset.id.key in by_key:
            raise DuplicateSynset(
                f"duplicate synset key {synset.id.key!r} in {synset.id.language}"
            )
        self.synsets.add(synset)
        by_key[synset.id.key] = synset.id

    def put_sense(self, sense: Sense) -> None:
        if sense.synset not in self.synsets:
            raise UnknownEntity(f"sense references unknown synset {sense.synset}")
        pivot = self.pivot_language()
        if sense.word.language == pivot:
            if sense.synset.language != pivot:
                raise LexKBError("pivot senses must attach to pivot synsets")
        elif self.policy == "pivot" and sense.synset.language != pivot:
            raise LexKBError(
                "policy 'pivot': non-pivot senses must attach to pivot synsets"
            )
        key = (sense.word.language, sense.word.lemma, sense.word.pos, sense.synset)
        self.senses[key] = sense


def serialize_state(state: KBState) -> str:
    """Canonical, deterministic text form of the KB state."""
    out: list[str] = ["# wnforge kb"]
    for code in sorted(state.languages):
        lang = state.languages[code]
        out.append(f"lang\t{lang.code}\t{1 if lang.pivot else 0}")
    out.append(f"policy\tsense_attachment\t{state.policy}")
    for syn in state.synsets.sorted():
        out.append(
            "syn\t{}\t{}\t{}\t{}\t{}".format(
                syn.id.language, syn.id.key, syn.id.pos,
                syn.semantic_field or "", syn.gloss,
            )
        )
    for rel in state.relations.sorted():
        out.append(
            "rel\t{}\t{}\t{}\t{}".format(
                rel.source.language, rel.kind, rel.source.key, rel.target.key
            )
        )
    for sid in sorted(state.base):
        out.append(f"base\t{sid.language}\t{sid.key}")
    for (language, sid), text in sorted(state.glosses.items()):
        out.append(f"gloss\t{language}\t{sid.language}\t{sid.key}\t{text}")
    for key in sorted(state.senses):
        sense = state.senses[key]
        rel_s = "-" if sense.reliability is None else f"{sense.reliability:.1f}"
        out.append(
            "sense\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}".format(
                sense.word.language, sense.word.lemma, sense.word.pos,
                sense.synset.language, sense.synset.key,
                sense.method, rel_s, sense.status,
            )
        )
    for lid in sorted(state.links):
        link = state.links[lid]
        out.append(
            "link\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}".format(
                link.method, link.word.language, link.word.lemma,
                link.pivot_word.lemma if link.pivot_word else "-",
                link.synset.language, link.synset.key, link.synset.pos,
                link.status,
                ",".join(quote(w, safe="") for w in link.witnesses) or "-",
            )
        )
    for (language, lemma) in sorted(state.levin_classes):
        classes = state.levin_classes[(language, lemma)]
        out.append(
            "levin\t{}\t{}\t{}".format(
                language, lemma, ",".join(quote(c, safe="") for c in classes)
            )
        )
    for method in sorted(state.samples):
        sample = state.samples[method]
        out.append(
            "sample\t{}\t{}\t{}".format(method, sample.seed, ",".join(sample.links))
        )
        for lid in sample.links:
            if lid in sample.verdicts:
                verdict = "correct" if sample.verdicts[lid] else "incorrect"
                out.append(f"verdict\t{method}\t{lid}\t{verdict}")
    return "".join(line + "\n" for line in out)


# ---------------------------------------------------------------------
# Record appliers: pure state transitions, shared by live commits and
# replay. They trust the record; validation happened before append.
# ---------------------------------------------------------------------

def _sense_from_dict(d: dict) -> Sense:
    return Sense(
        word=WordForm(d["language"], d["lemma"], PartOfSpeech(d["pos"])),
        synset=SynsetId(d["synset_lang"], PartOfSpeech(d["synset_pos"]), d["synset_key"]),
        method=d["method"],
        reliability=d.get("reliability"),
        status=Status(d["status"]),
    )


def _sense_to_dict(sense: Sense) -> dict:
    return {
        "language": sense.word.language,
        "lemma": sense.word.lemma,
        "pos": sense.word.pos.value,
        "synset_lang": sense.synset.language,
        "synset_pos": sense.synset.pos.value,
        "synset_key": sense.synset.key,
        "method": sense.method,
        "reliability": sense.reliability,
        "status": sense.status.value,
    }


def _link_from_dict(d: dict) -> CandidateLink:
    pos = PartOfSpeech(d["pos"])
    return CandidateLink(
        method=d["method"],
        word=WordForm(d["language"], d["lemma"], pos),
        synset=SynsetId(d["synset_lang"], pos, d["synset_key"]),
        pivot_word=(
            WordForm(d["pivot_lang"], d["pivot_lemma"], pos)
            if d.get("pivot_lemma") else None
        ),
        witnesses=tuple(d.get("witnesses", ())),
        status=Status(d["status"]),
    )


def _link_to_dict(link: CandidateLink) -> dict:
    return {
        "method": link.method,
        "language": link.word.language,
        "lemma": link.word.lemma,
        "pos": link.word.pos.value,
        "synset_lang": link.synset.language,
        "synset_key": link.synset.key,
        "pivot_lang": link.pivot_word.language if link.pivot_word else None,
        "pivot_lemma": link.pivot_word.lemma if link.pivot_word else None,
        "witnesses": list(link.witnesses),
        "status": link.status.value,
    }


def _apply_import(state: KBState, record: EditRecord) -> None:
    payload = record.after or {}
    kind = payload.get("kind")
    if kind == "languages":
        for item in payload["languages"]:
            lang = Language(item["code"], bool(item["pivot"]))
            state.languages[lang.code] = lang
        state.policy = payload.get("policy", state.policy)
    elif kind == "synsets":
        language = payload["language"]
        for item in payload["synsets"]:
            sid = SynsetId(language, PartOfSpeech(item["pos"]), item["key"])
            state.add_synset(
                Synset(sid, gloss=item["gloss"],
                       semantic_field=item["semantic_field"])
            )
        for kind_s, src, tgt in payload["relations"]:
            state.relations.add(
                Relation(
                    RelationKind(kind_s),
                    state.resolve_key(language, src),
                    state.resolve_key(language, tgt),
                )
            )
        for key in payload["base"]:
            state.base.add(state.resolve_key(language, key))
        recompute_hyponym_counts(state.synsets, state.relations)
    elif kind == "senses":
        for item in payload["senses"]:
            state.put_sense(_sense_from_dict(item))
    elif kind == "links":
        for item in payload["links"]:
            link = _link_from_dict(item)
            if link.synset not in state.synsets:
                raise UnknownEntity(f"link references unknown synset {link.synset}")
            state.links[link.link_id] = link
    elif kind == "levin":
        for item in payload["classes"]:
            key = (item["language"], item["lemma"])
            merged = set(state.levin_classes.get(key, ())) | set(item["classes"])
            state.levin_classes[key] = tuple(sorted(merged))
    elif kind == "sample":
        state.samples[payload["method"]] = conf.ValidationSample(
            method=payload["method"],
            seed=payload["seed"],
            links=tuple(payload["links"]),
        )
    elif kind == "monolingual":
        _apply_monolingual_import(state, payload)
    else:
        raise StoreCorrupt(f"unknown import payload kind {kind!r}")


def _apply_monolingual_import(state: KBState, payload: dict) -> None:
    language = payload["language"]
    pivot = state.pivot_language()
    for block in payload["blocks"]:
        pos = PartOfSpeech(block["pos"])
        key = block["key"]
        if key not in state.keys_by_lang.get(pivot, {}):
            state.add_synset(
                Synset(SynsetId(pivot, pos, key), gloss=block["gloss"])
            )
    for block in payload["blocks"]:
        sid = state.resolve_key(pivot, block["key"])
        for kind_s, target_key in block["relations"]:
            if target_key in state.keys_by_lang.get(pivot, {}):
                state.relations.add(
                    Relation(RelationKind(kind_s), sid,
                             state.resolve_key(pivot, target_key))
                )
        for lit in block["literals"]:
            state.put_sense(
                Sense(
                    word=WordForm(language, lit["lemma"], sid.pos),
                    synset=sid,
                    method="manual",
                    reliability=None,
                    status=Status.ACCEPTED,
                )
            )
    recompute_hyponym_counts(state.synsets, state.relations)


def _apply_add_sense(state: KBState, record: EditRecord) -> None:
    state.put_sense(_sense_from_dict(record.after or {}))


def _apply_edit_gloss(state: KBState, record: EditRecord) -> None:
    payload = record.after or {}
    sid = SynsetId(
        payload["synset_lang"], PartOfSpeech(payload["synset_pos"]),
        payload["synset_key"],
    )
    state.glosses[(payload["language"], sid)] = payload["text"]


def _apply_edit_word(state: KBState, record: EditRecord) -> None:
    payload = record.after or {}
    language = payload["language"]
    pos = PartOfSpeech(payload["pos"])
    old, new = payload["old_lemma"], payload["new_lemma"]
    for key in sorted(k for k in state.senses if k[:3] == (language, old, pos)):
        sense = state.senses.pop(key)
        renamed = Sense(
            word=WordForm(language, new, pos),
            synset=sense.synset,
            method=sense.method,
            reliability=sense.reliability,
            status=sense.status,
        )
        state.senses[(language, new, pos, sense.synset)] = renamed
    if pos is PartOfSpeech.VERB and (language, old) in state.levin_classes:
        classes = state.levin_classes.pop((language, old))
        merged = set(state.levin_classes.get((language, new), ())) | set(classes)
        state.levin_classes[(language, new)] = tuple(sorted(merged))


def _apply_edit_levin(state: KBState, record: EditRecord) -> None:
    payload = record.after or {}
    key = (payload["language"], payload["lemma"])
    classes = tuple(sorted(set(payload["classes"])))
    if classes:
        state.levin_classes[key] = classes
    else:
        state.levin_classes.pop(key, None)


def _apply_record_verdict(state: KBState, record: EditRecord) -> None:
    payload = record.after or {}
    method = payload["method"]
    sample = state.samples[method]
    state.samples[method] = sample.with_verdict(
        payload["link"], payload["verdict"] == "correct"
    )


def _accept_one_link(state: KBState, lid: str, reliability: Optional[float]) -> None:
    link = state.links[lid]
    state.links[lid] = CandidateLink(
        method=link.method, word=link.word, synset=link.synset,
        pivot_word=link.pivot_word, witnesses=link.witnesses,
        status=Status.ACCEPTED,
    )
    state.put_sense(
        Sense(
            word=link.word, synset=link.synset, method=link.method,
            reliability=reliability, status=Status.ACCEPTED,
        )
    )


def _apply_promote(state: KBState, record: EditRecord) -> None:
    payload = record.after or {}
    for lid in payload["links"]:
        _accept_one_link(state, lid, payload["confidence"])


def _apply_accept_link(state: KBState, record: EditRecord) -> None:
    payload = record.after or {}
    _accept_one_link(state, payload["link"], payload.get("reliability"))


def _apply_reject_link(state: KBState, record: EditRecord) -> None:
    payload = record.after or {}
    lid = payload["link"]
    link = state.links[lid]
    state.links[lid] = CandidateLink(
        method=link.method, word=link.word, synset=link.synset,
        pivot_word=link.pivot_word, witnesses=link.witnesses,
        status=Status.REJECTED,
    )
    sense_key = (link.word.language, link.word.lemma, link.word.pos, link.synset)
    existing = state.senses.get(sense_key)
    if existing is not None and existing.method == link.method:
        del state.senses[sense_key]


def _apply_export(state: KBState, record: EditRecord) -> None:
    pass  # exports mutate nothing; the record is the audit trail


_APPLIERS = {
    "import": _apply_import,
    "add_sense": _apply_add_sense,
    "edit_gloss": _apply_edit_gloss,
    "edit_word": _apply_edit_word,
    "edit_levin_class": _apply_edit_levin,
    "record_verdict": _apply_record_verdict,
    "promote_method": _apply_promote,
    "accept_link": _apply_accept_link,
    "reject_link": _apply_reject_link,
    "export": _apply_export,
}


def apply_record(state: KBState, record: EditRecord) -> None:
    _APPLIERS[record.action](state, record)
    state.versions[record.subject] = state.versions.get(record.subject, 0) + 1


def replay(records: Iterable[EditRecord]) -> KBState:
    """Fold edit records over an empty KB."""
    state = KBState()
    for record in records:
        apply_record(state, record)
    return state


class KBSnapshot:
    """Immutable point-in-time view of the KB."""

    def __init__(self, state: KBState) -> None:
        self._state = state

    @property
    def policy(self) -> str:
        return self._state.policy

    def languages(self) -> list[Language]:
        return [self._state.languages[c] for c in sorted(self._state.languages)]

    def pivot_language(self) -> str:
        return self._state.pivot_language()

    def synsets(self) -> list[Synset]:
        return self._state.synsets.sorted()

    def synset_table(self) -> SynsetTable:
        return self._state.synsets

    def get_synset(self, sid: SynsetId) -> Optional[Synset]:
        return self._state.synsets.get(sid)

    def find_synset(self, language: str, key: str) -> Optional[Synset]:
        sid = self._state.keys_by_lang.get(language, {}).get(key)
        return self._state.synsets.get(sid) if sid else None

    @property
    def relations(self) -> RelationSet:
        return self._state.relations

    def base_concepts(self) -> list[SynsetId]:
        return sorted(self._state.base)

    def gloss(self, language: str, sid: SynsetId) -> str:
        return self._state.effective_gloss(language, sid)

    def senses(self) -> list[Sense]:
        return [self._state.senses[k] for k in sorted(self._state.senses)]

    def senses_for_word(
        self, language: str, lemma: str, pos: Optional[PartOfSpeech] = None,
        status: Optional[Status] = Status.ACCEPTED,
    ) -> list[Sense]:
        out = []
        for key in sorted(self._state.senses):
            sense = self._state.senses[key]
            if sense.word.language != language or sense.word.lemma != lemma:
                continue
            if pos is not None and sense.word.pos is not pos:
                continue
            if status is not None and sense.status is not status:
                continue
            out.append(sense)
        return out

    def senses_of_synset(
        self, sid: SynsetId, status: Optional[Status] = Status.ACCEPTED
    ) -> list[Sense]:
        out = []
        for key in sorted(self._state.senses):
            sense = self._state.senses[key]
            if sense.synset != sid:
                continue
            if status is not None and sense.status is not status:
                continue
            out.append(sense)
        return out

    def links(self) -> list[CandidateLink]:
        return [self._state.links[k] for k in sorted(self._state.links)]

    def get_link(self, lid: str) -> Optional[CandidateLink]:
        return self._state.links.get(lid)

    def links_of_method(self, method: str) -> list[CandidateLink]:
        return sorted(
            (l for l in self._state.links.values() if l.method == method),
            key=CandidateLink.sort_key,
        )

    def sample(self, method: str) -> Optional[conf.ValidationSample]:
        return self._state.samples.get(method)

    def samples(self) -> dict[str, conf.ValidationSample]:
        return dict(self._state.samples)

    def levin_classes(self, language: str, lemma: str) -> tuple[str, ...]:
        return self._state.levin_classes.get((language, lemma), ())

    def confidences(self) -> dict[str, float]:
        return self._state.confidences()

    def stats_rows(self) -> list[conf.CriterionSetStats]:
        return conf.method_stats(self._state.links.values(), self.confidences())

    def version(self, entity: str) -> int:
        return self._state.versions.get(entity, 0)

    def serialize(self) -> str:
        return serialize_state(self._state)


class KBStore:
    """The writable KB handle. Safe to share across threads."""

    def __init__(self, path: Union[str, Path], fsync: bool = True) -> None:
        self.path = Path(path)
        self.path.mkdir(parents=True, exist_ok=True)
        self._fsync = fsync
        self._lock = threading.Lock()
        self._state = KBState()
        self._records: list[EditRecord] = []
        self._log_path = self.path / HISTORY_FILE
        self._recover()
        self._log_fh = open(self._log_path, "ab")

    # -- log handling ---------------------------------------------------

    def _recover(self) -> None:
        """Load the history log, truncating at most one torn trailing record."""
        if not self._log_path.exists():
            return
        raw = self._log_path.read_bytes()
        good_end = 0
        records: list[EditRecord] = []
        lines = raw.split(b"\n")
        for i, line_bytes in enumerate(lines):
            is_last = i == len(lines) - 1
            if line_bytes == b"":
                if is_last:
                    break
                raise StoreCorrupt(f"{self._log_path}: blank interior line")
            try:
                record = EditRecord.from_line(line_bytes.decode("utf-8"))
                if record.seq != len(records) + 1:
                    raise StoreCorrupt(
                        f"sequence gap: expected {len(records) + 1}, got {record.seq}"
                    )
            except (StoreCorrupt, UnicodeDecodeError, json.JSONDecodeError,
                    ValueError) as exc:
                if is_last:
                    # Torn trailing record from a crash mid-write; drop it.
                    break
                raise StoreCorrupt(f"{self._log_path}: record {i + 1}: {exc}")
            records.append(record)
            good_end += len(line_bytes) + 1
        if good_end < len(raw):
            with open(self._log_path, "r+b") as fh:
                fh.truncate(good_end)
        self._records = records
        self._state = replay(records)

    def _commit(
        self,
        actor: str,
        action: str,
        subject: str,
        after: Union[dict, Callable[[KBState], dict], None],
        before: Union[dict, Callable[[KBState], Optional[dict]], None] = None,
        expected_version: Optional[int] = None,
        validate: Optional[Callable[[KBState], None]] = None,
    ) -> EditRecord:
        """The single serialized write path: check version, validate,
        resolve payloads, append to the log (fsync), apply.

        `after`/`before` may be callables evaluated on the locked state,
        so payload resolution cannot race concurrent writers.
        """
        if not actor:
            raise LexKBError("mutations require an actor")
        with self._lock:
            if expected_version is not None:
                actual = self._state.versions.get(subject, 0)
                if actual != expected_version:
                    raise VersionConflict(subject, expected_version, actual)
            if validate is not None:
                validate(self._state)
            record = EditRecord(
                seq=len(self._records) + 1,
                timestamp=datetime.now(timezone.utc).isoformat(),
                actor=actor,
                action=action,
                subject=subject,
                before=before(self._state) if callable(before) else before,
                after=after(self._state) if callable(after) else after,
            )
            # Apply on a scratch copy first so a bad payload can never
            # leave a half-applied state or a poisoned log record.
            scratch = copy.deepcopy(self._state)
            apply_record(scratch, record)
            line = record.to_line().encode("utf-8") + b"\n"
            self._log_fh.write(line)
            self._log_fh.flush()
            if self._fsync:
                os.fsync(self._log_fh.fileno())
            self._records.append(record)
            self._state = scratch
            return record

    # -- lifecycle -------------------------------------------------------

    def save(self) -> None:
        with self._lock:
            (self.path / KB_FILE).write_text(
                serialize_state(self._state), encoding="utf-8"
            )

    def close(self) -> None:
        self.save()
        self._log_fh.close()

    def __enter__(self) -> "KBStore":
        return self

    def __exit__(self, *exc: Any) -> None:
        self.close()

    # -- reads -------------------------------------------------------------

    def snapshot(self) -> KBSnapshot:
        with self._lock:
            return KBSnapshot(copy.deepcopy(self._state))

    def history(
        self,
        actor: Optional[str] = None,
        action: Optional[str] = None,
        since: Optional[str] = None,
        until: Optional[str] = None,
    ) -> list[EditRecord]:
        with self._lock:
            records = list(self._records)
        if actor is not None:
            records = [r for r in records if r.actor == actor]
        if action is not None:
            records = [r for r in records if r.action == action]
        if since is not None:
            records = [r for r in records if r.timestamp >= since]
        if until is not None:
            records = [r for r in records if r.timestamp <= until]
        return records

    def version(self, entity: str) -> int:
        with self._lock:
            return self._state.versions.get(entity, 0)

    # -- bulk imports -------------------------------------------------------

    def register_languages(
        self, languages: Sequence[Language], actor: str, policy: str = "pivot"
    ) -> EditRecord:
        def validate(state: KBState) -> None:
            merged = {l.code: l for l in state.languages.values()}
            merged.update({l.code: l for l in languages})
            if sum(1 for l in merged.values() if l.pivot) != 1:
                raise LexKBError("exactly one language must be the pivot")

        return self._commit(
            actor, "import", "kb:languages",
            validate=validate,
            after={
                "kind": "languages",
                "languages": [
                    {"code": l.code, "pivot": l.pivot} for l in sorted(languages)
                ],
                "policy": policy,
            },
        )

    def import_synsets(self, doc: SynsetDocument, actor: str) -> EditRecord:
        canon: set[Relation] = set()
        for rel in doc.relations:
            if rel.kind in (RelationKind.HYPONYMY, RelationKind.HOLONYMY):
                continue
            if rel.kind is RelationKind.ANTONYMY and rel.target < rel.source:
                rel = Relation(rel.kind, rel.target, rel.source)
            canon.add(rel)
        return self._commit(
            actor, "import", f"kb:synsets:{doc.language}",
            after={
                "kind": "synsets",
                "language": doc.language,
                "synsets": [
                    {
                        "key": s.id.key,
                        "pos": s.id.pos.value,
                        "semantic_field": s.semantic_field,
                        "gloss": s.gloss,
                    }
                    for s in doc.synsets.sorted()
                ],
                "relations": [
                    [r.kind.value, r.source.key, r.target.key]
                    for r in sorted(canon)
                ],
                "base": [sid.key for sid in sorted(set(doc.base))],
            },
        )

    def import_pivot_senses(
        self, entries: Sequence[PivotSenseEntry], actor: str
    ) -> EditRecord:
        senses = [
            Sense(word=e.word, synset=e.synset, method="pivot",
                  reliability=None, status=Status.ACCEPTED)
            for e in sorted(set(entries))
        ]
        return self._commit(
            actor, "import", "kb:senses",
            after={"kind": "senses", "senses": [_sense_to_dict(s) for s in senses]},
        )

    def import_links(self, links: Sequence[CandidateLink], actor: str) -> EditRecord:
        ordered = sorted(set(links), key=CandidateLink.sort_key)
        return self._commit(
            actor, "import", "kb:links",
            after={"kind": "links", "links": [_link_to_dict(l) for l in ordered]},
        )

    def import_verb_links(
        self, candidates: Sequence[VerbCandidate], actor: str
    ) -> EditRecord:
        links = []
        classes: dict[tuple[str, str], set[str]] = {}
        for cand in sorted(set(candidates)):
            english_verb, levin_class = cand.via
            links.append(
                CandidateLink(
                    method="levin",
                    word=cand.target_verb,
                    synset=cand.synset,
                    pivot_word=WordForm(
                        cand.synset.language, english_verb, PartOfSpeech.VERB
                    ),
                    witnesses=(levin_class,),
                    status=cand.status,
                )
            )
            classes.setdefault(
                (cand.target_verb.language, cand.target_verb.lemma), set()
            ).add(levin_class)
        record = self.import_links(links, actor)
        if classes:
            self._commit(
                actor, "import", "kb:levin",
                after={
                    "kind": "levin",
                    "classes": [
                        {"language": lang, "lemma": lemma,
                         "classes": sorted(cls)}
                        for (lang, lemma), cls in sorted(classes.items())
                    ],
                },
            )
        return record

    # -- validation workflow -----------------------------------------------

    def draw_sample(
        self, method: str, size: Optional[int], seed: int, actor: str
    ) -> conf.ValidationSample:
        snapshot_links = self.snapshot().links_of_method(method)
        if size is None:
            size = conf.default_sample_size(len(snapshot_links))
        sample = conf.draw_sample(snapshot_links, size, seed)
        self._commit(
            actor, "import", f"sample:{method}",
            after={
                "kind": "sample",
                "method": method,
                "seed": seed,
                "links": list(sample.links),
            },
        )
        return sample

    def record_verdict(self, lid: str, verdict: str, actor: str) -> EditRecord:
        if verdict not in ("correct", "incorrect"):
            raise LexKBError(f"verdict must be correct or incorrect: {verdict!r}")
        method = parse_link_id(lid)[0]

        def validate(state: KBState) -> None:
            sample = state.samples.get(method)
            if sample is None:
                raise conf.NotInSample(f"no sample drawn for {method}")
            if lid not in sample.links:
                raise conf.NotInSample(f"link {lid!r} not in the {method} sample")

        def build_before(state: KBState) -> dict:
            sample = state.samples[method]
            if lid not in sample.verdicts:
                return {"verdict": None}
            return {"verdict": "correct" if sample.verdicts[lid] else "incorrect"}

        return self._commit(
            actor, "record_verdict", f"sample:{method}",
            after={"method": method, "link": lid, "verdict": verdict},
            before=build_before,
            validate=validate,
        )

    def promote(
        self, actor: str, threshold: float = conf.DEFAULT_THRESHOLD
    ) -> tuple[list[str], list[str]]:
        """Accept every link of each method whose confidence clears the
        threshold; insert the corresponding senses with that reliability."""
        snapshot = self.snapshot()
        confidences = snapshot.confidences()
        rows = []
        for row in snapshot.stats_rows():
            if row.links == 0:
                continue
            if row.confidence is None:
                raise conf.MissingConfidence(
                    f"method {row.method} has links but no completed sample"
                )
            rows.append(row)
        promoted, rejected = conf.promote(rows, threshold)
        for method in promoted:
            lids = [l.link_id for l in snapshot.links_of_method(method)]
            self._commit(
                actor, "promote_method", f"method:{method}",
                after={
                    "threshold": threshold,
                    "confidence": confidences[method],
                    "links": lids,
                },
            )
        return promoted, rejected

    def accept_link(
        self, lid: str, actor: str, expected_version: Optional[int] = None
    ) -> EditRecord:
        def validate(state: KBState) -> None:
            if lid not in state.links:
                raise UnknownEntity(f"unknown link {lid!r}")

        # Reliability of a hand-accepted link: the method's sampled
        # confidence when one exists, else 100.0 (it was hand-validated).
        method = parse_link_id(lid)[0]
        return self._commit(
            actor, "accept_link", f"link:{lid}",
            after=lambda state: {
                "link": lid,
                "reliability": state.confidences().get(method, 100.0),
            },
            before=lambda state: {"status": state.links[lid].status.value},
            expected_version=expected_version,
            validate=validate,
        )

    def reject_link(
        self, lid: str, actor: str, expected_version: Optional[int] = None
    ) -> EditRecord:
        def validate(state: KBState) -> None:
            if lid not in state.links:
                raise UnknownEntity(f"unknown link {lid!r}")

        return self._commit(
            actor, "reject_link", f"link:{lid}",
            after={"link": lid},
            before=lambda state: {"status": state.links[lid].status.value},
            expected_version=expected_version,
            validate=validate,
        )

    # -- interactive edits ---------------------------------------------------

    def edit_gloss(
        self, language: str, synset_key: str, text: str, actor: str,
        expected_version: Optional[int] = None,
    ) -> EditRecord:
        def validate(state: KBState) -> None:
            if language not in state.languages:
                raise UnknownEntity(f"unknown language {language!r}")
            if language == state.pivot_language():
                raise PivotImmutable("pivot-language glosses cannot be edited")
            state.resolve_key(state.pivot_language(), synset_key)

        def build_after(state: KBState) -> dict:
            sid = state.resolve_key(state.pivot_language(), synset_key)
            return {
                "language": language,
                "synset_lang": sid.language,
                "synset_pos": sid.pos.value,
                "synset_key": sid.key,
                "text": text,
            }

        def build_before(state: KBState) -> dict:
            sid = state.resolve_key(state.pivot_language(), synset_key)
            return {"text": state.effective_gloss(language, sid)}

        return self._commit(
            actor, "edit_gloss", f"gloss:{language}:{_q(synset_key)}",
            after=build_after,
            before=build_before,
            expected_version=expected_version,
            validate=validate,
        )

    def edit_word(
        self, language: str, pos: PartOfSpeech, lemma: str, new_lemma: str,
        actor: str, expected_version: Optional[int] = None,
    ) -> EditRecord:
        normalized = normalize_lemma(new_lemma)

        def validate(state: KBState) -> None:
            if language not in state.languages:
                raise UnknownEntity(f"unknown language {language!r}")
            if language == state.pivot_language():
                raise PivotImmutable("pivot-language words cannot be edited")
            old_keys = [k for k in state.senses if k[:3] == (language, lemma, pos)]
            if not old_keys:
                raise UnknownEntity(f"no senses for {language}:{pos}:{lemma}")
            for key in old_keys:
                target = (language, normalized, pos, key[3])
                if target in state.senses:
                    raise LexKBError(
                        f"rename collides with existing sense {target}"
                    )

        return self._commit(
            actor, "edit_word", f"word:{language}:{pos.value}:{_q(lemma)}",
            after={
                "language": language,
                "pos": pos.value,
                "old_lemma": lemma,
                "new_lemma": normalized,
            },
            before={"lemma": lemma},
            expected_version=expected_version,
            validate=validate,
        )

    def edit_levin_classes(
        self, language: str, lemma: str, classes: Sequence[str], actor: str,
        expected_version: Optional[int] = None,
    ) -> EditRecord:
        def validate(state: KBState) -> None:
            if language not in state.languages:
                raise UnknownEntity(f"unknown language {language!r}")
            if language == state.pivot_language():
                raise PivotImmutable(
                    "pivot-language Levin classes come from the source lists"
                )

        return self._commit(
            actor, "edit_levin_class", f"levin:{language}:{_q(lemma)}",
            after={
                "language": language,
                "lemma": lemma,
                "classes": sorted(set(classes)),
            },
            before=lambda state: {
                "classes": list(state.levin_classes.get((language, lemma), ()))
            },
            expected_version=expected_version,
            validate=validate,
        )

    def add_sense(self, sense: Sense, actor: str,
                  expected_version: Optional[int] = None) -> EditRecord:
        def validate(state: KBState) -> None:
            if sense.word.language not in state.languages:
                raise UnknownEntity(f"unknown language {sense.word.language!r}")
            if sense.synset not in state.synsets:
                raise UnknownEntity(f"unknown synset {sense.synset}")

        subject = "sense:{}:{}:{}:{}".format(
            sense.word.language, sense.word.pos.value, _q(sense.word.lemma),
            _q(sense.synset.key),
        )
        return self._commit(
            actor, "add_sense", subject,
            after=_sense_to_dict(sense),
            expected_version=expected_version,
            validate=validate,
        )

    # -- export ----------------------------------------------------------

    def export_monolingual(self, language: str, actor: str) -> str:
        snapshot = self.snapshot()
        if all(l.code != language for l in snapshot.languages()):
            raise UnknownLanguage(f"unknown language {language!r}")
        text = export_monolingual_text(snapshot, language)
        self._commit(
            actor, "export", f"export:{language}",
            after={"language": language, "bytes": len(text.encode("utf-8"))},
        )
        return text

    def import_monolingual(self, language: str, text: str, actor: str) -> EditRecord:
        blocks = parse_monolingual_export(text)
        return self._commit(
            actor, "import", f"import:monolingual:{language}",
            after={"kind": "monolingual", "language": language, "blocks": blocks},
        )


def export_monolingual_text(snapshot: KBSnapshot, language: str) -> str:
    """Render the monolingual export: one block per pivot synset that has
    at least one accepted sense in `language`."""
    pivot = snapshot.pivot_language()
    by_synset: dict[SynsetId, list[Sense]] = {}
    for sense in snapshot.senses():
        if sense.word.language != language or sense.status is not Status.ACCEPTED:
            continue
        if sense.synset.language != pivot:
            continue
        by_synset.setdefault(sense.synset, []).append(sense)

    exported = set(by_synset)
    out: list[str] = []
    for sid in sorted(exported):
        out.append(f"@synset {sid.key} {sid.pos}")
        for sense in sorted(by_synset[sid], key=lambda s: s.word.lemma):
            rel_s = "-" if sense.reliability is None else f"{sense.reliability:.1f}"
            out.append(f"lit\t{sense.word.lemma}\t{rel_s}")
        out.append(f"gloss\t{snapshot.gloss(language, sid)}")
        edges = [
            rel for rel in snapshot.relations
            if rel.source == sid and rel.target in exported
        ]
        for rel in sorted(edges):
            out.append(f"rel\t{rel.kind}\t{rel.target.key}")
        out.append("")
    return "".join(line + "\n" for line in out)


def parse_monolingual_export(text: str) -> list[dict]:
    """Parse an export back into block payloads (for re-import)."""
    blocks: list[dict] = []
    current: Optional[dict] = None
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            current = None
            continue
        if line.startswith("@synset "):
            rest = line[len("@synset "):]
            key, _, pos_s = rest.rpartition(" ")
            if not key:
                raise LexKBError(f"export line {line_no}: bad @synset header")
            current = {
                "key": key,
                "pos": pos_s,
                "literals": [],
                "gloss": "",
                "relations": [],
            }
            blocks.append(current)
            continue
        if current is None:
            raise LexKBError(f"export line {line_no}: record outside block")
        fields = line.split("\t")
        if fields[0] == "lit" and len(fields) == 3:
            current["literals"].append(
                {
                    "lemma": fields[1],
                    "reliability": None if fields[2] == "-" else float(fields[2]),
                }
            )
        elif fields[0] == "gloss" and len(fields) == 2:
            current["gloss"] = fields[1]
        elif fields[0] == "rel" and len(fields) == 3:
            current["relations"].append([fields[1], fields[2]])
        else:
            raise LexKBError(f"export line {line_no}: bad record {line!r}")
    return blocks

"""Consultation over KB snapshots: start-point resolution, relation-path
traversal, base-concept connectivity, and text-file resource lookup.

Everything here is read-only over an immutable snapshot, so callers may
run queries in parallel with ongoing edits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .model import (
    HIERARCHY_UP,
    LexKBError,
    PartOfSpeech,
    RelationKind,
    Status,
    SynsetId,
    normalize_lemma,
)
from .store import KBSnapshot


class NotFound(LexKBError):
    pass


class AmbiguousIndex(LexKBError):
    pass


class UnknownRelation(LexKBError):
    pass


class NoBaseConcepts(LexKBError):
    pass


class UnknownResource(LexKBError):
    pass


class ResourceUnreadable(LexKBError):
    pass


# ---------------------------------------------------------------------
# Start-point resolution
# ---------------------------------------------------------------------

def resolve_start(snapshot: KBSnapshot, language: str, token: str) -> list[SynsetId]:
    """Resolve a consult start specifier to synsets.

    A token is tried as a synset key first, then as `lemma#k` (1-based
    sense index over that word's accepted senses in sorted synset-key
    order), then as a bare lemma (all accepted senses).
    """
    token = token.strip()
    if not token:
        raise NotFound("empty start token")

    pivot = snapshot.pivot_language()
    synset = snapshot.find_synset(pivot, token)
    if synset is None and language != pivot:
        synset = snapshot.find_synset(language, token)
    if synset is not None:
        return [synset.id]

    lemma, sep, index_s = token.rpartition("#")
    if sep and lemma and index_s.isdigit():
        sids = _sense_synsets(snapshot, language, lemma)
        if not sids:
            raise NotFound(f"no accepted senses for {language}:{lemma!r}")
        k = int(index_s)
        if not 1 <= k <= len(sids):
            raise AmbiguousIndex(
                f"{lemma!r} has {len(sids)} senses; index {k} is out of range"
            )
        return [sids[k - 1]]

    sids = _sense_synsets(snapshot, language, token)
    if not sids:
        raise NotFound(f"{token!r} is neither a synset key nor a known word")
    return sids


def _sense_synsets(snapshot: KBSnapshot, language: str, lemma: str) -> list[SynsetId]:
    normalized = normalize_lemma(lemma)
    senses = snapshot.senses_for_word(language, normalized, status=Status.ACCEPTED)
    return sorted({s.synset for s in senses})


# ---------------------------------------------------------------------
# Relation-path traversal
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class PathNode:
    """One synset on a traversal path, with its multilingual literals."""

    synset: SynsetId
    gloss: str
    literals: dict[str, list[tuple[str, Optional[float]]]]
    depth: int
    children: tuple["PathNode", ...] = ()

    def to_dict(self) -> dict:
        return {
            "synset": self.synset.key,
            "pos": self.synset.pos.value,
            "gloss": self.gloss,
            "depth": self.depth,
            "literals": {
                lang: [
                    {"lemma": lemma, "reliability": reliability}
                    for lemma, reliability in lits
                ]
                for lang, lits in self.literals.items()
            },
            "children": [child.to_dict() for child in self.children],
        }


def _node_literals(
    snapshot: KBSnapshot, sid: SynsetId
) -> dict[str, list[tuple[str, Optional[float]]]]:
    literals: dict[str, list[tuple[str, Optional[float]]]] = {}
    for sense in snapshot.senses_of_synset(sid, status=Status.ACCEPTED):
        literals.setdefault(sense.word.language, []).append(
            (sense.word.lemma, sense.reliability)
        )
    return {lang: sorted(lits) for lang, lits in sorted(literals.items())}


def parse_relation(name: str) -> RelationKind:
    try:
        return RelationKind(name)
    except ValueError:
        raise UnknownRelation(f"unknown relation kind {name!r}") from None


def traverse(
    snapshot: KBSnapshot,
    start: SynsetId,
    kind: Union[RelationKind, str],
    max_depth: int,
) -> PathNode:
    """Breadth-first tree along one relation kind from `start`.

    Each synset appears at most once (at its shortest depth); ties are
    broken by sorted synset id, so the tree is deterministic.
    """
    if isinstance(kind, str):
        kind = parse_relation(kind)
    if max_depth < 0:
        raise LexKBError("max_depth must be >= 0")
    if snapshot.get_synset(start) is None:
        raise NotFound(f"unknown synset {start}")

    visited = {start}
    children_of: dict[SynsetId, list[SynsetId]] = {start: []}
    frontier = [start]
    depth = 0
    while frontier and depth < max_depth:
        next_frontier: list[SynsetId] = []
        for sid in frontier:
            for target in sorted(snapshot.relations.targets(kind, sid)):
                if target in visited:
                    continue
                visited.add(target)
                children_of[sid].append(target)
                children_of[target] = []
                next_frontier.append(target)
        frontier = next_frontier
        depth += 1

    def build(sid: SynsetId, depth: int) -> PathNode:
        synset = snapshot.get_synset(sid)
        return PathNode(
            synset=sid,
            gloss=synset.gloss if synset else "",
            literals=_node_literals(snapshot, sid),
            depth=depth,
            children=tuple(
                build(child, depth + 1) for child in children_of[sid]
            ),
        )

    return build(start, 0)


def render_path_tree(root: PathNode) -> str:
    """Stable plain-text rendering of a traversal tree (two-space indent
    per depth; per-language literal lists; reliabilities in parens)."""
    lines: list[str] = []

    def fmt_literals(node: PathNode) -> str:
        parts = []
        for lang, lits in node.literals.items():
            rendered = ", ".join(
                lemma if reliability is None else f"{lemma} ({reliability:.1f})"
                for lemma, reliability in lits
            )
            parts.append(f"{lang}: {rendered}")
        return " | ".join(parts) if parts else "(no literals)"

    def walk(node: PathNode) -> None:
        indent = "  " * node.depth
        lines.append(f"{indent}{node.synset.key}  {fmt_literals(node)}")
        for child in node.children:
            walk(child)

    walk(root)
    return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------
# Base-concept connectivity
# ---------------------------------------------------------------------

def check_base_connectivity(
    snapshot: KBSnapshot, pos: PartOfSpeech
) -> list[SynsetId]:
    """All synsets of `pos` that cannot reach a declared base concept by
    climbing the hierarchy (hypernymy for nouns, troponymy for verbs).
    An empty result means the hierarchy is well-anchored.
    """
    up = HIERARCHY_UP.get(pos)
    if up is None:
        raise NoBaseConcepts(f"no hierarchy is defined for pos {pos}")
    bases = [sid for sid in snapshot.base_concepts() if sid.pos is pos]
    if not bases:
        raise NoBaseConcepts(f"no base concepts declared for pos {pos}")

    # Reverse reachability: walk down from the base set instead of up
    # from every synset.
    reverse: dict[SynsetId, list[SynsetId]] = {}
    for rel in snapshot.relations.of_kind(up):
        reverse.setdefault(rel.target, []).append(rel.source)

    connected = set(bases)
    stack = list(bases)
    while stack:
        sid = stack.pop()
        for source in reverse.get(sid, ()):
            if source not in connected:
                connected.add(source)
                stack.append(source)

    return sorted(
        s.id for s in snapshot.synsets()
        if s.id.pos is pos and s.id not in connected
    )


# ---------------------------------------------------------------------
# Lexical-resource lookup
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class ResourceRegistry:
    """Resource id → text file path, loaded from a TSV config file."""

    paths: dict[str, Path] = field(default_factory=dict)

    @classmethod
    def load(cls, config_path: Union[str, Path]) -> "ResourceRegistry":
        config_path = Path(config_path)
        paths: dict[str, Path] = {}
        try:
            text = config_path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ResourceUnreadable(f"cannot read {config_path}: {exc}") from exc
        for line_no, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 2 or not fields[0] or not fields[1]:
                raise LexKBError(
                    f"{config_path}:{line_no}: expected `id<TAB>path`"
                )
            target = Path(fields[1])
            if not target.is_absolute():
                target = config_path.parent / target
            paths[fields[0]] = target
        return cls(paths)

    def ids(self) -> list[str]:
        return sorted(self.paths)


def lookup_resource(
    registry: ResourceRegistry, resource_id: str, headword: str
) -> list[str]:
    """All lines of the resource whose first tab field equals the
    normalized headword, verbatim and in file order."""
    path = registry.paths.get(resource_id)
    if path is None:
        raise UnknownResource(f"unknown resource {resource_id!r}")
    wanted = normalize_lemma(headword)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ResourceUnreadable(f"cannot read {path}: {exc}") from exc
    return [
        line for line in text.splitlines()
        if line.split("\t", 1)[0] == wanted
    ]

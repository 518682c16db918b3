"""HTTP facade over the KB: thin, stateless adapters from endpoints to
module operations.

Identity is a plain `X-Actor` header recorded into the edit history; there
is no authentication. The service is meant for trusted, single-lab use.
"""

from __future__ import annotations

from contextlib import asynccontextmanager
from pathlib import Path
from typing import AsyncIterator, Optional
from urllib.parse import unquote

from fastapi import Body, FastAPI, Header, HTTPException, Query, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import confidence as conf
from . import query
from .ingest import (
    BilingualEntry,
    DanglingRelation,
    PivotSenseEntry,
    load_bilingual,
    load_levin_lists,
    load_pivot_senses,
)
from .links import CandidateLink, generate_all, parse_link_id
from .model import LexKBError, PartOfSpeech, Status, WordForm
from .query import ResourceRegistry
from .store import (
    KBSnapshot,
    KBStore,
    PivotImmutable,
    StoreCorrupt,
    UnknownEntity,
    UnknownLanguage,
    VersionConflict,
    _q,
)
from .verbs import generate_verb_links

DEFAULT_LIMIT = 200

_NOT_FOUND = (
    UnknownEntity,
    UnknownLanguage,
    query.NotFound,
    query.UnknownResource,
    query.NoBaseConcepts,
)


class LinksGenerateBody(BaseModel):
    source_lang: str
    bilingual_path: Optional[str] = None
    pivot_senses_path: Optional[str] = None
    pairs: Optional[list[tuple[str, str]]] = None  # (source lemma, pivot lemma)
    senses: Optional[list[tuple[str, str]]] = None  # (pivot lemma, synset key)


class VerbsGenerateBody(BaseModel):
    target_lang: str
    verbs_path: str
    senses_path: str


class SampleBody(BaseModel):
    method: str
    size: Optional[int] = None
    seed: Optional[int] = None  # omitted: return the existing sample


class VerdictBody(BaseModel):
    link: str
    verdict: str


class PromoteBody(BaseModel):
    threshold: float = conf.DEFAULT_THRESHOLD


class EditBody(BaseModel):
    expected_version: int
    text: Optional[str] = None
    new_lemma: Optional[str] = None
    classes: Optional[list[str]] = None
    status: Optional[str] = None


def _word_dict(word) -> dict:
    return {"language": word.language, "lemma": word.lemma, "pos": word.pos.value}


def _link_row(snapshot: KBSnapshot, link: CandidateLink,
              verdict: Optional[bool] = None) -> dict:
    synset = snapshot.get_synset(link.synset)
    return {
        "id": link.link_id,
        "method": link.method,
        "word": _word_dict(link.word),
        "pivot_word": _word_dict(link.pivot_word) if link.pivot_word else None,
        "synset": {
            "key": link.synset.key,
            "pos": link.synset.pos.value,
            "gloss": synset.gloss if synset else "",
        },
        "witnesses": list(link.witnesses),
        "status": link.status.value,
        "verdict": (
            None if verdict is None else ("correct" if verdict else "incorrect")
        ),
        "version": snapshot.version(f"link:{link.link_id}"),
    }


def _sample_payload(snapshot: KBSnapshot, method: str) -> dict:
    sample = snapshot.sample(method)
    if sample is None:
        raise UnknownEntity(f"no sample drawn for method {method!r}")
    rows = []
    for lid in sample.links:
        link = snapshot.get_link(lid)
        if link is None:
            continue
        rows.append(_link_row(snapshot, link, sample.verdicts.get(lid)))
    done = len(sample.verdicts)
    payload = {
        "method": method,
        "seed": sample.seed,
        "size": len(sample.links),
        "done": done,
        "links": rows,
    }
    if sample.complete:
        payload["confidence"] = conf.extrapolate_confidence(sample)
    return payload


def _record_dict(record) -> dict:
    return {
        "seq": record.seq,
        "timestamp": record.timestamp,
        "actor": record.actor,
        "action": record.action,
        "subject": record.subject,
        "before": record.before,
        "after": record.after,
    }


def create_app(
    store: Optional[KBStore],
    resources: Optional[ResourceRegistry] = None,
    frontend_dir: Optional[Path] = None,
    close_store_on_shutdown: bool = False,
) -> FastAPI:
    @asynccontextmanager
    async def lifespan(_app: FastAPI) -> AsyncIterator[None]:
        try:
            yield
        finally:
            if close_store_on_shutdown and store is not None:
                store.close()

    app = FastAPI(title="wnforge", version="0.1.0", lifespan=lifespan)
    registry = resources or ResourceRegistry()

    def kb() -> KBStore:
        if store is None:
            raise StoreCorrupt("service started without a store")
        return store

    @app.exception_handler(LexKBError)
    async def _domain_error(request: Request, exc: LexKBError) -> JSONResponse:
        if isinstance(exc, VersionConflict):
            return JSONResponse(
                status_code=409,
                content={
                    "detail": str(exc),
                    "entity": exc.entity,
                    "current_version": exc.actual,
                },
            )
        if isinstance(exc, _NOT_FOUND):
            return JSONResponse(status_code=404, content={"detail": str(exc)})
        if isinstance(exc, (StoreCorrupt, query.ResourceUnreadable)):
            return JSONResponse(status_code=500, content={"detail": str(exc)})
        # Everything else in the domain hierarchy is a validation failure
        # (PivotImmutable, bad POS, parse errors, sampling errors, ...).
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    def require_actor(actor: Optional[str]) -> str:
        if not actor or not actor.strip():
            raise HTTPException(
                status_code=400, detail="mutating requests require an X-Actor header"
            )
        return actor.strip()

    # -- consult -------------------------------------------------------

    @app.get("/api/languages")
    def get_languages() -> dict:
        snapshot = kb().snapshot()
        return {
            "languages": [
                {"code": l.code, "pivot": l.pivot} for l in snapshot.languages()
            ],
            "policy": snapshot.policy,
        }

    @app.get("/api/synsets/{key}")
    def get_synset(key: str) -> dict:
        snapshot = kb().snapshot()
        synset = snapshot.find_synset(snapshot.pivot_language(), key)
        if synset is None:
            raise UnknownEntity(f"unknown synset key {key!r}")
        sid = synset.id
        senses: dict[str, list[dict]] = {}
        for sense in snapshot.senses_of_synset(sid, status=None):
            senses.setdefault(sense.word.language, []).append(
                {
                    "lemma": sense.word.lemma,
                    "method": sense.method,
                    "reliability": sense.reliability,
                    "status": sense.status.value,
                }
            )
        return {
            "key": sid.key,
            "pos": sid.pos.value,
            "semantic_field": synset.semantic_field,
            "direct_hyponyms": synset.direct_hyponyms,
            "total_hyponyms": synset.total_hyponyms,
            "base": sid in set(snapshot.base_concepts()),
            "glosses": {
                l.code: snapshot.gloss(l.code, sid) for l in snapshot.languages()
            },
            "gloss_versions": {
                l.code: snapshot.version(f"gloss:{l.code}:{_q(sid.key)}")
                for l in snapshot.languages()
            },
            "senses": senses,
            "relations": [
                {"kind": rel.kind.value, "target": rel.target.key}
                for rel in snapshot.relations.sorted()
                if rel.source == sid
            ],
        }

    @app.get("/api/consult")
    def consult(
        lang: str,
        start: str,
        relation: str,
        depth: int = Query(default=3, ge=0),
    ) -> dict:
        snapshot = kb().snapshot()
        kind = query.parse_relation(relation)
        roots = [
            query.traverse(snapshot, sid, kind, depth).to_dict()
            for sid in query.resolve_start(snapshot, lang, start)
        ]
        return {"lang": lang, "start": start, "relation": relation,
                "depth": depth, "roots": roots}

    @app.get("/api/resources/{resource_id}/{headword}")
    def get_resource(resource_id: str, headword: str) -> dict:
        entries = query.lookup_resource(registry, resource_id, headword)
        return {"resource": resource_id, "headword": headword, "entries": entries}

    @app.get("/api/report/class-methods")
    def class_methods_report() -> dict:
        snapshot = kb().snapshot()
        rows = snapshot.stats_rows()
        return {
            "rows": [
                {
                    "method": r.method,
                    "links": r.links,
                    "synsets": r.synsets,
                    "words": r.words,
                    "confidence": r.confidence,
                }
                for r in rows
            ]
        }

    @app.get("/api/history")
    def get_history(
        actor: Optional[str] = None,
        action: Optional[str] = None,
        since: Optional[str] = None,
        until: Optional[str] = None,
        offset: int = Query(default=0, ge=0),
        limit: int = Query(default=DEFAULT_LIMIT, ge=1),
    ) -> dict:
        records = kb().history(actor=actor, action=action, since=since, until=until)
        page = records[offset:offset + limit]
        return {
            "total": len(records),
            "offset": offset,
            "limit": limit,
            "records": [_record_dict(r) for r in page],
        }

    # -- generation ------------------------------------------------------

    @app.post("/api/links/generate")
    def links_generate(
        body: LinksGenerateBody,
        x_actor: Optional[str] = Header(default=None),
    ) -> dict:
        actor = require_actor(x_actor)
        handle = kb()
        snapshot = handle.snapshot()
        pivot = snapshot.pivot_language()

        if body.bilingual_path is not None:
            entries, _ = load_bilingual(body.bilingual_path, body.source_lang, pivot)
        elif body.pairs is not None:
            entries = sorted({
                BilingualEntry(
                    WordForm(body.source_lang, src, PartOfSpeech.NOUN),
                    WordForm(pivot, piv, PartOfSpeech.NOUN),
                )
                for src, piv in body.pairs
            })
        else:
            raise HTTPException(422, "provide bilingual_path or pairs")

        if body.pivot_senses_path is not None:
            sense_entries, _ = load_pivot_senses(body.pivot_senses_path, pivot)
        elif body.senses is not None:
            sense_entries = []
            for lemma, key in body.senses:
                synset = snapshot.find_synset(pivot, key)
                if synset is None:
                    raise DanglingRelation(f"unknown synset key {key!r}")
                sense_entries.append(
                    PivotSenseEntry(
                        WordForm(pivot, lemma, PartOfSpeech.NOUN), synset.id
                    )
                )
            sense_entries = sorted(set(sense_entries))
        else:
            raise HTTPException(422, "provide pivot_senses_path or senses")

        links = generate_all(entries, sense_entries, body.source_lang)
        handle.import_links(links, actor=actor)
        by_method: dict[str, int] = {}
        for link in links:
            by_method[link.method] = by_method.get(link.method, 0) + 1
        return {"generated": len(links), "by_method": by_method}

    @app.post("/api/verbs/generate")
    def verbs_generate(
        body: VerbsGenerateBody,
        x_actor: Optional[str] = Header(default=None),
    ) -> dict:
        actor = require_actor(x_actor)
        handle = kb()
        snapshot = handle.snapshot()
        verbs, senses, warnings = load_levin_lists(
            body.verbs_path, body.senses_path,
            pivot_lang=snapshot.pivot_language(),
        )
        candidates = generate_verb_links(verbs, senses, body.target_lang)
        handle.import_verb_links(candidates, actor=actor)
        return {"generated": len(candidates), "warnings": warnings}

    # -- validation workflow ----------------------------------------------

    @app.post("/api/validate/samples")
    def validate_samples(
        body: SampleBody,
        x_actor: Optional[str] = Header(default=None),
    ) -> dict:
        actor = require_actor(x_actor)
        handle = kb()
        if body.seed is not None:
            handle.draw_sample(body.method, body.size, body.seed, actor=actor)
        return _sample_payload(handle.snapshot(), body.method)

    @app.post("/api/validate/verdicts")
    def validate_verdict(
        body: VerdictBody,
        x_actor: Optional[str] = Header(default=None),
    ) -> dict:
        actor = require_actor(x_actor)
        handle = kb()
        handle.record_verdict(body.link, body.verdict, actor=actor)
        snapshot = handle.snapshot()
        method = parse_link_id(body.link)[0]
        sample = snapshot.sample(method)
        payload = {
            "method": method,
            "link": body.link,
            "verdict": body.verdict,
            "done": len(sample.verdicts) if sample else 0,
            "size": len(sample.links) if sample else 0,
        }
        if sample is not None and sample.complete:
            payload["confidence"] = conf.extrapolate_confidence(sample)
        return payload

    @app.post("/api/promote")
    def promote(
        body: PromoteBody = Body(default=PromoteBody()),
        x_actor: Optional[str] = Header(default=None),
    ) -> dict:
        actor = require_actor(x_actor)
        promoted, rejected = kb().promote(actor=actor, threshold=body.threshold)
        return {"threshold": body.threshold, "promoted": promoted,
                "rejected": rejected}

    # -- edits ----------------------------------------------------------

    @app.put("/api/edits/{entity:path}")
    def put_edit(
        entity: str,
        body: EditBody,
        x_actor: Optional[str] = Header(default=None),
    ) -> dict:
        actor = require_actor(x_actor)
        handle = kb()
        record = _dispatch_edit(handle, entity, body, actor)
        return {
            "seq": record.seq,
            "entity": record.subject,
            "action": record.action,
            "version": handle.version(record.subject),
        }

    # -- static console ----------------------------------------------------

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        app.mount(
            "/", StaticFiles(directory=str(frontend_dir), html=True),
            name="console",
        )

    return app


def _dispatch_edit(handle: KBStore, entity: str, body: EditBody,
                   actor: str):
    kind, _, rest = entity.partition(":")
    if kind == "gloss":
        language, _, key = rest.partition(":")
        if body.text is None:
            raise HTTPException(422, "gloss edits require `text`")
        return handle.edit_gloss(
            language, unquote(key), body.text, actor,
            expected_version=body.expected_version,
        )
    if kind == "word":
        try:
            language, pos_s, lemma = rest.split(":", 2)
            pos = PartOfSpeech(pos_s)
        except ValueError:
            raise HTTPException(422, f"bad word entity {entity!r}") from None
        if body.new_lemma is None:
            raise HTTPException(422, "word edits require `new_lemma`")
        return handle.edit_word(
            language, pos, unquote(lemma), body.new_lemma, actor,
            expected_version=body.expected_version,
        )
    if kind == "levin":
        language, _, lemma = rest.partition(":")
        if body.classes is None:
            raise HTTPException(422, "levin edits require `classes`")
        return handle.edit_levin_classes(
            language, unquote(lemma), body.classes, actor,
            expected_version=body.expected_version,
        )
    if kind == "link":
        if body.status == Status.ACCEPTED.value:
            return handle.accept_link(
                rest, actor, expected_version=body.expected_version
            )
        if body.status == Status.REJECTED.value:
            return handle.reject_link(
                rest, actor, expected_version=body.expected_version
            )
        raise HTTPException(422, "link edits require status accepted|rejected")
    raise HTTPException(422, f"unknown entity kind {kind!r}")


def build_schema() -> dict:
    """The endpoint contract, as an OpenAPI document (store-independent)."""
    return create_app(store=None).openapi()


def serve(
    store_dir: str,
    port: int = 8000,
    host: str = "127.0.0.1",
    resources_path: Optional[str] = None,
    frontend_dir: Optional[str] = None,
) -> None:
    import uvicorn

    registry = (
        ResourceRegistry.load(resources_path) if resources_path
        else ResourceRegistry()
    )
    store = KBStore(store_dir)
    if frontend_dir is None:
        bundled = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        frontend_dir = str(bundled) if bundled.is_dir() else None
    # Snapshot during the ASGI shutdown phase: after handling a fatal
    # signal, uvicorn re-raises it with the default handler restored, so
    # code after uvicorn.run() never runs on SIGTERM.
    app = create_app(
        store, resources=registry,
        frontend_dir=Path(frontend_dir) if frontend_dir else None,
        close_store_on_shutdown=True,
    )
    try:
        uvicorn.run(app, host=host, port=port)
    finally:
        store.close()

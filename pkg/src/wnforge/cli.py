"""Command-line entry point.

Subcommands cover the whole workflow: store initialization, file imports,
link generation, sample validation, reporting, promotion, consultation,
integrity checks, export, history, and the HTTP service.

The store directory comes from `--store`, overridden by the WNFORGE_STORE
environment variable when set.
"""

from __future__ import annotations

import argparse
import getpass
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence
from urllib.parse import quote

from . import confidence as conf
from . import query
from .ingest import load_bilingual, load_levin_lists, load_pivot_senses, load_synsets
from .links import dump_links, generate_all
from .model import Language, LexKBError, PartOfSpeech
from .query import ResourceRegistry
from .store import KBStore
from .verbs import dump_verb_links, generate_verb_links, verb_totals


def _store_dir(args: argparse.Namespace) -> str:
    env = os.environ.get("WNFORGE_STORE")
    store = env or getattr(args, "store", None)
    if not store:
        raise LexKBError("no store directory: pass --store or set WNFORGE_STORE")
    return store


def _actor(args: argparse.Namespace) -> str:
    if getattr(args, "actor", None):
        return args.actor
    env = os.environ.get("WNFORGE_ACTOR")
    if env:
        return env
    try:
        return getpass.getuser()
    except Exception:
        return "cli"


def _open_store(args: argparse.Namespace) -> KBStore:
    return KBStore(_store_dir(args), fsync=not getattr(args, "no_fsync", False))


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--store", help="store directory (or WNFORGE_STORE)")
    parser.add_argument("--actor", help="user id recorded in the edit history")
    parser.add_argument(
        "--no-fsync", action="store_true",
        help="skip fsync on commit (faster, less durable)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wnforge",
        description="Multilingual WordNet construction and maintenance toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init", help="create a store and register languages")
    _add_common(p)
    p.add_argument("--pivot", required=True, help="pivot language code")
    p.add_argument(
        "--lang", action="append", default=[], metavar="CODE",
        help="non-pivot language code (repeatable)",
    )
    p.set_defaults(func=cmd_init)

    p = sub.add_parser("import", help="load an input file into the store")
    _add_common(p)
    p.add_argument("kind", choices=["synsets", "senses", "monolingual"])
    p.add_argument("path")
    p.add_argument("--lang", help="language of the file (synsets, monolingual)")
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("links", help="noun link generation")
    links_sub = p.add_subparsers(dest="links_command", required=True)
    g = links_sub.add_parser("generate", help="run the class methods")
    _add_common(g)
    g.add_argument("--bilingual", required=True, metavar="F")
    g.add_argument("--senses", required=True, metavar="F",
                   help="pivot (lemma, synset) pair file")
    g.add_argument("--lang", required=True, help="source (non-pivot) language")
    g.add_argument("--out", metavar="FILE", help="write generated links as TSV")
    g.set_defaults(func=cmd_links_generate)

    p = sub.add_parser("verbs", help="verb link generation")
    verbs_sub = p.add_subparsers(dest="verbs_command", required=True)
    g = verbs_sub.add_parser("generate", help="join the two Levin lists")
    _add_common(g)
    g.add_argument("--verbs", required=True, metavar="F")
    g.add_argument("--senses", required=True, metavar="F")
    g.add_argument("--lang", required=True, help="target language")
    g.add_argument("--out", metavar="FILE", help="write candidates as TSV")
    g.set_defaults(func=cmd_verbs_generate)

    p = sub.add_parser("validate", help="sample-based link validation")
    val_sub = p.add_subparsers(dest="validate_command", required=True)
    s = val_sub.add_parser("sample", help="draw a validation sample")
    _add_common(s)
    s.add_argument("--method", required=True)
    s.add_argument("--size", type=int, help="links to draw (default 3%%, min 30)")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_validate_sample)
    v = val_sub.add_parser("verdict", help="record one verdict")
    _add_common(v)
    v.add_argument("--link", required=True, metavar="ID")
    group = v.add_mutually_exclusive_group(required=True)
    group.add_argument("--correct", action="store_true")
    group.add_argument("--incorrect", action="store_true")
    v.set_defaults(func=cmd_validate_verdict)

    p = sub.add_parser("report", help="statistics reports")
    p.add_argument("report_kind", choices=["class-methods", "verbs"])
    _add_common(p)
    p.add_argument("--format", choices=["tsv", "markdown"], default="tsv")
    p.add_argument("--lang", help="restrict verb totals to one language")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("promote", help="accept links of confident methods")
    _add_common(p)
    p.add_argument("--threshold", type=float, default=conf.DEFAULT_THRESHOLD)
    p.set_defaults(func=cmd_promote)

    p = sub.add_parser("consult", help="traverse the hierarchy from a start point")
    _add_common(p)
    p.add_argument("--lang", required=True)
    p.add_argument("--start", required=True,
                   help="synset key, lemma, or lemma#k")
    p.add_argument("--relation", required=True)
    p.add_argument("--depth", type=int, default=5)
    p.set_defaults(func=cmd_consult)

    p = sub.add_parser("check", help="KB integrity checks")
    p.add_argument("check_kind", choices=["base"])
    _add_common(p)
    p.add_argument("--pos", required=True, choices=["noun", "verb"])
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("resources", help="look up a headword in a text resource")
    p.add_argument("resource_id")
    p.add_argument("headword")
    p.add_argument("--resources", required=True, metavar="FILE",
                   help="config file mapping resource_id<TAB>path")
    p.set_defaults(func=cmd_resources)

    p = sub.add_parser("export", help="write a monolingual wordnet export")
    _add_common(p)
    p.add_argument("--lang", required=True)
    p.add_argument("--out", metavar="FILE", help="default: stdout")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("history", help="show the edit history")
    _add_common(p)
    p.add_argument("--filter-actor", dest="filter_actor")
    p.add_argument("--action")
    p.add_argument("--since")
    p.add_argument("--until")
    p.add_argument("--limit", type=int)
    p.set_defaults(func=cmd_history)

    p = sub.add_parser("edit", help="edit glosses, words, or Levin classes")
    edit_sub = p.add_subparsers(dest="edit_command", required=True)
    g = edit_sub.add_parser("gloss")
    _add_common(g)
    g.add_argument("--lang", required=True)
    g.add_argument("--synset", required=True, metavar="KEY")
    g.add_argument("--text", required=True)
    g.add_argument("--expect-version", type=int, dest="expect_version")
    g.set_defaults(func=cmd_edit_gloss)
    w = edit_sub.add_parser("word")
    _add_common(w)
    w.add_argument("--lang", required=True)
    w.add_argument("--pos", required=True,
                   choices=[pos.value for pos in PartOfSpeech])
    w.add_argument("--lemma", required=True)
    w.add_argument("--new-lemma", required=True, dest="new_lemma")
    w.add_argument("--expect-version", type=int, dest="expect_version")
    w.set_defaults(func=cmd_edit_word)
    lv = edit_sub.add_parser("levin")
    _add_common(lv)
    lv.add_argument("--lang", required=True)
    lv.add_argument("--lemma", required=True)
    lv.add_argument("--classes", required=True,
                    help="comma-separated class labels; empty clears")
    lv.add_argument("--expect-version", type=int, dest="expect_version")
    lv.set_defaults(func=cmd_edit_levin)

    p = sub.add_parser("link", help="accept or reject one candidate link")
    link_sub = p.add_subparsers(dest="link_command", required=True)
    for name in ("accept", "reject"):
        l = link_sub.add_parser(name)
        _add_common(l)
        l.add_argument("--id", required=True, dest="link_id")
        l.add_argument("--expect-version", type=int, dest="expect_version")
        l.set_defaults(func=cmd_link, link_action=name)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--store", help="store directory (or WNFORGE_STORE)")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--resources", metavar="FILE")
    p.add_argument("--frontend", metavar="DIR",
                   help="static console assets (default: bundled build)")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("schema", help="print the endpoint OpenAPI contract")
    p.add_argument("--out", metavar="FILE", help="default: stdout")
    p.set_defaults(func=cmd_schema)

    return parser


# ---------------------------------------------------------------------
# Command implementations
# ---------------------------------------------------------------------

def cmd_init(args: argparse.Namespace) -> int:
    languages = [Language(args.pivot, pivot=True)]
    languages += [Language(code) for code in args.lang]
    with _open_store(args) as store:
        store.register_languages(languages, actor=_actor(args))
    print(f"initialized store with languages: "
          f"{', '.join(l.code + (' (pivot)' if l.pivot else '') for l in languages)}")
    return 0


def cmd_import(args: argparse.Namespace) -> int:
    with _open_store(args) as store:
        actor = _actor(args)
        if args.kind == "synsets":
            if not args.lang:
                raise LexKBError("import synsets requires --lang")
            doc = load_synsets(args.path, args.lang)
            store.import_synsets(doc, actor=actor)
            print(f"imported {len(doc.synsets)} synsets, "
                  f"{len(doc.relations)} relation edges, "
                  f"{len(doc.base)} base concepts")
        elif args.kind == "senses":
            snapshot = store.snapshot()
            pivot = snapshot.pivot_language()
            entries, dups = load_pivot_senses(
                args.path, pivot, synsets=snapshot.synset_table()
            )
            store.import_pivot_senses(entries, actor=actor)
            print(f"imported {len(entries)} pivot senses ({dups} duplicate lines)")
        else:
            if not args.lang:
                raise LexKBError("import monolingual requires --lang")
            text = Path(args.path).read_text(encoding="utf-8")
            store.import_monolingual(args.lang, text, actor=actor)
            print(f"imported monolingual export for {args.lang}")
    return 0


def cmd_links_generate(args: argparse.Namespace) -> int:
    with _open_store(args) as store:
        snapshot = store.snapshot()
        pivot = snapshot.pivot_language()
        entries, _ = load_bilingual(args.bilingual, args.lang, pivot)
        senses, _ = load_pivot_senses(
            args.senses, pivot, synsets=snapshot.synset_table()
        )
        links = generate_all(entries, senses, args.lang)
        store.import_links(links, actor=_actor(args))
        if args.out:
            Path(args.out).write_text(dump_links(links), encoding="utf-8")
        by_method: dict[str, int] = {}
        for link in links:
            by_method[link.method] = by_method.get(link.method, 0) + 1
        for method in sorted(by_method):
            print(f"{method}\t{by_method[method]}")
        print(f"total\t{len(links)}")
    return 0


def cmd_verbs_generate(args: argparse.Namespace) -> int:
    with _open_store(args) as store:
        snapshot = store.snapshot()
        verbs, senses, warnings = load_levin_lists(
            args.verbs, args.senses, pivot_lang=snapshot.pivot_language(),
            known_synsets=snapshot.synset_table(),
        )
        candidates = generate_verb_links(verbs, senses, args.lang)
        store.import_verb_links(candidates, actor=_actor(args))
        if args.out:
            Path(args.out).write_text(dump_verb_links(candidates), encoding="utf-8")
        for warning in warnings:
            print(warning, file=sys.stderr)
        print(f"levin\t{len(candidates)}")
    return 0


def cmd_validate_sample(args: argparse.Namespace) -> int:
    with _open_store(args) as store:
        sample = store.draw_sample(
            args.method, args.size, args.seed, actor=_actor(args)
        )
        for lid in sample.links:
            print(lid)
    return 0


def cmd_validate_verdict(args: argparse.Namespace) -> int:
    verdict = "correct" if args.correct else "incorrect"
    with _open_store(args) as store:
        store.record_verdict(args.link, verdict, actor=_actor(args))
        method = args.link.split(":", 1)[0]
        sample = store.snapshot().sample(method)
        print(f"{method}: {len(sample.verdicts)}/{len(sample.links)} judged")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    with _open_store(args) as store:
        snapshot = store.snapshot()
        if args.report_kind == "class-methods":
            print(conf.table_report(snapshot.stats_rows(), fmt=args.format), end="")
        else:
            synsets, forms, links = verb_totals(snapshot, language=args.lang)
            print(f"synsets\t{synsets}")
            print(f"forms\t{forms}")
            print(f"links\t{links}")
    return 0


def cmd_promote(args: argparse.Namespace) -> int:
    with _open_store(args) as store:
        promoted, rejected = store.promote(
            actor=_actor(args), threshold=args.threshold
        )
        print(f"promoted\t{','.join(promoted) if promoted else '-'}")
        print(f"rejected\t{','.join(rejected) if rejected else '-'}")
    return 0


def cmd_consult(args: argparse.Namespace) -> int:
    with _open_store(args) as store:
        snapshot = store.snapshot()
        kind = query.parse_relation(args.relation)
        for sid in query.resolve_start(snapshot, args.lang, args.start):
            tree = query.traverse(snapshot, sid, kind, args.depth)
            print(query.render_path_tree(tree), end="")
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    with _open_store(args) as store:
        snapshot = store.snapshot()
        disconnected = query.check_base_connectivity(
            snapshot, PartOfSpeech(args.pos)
        )
        if not disconnected:
            print(f"ok: every {args.pos} synset reaches a base concept")
            return 0
        for sid in disconnected:
            print(sid.key)
        return 1


def cmd_resources(args: argparse.Namespace) -> int:
    registry = ResourceRegistry.load(args.resources)
    for line in query.lookup_resource(registry, args.resource_id, args.headword):
        print(line)
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    with _open_store(args) as store:
        text = store.export_monolingual(args.lang, actor=_actor(args))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        print(text, end="")
    return 0


def cmd_history(args: argparse.Namespace) -> int:
    with _open_store(args) as store:
        records = store.history(
            actor=args.filter_actor, action=args.action,
            since=args.since, until=args.until,
        )
    if args.limit is not None:
        records = records[: args.limit]
    for r in records:
        print(f"{r.seq}\t{r.timestamp}\t{r.actor}\t{r.action}\t{r.subject}")
    return 0


def cmd_edit_gloss(args: argparse.Namespace) -> int:
    with _open_store(args) as store:
        expected = args.expect_version
        if expected is None:
            expected = store.version(f"gloss:{args.lang}:{_quote(args.synset)}")
        record = store.edit_gloss(
            args.lang, args.synset, args.text, actor=_actor(args),
            expected_version=expected,
        )
        print(f"edited (seq {record.seq})")
    return 0


def cmd_edit_word(args: argparse.Namespace) -> int:
    with _open_store(args) as store:
        pos = PartOfSpeech(args.pos)
        expected = args.expect_version
        if expected is None:
            expected = store.version(
                f"word:{args.lang}:{pos.value}:{_quote(args.lemma)}"
            )
        record = store.edit_word(
            args.lang, pos, args.lemma, args.new_lemma, actor=_actor(args),
            expected_version=expected,
        )
        print(f"edited (seq {record.seq})")
    return 0


def cmd_edit_levin(args: argparse.Namespace) -> int:
    classes = [c for c in args.classes.split(",") if c]
    with _open_store(args) as store:
        expected = args.expect_version
        if expected is None:
            expected = store.version(f"levin:{args.lang}:{_quote(args.lemma)}")
        record = store.edit_levin_classes(
            args.lang, args.lemma, classes, actor=_actor(args),
            expected_version=expected,
        )
        print(f"edited (seq {record.seq})")
    return 0


def cmd_link(args: argparse.Namespace) -> int:
    with _open_store(args) as store:
        expected = args.expect_version
        if expected is None:
            expected = store.version(f"link:{args.link_id}")
        if args.link_action == "accept":
            store.accept_link(args.link_id, _actor(args), expected_version=expected)
        else:
            store.reject_link(args.link_id, _actor(args), expected_version=expected)
        print(f"{args.link_action}ed {args.link_id}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    serve(
        _store_dir(args), port=args.port, host=args.host,
        resources_path=args.resources, frontend_dir=args.frontend,
    )
    return 0


def cmd_schema(args: argparse.Namespace) -> int:
    from .service import build_schema

    text = json.dumps(build_schema(), indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        print(text, end="")
    return 0


def _quote(component: str) -> str:
    return quote(component, safe="")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LexKBError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

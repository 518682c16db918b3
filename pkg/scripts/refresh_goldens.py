#!/usr/bin/env python3
"""Run the fixture pipeline end to end and (re)write the golden files.

The pipeline drives the real CLI, stage by stage: init, imports, link
generation, verb generation, sampling, verdicts, report, promote, a
manual verb-link acceptance, consult, base checks, and export. Stage
outputs land in an output directory; with --write they replace
fixtures/golden/.

The verdict plan below fixes how many sampled links of each method are
judged correct; the first (size - correct) links in drawn order are
marked incorrect.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import shutil
from pathlib import Path

from wnforge import cli

REPO = Path(__file__).resolve().parents[1]
FIXTURES = REPO / "fixtures"

SAMPLE_SEED = 7
ACTOR = "maria"

# method -> links judged correct (every fixture sample covers the full set)
VERDICT_PLAN = {
    "mono1": 9,   # of 10 -> 90.0
    "mono2": 11,  # of 11 -> 100.0
    "mono3": 6,   # of 6 -> 100.0
    "mono4": 4,   # of 5 -> 80.0 (below threshold)
    "poly1": 6,   # of 6 -> 100.0
    "poly2": 1,   # of 2 -> 50.0
    "poly3": 5,   # of 8 -> 62.5
    "poly4": 2,   # of 6 -> 33.3
    "variant": 4, # of 4 -> 100.0
}

ACCEPTED_VERB_LINK = "levin:ca:c%C3%B3rrer:run:v-run-1"  # córrer -> v-run-1

GOLDEN_FILES = (
    "links.tsv", "links_counts.txt", "verb_links.txt",
    "sample_mono1.txt", "report.tsv", "promote.txt",
    "consult_gos.txt", "consult_correr.txt", "check_base.txt",
    "export_ca.txt", "kb.tsv",
)


def run_cli(args: list[str], store: Path) -> str:
    argv = [*args, "--store", str(store), "--actor", ACTOR, "--no-fsync"]
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(argv)
    if code != 0:
        raise RuntimeError(
            f"command failed ({code}): wnforge {' '.join(argv)}\n"
            f"stdout:\n{buf.getvalue()}"
        )
    return buf.getvalue()


def run_pipeline(store: Path, out: Path, fixtures: Path = FIXTURES) -> None:
    """Execute every stage; write one output file per golden."""
    out.mkdir(parents=True, exist_ok=True)

    run_cli(["init", "--pivot", "en", "--lang", "ca"], store)
    run_cli(["import", "synsets", str(fixtures / "pivot_synsets.tsv"),
             "--lang", "en"], store)
    run_cli(["import", "senses", str(fixtures / "pivot_senses.tsv")], store)

    counts = run_cli(
        ["links", "generate",
         "--bilingual", str(fixtures / "bilingual_ca.tsv"),
         "--senses", str(fixtures / "pivot_senses.tsv"),
         "--lang", "ca", "--out", str(out / "links.tsv")],
        store,
    )
    (out / "links_counts.txt").write_text(counts, encoding="utf-8")

    verbs_out = run_cli(
        ["verbs", "generate",
         "--verbs", str(fixtures / "levin_verbs.tsv"),
         "--senses", str(fixtures / "levin_senses.tsv"),
         "--lang", "ca", "--out", str(out / "verb_links.txt")],
        store,
    )
    assert verbs_out.strip() == "levin\t4", verbs_out

    for method, correct in VERDICT_PLAN.items():
        listing = run_cli(
            ["validate", "sample", "--method", method,
             "--seed", str(SAMPLE_SEED)],
            store,
        )
        if method == "mono1":
            (out / "sample_mono1.txt").write_text(listing, encoding="utf-8")
        links = listing.split()
        incorrect = len(links) - correct
        for i, lid in enumerate(links):
            flag = "--incorrect" if i < incorrect else "--correct"
            run_cli(["validate", "verdict", "--link", lid, flag], store)

    report = run_cli(["report", "class-methods"], store)
    (out / "report.tsv").write_text(report, encoding="utf-8")

    promote = run_cli(["promote"], store)
    (out / "promote.txt").write_text(promote, encoding="utf-8")

    run_cli(["link", "accept", "--id", ACCEPTED_VERB_LINK], store)

    consult = run_cli(
        ["consult", "--lang", "ca", "--start", "gos",
         "--relation", "hypernymy", "--depth", "10"],
        store,
    )
    (out / "consult_gos.txt").write_text(consult, encoding="utf-8")

    consult_v = run_cli(
        ["consult", "--lang", "ca", "--start", "córrer",
         "--relation", "troponymy", "--depth", "10"],
        store,
    )
    (out / "consult_correr.txt").write_text(consult_v, encoding="utf-8")

    base_noun = run_cli(["check", "base", "--pos", "noun"], store)
    base_verb = run_cli(["check", "base", "--pos", "verb"], store)
    (out / "check_base.txt").write_text(base_noun + base_verb, encoding="utf-8")

    run_cli(["export", "--lang", "ca", "--out", str(out / "export_ca.txt")], store)

    shutil.copyfile(store / "kb.tsv", out / "kb.tsv")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--write", action="store_true",
                        help="replace fixtures/golden with the new outputs")
    parser.add_argument("--out", default=None,
                        help="output directory (default: a temp dir)")
    args = parser.parse_args()

    import tempfile

    workdir = Path(tempfile.mkdtemp(prefix="wnforge-goldens-"))
    out = Path(args.out) if args.out else workdir / "out"
    run_pipeline(workdir / "store", out)
    print(f"pipeline outputs in {out}")

    if args.write:
        golden = FIXTURES / "golden"
        golden.mkdir(exist_ok=True)
        for name in GOLDEN_FILES:
            shutil.copyfile(out / name, golden / name)
        print(f"golden files refreshed in {golden}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

"""Sample-based validation of generated link sets.

Each method's links are sampled uniformly without replacement, judged by
hand, and the observed accuracy is extrapolated to the whole set as its
confidence score. Methods at or above the promotion threshold get their
links accepted wholesale.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Mapping, Optional, Sequence

from .links import CandidateLink
from .model import GENERATED_METHODS, LexKBError


class SampleTooLarge(LexKBError):
    pass


class NotInSample(LexKBError):
    pass


class IncompleteSample(LexKBError):
    def __init__(self, missing: Sequence[str]) -> None:
        super().__init__(f"{len(missing)} sampled links lack a verdict")
        self.missing = list(missing)


class MissingConfidence(LexKBError):
    pass


DEFAULT_THRESHOLD = 85.0

# Report row order.
REPORT_METHODS = GENERATED_METHODS


@dataclass(frozen=True)
class ValidationSample:
    """A reproducible random sample of one method's links.

    The sample is drawn from the sorted link set, so the same seed and
    set contents give the same sample regardless of input order.
    """

    method: str
    seed: int
    links: tuple[str, ...]  # link ids, in drawn order
    verdicts: Mapping[str, bool] = field(default_factory=dict)  # id -> correct?

    def with_verdict(self, lid: str, correct: bool) -> "ValidationSample":
        if lid not in self.links:
            raise NotInSample(f"link {lid!r} is not in the {self.method} sample")
        verdicts = dict(self.verdicts)
        verdicts[lid] = correct
        return replace(self, verdicts=verdicts)

    @property
    def missing(self) -> list[str]:
        return [lid for lid in self.links if lid not in self.verdicts]

    @property
    def complete(self) -> bool:
        return not self.missing


@dataclass(frozen=True)
class CriterionSetStats:
    """One report row: link/synset/word counts and the confidence score."""

    method: str
    links: int
    synsets: int
    words: int
    confidence: Optional[float] = None

    def __post_init__(self) -> None:
        if self.synsets > self.links or self.words > self.links:
            raise LexKBError(
                f"{self.method}: distinct counts exceed link count"
            )


def default_sample_size(set_size: int) -> int:
    """min(set size, max(30, ceil(3% of set size)))."""
    return min(set_size, max(30, math.ceil(0.03 * set_size)))


def draw_sample(
    links_of_method: Iterable[CandidateLink], size: int, seed: int
) -> ValidationSample:
    """Draw a uniform without-replacement sample of one method's links."""
    pool = sorted(set(links_of_method), key=CandidateLink.sort_key)
    if not pool:
        raise SampleTooLarge("cannot sample from an empty link set")
    methods = {link.method for link in pool}
    if len(methods) != 1:
        raise LexKBError(f"sample must cover a single method, got {sorted(methods)}")
    if not 1 <= size <= len(pool):
        raise SampleTooLarge(
            f"sample size {size} not in [1, {len(pool)}] for {pool[0].method}"
        )
    chosen = random.Random(seed).sample(pool, size)
    return ValidationSample(
        method=pool[0].method,
        seed=seed,
        links=tuple(link.link_id for link in chosen),
    )


def record_verdict(
    sample: ValidationSample, link_ref: str, verdict: str
) -> ValidationSample:
    """Store a correct/incorrect verdict; re-recording overwrites."""
    if verdict not in ("correct", "incorrect"):
        raise LexKBError(f"verdict must be correct or incorrect, got {verdict!r}")
    return sample.with_verdict(link_ref, verdict == "correct")


def round_half_up(value: float, decimals: int = 1) -> float:
    q = Decimal(10) ** -decimals
    return float(Decimal(str(value)).quantize(q, rounding=ROUND_HALF_UP))


def extrapolate_confidence(sample: ValidationSample) -> float:
    """Percentage of correct verdicts, half-up rounded to one decimal.

    The caller assigns this value to every link of the method set.
    """
    if not sample.complete:
        raise IncompleteSample(sample.missing)
    correct = sum(1 for ok in sample.verdicts.values() if ok)
    return round_half_up(100.0 * correct / len(sample.links))


def promote(
    stats: Iterable[CriterionSetStats], threshold: float = DEFAULT_THRESHOLD
) -> tuple[list[str], list[str]]:
    """Split methods into promoted (confidence >= threshold) and rejected.

    The boundary is inclusive. Methods without a confidence cannot be
    decided and raise.
    """
    promoted: list[str] = []
    rejected: list[str] = []
    for row in stats:
        if row.confidence is None:
            raise MissingConfidence(f"method {row.method} has no confidence score")
        if row.confidence >= threshold:
            promoted.append(row.method)
        else:
            rejected.append(row.method)
    return promoted, rejected


def method_stats(
    links: Iterable[CandidateLink],
    confidences: Mapping[str, float],
) -> list[CriterionSetStats]:
    """Aggregate stored links into report rows, one per method."""
    by_method: dict[str, list[CandidateLink]] = {m: [] for m in REPORT_METHODS}
    for link in links:
        if link.method in by_method:
            by_method[link.method].append(link)
    rows = []
    for method in REPORT_METHODS:
        group = by_method[method]
        rows.append(
            CriterionSetStats(
                method=method,
                links=len(group),
                synsets=len({l.synset for l in group}),
                words=len({l.word for l in group}),
                confidence=confidences.get(method),
            )
        )
    return rows


def _fmt_confidence(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.1f}"


def table_report(rows: Sequence[CriterionSetStats], fmt: str = "tsv") -> str:
    """Render the per-method results table (tsv or markdown)."""
    ordered = sorted(rows, key=lambda r: REPORT_METHODS.index(r.method))
    header = ("Criteria", "#links", "#synsets", "#words", "%")
    cells = [
        (r.method, str(r.links), str(r.synsets), str(r.words),
         _fmt_confidence(r.confidence))
        for r in ordered
    ]
    if fmt == "tsv":
        lines = ["\t".join(header)] + ["\t".join(row) for row in cells]
    elif fmt == "markdown":
        widths = [
            max(len(header[i]), *(len(row[i]) for row in cells)) if cells else len(header[i])
            for i in range(5)
        ]
        def md_row(row: Sequence[str]) -> str:
            return "| " + " | ".join(c.ljust(widths[i]) for i, c in enumerate(row)) + " |"
        lines = [md_row(header)]
        lines.append("|" + "|".join("-" * (w + 2) for w in widths) + "|")
        lines.extend(md_row(row) for row in cells)
    else:
        raise LexKBError(f"unknown report format {fmt!r}")
    return "".join(line + "\n" for line in lines)

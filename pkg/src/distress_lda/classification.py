"""Classification zones, scoring, confusion matrix, and yearly evaluation.

Zones come in two flavors. Derived zones follow the stated construction: the
cut-off is the size-weighted centroid mean and the grey interval is
[y0 + s0, y1 - s1], collapsing to cut-off-only when the candidate interval is
empty. Override zones are loaded from a file and carry whatever cut-off and
interval the caller trusts; they are tagged with their source so reports can
say which rule produced them.

Yearly evaluation scores every available bank-year, assigns a zone, and
counts hits the way early-warning tables are usually read: a distressed bank
is only *expected* to look distressed in its warning year (the last year it
reports before dropping out); in every other year a distress signal for it
counts against the healthy expectation like any other alarm. Grey cases are
reported separately and excluded from hits and errors.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from . import normalization as norm
from .dataset import BankYearRecord, GroupLabel, RatioVector, TrainingSet
from .errors import DomainError, MissingDataError, MissingLabelError
from .lda_fit import DiscriminantModel, fisher_classify, score
from .normalization import NormalizationStats

ZONE_SOURCES = ("derived-from-model", "explicit-override")


class ZoneLabel(enum.Enum):
    BANKRUPT = "bankrupt"
    GREY = "grey"
    NONBANKRUPT = "nonbankrupt"


@dataclass(frozen=True)
class ClassificationZones:
    """Cut-off plus optional grey interval [lo, hi] on the score axis."""

    cutoff: float
    grey: tuple[float, float] | None
    source: str

    def __post_init__(self) -> None:
        if self.grey is not None and self.grey[0] > self.grey[1]:
            raise ValueError(f"grey interval is inverted: {self.grey}")
        if self.source not in ZONE_SOURCES:
            raise ValueError(f"unknown zone source {self.source!r}")


def cutoff_from_centroids(y0: float, n0: int, y1: float, n1: int) -> float:
    """Size-weighted centroid mean; identical to the grand mean of scores."""
    return (y0 * n0 + y1 * n1) / (n0 + n1)


def cutoff_point(model: DiscriminantModel) -> float:
    return cutoff_from_centroids(model.y0, model.n0, model.y1, model.n1)


def grey_zone(model: DiscriminantModel) -> tuple[float, float] | None:
    """Candidate grey interval [y0 + s0, y1 - s1]; None when it is empty."""
    lo = model.y0 + model.s0
    hi = model.y1 - model.s1
    if lo >= hi:
        return None
    return (lo, hi)


def derive_zones(model: DiscriminantModel) -> ClassificationZones:
    return ClassificationZones(
        cutoff=cutoff_point(model), grey=grey_zone(model), source="derived-from-model"
    )


def classify_zone(score_value: float, zones: ClassificationZones) -> ZoneLabel:
    """Map a score to its zone.

    With a grey interval: below it bankrupt, inside it (boundaries included)
    grey, above it non-bankrupt. Without one, the cut-off alone splits the
    axis and a score exactly at the cut-off counts as healthy.
    """
    if not math.isfinite(score_value):
        raise DomainError(f"score must be finite, got {score_value!r}")
    if zones.grey is not None:
        lo, hi = zones.grey
        if score_value < lo:
            return ZoneLabel.BANKRUPT
        if score_value <= hi:
            return ZoneLabel.GREY
        return ZoneLabel.NONBANKRUPT
    return ZoneLabel.BANKRUPT if score_value < zones.cutoff else ZoneLabel.NONBANKRUPT


def score_observation(
    model: DiscriminantModel,
    stats: NormalizationStats | None,
    observation: BankYearRecord | RatioVector,
    mode: str = "raw",
) -> float:
    """Score one observation in either scoring mode.

    Raw mode applies the coefficients directly to the ratio fractions;
    normalized mode z-scores the ratios with the supplied stats first.
    """
    if isinstance(observation, BankYearRecord):
        if not observation.available:
            raise MissingDataError(
                f"bank {observation.bank_id!r} year {observation.year} is not available"
            )
        v = observation.ratios
    else:
        v = observation
    if mode == "raw":
        return score(model, v)
    if mode == "normalized":
        if stats is None:
            raise ValueError("normalized mode requires normalization stats")
        return score(model, norm.apply(stats, v))
    raise ValueError(f"mode must be 'raw' or 'normalized', got {mode!r}")


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts indexed by (actual, predicted) group."""

    counts: dict[tuple[GroupLabel, GroupLabel], int]

    def count(self, actual: GroupLabel, predicted: GroupLabel) -> int:
        return self.counts.get((actual, predicted), 0)

    def total(self) -> int:
        return sum(self.counts.values())

    def row_percent(self, actual: GroupLabel, predicted: GroupLabel) -> float:
        row = sum(self.count(actual, pred) for pred in GroupLabel)
        return 100.0 * self.count(actual, predicted) / row if row else 0.0

    def correct_fraction(self) -> float:
        total = self.total()
        if total == 0:
            return 0.0
        return sum(self.count(g, g) for g in GroupLabel) / total


def confusion_matrix(model: DiscriminantModel, tsZ: TrainingSet) -> ConfusionMatrix:
    """Fisher-classify every training sample against its actual label."""
    counts: dict[tuple[GroupLabel, GroupLabel], int] = {}
    for sample in tsZ.samples:
        key = (sample.label, fisher_classify(model, sample.ratios))
        counts[key] = counts.get(key, 0) + 1
    return ConfusionMatrix(counts=counts)


@dataclass(frozen=True)
class BankScore:
    bank: str
    score: float
    zone: ZoneLabel


@dataclass(frozen=True)
class YearRow:
    year: int
    bankrupt_count: int
    grey_count: int
    nonbankrupt_count: int
    hits: int
    total: int
    type1_count: int
    type2_count: int
    type1_rate: float
    type2_rate: float
    accuracy: float
    banks: tuple[BankScore, ...]


@dataclass(frozen=True)
class EvaluationReport:
    years: tuple[YearRow, ...]
    cutoff_only: tuple[YearRow, ...]
    zones: ClassificationZones
    mode: str
    notices: tuple[str, ...]


def infer_warning_years(
    records: Sequence[BankYearRecord], actual: Mapping[str, GroupLabel]
) -> dict[str, int]:
    """Warning year per distressed bank: its last reporting year.

    Taken as the year before the bank's first unavailable year (once it has
    started reporting); a bank that never drops out warns in its final
    available year.
    """
    warning: dict[str, int] = {}
    banks = {r.bank_id for r in records}
    for bank in banks:
        if actual.get(bank) is not GroupLabel.BANKRUPT:
            continue
        recs = [r for r in records if r.bank_id == bank]
        available = sorted(r.year for r in recs if r.available)
        if not available:
            continue
        gaps = sorted(r.year for r in recs if not r.available and r.year > available[0])
        warning[bank] = gaps[0] - 1 if gaps else available[-1]
    return warning


def _year_row(
    year: int,
    scored: Sequence[tuple[str, float]],
    zones: ClassificationZones,
    actual: Mapping[str, GroupLabel],
    warning: Mapping[str, int],
) -> YearRow:
    zoned = [(bank, s, classify_zone(s, zones)) for bank, s in scored]
    expected_bankrupt = {
        bank
        for bank, _, _ in zoned
        if actual[bank] is GroupLabel.BANKRUPT and warning.get(bank) == year
    }
    total = len(zoned)
    n_b = sum(1 for _, _, z in zoned if z is ZoneLabel.BANKRUPT)
    n_g = sum(1 for _, _, z in zoned if z is ZoneLabel.GREY)
    n_n = total - n_b - n_g
    type1 = sum(
        1 for bank, _, z in zoned if bank in expected_bankrupt and z is ZoneLabel.NONBANKRUPT
    )
    type2 = sum(
        1 for bank, _, z in zoned if bank not in expected_bankrupt and z is ZoneLabel.BANKRUPT
    )
    # Hit arithmetic: false alarms and grey calls are subtracted from the
    # total; a missed warning shows up in the type-I rate, not in the hits.
    hits = total - type2 - n_g
    eb = len(expected_bankrupt)
    en = total - eb
    return YearRow(
        year=year,
        bankrupt_count=n_b,
        grey_count=n_g,
        nonbankrupt_count=n_n,
        hits=hits,
        total=total,
        type1_count=type1,
        type2_count=type2,
        type1_rate=type1 / eb if eb else 0.0,
        type2_rate=type2 / en if en else 0.0,
        accuracy=hits / total,
        banks=tuple(
            BankScore(bank=b, score=s, zone=z) for b, s, z in sorted(zoned, key=lambda t: t[0])
        ),
    )


def evaluate_panel(
    model: DiscriminantModel,
    stats: NormalizationStats | None,
    records: Sequence[BankYearRecord],
    actual: Mapping[str, GroupLabel],
    zones: ClassificationZones,
    mode: str = "raw",
    warning_years: Mapping[str, int] | None = None,
) -> EvaluationReport:
    """Score and zone a yearly panel, with and without the grey interval.

    warning_years overrides the inferred last-reporting-year per bank for
    distressed banks whose drop-out year is not visible in the panel.
    """
    for record in records:
        if record.bank_id not in actual:
            raise MissingLabelError(f"bank {record.bank_id!r} has no group label")
    warning = infer_warning_years(records, actual)
    if warning_years:
        warning.update(warning_years)

    scored_by_year: dict[int, list[tuple[str, float]]] = {}
    for record in sorted(records, key=lambda r: (r.year, r.bank_id)):
        scored_by_year.setdefault(record.year, [])
        if record.available:
            s = score_observation(model, stats, record, mode)
            scored_by_year[record.year].append((record.bank_id, s))

    cutoff_zones = replace(zones, grey=None)
    years: list[YearRow] = []
    cutoff_rows: list[YearRow] = []
    notices: list[str] = []
    for year in sorted(scored_by_year):
        scored = scored_by_year[year]
        if not scored:
            notices.append(f"year {year}: no available records, omitted")
            continue
        years.append(_year_row(year, scored, zones, actual, warning))
        cutoff_rows.append(_year_row(year, scored, cutoff_zones, actual, warning))
    return EvaluationReport(
        years=tuple(years),
        cutoff_only=tuple(cutoff_rows),
        zones=zones,
        mode=mode,
        notices=tuple(notices),
    )


def zones_to_dict(zones: ClassificationZones) -> dict:
    return {
        "cutoff": zones.cutoff,
        "grey": list(zones.grey) if zones.grey is not None else None,
        "source": zones.source,
    }


def report_to_dict(report: EvaluationReport) -> dict:
    """JSON-ready form of an evaluation report; keys are stable."""

    def row_dict(row: YearRow, with_grey: bool) -> dict:
        counts = {"bankrupt": row.bankrupt_count, "nonbankrupt": row.nonbankrupt_count}
        if with_grey:
            counts["grey"] = row.grey_count
        return {
            "year": row.year,
            "counts": counts,
            "hits": row.hits,
            "total": row.total,
            "type1": row.type1_rate,
            "type2": row.type2_rate,
            "accuracy": row.accuracy,
            "banks": [
                {"bank": b.bank, "score": b.score, "zone": b.zone.value} for b in row.banks
            ],
        }

    return {
        "years": [row_dict(row, True) for row in report.years],
        "cutoff_only": [row_dict(row, False) for row in report.cutoff_only],
        "zones": zones_to_dict(report.zones),
        "mode": report.mode,
        "notices": list(report.notices),
    }

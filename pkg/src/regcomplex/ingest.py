"""Firm-registry ingestion: parsing, validation, active filter and fiscal-year snapshots."""

from __future__ import annotations

import bisect
import configparser
import csv
import io
import logging
import string
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import date, datetime
from decimal import Decimal, InvalidOperation
from enum import Enum
from pathlib import Path
from typing import BinaryIO, Iterable, Sequence, TextIO

logger = logging.getLogger(__name__)

ACTIVE = "Active"
CAPITAL_SCALE = 100  # minor currency units per major unit

LOGICAL_FIELDS = (
    "firm_id",
    "region",
    "nic_full",
    "incorporation_date",
    "status",
    "paid_up_capital",
)
DEFAULT_DATE_FORMATS = ("%Y-%m-%d", "%d-%m-%Y", "%d/%m/%Y")
DEFAULT_ACTIVE_CODES = ("ACTV", "ACTIVE")


class RegistryError(Exception):
    """Data error while reading a registry file."""


class SchemaError(RegistryError):
    """Header/schema mismatch or unreadable file; never recoverable row by row."""


class RejectReason(str, Enum):
    MISSING_FIRM_ID = "MissingFirmId"
    EMPTY_REGION = "EmptyRegion"
    UNKNOWN_REGION = "UnknownRegion"
    MISSING_NIC = "MissingNic"
    NON_NUMERIC_NIC = "NonNumericNic"
    EXCLUDED_INDUSTRY = "ExcludedIndustry"
    BAD_DATE = "BadDate"
    MISSING_CAPITAL = "MissingCapital"
    BAD_CAPITAL = "BadCapital"
    NEGATIVE_CAPITAL = "NegativeCapital"
    DUPLICATE_FIRM_ID = "DuplicateFirmId"


@dataclass(frozen=True, slots=True)
class FirmRecord:
    firm_id: str
    region: str
    nic_full: str
    nic2: str
    incorporation_date: date
    status: str
    capital_minor: int

    @property
    def paid_up_capital(self) -> Decimal:
        return Decimal(self.capital_minor) / CAPITAL_SCALE

    @property
    def is_active(self) -> bool:
        return self.status == ACTIVE


@dataclass(frozen=True, slots=True)
class RejectRow:
    line: int
    reason: RejectReason
    firm_id: str
    raw: tuple[str, ...]
    source: str = ""


@dataclass(frozen=True)
class SnapshotSpec:
    """Fiscal year ``Y`` covers firms incorporated strictly before ``Y-MM-DD`` (default April 1)."""

    fiscal_year: int
    cutoff_month: int = 4
    cutoff_day: int = 1

    @property
    def cutoff(self) -> date:
        return date(self.fiscal_year, self.cutoff_month, self.cutoff_day)


@dataclass(frozen=True)
class Schema:
    """Maps logical record fields to CSV column names."""

    columns: dict[str, str]
    active_codes: tuple[str, ...] = DEFAULT_ACTIVE_CODES
    date_formats: tuple[str, ...] = DEFAULT_DATE_FORMATS

    def __post_init__(self):
        missing = [f for f in LOGICAL_FIELDS if f not in self.columns]
        if missing:
            raise SchemaError(f"schema does not map logical fields: {', '.join(missing)}")

    @classmethod
    def default(cls) -> Schema:
        return cls(columns={f: f for f in LOGICAL_FIELDS})

    @classmethod
    def normalized(cls) -> Schema:
        """Schema of the CSV written by :func:`write_records`."""
        return cls(columns={f: f for f in LOGICAL_FIELDS}, active_codes=(ACTIVE,), date_formats=("%Y-%m-%d",))

    @classmethod
    def from_config(cls, parser: configparser.ConfigParser) -> Schema:
        if not parser.has_section("schema"):
            raise SchemaError("config has no [schema] section")
        sec = parser["schema"]
        columns = {f: sec.get(f, f).strip() for f in LOGICAL_FIELDS}
        formats = tuple(_split_list(sec.get("date_formats", ""), sep=";")) or DEFAULT_DATE_FORMATS
        active = DEFAULT_ACTIVE_CODES
        if parser.has_section("status"):
            active = tuple(_split_list(parser["status"].get("active", ""))) or DEFAULT_ACTIVE_CODES
        return cls(columns=columns, active_codes=active, date_formats=formats)

    @classmethod
    def from_file(cls, path: str | Path) -> Schema:
        return cls.from_config(_read_config(path))

    def parse_status(self, raw: str) -> str:
        code = raw.strip()
        folded = code.casefold()
        if any(folded == a.casefold() for a in self.active_codes):
            return ACTIVE
        return code


@dataclass(frozen=True)
class RegionAliases:
    """Region label normalization.

    With a table, labels are looked up case-insensitively among aliases and
    canonical names; anything else is unknown (``normalize`` returns None).
    Without a table, labels are trimmed, whitespace-collapsed and capitalized
    word by word.  ``passthrough`` only trims, for re-reading normalized output.
    """

    table: dict[str, str] = field(default_factory=dict)
    passthrough: bool = False

    @classmethod
    def from_mapping(cls, mapping: dict[str, str]) -> RegionAliases:
        table = {}
        for alias, canonical in mapping.items():
            canonical = " ".join(canonical.split())
            table[_fold(alias)] = canonical
            table[_fold(canonical)] = canonical
        return cls(table=table)

    @classmethod
    def from_config(cls, parser: configparser.ConfigParser) -> RegionAliases:
        if not parser.has_section("aliases"):
            raise SchemaError("config has no [aliases] section")
        return cls.from_mapping(dict(parser["aliases"]))

    @classmethod
    def from_file(cls, path: str | Path) -> RegionAliases:
        return cls.from_config(_read_config(path))

    @classmethod
    def identity(cls) -> RegionAliases:
        return cls(passthrough=True)

    @property
    def canonical(self) -> set[str]:
        return set(self.table.values())

    def normalize(self, raw: str) -> str | None:
        collapsed = " ".join(raw.split())
        if self.passthrough:
            return collapsed
        if self.table:
            return self.table.get(_fold(collapsed))
        return string.capwords(collapsed.casefold())


@dataclass
class ParseResult:
    records: list[FirmRecord]
    rejects: list[RejectRow]
    header: tuple[str, ...]
    rows_read: int

    @property
    def reject_counts(self) -> dict[str, int]:
        counts = Counter(r.reason.value for r in self.rejects)
        return dict(sorted(counts.items()))

    @property
    def reject_fraction(self) -> float:
        return len(self.rejects) / self.rows_read if self.rows_read else 0.0


def _fold(s: str) -> str:
    return " ".join(s.split()).casefold()


def _split_list(value: str, sep: str = ",") -> list[str]:
    return [v.strip() for v in value.split(sep) if v.strip()]


def _read_config(path: str | Path) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keep column-name case
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise SchemaError(f"cannot read config {path}: {exc}") from exc
    return parser


def derive_nic2(nic_full: str) -> str | None:
    """Two-digit industry class of a NIC code, or None when excluded.

    Class "00" (unclassified) and codes that do not start with two digits are
    excluded.
    """
    code = nic_full.strip()
    if not code:
        raise ValueError("empty NIC code")
    if len(code) == 1:
        code = "0" + code
    nic2 = code[:2]
    if not nic2.isdigit() or not nic2.isascii() or nic2 == "00":
        return None
    return nic2


def parse_capital(raw: str) -> int:
    """Parse a money string into integer minor units; raises ValueError(reason)."""
    text = raw.strip().replace(",", "")
    if not text:
        raise ValueError(RejectReason.MISSING_CAPITAL)
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise ValueError(RejectReason.BAD_CAPITAL) from None
    if not value.is_finite():
        raise ValueError(RejectReason.BAD_CAPITAL)
    if value < 0:
        raise ValueError(RejectReason.NEGATIVE_CAPITAL)
    minor = value * CAPITAL_SCALE
    if minor != minor.to_integral_value():
        raise ValueError(RejectReason.BAD_CAPITAL)
    return int(minor)


def format_capital(capital_minor: int) -> str:
    major, minor = divmod(capital_minor, CAPITAL_SCALE)
    return str(major) if minor == 0 else f"{major}.{minor:02d}"


def parse_date(raw: str, formats: Sequence[str]) -> date:
    text = raw.strip()
    for fmt in formats:
        try:
            return datetime.strptime(text, fmt).date()
        except ValueError:
            continue
    raise ValueError(RejectReason.BAD_DATE)


def _parse_rows(
    rows: list[list[str]],
    first_line: int,
    index: dict[str, int],
    schema: Schema,
    aliases: RegionAliases,
) -> tuple[list[tuple[int, FirmRecord]], list[RejectRow]]:
    records = []
    rejects = []
    width = max(index.values()) + 1
    for offset, row in enumerate(rows):
        line = first_line + offset
        if len(row) < width:
            row = row + [""] * (width - len(row))
        get = lambda f: row[index[f]]  # noqa: E731
        firm_id = get("firm_id").strip()
        try:
            record = _build_record(get, firm_id, schema, aliases)
        except ValueError as exc:
            rejects.append(RejectRow(line, RejectReason(exc.args[0]), firm_id, tuple(row)))
            continue
        records.append((line, record))
    return records, rejects


def _build_record(get, firm_id: str, schema: Schema, aliases: RegionAliases) -> FirmRecord:
    if not firm_id:
        raise ValueError(RejectReason.MISSING_FIRM_ID)
    raw_region = get("region")
    if not raw_region.strip():
        raise ValueError(RejectReason.EMPTY_REGION)
    region = aliases.normalize(raw_region)
    if region is None:
        raise ValueError(RejectReason.UNKNOWN_REGION)
    nic_full = get("nic_full").strip()
    if not nic_full:
        raise ValueError(RejectReason.MISSING_NIC)
    nic2 = derive_nic2(nic_full)
    if nic2 is None:
        lead = nic_full.zfill(2)[:2]
        if lead.isdigit() and lead.isascii():
            raise ValueError(RejectReason.EXCLUDED_INDUSTRY)
        raise ValueError(RejectReason.NON_NUMERIC_NIC)
    incorporated = parse_date(get("incorporation_date"), schema.date_formats)
    capital = parse_capital(get("paid_up_capital"))
    return FirmRecord(
        firm_id=firm_id,
        region=region,
        nic_full=nic_full,
        nic2=nic2,
        incorporation_date=incorporated,
        status=schema.parse_status(get("status")),
        capital_minor=capital,
    )


def parse_registry(
    source: BinaryIO | TextIO,
    schema: Schema | None = None,
    aliases: RegionAliases | None = None,
    workers: int = 1,
    chunk_size: int = 50_000,
) -> ParseResult:
    """Parse a registry CSV into firm records and rejected rows.

    Reject line numbers count the header as line 1 and skip blank rows.
    Output order and counts do not depend on ``workers``; duplicates of an
    already accepted firm_id are rejected after the chunks are merged.
    """
    schema = schema or Schema.default()
    aliases = aliases or RegionAliases()
    data = source.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise SchemaError(f"input is not UTF-8: {exc}") from exc
    elif data.startswith("﻿"):
        data = data[1:]
    if not data.strip():
        raise SchemaError("empty registry file")

    reader = csv.reader(io.StringIO(data, newline=""))
    header = tuple(h.strip() for h in next(reader))
    positions = {name: i for i, name in reversed(list(enumerate(header)))}
    missing = [col for col in schema.columns.values() if col not in positions]
    if missing:
        raise SchemaError(f"missing mapped column(s): {', '.join(missing)}")
    index = {f: positions[schema.columns[f]] for f in LOGICAL_FIELDS}

    rows = [row for row in reader if any(cell.strip() for cell in row)]
    # lines are counted over non-blank rows; the header is line 1
    chunks = [(rows[i : i + chunk_size], i + 2) for i in range(0, len(rows), chunk_size)]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_parse_rows, c, start, index, schema, aliases) for c, start in chunks]
            parts = [f.result() for f in futures]
    else:
        parts = [_parse_rows(c, start, index, schema, aliases) for c, start in chunks]

    seen: set[str] = set()
    records: list[FirmRecord] = []
    rejects: list[RejectRow] = []
    for part_records, part_rejects in parts:
        rejects.extend(part_rejects)
        for line, rec in part_records:
            if rec.firm_id in seen:
                rejects.append(RejectRow(line, RejectReason.DUPLICATE_FIRM_ID, rec.firm_id, tuple(rows[line - 2])))
                continue
            seen.add(rec.firm_id)
            records.append(rec)
    rejects.sort(key=lambda r: r.line)
    if rejects:
        logger.info("rejected %d of %d rows: %s", len(rejects), len(rows), dict(Counter(r.reason.value for r in rejects)))
    return ParseResult(records=records, rejects=rejects, header=header, rows_read=len(rows))


def read_registry(path: str | Path, schema: Schema | None = None, aliases: RegionAliases | None = None, workers: int = 1) -> ParseResult:
    with open(path, "rb") as fh:
        result = parse_registry(fh, schema, aliases, workers=workers)
    name = Path(path).name
    result.rejects = [replace(r, source=name) for r in result.rejects]
    return result


def read_registries(paths: Sequence[str | Path], schema: Schema | None = None, aliases: RegionAliases | None = None, workers: int = 1) -> ParseResult:
    """Parse several registry files; a firm_id seen in an earlier file rejects later copies."""
    if not paths:
        raise SchemaError("no registry files given")
    records: list[FirmRecord] = []
    rejects: list[RejectRow] = []
    seen: set[str] = set()
    rows = 0
    header: tuple[str, ...] = ()
    for path in paths:
        part = read_registry(path, schema, aliases, workers=workers)
        header = header or part.header
        rows += part.rows_read
        rejects.extend(part.rejects)
        name = Path(path).name
        for rec in part.records:
            if rec.firm_id in seen:
                rejects.append(RejectRow(0, RejectReason.DUPLICATE_FIRM_ID, rec.firm_id, (), name))
                continue
            seen.add(rec.firm_id)
            records.append(rec)
    return ParseResult(records=records, rejects=rejects, header=header, rows_read=rows)


def read_records(path: str | Path) -> list[FirmRecord]:
    """Read a normalized records CSV produced by :func:`write_records`."""
    result = read_registry(path, Schema.normalized(), RegionAliases.identity())
    if result.rejects:
        first = result.rejects[0]
        raise RegistryError(f"{path}: line {first.line}: {first.reason.value} in normalized records file")
    return result.records


def write_records(records: Iterable[FirmRecord], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(LOGICAL_FIELDS + ("nic2",))
    for r in records:
        writer.writerow(
            [
                r.firm_id,
                r.region,
                r.nic_full,
                r.incorporation_date.isoformat(),
                r.status,
                format_capital(r.capital_minor),
                r.nic2,
            ]
        )


def write_rejects(rejects: Iterable[RejectRow], header: Sequence[str], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["file", "line", "reason", *header])
    for r in rejects:
        writer.writerow([r.source, r.line, r.reason.value, *r.raw])


def filter_active(records: Iterable[FirmRecord]) -> list[FirmRecord]:
    records = list(records)
    kept = [r for r in records if r.is_active]
    dropped = len(records) - len(kept)
    if dropped:
        logger.info("dropped %d inactive firm(s)", dropped)
    return kept


def snapshot(records: Iterable[FirmRecord], spec: SnapshotSpec) -> list[FirmRecord]:
    cutoff = spec.cutoff
    return [r for r in records if r.incorporation_date < cutoff]


def parse_cutoff(text: str) -> tuple[int, int]:
    """Parse ``MM-DD`` into (month, day)."""
    try:
        month, day = (int(p) for p in text.split("-"))
        date(2000, month, day)  # leap year accepts 02-29
    except ValueError:
        raise ValueError(f"fiscal cutoff must be MM-DD, got {text!r}") from None
    return month, day


def fiscal_year_counts(records: Iterable[FirmRecord], years: Iterable[int], cutoff: tuple[int, int] = (4, 1)) -> dict[int, int]:
    """Number of records in each fiscal-year snapshot."""
    dates = sorted(r.incorporation_date for r in records)
    return {y: bisect.bisect_left(dates, date(y, *cutoff)) for y in sorted(years)}

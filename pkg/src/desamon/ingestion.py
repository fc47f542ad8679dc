"""Parsing and normalization of heterogeneous legacy report files.

Legacy weekly reports arrive as CSV in assorted layouts, so the mapping from
canonical fields to source columns is explicit configuration (a column map),
never auto-detection.  Numbers and dates come in Indonesian or plain forms;
the field parsers here are strict and name the offending token on failure.

``import_report_csv`` turns rows into validated report drafts plus per-row
diagnostics.  It never writes anything; persistence is the caller's job.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from datetime import date, datetime, time, timezone
from enum import Enum
from typing import BinaryIO, Callable, Mapping, Sequence

from desamon.core.periods import period_end_date, period_of
from desamon.core.types import (
    Activity,
    Money,
    Percent,
    ProgressReport,
    new_id,
)
from desamon.core.validation import validate_progress_report
from desamon.disbursement import DisbursementStage, disbursed_to_date
from desamon.errors import DateOutOfRange, ParseError
from desamon.kvtext import is_quoted, parse_kv_document, unquote

CANONICAL_FIELDS = ("activity_ref", "period_or_date", "physical", "financial", "labor")


class Locale(str, Enum):
    INDONESIAN = "indonesian"
    PLAIN = "plain"


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True, slots=True)
class RowDiagnostic:
    """One problem in one source row; row 1 is the first data row (the
    header, when present, is row 0)."""

    row_number: int
    severity: Severity
    field: str
    message: str


@dataclass(frozen=True, slots=True)
class ColumnMap:
    """Where each canonical report field lives in the source file.

    Each field maps to a header name (str) or a 1-based column index (int).
    """

    activity_ref: str | int
    period_or_date: str | int
    physical: str | int
    financial: str | int
    labor: str | int
    locale: Locale = Locale.INDONESIAN
    delimiter: str = ","

    def __post_init__(self) -> None:
        sources = [getattr(self, name) for name in CANONICAL_FIELDS]
        for source in sources:
            if isinstance(source, int) and source < 1:
                raise ParseError(f"column index must be 1-based, got {source}")
            if isinstance(source, str) and not source.strip():
                raise ParseError("column header name must not be empty")
        if len(set(sources)) != len(sources):
            raise ParseError("no source column may be mapped twice")
        if len(self.delimiter) != 1:
            raise ParseError(f"delimiter must be a single character, got {self.delimiter!r}")

    @property
    def uses_header(self) -> bool:
        return any(isinstance(getattr(self, name), str) for name in CANONICAL_FIELDS)

    @classmethod
    def from_document(cls, text: str) -> "ColumnMap":
        """Build from a ``key = value`` document.

        Digit values are 1-based indices; quote a value to force it to be
        treated as a header name.  Optional keys: ``locale``, ``delimiter``.
        """
        raw = parse_kv_document(text)
        unknown = set(raw) - set(CANONICAL_FIELDS) - {"locale", "delimiter"}
        if unknown:
            raise ParseError(f"unknown column-map keys: {', '.join(sorted(unknown))}")
        missing = [name for name in CANONICAL_FIELDS if name not in raw]
        if missing:
            raise ParseError(f"column map missing fields: {', '.join(missing)}")
        columns: dict[str, str | int] = {}
        for name in CANONICAL_FIELDS:
            value = raw[name]
            if is_quoted(value):
                columns[name] = unquote(value)
            elif value.isdigit():
                columns[name] = int(value)
            else:
                columns[name] = value
        locale_text = unquote(raw.get("locale", Locale.INDONESIAN.value)).lower()
        try:
            locale = Locale(locale_text)
        except ValueError:
            raise ParseError(f"unknown locale: {locale_text!r}") from None
        delimiter = unquote(raw.get("delimiter", ","))
        return cls(locale=locale, delimiter=delimiter, **columns)  # type: ignore[arg-type]


_RP_PREFIX = re.compile(r"^rp\.?\s*", re.IGNORECASE)


def _check_grouping(int_part: str, separator: str, original: str) -> int:
    groups = int_part.split(separator)
    if any(not g.isdigit() for g in groups):
        raise ParseError(f"not a number: {original!r}")
    if len(groups) > 1:
        if not 1 <= len(groups[0]) <= 3 or any(len(g) != 3 for g in groups[1:]):
            raise ParseError(f"malformed thousands grouping in {original!r}")
    return int("".join(groups))


def parse_money(text: str, locale: Locale = Locale.INDONESIAN) -> Money:
    """Parse an amount of whole rupiah.

    Indonesian locale: ``.`` groups thousands, ``,`` starts a decimal part
    (rejected unless it is all zeros), optional ``Rp`` prefix.  Plain locale:
    digits with optional ``,`` thousands separators.
    """
    original = text
    text = text.strip()
    if locale is Locale.INDONESIAN:
        text = _RP_PREFIX.sub("", text)
    if not text:
        raise ParseError(f"empty amount: {original!r}")
    if text.startswith("-"):
        raise ParseError(f"negative amount: {original!r}")

    if locale is Locale.INDONESIAN:
        int_part, comma, frac = text.partition(",")
        if comma:
            if not frac or not frac.isdigit():
                raise ParseError(f"not a number: {original!r}")
            if int(frac) != 0:
                raise ParseError(f"fractional rupiah: {original!r}")
        return Money(_check_grouping(int_part, ".", original))

    if "." in text:
        raise ParseError(f"fractional rupiah: {original!r}")
    return Money(_check_grouping(text, ",", original))


def parse_percent(text: str) -> Percent:
    """Parse a percentage into basis points.

    Accepts ``40``, ``40%``, comma-decimal ``40,5``, and dot-decimal
    ``40.5`` when unambiguous (a second separator of either kind makes the
    token ambiguous).  At most two decimal digits fit in basis points.
    """
    original = text
    text = text.strip().removesuffix("%").strip()
    if not text:
        raise ParseError(f"empty percent: {original!r}")
    if text.startswith("-"):
        raise ParseError(f"percent out of range: {original!r}")
    separators = [c for c in text if c in ",."]
    if len(separators) > 1:
        raise ParseError(f"ambiguous number format: {original!r}")
    int_part, _, frac = text.replace(",", ".").partition(".")
    if not int_part.isdigit() or (frac and not frac.isdigit()):
        raise ParseError(f"not a number: {original!r}")
    if len(frac) > 2:
        raise ParseError(f"more than two decimal places: {original!r}")
    basis_points = int(int_part) * 100 + int(frac.ljust(2, "0") or "0")
    if basis_points > 10_000:
        raise ParseError(f"percent out of range: {original!r}")
    return Percent(basis_points)


_ISO_DATE = re.compile(r"^(\d{4})-(\d{2})-(\d{2})$")
_DAY_FIRST = re.compile(r"^(\d{1,2})([/-])(\d{1,2})\2(\d{4})$")


def parse_date(text: str) -> date:
    """Parse ISO ``YYYY-MM-DD`` or day-first ``DD/MM/YYYY`` / ``DD-MM-YYYY``."""
    token = text.strip()
    m = _ISO_DATE.match(token)
    if m:
        year, month, day = int(m.group(1)), int(m.group(2)), int(m.group(3))
    else:
        m = _DAY_FIRST.match(token)
        if not m:
            raise ParseError(f"unrecognized date format: {text!r}")
        day, month, year = int(m.group(1)), int(m.group(3)), int(m.group(4))
    try:
        return date(year, month, day)
    except ValueError:
        raise ParseError(f"invalid date: {text!r}") from None


@dataclass(frozen=True, slots=True)
class ImportTarget:
    """Resolution of an activity reference plus the state needed to validate
    its incoming reports."""

    activity: Activity
    fiscal_year: int
    latest_report: ProgressReport | None
    stages: tuple[DisbursementStage, ...]


ActivityResolver = Callable[[str], "ImportTarget | None"]


@dataclass(slots=True)
class ImportResult:
    accepted: list[ProgressReport] = field(default_factory=list)
    diagnostics: list[RowDiagnostic] = field(default_factory=list)

    @property
    def error_count(self) -> int:
        return sum(1 for d in self.diagnostics if d.severity is Severity.ERROR)

    @property
    def rejected_rows(self) -> set[int]:
        return {d.row_number for d in self.diagnostics if d.severity is Severity.ERROR}


def _resolve_columns(
    cmap: ColumnMap, header: Sequence[str] | None
) -> dict[str, int]:
    """Map canonical fields to 0-based indices, raising if a named column is
    missing from the header."""
    indices: dict[str, int] = {}
    for name in CANONICAL_FIELDS:
        source = getattr(cmap, name)
        if isinstance(source, int):
            indices[name] = source - 1
        else:
            assert header is not None
            stripped = [h.strip() for h in header]
            if source.strip() not in stripped:
                raise ParseError(f"column {source!r} not found in header")
            indices[name] = stripped.index(source.strip())
    if len(set(indices.values())) != len(indices):
        # A name and an index can collide only once the header is resolved.
        raise ParseError("no source column may be mapped twice")
    return indices


def import_report_csv(
    stream: bytes | BinaryIO,
    cmap: ColumnMap,
    resolve_activity: ActivityResolver,
    submitted_by: str = "import",
) -> ImportResult:
    """Parse a CSV byte stream into report drafts plus row diagnostics.

    Every data row ends up either in ``accepted`` or carries at least one
    error diagnostic, never both.  Rows are validated in file order, so a
    file may carry several consecutive weeks for one activity.  File-level
    problems (bad encoding, missing mapped header) raise instead.
    """
    data = stream if isinstance(stream, bytes) else stream.read()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"file is not valid UTF-8: {exc.reason} at byte {exc.start}") from None

    rows = csv.reader(io.StringIO(text, newline=""), delimiter=cmap.delimiter)
    header: Sequence[str] | None = None
    if cmap.uses_header:
        header = next(rows, None)
        if header is None:
            raise ParseError("file is empty but the column map names header columns")
    columns = _resolve_columns(cmap, header)

    result = ImportResult()
    # Rows already accepted earlier in this file act as priors for later ones.
    in_file_latest: dict[str, ProgressReport] = {}

    for row_number, row in enumerate(rows, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue

        def error(field_name: str, message: str) -> None:
            result.diagnostics.append(
                RowDiagnostic(row_number, Severity.ERROR, field_name, message)
            )

        errors_before = result.error_count
        cells: dict[str, str] = {}
        for name, index in columns.items():
            if index >= len(row):
                error(name, f"row has {len(row)} columns, field needs column {index + 1}")
            else:
                cells[name] = row[index]
        if result.error_count > errors_before:
            continue

        target = resolve_activity(cells["activity_ref"].strip())
        if target is None:
            error("activity_ref", f"unresolved activity: {cells['activity_ref'].strip()!r}")

        period: int | None = None
        report_day: date | None = None
        period_text = cells["period_or_date"].strip()
        if period_text.isdigit():
            period = int(period_text)
            if period < 1:
                error("period_or_date", f"period must be at least 1, got {period_text!r}")
                period = None
        else:
            try:
                report_day = parse_date(period_text)
            except ParseError as exc:
                error("period_or_date", str(exc))
        if report_day is not None and target is not None:
            try:
                period = period_of(report_day, target.fiscal_year)
            except DateOutOfRange as exc:
                error("period_or_date", str(exc))

        physical: Percent | None = None
        try:
            physical = parse_percent(cells["physical"])
        except ParseError as exc:
            error("physical", str(exc))

        financial: Money | None = None
        try:
            financial = parse_money(cells["financial"], cmap.locale)
        except ParseError as exc:
            error("financial", str(exc))

        labor: int | None = None
        labor_text = cells["labor"].strip()
        if labor_text.isdigit():
            labor = int(labor_text)
        else:
            error("labor", f"labor must be a non-negative integer, got {labor_text!r}")

        if result.error_count > errors_before:
            continue
        assert target is not None and physical is not None and financial is not None
        assert labor is not None and period is not None

        if report_day is None:
            report_day = period_end_date(target.fiscal_year, period)
        submitted_at = datetime.combine(report_day, time.min, tzinfo=timezone.utc)
        draft = ProgressReport(
            id=new_id(),
            activity_id=target.activity.id,
            period=period,
            physical=physical,
            financial_absorbed=financial,
            labor_count=labor,
            submitted_by=submitted_by,
            submitted_at=submitted_at,
        )
        prior = in_file_latest.get(target.activity.id, target.latest_report)
        verdict = validate_progress_report(
            draft,
            target.activity,
            prior,
            disbursed_to_date(target.stages, report_day),
        )
        if verdict.ok:
            result.accepted.append(draft)
            in_file_latest[target.activity.id] = draft
        else:
            for violation in verdict.violations:
                error(violation.field, violation.message)

    return result


def format_money(money: Money, locale: Locale = Locale.INDONESIAN) -> str:
    """Canonical text form; round-trips through :func:`parse_money`."""
    grouped = f"{money.amount:,}"
    return grouped.replace(",", ".") if locale is Locale.INDONESIAN else grouped


def format_percent(percent: Percent, locale: Locale = Locale.INDONESIAN) -> str:
    """Canonical text form; round-trips through :func:`parse_percent`."""
    whole, cents = divmod(percent.basis_points, 100)
    if cents == 0:
        return str(whole)
    decimals = f"{cents:02d}".rstrip("0")
    separator = "," if locale is Locale.INDONESIAN else "."
    return f"{whole}{separator}{decimals}"

"""Domain entities and value types shared by every other module.

Value types (Money, Percent, TrancheConfig) enforce their invariants at
construction and are safe everywhere by type.  Entities (Activity,
ProgressReport, ...) are permissive containers; cross-field and referential
rules live in :mod:`desamon.core.validation`, which returns verdicts instead
of raising so that arbitrary candidates can be inspected.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum


def new_id() -> str:
    """Opaque identifier for newly created entities."""
    return uuid.uuid4().hex


class ProgramKind(str, Enum):
    """The two program families an activity can belong to."""

    PIP = "PIP"
    PAMSIMAS = "PAMSIMAS"

    @classmethod
    def parse(cls, text: str) -> "ProgramKind":
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise ValueError(f"unknown program kind: {text!r}") from None


class Role(str, Enum):
    """Access roles; every account holds exactly one."""

    ADMIN = "admin"
    PETUGAS = "petugas"
    KASATKER = "kasatker"

    @classmethod
    def parse(cls, text: str) -> "Role":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown role: {text!r}") from None


@dataclass(frozen=True, order=True, slots=True)
class Money:
    """Whole rupiah. Negative amounts are not representable anywhere."""

    amount: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.amount, int) or isinstance(self.amount, bool):
            raise TypeError(f"money amount must be an integer, got {self.amount!r}")
        if self.amount < 0:
            raise ValueError(f"money amount must be non-negative, got {self.amount}")

    def __add__(self, other: "Money") -> "Money":
        return Money(self.amount + other.amount)

    def __sub__(self, other: "Money") -> "Money":
        # Underflow raises via the constructor invariant.
        return Money(self.amount - other.amount)


ZERO_RUPIAH = Money(0)


@dataclass(frozen=True, order=True, slots=True)
class Percent:
    """Progress percentage in integer basis points (4350 = 43.50%)."""

    basis_points: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.basis_points, int) or isinstance(self.basis_points, bool):
            raise TypeError(f"basis points must be an integer, got {self.basis_points!r}")
        if not 0 <= self.basis_points <= 10_000:
            raise ValueError(f"percent out of range: {self.basis_points} bp")


ZERO_PERCENT = Percent(0)
FULL_PERCENT = Percent(10_000)


@dataclass(frozen=True, slots=True)
class TrancheConfig:
    """Shares of the budget paid out at each of the three disbursement stages."""

    shares: tuple[Percent, Percent, Percent]

    def __post_init__(self) -> None:
        shares = tuple(self.shares)
        object.__setattr__(self, "shares", shares)
        if len(shares) != 3:
            raise ValueError(f"exactly three tranche shares required, got {len(shares)}")
        if any(s.basis_points <= 0 for s in shares):
            raise ValueError("each tranche share must be positive")
        total = sum(s.basis_points for s in shares)
        if total != 10_000:
            raise ValueError(f"tranche shares must sum to 100.00%, got {total} bp")


# 40/30/30 is a configurable convention, not a mandated split.
DEFAULT_TRANCHE_CONFIG = TrancheConfig((Percent(4000), Percent(3000), Percent(3000)))


@dataclass(frozen=True, slots=True)
class Program:
    id: str
    kind: ProgramKind
    fiscal_year: int
    name: str

    def __post_init__(self) -> None:
        if not self.name.strip():
            raise ValueError("program name must not be empty")
        if not 1990 <= self.fiscal_year <= 2100:
            raise ValueError(f"implausible fiscal year: {self.fiscal_year}")


@dataclass(frozen=True, slots=True)
class Kecamatan:
    id: str
    name: str

    def __post_init__(self) -> None:
        if not self.name.strip():
            raise ValueError("kecamatan name must not be empty")


@dataclass(frozen=True, slots=True)
class Desa:
    id: str
    kecamatan_id: str
    name: str

    def __post_init__(self) -> None:
        if not self.name.strip():
            raise ValueError("desa name must not be empty")


@dataclass(frozen=True, slots=True)
class Activity:
    """A budgeted infrastructure work item in one village under one program.

    Reporting windows are inclusive week indices within the program's fiscal
    year.  Cross-field and referential invariants are checked by
    ``validate_activity``, not here, so invalid candidates stay inspectable.
    """

    id: str
    program_id: str
    desa_id: str
    title: str
    budget: Money
    start_period: int
    end_period: int
    tranche_config: TrancheConfig = DEFAULT_TRANCHE_CONFIG


@dataclass(frozen=True, slots=True)
class TargetEntry:
    """One row of a work-target plan; both values are cumulative."""

    period: int
    planned_physical: Percent
    planned_financial: Money


@dataclass(frozen=True, slots=True)
class WorkTargetPlan:
    activity_id: str
    entries: tuple[TargetEntry, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))


@dataclass(frozen=True, slots=True)
class PhotoAttachment:
    """Field photo evidence tied to the progress level it documents."""

    id: str
    report_id: str
    content_hash: str
    caption: str
    achieved_at_percent: Percent
    media_type: str


@dataclass(frozen=True, slots=True)
class ProgressReport:
    """Weekly cumulative field report for one activity.

    ``physical`` and ``financial_absorbed`` are achievement-to-date, so a
    flat week repeats the previous values rather than reporting zero.
    """

    id: str
    activity_id: str
    period: int
    physical: Percent
    financial_absorbed: Money
    labor_count: int
    submitted_by: str
    submitted_at: datetime
    photos: tuple[PhotoAttachment, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "photos", tuple(self.photos))


@dataclass(frozen=True, slots=True)
class UserAccount:
    id: str
    username: str
    password_hash: str
    role: Role

    def __post_init__(self) -> None:
        if not self.username.strip():
            raise ValueError("username must not be empty")

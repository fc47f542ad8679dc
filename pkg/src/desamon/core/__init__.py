"""Core domain model: entities, value types, validation, week arithmetic."""

from desamon.core.periods import (
    first_reporting_monday,
    last_period_of_year,
    period_end_date,
    period_of,
    period_start_date,
)
from desamon.core.types import (
    DEFAULT_TRANCHE_CONFIG,
    FULL_PERCENT,
    ZERO_PERCENT,
    ZERO_RUPIAH,
    Activity,
    Desa,
    Kecamatan,
    Money,
    Percent,
    PhotoAttachment,
    Program,
    ProgramKind,
    ProgressReport,
    Role,
    TargetEntry,
    TrancheConfig,
    UserAccount,
    WorkTargetPlan,
    new_id,
)
from desamon.core.validation import (
    Verdict,
    Violation,
    validate_activity,
    validate_progress_report,
    validate_work_target_plan,
)

__all__ = [
    "Activity",
    "DEFAULT_TRANCHE_CONFIG",
    "Desa",
    "FULL_PERCENT",
    "Kecamatan",
    "Money",
    "Percent",
    "PhotoAttachment",
    "Program",
    "ProgramKind",
    "ProgressReport",
    "Role",
    "TargetEntry",
    "TrancheConfig",
    "UserAccount",
    "Verdict",
    "Violation",
    "WorkTargetPlan",
    "ZERO_PERCENT",
    "ZERO_RUPIAH",
    "first_reporting_monday",
    "last_period_of_year",
    "new_id",
    "period_end_date",
    "period_of",
    "period_start_date",
    "validate_activity",
    "validate_progress_report",
    "validate_work_target_plan",
]

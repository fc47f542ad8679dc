"""Pure validation rules returning verdicts.

These functions never raise on bad candidates and never touch storage; all
state they need is passed in.  Same inputs always yield the same verdict.
"""

from __future__ import annotations

from collections.abc import Collection
from dataclasses import dataclass

from desamon.core.types import Activity, Money, ProgressReport, WorkTargetPlan


@dataclass(frozen=True, slots=True)
class Violation:
    """One broken rule, naming the offending field."""

    field: str
    code: str
    message: str


@dataclass(frozen=True, slots=True)
class Verdict:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    @classmethod
    def single(cls, field: str, code: str, message: str) -> "Verdict":
        return cls((Violation(field, code, message),))


def _verdict(found: list[Violation]) -> Verdict:
    return Verdict(tuple(found))


def validate_activity(
    candidate: Activity,
    existing_desa: Collection[str],
    existing_programs: Collection[str],
) -> Verdict:
    """Check all Activity invariants; accepts arbitrary candidates."""
    found: list[Violation] = []
    if not candidate.title.strip():
        found.append(Violation("title", "empty_title", "title must not be empty"))
    if candidate.budget.amount <= 0:
        found.append(Violation("budget", "budget_not_positive", "budget must be positive"))
    if candidate.start_period < 1:
        found.append(
            Violation("start_period", "period_out_of_range", "start period must be at least 1")
        )
    if candidate.start_period > candidate.end_period:
        found.append(
            Violation(
                "start_period",
                "period_order",
                f"start period {candidate.start_period} exceeds end period {candidate.end_period}",
            )
        )
    if candidate.program_id not in existing_programs:
        found.append(Violation("program_id", "unknown_program", "unknown program"))
    if candidate.desa_id not in existing_desa:
        found.append(Violation("desa_id", "unknown_desa", "unknown desa"))
    return _verdict(found)


def validate_work_target_plan(plan: WorkTargetPlan, activity: Activity) -> Verdict:
    """Check a target plan against its activity.

    Entries must be strictly increasing in period, non-decreasing in both
    cumulative values, reach exactly 100.00% physical, and stay within the
    activity budget.
    """
    found: list[Violation] = []
    if not plan.entries:
        found.append(Violation("entries", "empty_plan", "plan must contain at least one entry"))
        return _verdict(found)
    prev = None
    for entry in plan.entries:
        if prev is not None:
            if entry.period <= prev.period:
                found.append(
                    Violation(
                        "entries",
                        "period_not_increasing",
                        f"plan periods must be strictly increasing (period {entry.period})",
                    )
                )
            if entry.planned_physical < prev.planned_physical:
                found.append(
                    Violation(
                        "entries",
                        "planned_physical_regression",
                        f"planned physical decreases at period {entry.period}",
                    )
                )
            if entry.planned_financial < prev.planned_financial:
                found.append(
                    Violation(
                        "entries",
                        "planned_financial_regression",
                        f"planned financial decreases at period {entry.period}",
                    )
                )
        prev = entry
    last = plan.entries[-1]
    if last.planned_physical.basis_points != 10_000:
        found.append(
            Violation(
                "entries",
                "plan_incomplete",
                "final planned physical must be exactly 100.00%",
            )
        )
    if last.planned_financial > activity.budget:
        found.append(
            Violation(
                "entries",
                "plan_exceeds_budget",
                "final planned financial exceeds the activity budget",
            )
        )
    first = plan.entries[0]
    if first.period < activity.start_period or last.period > activity.end_period:
        found.append(
            Violation(
                "entries",
                "plan_outside_window",
                "plan periods must lie within the activity reporting window",
            )
        )
    return _verdict(found)


def validate_progress_report(
    candidate: ProgressReport,
    activity: Activity,
    latest_prior: ProgressReport | None,
    disbursed_to_date: Money,
) -> Verdict:
    """Check a weekly report against its activity and the latest prior report.

    ``latest_prior`` must belong to the same activity; flat weeks (equal
    cumulative values) are legal, regressions are not.
    """
    found: list[Violation] = []
    if not isinstance(candidate.labor_count, int) or candidate.labor_count < 0:
        found.append(
            Violation("labor_count", "labor_negative", "labor count must be a non-negative integer")
        )
    if not activity.start_period <= candidate.period <= activity.end_period:
        found.append(
            Violation(
                "period",
                "period_out_of_window",
                f"period {candidate.period} outside reporting window "
                f"[{activity.start_period}, {activity.end_period}]",
            )
        )
    if latest_prior is not None:
        if candidate.period <= latest_prior.period:
            found.append(
                Violation(
                    "period",
                    "period_not_after_prior",
                    f"period {candidate.period} is not after the latest prior report "
                    f"(period {latest_prior.period})",
                )
            )
        if candidate.physical < latest_prior.physical:
            found.append(
                Violation(
                    "physical",
                    "physical_regression",
                    f"physical regression: {candidate.physical.basis_points} bp below "
                    f"prior {latest_prior.physical.basis_points} bp",
                )
            )
        if candidate.financial_absorbed < latest_prior.financial_absorbed:
            found.append(
                Violation(
                    "financial_absorbed",
                    "financial_regression",
                    "financial regression: cumulative absorption below the prior report",
                )
            )
    if candidate.financial_absorbed > disbursed_to_date:
        found.append(
            Violation(
                "financial_absorbed",
                "absorption_exceeds_disbursed",
                f"absorption exceeds disbursed: {candidate.financial_absorbed.amount} > "
                f"{disbursed_to_date.amount}",
            )
        )
    for photo in candidate.photos:
        if photo.achieved_at_percent > candidate.physical:
            found.append(
                Violation(
                    "photos",
                    "photo_percent_above_report",
                    f"photo {photo.id} claims {photo.achieved_at_percent.basis_points} bp, "
                    f"above the report's {candidate.physical.basis_points} bp",
                )
            )
    return _verdict(found)

"""Plan-vs-realization aggregation.

Everything here is a pure function over snapshots the caller supplies:
budget-weighted physical rollups over desa/kecamatan/program scopes, weekly
S-curve series, per-stage plan/realization chart pairs, and late-report
detection.  Missing reports count as zero progress and are surfaced through
``missing_report_count`` instead of silently inflating averages.

Plans and realizations are cumulative weekly values, so both series use
step (carry-forward) interpolation between entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from enum import Enum
from typing import Mapping, Sequence

from desamon.core.periods import period_end_date
from desamon.core.types import (
    Activity,
    Desa,
    Money,
    Percent,
    Program,
    ProgressReport,
    WorkTargetPlan,
    ZERO_PERCENT,
    ZERO_RUPIAH,
)
from desamon.disbursement import DisbursementStage, StageStatus
from desamon.errors import EmptyScope, InvalidInput

DEFAULT_GRACE_DAYS = 3


class ScopeKind(str, Enum):
    ACTIVITY = "activity"
    DESA = "desa"
    KECAMATAN = "kecamatan"
    PROGRAM = "program"


@dataclass(frozen=True, slots=True)
class Scope:
    kind: ScopeKind
    id: str


@dataclass(frozen=True, slots=True)
class RealizationPoint:
    """One S-curve sample; realized fields are absent before the first report."""

    period: int
    planned_physical: Percent
    realized_physical: Percent | None
    planned_financial: Money
    realized_financial: Money | None


@dataclass(frozen=True, slots=True)
class StageChartRow:
    """One paired bar of the per-stage plan/realization chart."""

    stage_number: int
    planned_amount: Money
    realized_amount: Money


@dataclass(frozen=True, slots=True)
class RollupResult:
    scope: Scope
    weighted_physical: Percent
    financial_planned: Money
    financial_realized: Money
    activity_count: int
    missing_report_count: int


class LatenessStatus(str, Enum):
    MISSING = "missing"
    LATE = "late"
    ON_TIME = "on_time"


@dataclass(frozen=True, slots=True)
class LatenessFlag:
    activity_id: str
    period: int
    days_late: int
    status: LatenessStatus


@dataclass(frozen=True, slots=True)
class RatioOutcome:
    """Realization ratio in basis points; over-realization may exceed 10000.

    ``basis_points`` is None when the ratio is undefined (nothing planned but
    something realized), in which case ``flagged`` marks the data-quality
    problem.
    """

    basis_points: int | None
    flagged: bool = False

    @property
    def defined(self) -> bool:
        return self.basis_points is not None


def _div_round_half_up(numerator: int, denominator: int) -> int:
    return (numerator + denominator // 2) // denominator


def realization_ratio(planned: Money, realized: Money) -> RatioOutcome:
    """Realized over planned, in basis points with round-half-up.

    Zero planned with zero realized is a defined 0; zero planned with a
    positive realization is undefined and flagged.
    """
    if planned.amount > 0:
        return RatioOutcome(_div_round_half_up(realized.amount * 10_000, planned.amount))
    if realized.amount == 0:
        return RatioOutcome(0)
    return RatioOutcome(None, flagged=True)


def latest_report_at(
    reports: Sequence[ProgressReport], as_of_period: int
) -> ProgressReport | None:
    """Last report with period <= as_of_period; reports are period-ordered."""
    latest = None
    for report in reports:
        if report.period <= as_of_period:
            latest = report
        else:
            break
    return latest


def planned_at(target: WorkTargetPlan, period: int) -> tuple[Percent, Money]:
    """Cumulative planned values at a period, carrying the last entry forward.

    Before the first plan entry nothing is planned yet: (0%, Rp 0).
    """
    physical, financial = ZERO_PERCENT, ZERO_RUPIAH
    for entry in target.entries:
        if entry.period > period:
            break
        physical, financial = entry.planned_physical, entry.planned_financial
    return physical, financial


def _in_scope(scope: Scope, activity: Activity, desa_by_id: Mapping[str, Desa]) -> bool:
    if scope.kind is ScopeKind.ACTIVITY:
        return activity.id == scope.id
    if scope.kind is ScopeKind.DESA:
        return activity.desa_id == scope.id
    if scope.kind is ScopeKind.KECAMATAN:
        desa = desa_by_id.get(activity.desa_id)
        return desa is not None and desa.kecamatan_id == scope.id
    return activity.program_id == scope.id


def rollup(
    scope: Scope,
    activities: Sequence[Activity],
    desa_by_id: Mapping[str, Desa],
    latest_reports: Mapping[str, ProgressReport | None],
    targets: Mapping[str, WorkTargetPlan],
    as_of: int,
) -> RollupResult:
    """Budget-weighted physical progress and financial sums for a scope.

    weighted_physical = sum(budget_i * physical_i) / sum(budget_i), with 0%
    for activities that have no report at or before ``as_of``.  Financial
    figures are plain sums of the cumulative planned (step-interpolated at
    ``as_of``) and realized values; over-absorption is reported, not clamped.
    Every activity in scope must have a work-target plan.
    """
    in_scope = [a for a in activities if _in_scope(scope, a, desa_by_id)]
    if not in_scope:
        raise EmptyScope(f"no activities in scope {scope.kind.value}:{scope.id}")

    weight_total = 0
    weighted_sum = 0
    planned_total = ZERO_RUPIAH
    realized_total = ZERO_RUPIAH
    missing = 0
    for activity in in_scope:
        target = targets.get(activity.id)
        if target is None:
            raise InvalidInput(f"activity {activity.id} has no work target plan")
        _, planned_financial = planned_at(target, as_of)
        planned_total = planned_total + planned_financial
        latest = latest_reports.get(activity.id)
        if latest is not None and latest.period > as_of:
            latest = None
        if latest is None:
            missing += 1
            physical_bp = 0
        else:
            physical_bp = latest.physical.basis_points
            realized_total = realized_total + latest.financial_absorbed
        weight_total += activity.budget.amount
        weighted_sum += activity.budget.amount * physical_bp

    weighted = _div_round_half_up(weighted_sum, weight_total) if weight_total else 0
    return RollupResult(
        scope=scope,
        weighted_physical=Percent(weighted),
        financial_planned=planned_total,
        financial_realized=realized_total,
        activity_count=len(in_scope),
        missing_report_count=missing,
    )


def s_curve(
    activity: Activity,
    target: WorkTargetPlan,
    reports: Sequence[ProgressReport],
    through: int,
) -> list[RealizationPoint]:
    """Weekly plan-vs-realization series from the activity start to ``through``.

    Planned values step-interpolate the target plan; realized values carry
    the last report forward and are absent before the first report.
    ``reports`` must be ordered by period.
    """
    if through < activity.start_period:
        raise InvalidInput(
            f"series end {through} precedes activity start {activity.start_period}"
        )
    points: list[RealizationPoint] = []
    report_index = 0
    current: ProgressReport | None = None
    for period in range(activity.start_period, through + 1):
        while report_index < len(reports) and reports[report_index].period <= period:
            current = reports[report_index]
            report_index += 1
        planned_physical, planned_financial = planned_at(target, period)
        points.append(
            RealizationPoint(
                period=period,
                planned_physical=planned_physical,
                realized_physical=None if current is None else current.physical,
                planned_financial=planned_financial,
                realized_financial=None if current is None else current.financial_absorbed,
            )
        )
    return points


def stage_chart_series(
    activity: Activity, stages: Sequence[DisbursementStage]
) -> list[StageChartRow]:
    """Three paired rows (plan, realization) for the stage chart.

    Realized is the recorded actual amount, 0 while a stage is still
    planned; actuals that differ from the plan pass through unmodified.
    """
    rows = []
    for stage in sorted(stages, key=lambda s: s.stage_number):
        realized = (
            stage.actual_amount
            if stage.status is StageStatus.DISBURSED and stage.actual_amount is not None
            else ZERO_RUPIAH
        )
        rows.append(
            StageChartRow(
                stage_number=stage.stage_number,
                planned_amount=stage.planned_amount,
                realized_amount=realized,
            )
        )
    if [row.stage_number for row in rows] != [1, 2, 3]:
        raise InvalidInput(f"activity {activity.id} does not have exactly stages 1..3")
    return rows


def late_reports(
    activities: Sequence[Activity],
    programs_by_id: Mapping[str, Program],
    reports_by_activity: Mapping[str, Sequence[ProgressReport]],
    as_of: date,
    grace_days: int = DEFAULT_GRACE_DAYS,
) -> list[LatenessFlag]:
    """Flag every elapsed reporting week as on-time, late, or missing.

    A week counts as elapsed once its Sunday is on or before ``as_of``.
    Submissions within ``grace_days`` after the week's end are on time;
    later ones are late by the excess.  Weeks with no report are flagged
    missing once the grace window has passed, counting days from then.
    Timeliness is judged by the earliest submission for a week, so later
    corrections cannot make an on-time report late.
    """
    if grace_days < 0:
        raise InvalidInput("grace days must be non-negative")
    flags: list[LatenessFlag] = []
    for activity in sorted(activities, key=lambda a: a.id):
        program = programs_by_id.get(activity.program_id)
        if program is None:
            raise InvalidInput(f"activity {activity.id} references unknown program")
        first_submission: dict[int, date] = {}
        for report in reports_by_activity.get(activity.id, ()):
            submitted = report.submitted_at.date()
            known = first_submission.get(report.period)
            if known is None or submitted < known:
                first_submission[report.period] = submitted
        for period in range(activity.start_period, activity.end_period + 1):
            week_end = period_end_date(program.fiscal_year, period)
            if week_end > as_of:
                break
            submitted = first_submission.get(period)
            if submitted is not None:
                delay = (submitted - week_end).days - grace_days
                if delay > 0:
                    flags.append(
                        LatenessFlag(activity.id, period, delay, LatenessStatus.LATE)
                    )
                else:
                    flags.append(LatenessFlag(activity.id, period, 0, LatenessStatus.ON_TIME))
            else:
                overdue = (as_of - week_end).days - grace_days
                if overdue > 0:
                    flags.append(
                        LatenessFlag(activity.id, period, overdue, LatenessStatus.MISSING)
                    )
                # Still inside the grace window: nothing to flag yet.
    return flags

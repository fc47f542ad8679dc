"""Canonical JSON payload shapes for the API and the CLI export.

Both emit the exact same bytes for the same snapshot, which is load-bearing:
the export command's payload section is compared byte-for-byte against the
API summary body.  Keep every payload builder here and keep
:func:`canonical_json` the single encoder.

Numbers stay integers (whole rupiah, basis points); each carries a
pre-rendered ``display`` string so clients never do arithmetic or
locale formatting themselves.
"""

from __future__ import annotations

import json
from datetime import date
from typing import Mapping, Sequence

from desamon.aggregation import (
    LatenessFlag,
    RealizationPoint,
    RollupResult,
    Scope,
    StageChartRow,
)
from desamon.core.types import (
    Activity,
    Desa,
    Kecamatan,
    Money,
    Percent,
    PhotoAttachment,
    Program,
    ProgressReport,
    TargetEntry,
    UserAccount,
)
from desamon.disbursement import DisbursementStage
from desamon.ingestion import Locale, format_money, format_percent


def canonical_json(payload: object) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def money_json(money: Money) -> dict:
    return {"amount": money.amount, "display": "Rp" + format_money(money, Locale.INDONESIAN)}


def percent_json(percent: Percent) -> dict:
    return {
        "basis_points": percent.basis_points,
        "display": format_percent(percent, Locale.INDONESIAN) + "%",
    }


def program_json(program: Program) -> dict:
    return {
        "id": program.id,
        "kind": program.kind.value,
        "fiscal_year": program.fiscal_year,
        "name": program.name,
    }


def kecamatan_json(kecamatan: Kecamatan) -> dict:
    return {"id": kecamatan.id, "name": kecamatan.name}


def desa_json(desa: Desa) -> dict:
    return {"id": desa.id, "kecamatan_id": desa.kecamatan_id, "name": desa.name}


def activity_json(activity: Activity) -> dict:
    return {
        "id": activity.id,
        "program_id": activity.program_id,
        "desa_id": activity.desa_id,
        "title": activity.title,
        "budget": money_json(activity.budget),
        "start_period": activity.start_period,
        "end_period": activity.end_period,
        "tranche_shares": [s.basis_points for s in activity.tranche_config.shares],
    }


def user_json(user: UserAccount) -> dict:
    # password_hash never leaves the server
    return {"id": user.id, "username": user.username, "role": user.role.value}


def target_entry_json(entry: TargetEntry) -> dict:
    return {
        "period": entry.period,
        "planned_physical": percent_json(entry.planned_physical),
        "planned_financial": money_json(entry.planned_financial),
    }


def photo_json(photo: PhotoAttachment) -> dict:
    return {
        "id": photo.id,
        "report_id": photo.report_id,
        "content_hash": photo.content_hash,
        "caption": photo.caption,
        "achieved_at_percent": percent_json(photo.achieved_at_percent),
        "media_type": photo.media_type,
    }


def report_json(report: ProgressReport, superseded: bool = False) -> dict:
    return {
        "id": report.id,
        "activity_id": report.activity_id,
        "period": report.period,
        "physical": percent_json(report.physical),
        "financial_absorbed": money_json(report.financial_absorbed),
        "labor_count": report.labor_count,
        "submitted_by": report.submitted_by,
        "submitted_at": report.submitted_at.isoformat(),
        "superseded": superseded,
        "photos": [photo_json(p) for p in report.photos],
    }


def stage_json(stage: DisbursementStage) -> dict:
    return {
        "stage_number": stage.stage_number,
        "planned_amount": money_json(stage.planned_amount),
        "actual_amount": None if stage.actual_amount is None else money_json(stage.actual_amount),
        "disbursed_on": None if stage.disbursed_on is None else stage.disbursed_on.isoformat(),
        "status": stage.status.value,
    }


def scope_json(scope: Scope) -> dict:
    return {"kind": scope.kind.value, "id": scope.id}


def _rollup_fields(result: RollupResult) -> dict:
    return {
        "weighted_physical": percent_json(result.weighted_physical),
        "financial_planned": money_json(result.financial_planned),
        "financial_realized": money_json(result.financial_realized),
        "activity_count": result.activity_count,
        "missing_report_count": result.missing_report_count,
    }


def summary_payload(
    result: RollupResult,
    name: str,
    as_of_period: int,
    breakdown: Sequence[tuple[str, RollupResult]],
) -> dict:
    """Rollup plus one level of child rollups (scopes with no activities are
    simply absent from the breakdown)."""
    return {
        "scope": scope_json(result.scope),
        "name": name,
        "as_of_period": as_of_period,
        **_rollup_fields(result),
        "breakdown": [
            {"scope": scope_json(child.scope), "name": child_name, **_rollup_fields(child)}
            for child_name, child in breakdown
        ],
    }


def s_curve_payload(activity: Activity, points: Sequence[RealizationPoint], through: int) -> dict:
    return {
        "activity_id": activity.id,
        "title": activity.title,
        "through": through,
        "points": [
            {
                "period": p.period,
                "planned_physical": percent_json(p.planned_physical),
                "realized_physical": (
                    None if p.realized_physical is None else percent_json(p.realized_physical)
                ),
                "planned_financial": money_json(p.planned_financial),
                "realized_financial": (
                    None if p.realized_financial is None else money_json(p.realized_financial)
                ),
            }
            for p in points
        ],
    }


def stage_chart_payload(activity: Activity, rows: Sequence[StageChartRow]) -> dict:
    return {
        "activity_id": activity.id,
        "title": activity.title,
        "rows": [
            {
                "stage_number": row.stage_number,
                "planned": money_json(row.planned_amount),
                "realized": money_json(row.realized_amount),
            }
            for row in rows
        ],
    }


def late_reports_payload(
    as_of: date,
    grace_days: int,
    flags: Sequence[LatenessFlag],
    activity_titles: Mapping[str, str],
) -> dict:
    return {
        "as_of": as_of.isoformat(),
        "grace_days": grace_days,
        "flags": [
            {
                "activity_id": f.activity_id,
                "activity_title": activity_titles.get(f.activity_id, ""),
                "period": f.period,
                "days_late": f.days_late,
                "status": f.status.value,
            }
            for f in flags
        ],
    }

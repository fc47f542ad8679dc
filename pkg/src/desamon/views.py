"""Read models assembled from one repository snapshot.

The API's summary endpoints and the CLI's JSON export both call these
builders, so a given snapshot produces identical payload dicts (and, through
``canonical_json``, identical bytes) on both paths.
"""

from __future__ import annotations

from datetime import date

from desamon.aggregation import Scope, ScopeKind, late_reports, rollup, s_curve, stage_chart_series
from desamon.core.types import Activity
from desamon.errors import EmptyScope, InvalidInput, NotFound
from desamon.serialize import (
    late_reports_payload,
    s_curve_payload,
    stage_chart_payload,
    summary_payload,
)
from desamon.storage.repository import Repository

# URL/CLI spelling → internal scope kind
SCOPE_NAMES = {
    "program": ScopeKind.PROGRAM,
    "kecamatan": ScopeKind.KECAMATAN,
    "desa": ScopeKind.DESA,
    "kegiatan": ScopeKind.ACTIVITY,
}


def _scope_activities(repo: Repository, scope: Scope) -> tuple[str, list[Activity]]:
    """Scope display name and its activities; NotFound for unknown ids."""
    if scope.kind is ScopeKind.PROGRAM:
        program = repo.get_program(scope.id)
        if program is None:
            raise NotFound(f"program {scope.id}")
        return program.name, repo.list_activities(program_id=scope.id)
    if scope.kind is ScopeKind.KECAMATAN:
        kecamatan = repo.get_kecamatan(scope.id)
        if kecamatan is None:
            raise NotFound(f"kecamatan {scope.id}")
        return kecamatan.name, repo.list_activities(kecamatan_id=scope.id)
    if scope.kind is ScopeKind.DESA:
        desa = repo.get_desa(scope.id)
        if desa is None:
            raise NotFound(f"desa {scope.id}")
        return desa.name, repo.list_activities(desa_id=scope.id)
    activity = repo.get_activity(scope.id)
    if activity is None:
        raise NotFound(f"activity {scope.id}")
    return activity.title, [activity]


def build_summary(
    repo: Repository, scope: Scope, as_of_period: int | None = None
) -> dict:
    name, activities = _scope_activities(repo, scope)
    if not activities:
        raise EmptyScope(f"no activities in scope {scope.kind.value}:{scope.id}")

    desa_by_id = {d.id: d for d in repo.list_desa()}
    latest = {a.id: repo.latest_report(a.id) for a in activities}
    targets = {}
    for activity in activities:
        plan = repo.get_work_target_plan(activity.id)
        if plan is not None:
            targets[activity.id] = plan
    as_of = as_of_period if as_of_period is not None else max(a.end_period for a in activities)

    result = rollup(scope, activities, desa_by_id, latest, targets, as_of)

    children: list[tuple[str, Scope]] = []
    if scope.kind is ScopeKind.PROGRAM:
        seen = sorted(
            {desa_by_id[a.desa_id].kecamatan_id for a in activities if a.desa_id in desa_by_id}
        )
        for kecamatan_id in seen:
            kecamatan = repo.get_kecamatan(kecamatan_id)
            if kecamatan is not None:
                children.append((kecamatan.name, Scope(ScopeKind.KECAMATAN, kecamatan_id)))
    elif scope.kind is ScopeKind.KECAMATAN:
        for desa_id in sorted({a.desa_id for a in activities}):
            desa = desa_by_id.get(desa_id)
            if desa is not None:
                children.append((desa.name, Scope(ScopeKind.DESA, desa_id)))
    elif scope.kind is ScopeKind.DESA:
        for activity in activities:
            children.append((activity.title, Scope(ScopeKind.ACTIVITY, activity.id)))

    children.sort(key=lambda pair: (pair[0], pair[1].id))
    breakdown = [
        # children roll up the same activity set, narrowed by scope
        (child_name, rollup(child_scope, activities, desa_by_id, latest, targets, as_of))
        for child_name, child_scope in children
    ]
    return summary_payload(result, name, as_of, breakdown)


def build_s_curve(repo: Repository, activity_id: str, through: int | None = None) -> dict:
    activity = repo.get_activity(activity_id)
    if activity is None:
        raise NotFound(f"activity {activity_id}")
    target = repo.get_work_target_plan(activity_id)
    if target is None:
        raise InvalidInput(f"activity {activity_id} has no work target plan")
    reports = repo.list_reports(activity_id)
    end = through if through is not None else activity.end_period
    points = s_curve(activity, target, reports, end)
    return s_curve_payload(activity, points, end)


def build_stage_chart(repo: Repository, activity_id: str) -> dict:
    activity = repo.get_activity(activity_id)
    if activity is None:
        raise NotFound(f"activity {activity_id}")
    rows = stage_chart_series(activity, repo.get_stages(activity_id))
    return stage_chart_payload(activity, rows)


def build_late_reports(
    repo: Repository,
    as_of: date,
    grace_days: int,
    program_id: str | None = None,
) -> dict:
    if program_id is not None and repo.get_program(program_id) is None:
        raise NotFound(f"program {program_id}")
    activities = repo.list_activities(program_id=program_id)
    programs = {p.id: p for p in repo.list_programs()}
    # superseded submissions still count for timeliness: the original filing
    # happened, later corrections must not turn an on-time week late
    reports = {a.id: repo.list_reports(a.id, include_superseded=True) for a in activities}
    flags = late_reports(activities, programs, reports, as_of, grace_days)
    titles = {a.id: a.title for a in activities}
    return late_reports_payload(as_of, grace_days, flags, titles)

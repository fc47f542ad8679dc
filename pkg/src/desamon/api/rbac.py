"""Role-based access control as one fully enumerated matrix.

Every (role, action) pair is listed either in the allow set or the deny set
for that role; module import fails if any action is missing or doubly listed.
There is no fallback decision anywhere, so adding an Action without placing
it for all three roles is an immediate crash, not a silent hole.
"""

from __future__ import annotations

from enum import Enum

from desamon.core.types import Role


class Action(str, Enum):
    CREATE_PROGRAM = "create_program"
    GET_PROGRAM = "get_program"
    LIST_PROGRAMS = "list_programs"
    UPDATE_PROGRAM = "update_program"
    DELETE_PROGRAM = "delete_program"

    CREATE_KECAMATAN = "create_kecamatan"
    GET_KECAMATAN = "get_kecamatan"
    LIST_KECAMATAN = "list_kecamatan"
    UPDATE_KECAMATAN = "update_kecamatan"
    DELETE_KECAMATAN = "delete_kecamatan"

    CREATE_DESA = "create_desa"
    GET_DESA = "get_desa"
    LIST_DESA = "list_desa"
    UPDATE_DESA = "update_desa"
    DELETE_DESA = "delete_desa"

    CREATE_ACTIVITY = "create_activity"
    GET_ACTIVITY = "get_activity"
    LIST_ACTIVITIES = "list_activities"
    UPDATE_ACTIVITY = "update_activity"
    DELETE_ACTIVITY = "delete_activity"

    CREATE_USER = "create_user"
    GET_USER = "get_user"
    LIST_USERS = "list_users"
    UPDATE_USER = "update_user"
    DELETE_USER = "delete_user"

    SET_WORK_TARGETS = "set_work_targets"
    GET_WORK_TARGETS = "get_work_targets"

    SUBMIT_REPORT = "submit_report"
    SUPERSEDE_REPORT = "supersede_report"
    GET_REPORT = "get_report"
    LIST_REPORTS = "list_reports"

    RECORD_DISBURSEMENT = "record_disbursement"
    LIST_DISBURSEMENTS = "list_disbursements"

    UPLOAD_PHOTO = "upload_photo"
    GET_PHOTO = "get_photo"

    VIEW_SUMMARY = "view_summary"
    VIEW_S_CURVE = "view_s_curve"
    VIEW_STAGE_CHART = "view_stage_chart"
    VIEW_LATE_REPORTS = "view_late_reports"


_MASTER_READS = (
    Action.GET_PROGRAM,
    Action.LIST_PROGRAMS,
    Action.GET_KECAMATAN,
    Action.LIST_KECAMATAN,
    Action.GET_DESA,
    Action.LIST_DESA,
    Action.GET_ACTIVITY,
    Action.LIST_ACTIVITIES,
)

_MASTER_WRITES = (
    Action.CREATE_PROGRAM,
    Action.UPDATE_PROGRAM,
    Action.DELETE_PROGRAM,
    Action.CREATE_KECAMATAN,
    Action.UPDATE_KECAMATAN,
    Action.DELETE_KECAMATAN,
    Action.CREATE_DESA,
    Action.UPDATE_DESA,
    Action.DELETE_DESA,
    Action.CREATE_ACTIVITY,
    Action.UPDATE_ACTIVITY,
    Action.DELETE_ACTIVITY,
)

_USER_ADMIN = (
    Action.CREATE_USER,
    Action.GET_USER,
    Action.LIST_USERS,
    Action.UPDATE_USER,
    Action.DELETE_USER,
)

_FIELD_WRITES = (
    Action.SUBMIT_REPORT,
    Action.SUPERSEDE_REPORT,
    Action.RECORD_DISBURSEMENT,
    Action.UPLOAD_PHOTO,
)

_MONITOR_READS = (
    Action.GET_WORK_TARGETS,
    Action.GET_REPORT,
    Action.LIST_REPORTS,
    Action.LIST_DISBURSEMENTS,
    Action.GET_PHOTO,
)

_VIEWS = (
    Action.VIEW_SUMMARY,
    Action.VIEW_S_CURVE,
    Action.VIEW_STAGE_CHART,
    Action.VIEW_LATE_REPORTS,
)

# Admin keeps the registers and accounts but does not file field data;
# petugas files field data and reads what it needs to file correctly;
# kasatker sees everything monitoring-related and touches nothing.
_ALLOW: dict[Role, frozenset[Action]] = {
    Role.ADMIN: frozenset(
        _MASTER_READS
        + _MASTER_WRITES
        + _USER_ADMIN
        + (Action.SET_WORK_TARGETS,)
        + _MONITOR_READS
        + _VIEWS
    ),
    Role.PETUGAS: frozenset(_MASTER_READS + _FIELD_WRITES + _MONITOR_READS),
    Role.KASATKER: frozenset(_MASTER_READS + _MONITOR_READS + _VIEWS),
}

_DENY: dict[Role, frozenset[Action]] = {
    Role.ADMIN: frozenset(_FIELD_WRITES),
    Role.PETUGAS: frozenset(
        _MASTER_WRITES + _USER_ADMIN + (Action.SET_WORK_TARGETS,) + _VIEWS
    ),
    Role.KASATKER: frozenset(
        _MASTER_WRITES
        + _USER_ADMIN
        + (Action.SET_WORK_TARGETS,)
        + _FIELD_WRITES
    ),
}


def _check_full_coverage() -> None:
    everything = frozenset(Action)
    for role in Role:
        allowed, denied = _ALLOW[role], _DENY[role]
        if allowed & denied:
            raise AssertionError(f"{role}: actions listed twice: {allowed & denied}")
        missing = everything - allowed - denied
        if missing:
            raise AssertionError(f"{role}: actions not listed: {missing}")


_check_full_coverage()


def is_allowed(role: Role, action: Action) -> bool:
    return action in _ALLOW[role]


def matrix() -> dict[tuple[Role, Action], bool]:
    """The complete decision table, mostly for tests and exports."""
    return {(role, action): action in _ALLOW[role] for role in Role for action in Action}

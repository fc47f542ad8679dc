"""Entity persistence over one transactional connection.

A ``Repository`` wraps a live connection handed out by the database's
``transaction``/``snapshot`` context managers; it never opens or commits
anything itself.  Uniqueness and referential problems surface as ``Conflict``
with readable messages.  Audit rows are append-only: nothing here (or
anywhere else in the package) updates or deletes them.
"""

from __future__ import annotations

import sqlite3
from dataclasses import dataclass
from datetime import date, datetime, timezone
from typing import Iterable, Sequence

from desamon.core.types import (
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
)
from desamon.disbursement import DisbursementStage, StageStatus
from desamon.errors import Conflict, NotFound


@dataclass(frozen=True, slots=True)
class AuditEntry:
    """One append-only trail row; ``actor`` is the acting username."""

    id: int
    actor: str
    action: str
    entity_type: str
    entity_id: str
    at: datetime
    detail: str


def _utc_now() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)


class Repository:
    def __init__(self, conn: sqlite3.Connection):
        self._conn = conn

    # -- programs ---------------------------------------------------------

    def insert_program(self, program: Program) -> None:
        self._insert(
            "INSERT INTO programs (id, kind, fiscal_year, name) VALUES (?, ?, ?, ?)",
            (program.id, program.kind.value, program.fiscal_year, program.name),
            f"program ({program.kind.value}, {program.fiscal_year}, {program.name!r}) already exists",
        )

    def get_program(self, program_id: str) -> Program | None:
        row = self._one("SELECT * FROM programs WHERE id = ?", (program_id,))
        return None if row is None else _program(row)

    def find_program(self, kind: ProgramKind, fiscal_year: int, name: str) -> Program | None:
        row = self._one(
            "SELECT * FROM programs WHERE kind = ? AND fiscal_year = ? AND name = ?",
            (kind.value, fiscal_year, name),
        )
        return None if row is None else _program(row)

    def list_programs(self) -> list[Program]:
        rows = self._conn.execute(
            "SELECT * FROM programs ORDER BY fiscal_year, kind, name"
        ).fetchall()
        return [_program(r) for r in rows]

    def update_program(self, program: Program) -> None:
        self._touch_existing("programs", program.id)
        self._execute_conflict(
            "UPDATE programs SET kind = ?, fiscal_year = ?, name = ? WHERE id = ?",
            (program.kind.value, program.fiscal_year, program.name, program.id),
            "program natural key already used",
        )

    def delete_program(self, program_id: str) -> None:
        self._touch_existing("programs", program_id)
        self._execute_conflict(
            "DELETE FROM programs WHERE id = ?",
            (program_id,),
            "program still has activities",
        )

    # -- kecamatan --------------------------------------------------------

    def insert_kecamatan(self, kecamatan: Kecamatan) -> None:
        self._insert(
            "INSERT INTO kecamatan (id, name) VALUES (?, ?)",
            (kecamatan.id, kecamatan.name),
            f"kecamatan {kecamatan.name!r} already exists",
        )

    def get_kecamatan(self, kecamatan_id: str) -> Kecamatan | None:
        row = self._one("SELECT * FROM kecamatan WHERE id = ?", (kecamatan_id,))
        return None if row is None else Kecamatan(row["id"], row["name"])

    def find_kecamatan_by_name(self, name: str) -> Kecamatan | None:
        row = self._one("SELECT * FROM kecamatan WHERE name = ?", (name,))
        return None if row is None else Kecamatan(row["id"], row["name"])

    def list_kecamatan(self) -> list[Kecamatan]:
        rows = self._conn.execute("SELECT * FROM kecamatan ORDER BY name").fetchall()
        return [Kecamatan(r["id"], r["name"]) for r in rows]

    def update_kecamatan(self, kecamatan: Kecamatan) -> None:
        self._touch_existing("kecamatan", kecamatan.id)
        self._execute_conflict(
            "UPDATE kecamatan SET name = ? WHERE id = ?",
            (kecamatan.name, kecamatan.id),
            f"kecamatan {kecamatan.name!r} already exists",
        )

    def delete_kecamatan(self, kecamatan_id: str) -> None:
        self._touch_existing("kecamatan", kecamatan_id)
        self._execute_conflict(
            "DELETE FROM kecamatan WHERE id = ?",
            (kecamatan_id,),
            "kecamatan still has desa",
        )

    # -- desa -------------------------------------------------------------

    def insert_desa(self, desa: Desa) -> None:
        self._insert(
            "INSERT INTO desa (id, kecamatan_id, name) VALUES (?, ?, ?)",
            (desa.id, desa.kecamatan_id, desa.name),
            f"desa {desa.name!r} already exists in its kecamatan, or kecamatan is unknown",
        )

    def get_desa(self, desa_id: str) -> Desa | None:
        row = self._one("SELECT * FROM desa WHERE id = ?", (desa_id,))
        return None if row is None else _desa(row)

    def find_desa(self, kecamatan_id: str, name: str) -> Desa | None:
        row = self._one(
            "SELECT * FROM desa WHERE kecamatan_id = ? AND name = ?", (kecamatan_id, name)
        )
        return None if row is None else _desa(row)

    def list_desa(self, kecamatan_id: str | None = None) -> list[Desa]:
        if kecamatan_id is None:
            rows = self._conn.execute("SELECT * FROM desa ORDER BY name").fetchall()
        else:
            rows = self._conn.execute(
                "SELECT * FROM desa WHERE kecamatan_id = ? ORDER BY name", (kecamatan_id,)
            ).fetchall()
        return [_desa(r) for r in rows]

    def update_desa(self, desa: Desa) -> None:
        self._touch_existing("desa", desa.id)
        self._execute_conflict(
            "UPDATE desa SET kecamatan_id = ?, name = ? WHERE id = ?",
            (desa.kecamatan_id, desa.name, desa.id),
            "desa natural key already used",
        )

    def delete_desa(self, desa_id: str) -> None:
        self._touch_existing("desa", desa_id)
        self._execute_conflict(
            "DELETE FROM desa WHERE id = ?",
            (desa_id,),
            "desa still has activities",
        )

    # -- activities -------------------------------------------------------

    def insert_activity(self, activity: Activity) -> None:
        shares = activity.tranche_config.shares
        self._insert(
            "INSERT INTO activities (id, program_id, desa_id, title, budget,"
            " start_period, end_period, share1, share2, share3)"
            " VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
            (
                activity.id,
                activity.program_id,
                activity.desa_id,
                activity.title,
                activity.budget.amount,
                activity.start_period,
                activity.end_period,
                shares[0].basis_points,
                shares[1].basis_points,
                shares[2].basis_points,
            ),
            f"activity {activity.title!r} already exists for this program and desa",
        )

    def get_activity(self, activity_id: str) -> Activity | None:
        row = self._one("SELECT * FROM activities WHERE id = ?", (activity_id,))
        return None if row is None else _activity(row)

    def find_activity(self, program_id: str, desa_id: str, title: str) -> Activity | None:
        row = self._one(
            "SELECT * FROM activities WHERE program_id = ? AND desa_id = ? AND title = ?",
            (program_id, desa_id, title),
        )
        return None if row is None else _activity(row)

    def find_activity_by_title(self, title: str) -> list[Activity]:
        rows = self._conn.execute(
            "SELECT * FROM activities WHERE title = ? ORDER BY id", (title,)
        ).fetchall()
        return [_activity(r) for r in rows]

    def list_activities(
        self,
        program_id: str | None = None,
        desa_id: str | None = None,
        kecamatan_id: str | None = None,
    ) -> list[Activity]:
        clauses, params = [], []
        sql = "SELECT a.* FROM activities a"
        if kecamatan_id is not None:
            sql += " JOIN desa d ON d.id = a.desa_id"
            clauses.append("d.kecamatan_id = ?")
            params.append(kecamatan_id)
        if program_id is not None:
            clauses.append("a.program_id = ?")
            params.append(program_id)
        if desa_id is not None:
            clauses.append("a.desa_id = ?")
            params.append(desa_id)
        if clauses:
            sql += " WHERE " + " AND ".join(clauses)
        sql += " ORDER BY a.title, a.id"
        return [_activity(r) for r in self._conn.execute(sql, params).fetchall()]

    def update_activity(self, activity: Activity) -> None:
        self._touch_existing("activities", activity.id)
        shares = activity.tranche_config.shares
        self._execute_conflict(
            "UPDATE activities SET program_id = ?, desa_id = ?, title = ?, budget = ?,"
            " start_period = ?, end_period = ?, share1 = ?, share2 = ?, share3 = ?"
            " WHERE id = ?",
            (
                activity.program_id,
                activity.desa_id,
                activity.title,
                activity.budget.amount,
                activity.start_period,
                activity.end_period,
                shares[0].basis_points,
                shares[1].basis_points,
                shares[2].basis_points,
                activity.id,
            ),
            "activity natural key already used",
        )

    def delete_activity(self, activity_id: str) -> None:
        self._touch_existing("activities", activity_id)
        self._execute_conflict(
            "DELETE FROM activities WHERE id = ?",
            (activity_id,),
            "activity still has reports",
        )

    # -- work targets -----------------------------------------------------

    def set_work_target_plan(self, plan: WorkTargetPlan) -> None:
        """Replace the activity's plan wholesale; plans are small."""
        self._touch_existing("activities", plan.activity_id)
        self._conn.execute(
            "DELETE FROM work_target_entries WHERE activity_id = ?", (plan.activity_id,)
        )
        self._conn.executemany(
            "INSERT INTO work_target_entries (activity_id, period, planned_physical,"
            " planned_financial) VALUES (?, ?, ?, ?)",
            [
                (
                    plan.activity_id,
                    e.period,
                    e.planned_physical.basis_points,
                    e.planned_financial.amount,
                )
                for e in plan.entries
            ],
        )

    def get_work_target_plan(self, activity_id: str) -> WorkTargetPlan | None:
        rows = self._conn.execute(
            "SELECT * FROM work_target_entries WHERE activity_id = ? ORDER BY period",
            (activity_id,),
        ).fetchall()
        if not rows:
            return None
        entries = tuple(
            TargetEntry(r["period"], Percent(r["planned_physical"]), Money(r["planned_financial"]))
            for r in rows
        )
        return WorkTargetPlan(activity_id=activity_id, entries=entries)

    # -- stages -----------------------------------------------------------

    def insert_stages(self, stages: Iterable[DisbursementStage]) -> None:
        for stage in stages:
            self._insert(
                "INSERT INTO stages (activity_id, stage_number, planned_amount,"
                " actual_amount, disbursed_on, status) VALUES (?, ?, ?, ?, ?, ?)",
                _stage_params(stage),
                f"stage {stage.stage_number} already planned for activity",
            )

    def get_stages(self, activity_id: str) -> list[DisbursementStage]:
        rows = self._conn.execute(
            "SELECT * FROM stages WHERE activity_id = ? ORDER BY stage_number",
            (activity_id,),
        ).fetchall()
        return [_stage(r) for r in rows]

    def replace_stage(self, stage: DisbursementStage) -> None:
        cursor = self._execute_conflict(
            "UPDATE stages SET planned_amount = ?, actual_amount = ?, disbursed_on = ?,"
            " status = ? WHERE activity_id = ? AND stage_number = ?",
            _stage_params(stage)[2:] + (stage.activity_id, stage.stage_number),
            "stage update conflicts with constraints",
        )
        if cursor.rowcount == 0:
            raise NotFound(f"stage {stage.stage_number} of activity {stage.activity_id}")

    def delete_stages(self, activity_id: str) -> None:
        self._conn.execute("DELETE FROM stages WHERE activity_id = ?", (activity_id,))

    # -- reports ----------------------------------------------------------

    def insert_report(self, report: ProgressReport) -> None:
        self._insert(
            "INSERT INTO reports (id, activity_id, period, physical, financial_absorbed,"
            " labor_count, submitted_by, submitted_at, superseded)"
            " VALUES (?, ?, ?, ?, ?, ?, ?, ?, 0)",
            (
                report.id,
                report.activity_id,
                report.period,
                report.physical.basis_points,
                report.financial_absorbed.amount,
                report.labor_count,
                report.submitted_by,
                report.submitted_at.isoformat(),
            ),
            f"a report for period {report.period} already exists",
        )
        for photo in report.photos:
            self.insert_photo(photo)

    def mark_report_superseded(self, report_id: str) -> None:
        cursor = self._conn.execute(
            "UPDATE reports SET superseded = 1 WHERE id = ?", (report_id,)
        )
        if cursor.rowcount == 0:
            raise NotFound(f"report {report_id}")

    def get_report(self, report_id: str) -> ProgressReport | None:
        row = self._one("SELECT * FROM reports WHERE id = ?", (report_id,))
        return None if row is None else self._report(row)

    def is_superseded(self, report_id: str) -> bool:
        row = self._one("SELECT superseded FROM reports WHERE id = ?", (report_id,))
        if row is None:
            raise NotFound(f"report {report_id}")
        return bool(row["superseded"])

    def list_reports(
        self, activity_id: str, include_superseded: bool = False
    ) -> list[ProgressReport]:
        """Reports for one activity in ascending period order."""
        sql = "SELECT * FROM reports WHERE activity_id = ?"
        if not include_superseded:
            sql += " AND superseded = 0"
        sql += " ORDER BY period, submitted_at, id"
        rows = self._conn.execute(sql, (activity_id,)).fetchall()
        return [self._report(r) for r in rows]

    def superseded_ids(self, activity_id: str) -> set[str]:
        rows = self._conn.execute(
            "SELECT id FROM reports WHERE activity_id = ? AND superseded = 1",
            (activity_id,),
        ).fetchall()
        return {r["id"] for r in rows}

    def active_report_for_period(
        self, activity_id: str, period: int
    ) -> ProgressReport | None:
        row = self._one(
            "SELECT * FROM reports WHERE activity_id = ? AND period = ? AND superseded = 0",
            (activity_id, period),
        )
        return None if row is None else self._report(row)

    def latest_report(
        self, activity_id: str, before_period: int | None = None
    ) -> ProgressReport | None:
        """Latest active report, optionally only from periods strictly before
        ``before_period``."""
        sql = "SELECT * FROM reports WHERE activity_id = ? AND superseded = 0"
        params: list[object] = [activity_id]
        if before_period is not None:
            sql += " AND period < ?"
            params.append(before_period)
        sql += " ORDER BY period DESC LIMIT 1"
        row = self._one(sql, params)
        return None if row is None else self._report(row)

    def next_report_after(self, activity_id: str, period: int) -> ProgressReport | None:
        row = self._one(
            "SELECT * FROM reports WHERE activity_id = ? AND superseded = 0 AND period > ?"
            " ORDER BY period LIMIT 1",
            (activity_id, period),
        )
        return None if row is None else self._report(row)

    # -- photos -----------------------------------------------------------

    def insert_photo(self, photo: PhotoAttachment) -> None:
        self._insert(
            "INSERT INTO photos (id, report_id, content_hash, caption,"
            " achieved_at_percent, media_type) VALUES (?, ?, ?, ?, ?, ?)",
            (
                photo.id,
                photo.report_id,
                photo.content_hash,
                photo.caption,
                photo.achieved_at_percent.basis_points,
                photo.media_type,
            ),
            "photo id already exists",
        )

    def get_photo(self, photo_id: str) -> PhotoAttachment | None:
        row = self._one("SELECT * FROM photos WHERE id = ?", (photo_id,))
        return None if row is None else _photo(row)

    def list_photos(self, report_id: str) -> list[PhotoAttachment]:
        rows = self._conn.execute(
            "SELECT * FROM photos WHERE report_id = ? ORDER BY rowid", (report_id,)
        ).fetchall()
        return [_photo(r) for r in rows]

    # -- users ------------------------------------------------------------

    def insert_user(self, user: UserAccount) -> None:
        self._insert(
            "INSERT INTO users (id, username, password_hash, role) VALUES (?, ?, ?, ?)",
            (user.id, user.username, user.password_hash, user.role.value),
            f"username {user.username!r} already exists",
        )

    def get_user(self, user_id: str) -> UserAccount | None:
        row = self._one("SELECT * FROM users WHERE id = ?", (user_id,))
        return None if row is None else _user(row)

    def find_user_by_username(self, username: str) -> UserAccount | None:
        row = self._one("SELECT * FROM users WHERE username = ?", (username,))
        return None if row is None else _user(row)

    def list_users(self) -> list[UserAccount]:
        rows = self._conn.execute("SELECT * FROM users ORDER BY username").fetchall()
        return [_user(r) for r in rows]

    def update_user(self, user: UserAccount) -> None:
        self._touch_existing("users", user.id)
        self._execute_conflict(
            "UPDATE users SET username = ?, password_hash = ?, role = ? WHERE id = ?",
            (user.username, user.password_hash, user.role.value, user.id),
            f"username {user.username!r} already exists",
        )

    def delete_user(self, user_id: str) -> None:
        self._touch_existing("users", user_id)
        self._conn.execute("DELETE FROM users WHERE id = ?", (user_id,))

    # -- audit trail ------------------------------------------------------

    def append_audit(
        self,
        actor: str,
        action: str,
        entity_type: str,
        entity_id: str,
        detail: str = "",
        at: datetime | None = None,
    ) -> None:
        self._conn.execute(
            "INSERT INTO audit_log (actor, action, entity_type, entity_id, at, detail)"
            " VALUES (?, ?, ?, ?, ?, ?)",
            (actor, action, entity_type, entity_id, (at or _utc_now()).isoformat(), detail),
        )

    def list_audit(self, limit: int = 1000) -> list[AuditEntry]:
        rows = self._conn.execute(
            "SELECT * FROM audit_log ORDER BY id DESC LIMIT ?", (limit,)
        ).fetchall()
        return [
            AuditEntry(
                id=r["id"],
                actor=r["actor"],
                action=r["action"],
                entity_type=r["entity_type"],
                entity_id=r["entity_id"],
                at=datetime.fromisoformat(r["at"]),
                detail=r["detail"],
            )
            for r in rows
        ]

    # -- helpers ----------------------------------------------------------

    def _report(self, row: sqlite3.Row) -> ProgressReport:
        return ProgressReport(
            id=row["id"],
            activity_id=row["activity_id"],
            period=row["period"],
            physical=Percent(row["physical"]),
            financial_absorbed=Money(row["financial_absorbed"]),
            labor_count=row["labor_count"],
            submitted_by=row["submitted_by"],
            submitted_at=datetime.fromisoformat(row["submitted_at"]),
            photos=tuple(self.list_photos(row["id"])),
        )

    def _one(self, sql: str, params: Sequence[object]) -> sqlite3.Row | None:
        return self._conn.execute(sql, params).fetchone()

    def _insert(self, sql: str, params: Sequence[object], conflict_message: str) -> None:
        self._execute_conflict(sql, params, conflict_message)

    def _execute_conflict(
        self, sql: str, params: Sequence[object], conflict_message: str
    ) -> sqlite3.Cursor:
        try:
            return self._conn.execute(sql, params)
        except sqlite3.IntegrityError as exc:
            raise Conflict(f"{conflict_message} ({exc})") from exc

    def _touch_existing(self, table: str, entity_id: str) -> None:
        # Table names come from this module only.
        row = self._conn.execute(f"SELECT 1 FROM {table} WHERE id = ?", (entity_id,)).fetchone()
        if row is None:
            raise NotFound(f"{table} row {entity_id}")


def _program(row: sqlite3.Row) -> Program:
    return Program(
        id=row["id"],
        kind=ProgramKind(row["kind"]),
        fiscal_year=row["fiscal_year"],
        name=row["name"],
    )


def _desa(row: sqlite3.Row) -> Desa:
    return Desa(id=row["id"], kecamatan_id=row["kecamatan_id"], name=row["name"])


def _activity(row: sqlite3.Row) -> Activity:
    return Activity(
        id=row["id"],
        program_id=row["program_id"],
        desa_id=row["desa_id"],
        title=row["title"],
        budget=Money(row["budget"]),
        start_period=row["start_period"],
        end_period=row["end_period"],
        tranche_config=TrancheConfig(
            (Percent(row["share1"]), Percent(row["share2"]), Percent(row["share3"]))
        ),
    )


def _stage_params(stage: DisbursementStage) -> tuple:
    return (
        stage.activity_id,
        stage.stage_number,
        stage.planned_amount.amount,
        None if stage.actual_amount is None else stage.actual_amount.amount,
        None if stage.disbursed_on is None else stage.disbursed_on.isoformat(),
        stage.status.value,
    )


def _stage(row: sqlite3.Row) -> DisbursementStage:
    return DisbursementStage(
        activity_id=row["activity_id"],
        stage_number=row["stage_number"],
        planned_amount=Money(row["planned_amount"]),
        actual_amount=None if row["actual_amount"] is None else Money(row["actual_amount"]),
        disbursed_on=None if row["disbursed_on"] is None else date.fromisoformat(row["disbursed_on"]),
        status=StageStatus(row["status"]),
    )


def _user(row: sqlite3.Row) -> UserAccount:
    return UserAccount(
        id=row["id"],
        username=row["username"],
        password_hash=row["password_hash"],
        role=Role(row["role"]),
    )


def _photo(row: sqlite3.Row) -> PhotoAttachment:
    return PhotoAttachment(
        id=row["id"],
        report_id=row["report_id"],
        content_hash=row["content_hash"],
        caption=row["caption"],
        achieved_at_percent=Percent(row["achieved_at_percent"]),
        media_type=row["media_type"],
    )

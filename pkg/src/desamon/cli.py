"""Operator command line: migrations, seeding, imports, exports, corrections.

Talks to the store directly, never through the HTTP service, so recovery
works when the service is down.  Mutating commands take the same advisory
file lock the service holds while running, and refuse to proceed while it is
held.  Exit codes are a contract: 0 success, 1 domain or validation failure,
2 usage error.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import date, datetime, timezone
from pathlib import Path

import click
import yaml
from filelock import FileLock, Timeout

from desamon.aggregation import DEFAULT_GRACE_DAYS, Scope
from desamon.api.tokens import hash_password
from desamon.config import AppConfig, load_config
from desamon.core.periods import period_end_date
from desamon.core.types import Money, Role, UserAccount, new_id
from desamon.disbursement import StageStatus
from desamon.errors import DesamonError, NotFound
from desamon.ingestion import (
    ActivityResolver,
    ColumnMap,
    ImportTarget,
    Locale,
    format_money,
    parse_date,
)
from desamon.ingestion import import_report_csv as run_import
from desamon.seeding import SeedError, apply_seed
from desamon.serialize import canonical_json
from desamon.storage import Database
from desamon.views import (
    SCOPE_NAMES,
    build_late_reports,
    build_s_curve,
    build_stage_chart,
    build_summary,
)

_SCOPE_CHOICES = tuple(SCOPE_NAMES)


@dataclass
class CliState:
    config: AppConfig
    json_output: bool

    def database(self) -> Database:
        return Database(self.config.storage_path)


def _emit(state: CliState, payload: dict, human: str) -> None:
    if state.json_output:
        click.echo(json.dumps(payload, sort_keys=True))
    else:
        click.echo(human)


def _fail(state: CliState, message: str, payload: dict | None = None) -> None:
    if state.json_output:
        click.echo(json.dumps({"error": message, **(payload or {})}, sort_keys=True))
    else:
        click.echo(f"error: {message}", err=True)
    sys.exit(1)


@contextmanager
def _store_lock(state: CliState):
    lock = FileLock(str(state.config.storage_path) + ".lock")
    try:
        lock.acquire(timeout=1)
    except Timeout:
        _fail(state, f"store is locked by another process: {lock.lock_file}")
    try:
        yield
    finally:
        lock.release()


@click.group()
@click.option("--store", default=None, help="Storage file path (overrides config).")
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Key-value config file.",
)
@click.option("--json", "json_output", is_flag=True, help="Machine-readable output.")
@click.pass_context
def main(ctx: click.Context, store: str | None, config_path: str | None, json_output: bool):
    """Administer a monitoring store."""
    overrides = {"storage_path": store} if store else {}
    try:
        config = load_config(config_path, overrides=overrides)
    except DesamonError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    ctx.obj = CliState(config=config, json_output=json_output)


@main.command()
@click.pass_obj
def migrate(state: CliState):
    """Create or upgrade the store schema."""
    with _store_lock(state):
        db = state.database()
        before = db.schema_version()
        db.migrate()
        after = db.schema_version()
    _emit(
        state,
        {"schema_version": after, "applied": after - before},
        f"schema at version {after} ({after - before} migration(s) applied)",
    )


@main.command()
@click.argument("fixture_path", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def seed(state: CliState, fixture_path: str):
    """Upsert a YAML fixture of master data and users."""
    try:
        fixture = yaml.safe_load(Path(fixture_path).read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        _fail(state, f"fixture is not valid YAML: {exc}")
    with _store_lock(state):
        db = state.database()
        db.migrate()
        try:
            with db.transaction() as repo:
                outcome = apply_seed(repo, fixture)
                repo.append_audit("cli", "seed", "fixture", Path(fixture_path).name)
        except SeedError as exc:
            payload = {"problems": exc.outcome.problems}
            if state.json_output:
                click.echo(json.dumps(payload, sort_keys=True))
            else:
                for problem in exc.outcome.problems:
                    click.echo(f"error: {problem}", err=True)
            sys.exit(1)
    counts = {
        section: {"created": c.created, "updated": c.updated, "unchanged": c.unchanged}
        for section, c in outcome.counts.items()
    }
    lines = [
        f"{section}: {c.created} created, {c.updated} updated, {c.unchanged} unchanged"
        for section, c in outcome.counts.items()
        if c.created or c.updated or c.unchanged
    ]
    _emit(state, {"counts": counts}, "\n".join(lines) if lines else "nothing to seed")


def _import_resolver(repo) -> ActivityResolver:
    programs = {p.id: p for p in repo.list_programs()}

    def resolve(ref: str) -> ImportTarget | None:
        activity = repo.get_activity(ref)
        if activity is None:
            matches = repo.find_activity_by_title(ref)
            if len(matches) != 1:
                return None
            activity = matches[0]
        program = programs.get(activity.program_id)
        if program is None:
            return None
        return ImportTarget(
            activity=activity,
            fiscal_year=program.fiscal_year,
            latest_report=repo.latest_report(activity.id),
            stages=tuple(repo.get_stages(activity.id)),
        )

    return resolve


@main.command("import")
@click.argument("csv_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("column_map_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--dry-run", is_flag=True, help="Validate only; persist nothing.")
@click.pass_obj
def import_csv(state: CliState, csv_path: str, column_map_path: str, dry_run: bool):
    """Import legacy weekly reports from a CSV file.

    Accepted rows persist even when other rows fail (one transaction, exit 1
    signals the failures); --dry-run validates the whole file without writing.
    """
    try:
        cmap = ColumnMap.from_document(Path(column_map_path).read_text(encoding="utf-8"))
    except DesamonError as exc:
        _fail(state, f"column map: {exc}")
    data = Path(csv_path).read_bytes()

    def run(repo):
        result = run_import(data, cmap, _import_resolver(repo))
        if not dry_run:
            for report in result.accepted:
                repo.insert_report(report)
            repo.append_audit(
                "cli",
                "import",
                "file",
                Path(csv_path).name,
                detail=f"accepted={len(result.accepted)} rejected={len(result.rejected_rows)}",
            )
        return result

    try:
        if dry_run:
            db = state.database()
            db.migrate()
            with db.snapshot() as repo:
                result = run(repo)
        else:
            with _store_lock(state):
                db = state.database()
                db.migrate()
                with db.transaction() as repo:
                    result = run(repo)
    except DesamonError as exc:
        _fail(state, str(exc))

    diagnostics = [
        {
            "row": d.row_number,
            "severity": d.severity.value,
            "field": d.field,
            "message": d.message,
        }
        for d in result.diagnostics
    ]
    payload = {
        "accepted": len(result.accepted),
        "rejected": len(result.rejected_rows),
        "dry_run": dry_run,
        "diagnostics": diagnostics,
    }
    lines = [
        f"row {d['row']}: [{d['severity']}] {d['field']}: {d['message']}" for d in diagnostics
    ]
    lines.append(
        f"{len(result.accepted)} row(s) {'validated' if dry_run else 'imported'},"
        f" {len(result.rejected_rows)} rejected"
    )
    _emit(state, payload, "\n".join(lines))
    if result.error_count:
        sys.exit(1)


def _csv_export(repo, scope: Scope, as_of: date, grace_days: int) -> str:
    """Week-by-week plan/realization table plus lateness, one row per
    activity-period; money and percent cells use the canonical Indonesian
    forms so they re-parse."""
    if scope.kind.value == "program" and repo.get_program(scope.id) is None:
        raise NotFound(f"program {scope.id}")
    if scope.kind.value == "kecamatan" and repo.get_kecamatan(scope.id) is None:
        raise NotFound(f"kecamatan {scope.id}")
    if scope.kind.value == "desa" and repo.get_desa(scope.id) is None:
        raise NotFound(f"desa {scope.id}")
    if scope.kind.value == "activity":
        if repo.get_activity(scope.id) is None:
            raise NotFound(f"activity {scope.id}")
        activities = [repo.get_activity(scope.id)]
    else:
        activities = repo.list_activities(
            program_id=scope.id if scope.kind.value == "program" else None,
            desa_id=scope.id if scope.kind.value == "desa" else None,
            kecamatan_id=scope.id if scope.kind.value == "kecamatan" else None,
        )

    desa_by_id = {d.id: d for d in repo.list_desa()}
    kec_by_id = {k.id: k for k in repo.list_kecamatan()}
    programs = {p.id: p for p in repo.list_programs()}
    lateness = {}
    late_payload = build_late_reports(repo, as_of, grace_days)
    for flag in late_payload["flags"]:
        lateness[(flag["activity_id"], flag["period"])] = flag

    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        [
            "activity_id",
            "activity_title",
            "program",
            "kecamatan",
            "desa",
            "period",
            "week_ending",
            "planned_physical",
            "realized_physical",
            "planned_financial",
            "realized_financial",
            "labor_count",
            "lateness",
            "days_late",
        ]
    )
    for activity in activities:
        curve = build_s_curve(repo, activity.id)
        desa = desa_by_id.get(activity.desa_id)
        kecamatan = kec_by_id.get(desa.kecamatan_id) if desa is not None else None
        program = programs.get(activity.program_id)
        reports = {r.period: r for r in repo.list_reports(activity.id)}
        labor_running = ""
        for point in curve["points"]:
            period = point["period"]
            flag = lateness.get((activity.id, period), {})
            report = reports.get(period)
            if report is not None:
                labor_running = str(report.labor_count)
            writer.writerow(
                [
                    activity.id,
                    activity.title,
                    program.name if program else "",
                    kecamatan.name if kecamatan else "",
                    desa.name if desa else "",
                    period,
                    period_end_date(program.fiscal_year, period).isoformat() if program else "",
                    point["planned_physical"]["display"],
                    "" if point["realized_physical"] is None else point["realized_physical"]["display"],
                    format_money_cell(point["planned_financial"]["amount"]),
                    "" if point["realized_financial"] is None
                    else format_money_cell(point["realized_financial"]["amount"]),
                    labor_running,
                    flag.get("status", ""),
                    flag.get("days_late", ""),
                ]
            )
    return out.getvalue()


def format_money_cell(amount: int) -> str:
    return format_money(Money(amount), Locale.INDONESIAN)


@main.command()
@click.argument("scope_kind", type=click.Choice(_SCOPE_CHOICES))
@click.argument("scope_id")
@click.option("--format", "fmt", type=click.Choice(("csv", "json")), default="csv")
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
              help="Output file; stdout when omitted.")
@click.option("--as-of-period", type=int, default=None,
              help="Summary cut-off week (defaults to the scope's last planned week).")
@click.option("--as-of", "as_of_text", default=None,
              help="Lateness reference date (defaults to today).")
@click.option("--grace-days", type=int, default=DEFAULT_GRACE_DAYS)
@click.pass_obj
def export(
    state: CliState,
    scope_kind: str,
    scope_id: str,
    fmt: str,
    output: str | None,
    as_of_period: int | None,
    as_of_text: str | None,
    grace_days: int,
):
    """Export rollups, S-curves, and lateness for a scope."""
    scope = Scope(SCOPE_NAMES[scope_kind], scope_id)
    as_of = parse_date(as_of_text) if as_of_text else datetime.now(timezone.utc).date()
    db = state.database()
    db.migrate()
    try:
        with db.snapshot() as repo:
            if fmt == "csv":
                body = _csv_export(repo, scope, as_of, grace_days)
            else:
                summary = build_summary(repo, scope, as_of_period)
                if scope.kind.value == "activity":
                    activity_ids = [scope_id]
                else:
                    activity_ids = [
                        a.id
                        for a in repo.list_activities(
                            program_id=scope.id if scope.kind.value == "program" else None,
                            desa_id=scope.id if scope.kind.value == "desa" else None,
                            kecamatan_id=scope.id if scope.kind.value == "kecamatan" else None,
                        )
                    ]
                body = canonical_json(
                    {
                        "summary": summary,
                        "s_curves": [build_s_curve(repo, aid) for aid in activity_ids],
                        "stage_charts": [build_stage_chart(repo, aid) for aid in activity_ids],
                        "late_reports": build_late_reports(
                            repo,
                            as_of,
                            grace_days,
                            scope_id if scope.kind.value == "program" else None,
                        ),
                    }
                ) + "\n"
    except DesamonError as exc:
        _fail(state, str(exc))

    if output is None:
        click.echo(body, nl=False)
    else:
        Path(output).write_text(body, encoding="utf-8")
        _emit(
            state,
            {"written": output, "bytes": len(body.encode("utf-8"))},
            f"wrote {output}",
        )


@main.command("user-add")
@click.argument("username")
@click.option("--role", "role_text", type=click.Choice([r.value for r in Role]), required=True)
@click.option("--password", prompt=True, hide_input=True, confirmation_prompt=False)
@click.pass_obj
def user_add(state: CliState, username: str, role_text: str, password: str):
    """Create an account."""
    if len(password) < 8:
        _fail(state, "password must be at least 8 characters")
    user = UserAccount(
        id=new_id(),
        username=username,
        password_hash=hash_password(password),
        role=Role(role_text),
    )
    with _store_lock(state):
        db = state.database()
        db.migrate()
        try:
            with db.transaction() as repo:
                repo.insert_user(user)
                repo.append_audit("cli", "user_add", "user", user.id, detail=username)
        except DesamonError as exc:
            _fail(state, str(exc))
    _emit(
        state,
        {"id": user.id, "username": username, "role": role_text},
        f"created {role_text} account {username!r}",
    )


@main.command("user-set-password")
@click.argument("username")
@click.option("--password", prompt=True, hide_input=True, confirmation_prompt=False)
@click.pass_obj
def user_set_password(state: CliState, username: str, password: str):
    """Rotate an account password."""
    if len(password) < 8:
        _fail(state, "password must be at least 8 characters")
    with _store_lock(state):
        db = state.database()
        db.migrate()
        try:
            with db.transaction() as repo:
                user = repo.find_user_by_username(username)
                if user is None:
                    raise NotFound(f"user {username!r}")
                repo.update_user(
                    UserAccount(
                        id=user.id,
                        username=user.username,
                        password_hash=hash_password(password),
                        role=user.role,
                    )
                )
                repo.append_audit("cli", "user_set_password", "user", user.id, detail=username)
        except DesamonError as exc:
            _fail(state, str(exc))
    _emit(state, {"username": username}, f"password updated for {username!r}")


@main.command("correct-disbursement")
@click.argument("activity_id")
@click.argument("stage_number", type=int)
@click.option("--reason", required=True, help="Why the recorded disbursement is wrong.")
@click.pass_obj
def correct_disbursement(state: CliState, activity_id: str, stage_number: int, reason: str):
    """Revert an erroneously recorded disbursement back to planned.

    Refused while any later stage is disbursed; the reversal and its reason
    land in the audit trail.
    """
    if not reason.strip():
        _fail(state, "--reason must not be empty")
    if stage_number not in (1, 2, 3):
        _fail(state, "stage_number must be 1, 2 or 3")
    with _store_lock(state):
        db = state.database()
        db.migrate()
        try:
            with db.transaction() as repo:
                if repo.get_activity(activity_id) is None:
                    raise NotFound(f"activity {activity_id}")
                stages = {s.stage_number: s for s in repo.get_stages(activity_id)}
                stage = stages.get(stage_number)
                if stage is None or stage.status is not StageStatus.DISBURSED:
                    _fail(state, f"stage {stage_number} is not disbursed")
                later = [
                    n for n, s in stages.items()
                    if n > stage_number and s.status is StageStatus.DISBURSED
                ]
                if later:
                    _fail(
                        state,
                        f"stage {min(later)} is disbursed; correct later stages first",
                    )
                repo.replace_stage(
                    dataclasses.replace(
                        stage,
                        actual_amount=None,
                        disbursed_on=None,
                        status=StageStatus.PLANNED,
                    )
                )
                repo.append_audit(
                    "cli",
                    "correct_disbursement",
                    "activity",
                    activity_id,
                    detail=f"stage={stage_number} reason={reason.strip()}",
                )
        except DesamonError as exc:
            _fail(state, str(exc))
    _emit(
        state,
        {"activity_id": activity_id, "stage_number": stage_number},
        f"stage {stage_number} reverted to planned",
    )


if __name__ == "__main__":
    main()

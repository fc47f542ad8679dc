"""Declarative seed fixtures, applied idempotently by natural key.

A fixture is a mapping with optional ``programs``, ``kecamatan``, ``desa``,
``kegiatan`` and ``users`` sections.  Entities are matched by their natural
keys (program: kind+fiscal_year+name, kecamatan: name, desa: kecamatan+name,
kegiatan: program+desa+title, user: username), created when absent, updated
when present with different fields, and left alone otherwise, so applying
the same fixture twice changes nothing.

Existing users never get their password overwritten here; only ``user-set-
password`` does that.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from desamon.api.tokens import hash_password
from desamon.core.types import (
    DEFAULT_TRANCHE_CONFIG,
    Activity,
    Desa,
    Kecamatan,
    Money,
    Percent,
    Program,
    ProgramKind,
    Role,
    TargetEntry,
    TrancheConfig,
    UserAccount,
    WorkTargetPlan,
    new_id,
)
from desamon.core.validation import validate_activity, validate_work_target_plan
from desamon.disbursement import StageStatus, plan_tranches
from desamon.storage.repository import Repository

_SECTIONS = ("programs", "kecamatan", "desa", "kegiatan", "users")


@dataclass
class SectionCounts:
    created: int = 0
    updated: int = 0
    unchanged: int = 0


@dataclass
class SeedOutcome:
    counts: dict[str, SectionCounts] = field(default_factory=dict)
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


class SeedError(Exception):
    """Raised inside the seed transaction so a bad fixture rolls back whole."""

    def __init__(self, outcome: SeedOutcome):
        super().__init__("; ".join(outcome.problems))
        self.outcome = outcome


def apply_seed(repo: Repository, fixture: object) -> SeedOutcome:
    """Upsert the fixture into the store; raises SeedError on any problem."""
    outcome = SeedOutcome(counts={name: SectionCounts() for name in _SECTIONS})
    if not isinstance(fixture, Mapping):
        outcome.problems.append("fixture must be a mapping of sections")
        raise SeedError(outcome)
    unknown = set(fixture) - set(_SECTIONS)
    if unknown:
        outcome.problems.append(f"unknown sections: {', '.join(sorted(unknown))}")

    for section in _SECTIONS:
        rows = fixture.get(section, [])
        if not isinstance(rows, list) or any(not isinstance(r, Mapping) for r in rows):
            outcome.problems.append(f"{section} must be a list of mappings")

    if outcome.problems:
        raise SeedError(outcome)

    _seed_programs(repo, fixture.get("programs", []), outcome)
    _seed_kecamatan(repo, fixture.get("kecamatan", []), outcome)
    _seed_desa(repo, fixture.get("desa", []), outcome)
    _seed_activities(repo, fixture.get("kegiatan", []), outcome)
    _seed_users(repo, fixture.get("users", []), outcome)

    if outcome.problems:
        raise SeedError(outcome)
    return outcome


def _text(row: Mapping, key: str, where: str, problems: list[str]) -> str | None:
    value = row.get(key)
    if not isinstance(value, str) or not value.strip():
        problems.append(f"{where}: {key} must be non-empty text")
        return None
    return value.strip()


def _integer(row: Mapping, key: str, where: str, problems: list[str]) -> int | None:
    value = row.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        problems.append(f"{where}: {key} must be an integer")
        return None
    return value


def _seed_programs(repo: Repository, rows: list, outcome: SeedOutcome) -> None:
    counts = outcome.counts["programs"]
    for i, row in enumerate(rows):
        where = f"programs[{i}]"
        kind_text = _text(row, "kind", where, outcome.problems)
        name = _text(row, "name", where, outcome.problems)
        year = _integer(row, "fiscal_year", where, outcome.problems)
        if kind_text is None or name is None or year is None:
            continue
        try:
            kind = ProgramKind.parse(kind_text)
        except ValueError as exc:
            outcome.problems.append(f"{where}: {exc}")
            continue
        if repo.find_program(kind, year, name) is not None:
            counts.unchanged += 1
            continue
        try:
            repo.insert_program(Program(id=new_id(), kind=kind, fiscal_year=year, name=name))
        except ValueError as exc:
            outcome.problems.append(f"{where}: {exc}")
            continue
        counts.created += 1


def _seed_kecamatan(repo: Repository, rows: list, outcome: SeedOutcome) -> None:
    counts = outcome.counts["kecamatan"]
    for i, row in enumerate(rows):
        where = f"kecamatan[{i}]"
        name = _text(row, "name", where, outcome.problems)
        if name is None:
            continue
        if repo.find_kecamatan_by_name(name) is not None:
            counts.unchanged += 1
            continue
        repo.insert_kecamatan(Kecamatan(id=new_id(), name=name))
        counts.created += 1


def _seed_desa(repo: Repository, rows: list, outcome: SeedOutcome) -> None:
    counts = outcome.counts["desa"]
    for i, row in enumerate(rows):
        where = f"desa[{i}]"
        kecamatan_name = _text(row, "kecamatan", where, outcome.problems)
        name = _text(row, "name", where, outcome.problems)
        if kecamatan_name is None or name is None:
            continue
        kecamatan = repo.find_kecamatan_by_name(kecamatan_name)
        if kecamatan is None:
            outcome.problems.append(f"{where}: unknown kecamatan {kecamatan_name!r}")
            continue
        if repo.find_desa(kecamatan.id, name) is not None:
            counts.unchanged += 1
            continue
        repo.insert_desa(Desa(id=new_id(), kecamatan_id=kecamatan.id, name=name))
        counts.created += 1


def _resolve_program_by_name(repo: Repository, name: str) -> Program | None:
    matches = [p for p in repo.list_programs() if p.name == name]
    return matches[0] if len(matches) == 1 else None


def _shares(row: Mapping, where: str, problems: list[str]) -> TrancheConfig | None:
    raw = row.get("tranche_shares")
    if raw is None:
        return DEFAULT_TRANCHE_CONFIG
    if (
        not isinstance(raw, list)
        or len(raw) != 3
        or any(not isinstance(s, int) or isinstance(s, bool) for s in raw)
    ):
        problems.append(f"{where}: tranche_shares must be three integers (basis points)")
        return None
    try:
        return TrancheConfig(tuple(Percent(s) for s in raw))
    except ValueError as exc:
        problems.append(f"{where}: {exc}")
        return None


def _target_plan(
    row: Mapping, activity_id: str, where: str, problems: list[str]
) -> WorkTargetPlan | None:
    raw = row.get("targets")
    if raw is None:
        return None
    if not isinstance(raw, list) or any(not isinstance(e, Mapping) for e in raw):
        problems.append(f"{where}: targets must be a list of mappings")
        return None
    entries = []
    for j, entry in enumerate(raw):
        entry_where = f"{where}.targets[{j}]"
        period = _integer(entry, "period", entry_where, problems)
        physical = _integer(entry, "planned_physical", entry_where, problems)
        financial = _integer(entry, "planned_financial", entry_where, problems)
        if period is None or physical is None or financial is None:
            continue
        try:
            entries.append(TargetEntry(period, Percent(physical), Money(financial)))
        except ValueError as exc:
            problems.append(f"{entry_where}: {exc}")
    return WorkTargetPlan(activity_id=activity_id, entries=tuple(entries))


def _seed_activities(repo: Repository, rows: list, outcome: SeedOutcome) -> None:
    counts = outcome.counts["kegiatan"]
    for i, row in enumerate(rows):
        where = f"kegiatan[{i}]"
        program_name = _text(row, "program", where, outcome.problems)
        kecamatan_name = _text(row, "kecamatan", where, outcome.problems)
        desa_name = _text(row, "desa", where, outcome.problems)
        title = _text(row, "title", where, outcome.problems)
        budget = _integer(row, "budget", where, outcome.problems)
        start_period = _integer(row, "start_period", where, outcome.problems)
        end_period = _integer(row, "end_period", where, outcome.problems)
        shares = _shares(row, where, outcome.problems)
        if None in (program_name, kecamatan_name, desa_name, title, budget, start_period,
                    end_period, shares):
            continue
        program = _resolve_program_by_name(repo, program_name)
        if program is None:
            outcome.problems.append(f"{where}: program {program_name!r} not found or ambiguous")
            continue
        kecamatan = repo.find_kecamatan_by_name(kecamatan_name)
        desa = repo.find_desa(kecamatan.id, desa_name) if kecamatan is not None else None
        if desa is None:
            outcome.problems.append(
                f"{where}: desa {desa_name!r} in kecamatan {kecamatan_name!r} not found"
            )
            continue
        if budget <= 0:
            outcome.problems.append(f"{where}: budget must be positive")
            continue

        existing = repo.find_activity(program.id, desa.id, title)
        activity = Activity(
            id=existing.id if existing is not None else new_id(),
            program_id=program.id,
            desa_id=desa.id,
            title=title,
            budget=Money(budget),
            start_period=start_period,
            end_period=end_period,
            tranche_config=shares,
        )
        verdict = validate_activity(activity, {desa.id}, {program.id})
        if not verdict.ok:
            outcome.problems.extend(f"{where}: {v.message}" for v in verdict.violations)
            continue

        plan = _target_plan(row, activity.id, where, outcome.problems)
        if plan is not None:
            plan_verdict = validate_work_target_plan(plan, activity)
            if not plan_verdict.ok:
                outcome.problems.extend(
                    f"{where}: targets: {v.message}" for v in plan_verdict.violations
                )
                continue

        if existing is None:
            repo.insert_activity(activity)
            repo.insert_stages(plan_tranches(activity.budget, activity.tranche_config, activity.id))
            counts.created += 1
        elif existing != activity:
            stages = repo.get_stages(activity.id)
            money_plan_changed = (
                existing.budget != activity.budget
                or existing.tranche_config != activity.tranche_config
            )
            if money_plan_changed and any(s.status is StageStatus.DISBURSED for s in stages):
                outcome.problems.append(
                    f"{where}: cannot change budget or shares, a stage is already disbursed"
                )
                continue
            if money_plan_changed:
                repo.delete_stages(activity.id)
                repo.insert_stages(
                    plan_tranches(activity.budget, activity.tranche_config, activity.id)
                )
            repo.update_activity(activity)
            counts.updated += 1
        else:
            counts.unchanged += 1

        if plan is not None and plan != repo.get_work_target_plan(activity.id):
            repo.set_work_target_plan(plan)


def _seed_users(repo: Repository, rows: list, outcome: SeedOutcome) -> None:
    counts = outcome.counts["users"]
    for i, row in enumerate(rows):
        where = f"users[{i}]"
        username = _text(row, "username", where, outcome.problems)
        role_text = _text(row, "role", where, outcome.problems)
        if username is None or role_text is None:
            continue
        try:
            role = Role.parse(role_text)
        except ValueError as exc:
            outcome.problems.append(f"{where}: {exc}")
            continue
        existing = repo.find_user_by_username(username)
        if existing is None:
            password = _text(row, "password", where, outcome.problems)
            if password is None:
                continue
            if len(password) < 8:
                outcome.problems.append(f"{where}: password must be at least 8 characters")
                continue
            repo.insert_user(
                UserAccount(
                    id=new_id(),
                    username=username,
                    password_hash=hash_password(password),
                    role=role,
                )
            )
            counts.created += 1
        elif existing.role != role:
            repo.update_user(
                UserAccount(
                    id=existing.id,
                    username=existing.username,
                    password_hash=existing.password_hash,
                    role=role,
                )
            )
            counts.updated += 1
        else:
            counts.unchanged += 1

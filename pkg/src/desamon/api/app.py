"""HTTP/JSON service under /api/v1.

Every handler is synchronous and opens exactly one database transaction or
snapshot, so a request either commits whole or leaves no trace.  Errors all
come out in one envelope shape: {"code", "message", "details": [{field,
code, message}]}.  Summary-style reads are serialized with canonical_json so
their bodies are reproducible byte-for-byte from a snapshot.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from typing import Mapping

from fastapi import Depends, FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from starlette.datastructures import UploadFile

from desamon.aggregation import DEFAULT_GRACE_DAYS, Scope
from desamon.api.rbac import Action, is_allowed
from desamon.api.tokens import TokenClaims, hash_password, issue_token, verify_password, verify_token
from desamon.config import AppConfig
from desamon.core.types import (
    DEFAULT_TRANCHE_CONFIG,
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
    validate_activity,
    validate_progress_report,
    validate_work_target_plan,
)
from desamon.disbursement import (
    StageStatus,
    disbursed_to_date,
    plan_tranches,
    record_disbursement,
)
from desamon.errors import (
    Conflict,
    ConfigError,
    DateOutOfRange,
    DesamonError,
    EmptyScope,
    GateBlocked,
    InvalidInput,
    NotFound,
    ParseError,
    RetryableConflict,
)
from desamon.ingestion import parse_date
from desamon.serialize import (
    activity_json,
    canonical_json,
    desa_json,
    kecamatan_json,
    photo_json,
    program_json,
    report_json,
    stage_json,
    target_entry_json,
    user_json,
)
from desamon.storage import Database, PhotoStore
from desamon.views import (
    SCOPE_NAMES,
    build_late_reports,
    build_s_curve,
    build_stage_chart,
    build_summary,
)

_MAX_BODY_FIELD = 10_000  # sanity bound for free-text fields

# burned once at import so unknown-user and wrong-password cost the same
_DUMMY_HASH = hash_password("timing-equalizer")

_JPEG_MAGIC = b"\xff\xd8\xff"
_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details: list[dict] | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.details = details or []


def _envelope(status: int, code: str, message: str, details: list[dict]) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "details": details},
    )


def _auth_failed() -> ApiError:
    # uniform on purpose: no unknown-user vs wrong-password distinction
    return ApiError(401, "authentication_failed", "authentication failed")


def _verdict_error(verdict: Verdict) -> ApiError:
    return ApiError(
        422,
        "validation_failed",
        "validation failed",
        [{"field": v.field, "code": v.code, "message": v.message} for v in verdict.violations],
    )


class _Body:
    """Field extraction with collected, field-addressed violations."""

    def __init__(self, payload: object):
        if not isinstance(payload, Mapping):
            raise ApiError(422, "validation_failed", "request body must be a JSON object")
        self.payload = payload
        self.problems: list[dict] = []

    def _problem(self, field: str, code: str, message: str) -> None:
        self.problems.append({"field": field, "code": code, "message": message})

    def str_field(self, name: str, required: bool = True, default: str = "") -> str:
        value = self.payload.get(name)
        if value is None:
            if required:
                self._problem(name, "missing", f"{name} is required")
            return default
        if not isinstance(value, str) or len(value) > _MAX_BODY_FIELD:
            self._problem(name, "bad_type", f"{name} must be a string")
            return default
        return value

    def int_field(
        self,
        name: str,
        required: bool = True,
        default: int = 0,
        minimum: int | None = None,
    ) -> int:
        value = self.payload.get(name)
        if value is None:
            if required:
                self._problem(name, "missing", f"{name} is required")
            return default
        if not isinstance(value, int) or isinstance(value, bool):
            self._problem(name, "bad_type", f"{name} must be an integer")
            return default
        if minimum is not None and value < minimum:
            self._problem(name, "out_of_range", f"{name} must be >= {minimum}")
            return default
        return value

    def bool_field(self, name: str, default: bool = False) -> bool:
        value = self.payload.get(name)
        if value is None:
            return default
        if not isinstance(value, bool):
            self._problem(name, "bad_type", f"{name} must be a boolean")
            return default
        return value

    def finish(self) -> None:
        if self.problems:
            raise ApiError(422, "validation_failed", "request body invalid", self.problems)


async def _read_json(request: Request) -> _Body:
    try:
        payload = json.loads(await request.body() or b"{}")
    except ValueError:
        raise ApiError(400, "malformed_json", "request body is not valid JSON") from None
    return _Body(payload)


def create_app(config: AppConfig, database: Database | None = None) -> FastAPI:
    db = database if database is not None else Database(config.storage_path)
    db.migrate()
    photos = PhotoStore(config.photo_dir)

    app = FastAPI(title="desamon", openapi_url=None, docs_url=None, redoc_url=None)
    app.state.db = db
    app.state.photos = photos
    app.state.config = config

    # -- error envelope ---------------------------------------------------

    @app.exception_handler(ApiError)
    async def _on_api_error(request: Request, exc: ApiError):
        return _envelope(exc.status, exc.code, exc.message, exc.details)

    @app.exception_handler(DesamonError)
    async def _on_domain_error(request: Request, exc: DesamonError):
        if isinstance(exc, GateBlocked):
            details = [
                {"field": "stage_number", "code": "gate_blocked", "message": reason}
                for reason in exc.reasons
            ]
            return _envelope(409, "gate_blocked", str(exc), details)
        if isinstance(exc, (Conflict, RetryableConflict)):
            return _envelope(409, "conflict", str(exc), [])
        if isinstance(exc, NotFound):
            return _envelope(404, "not_found", str(exc), [])
        if isinstance(exc, EmptyScope):
            return _envelope(422, "empty_scope", str(exc), [])
        if isinstance(exc, (InvalidInput, DateOutOfRange, ParseError)):
            return _envelope(422, "invalid_input", str(exc), [])
        if isinstance(exc, ConfigError):
            return _envelope(500, "configuration_error", str(exc), [])
        return _envelope(500, "internal_error", str(exc), [])

    @app.exception_handler(RequestValidationError)
    async def _on_request_validation(request: Request, exc: RequestValidationError):
        details = [
            {
                "field": ".".join(str(part) for part in err.get("loc", ())),
                "code": err.get("type", "invalid"),
                "message": err.get("msg", "invalid value"),
            }
            for err in exc.errors()
        ]
        return _envelope(422, "validation_failed", "request invalid", details)

    # -- authentication ---------------------------------------------------

    def _claims(request: Request) -> TokenClaims:
        header = request.headers.get("authorization", "")
        scheme, _, token = header.partition(" ")
        if scheme.lower() != "bearer" or not token.strip():
            raise _auth_failed()
        claims = verify_token(config.token_key, token.strip())
        if claims is None:
            raise _auth_failed()
        return claims

    def guard(action: Action):
        def dependency(request: Request) -> TokenClaims:
            claims = _claims(request)
            if not is_allowed(claims.role, action):
                raise ApiError(
                    403, "forbidden", f"{action.value} is not allowed for role {claims.role.value}"
                )
            return claims

        return Depends(dependency)

    def _canonical(payload: dict) -> Response:
        return Response(content=canonical_json(payload), media_type="application/json")

    @app.post("/api/v1/login")
    async def login(request: Request):
        body = await _read_json(request)
        username = body.str_field("username")
        password = body.str_field("password")
        body.finish()
        with db.snapshot() as repo:
            user = repo.find_user_by_username(username)
        stored = user.password_hash if user is not None else _DUMMY_HASH
        matched = verify_password(password, stored)
        if user is None or not matched:
            raise _auth_failed()
        token = issue_token(config.token_key, user, ttl_hours=config.token_ttl_hours)
        claims = verify_token(config.token_key, token)
        assert claims is not None
        return {
            "token": token,
            "role": user.role.value,
            "username": user.username,
            "expires_at": claims.expires_at.isoformat(),
        }

    # -- programs ---------------------------------------------------------

    def _program_from_body(body: _Body, program_id: str) -> Program:
        kind_text = body.str_field("kind")
        fiscal_year = body.int_field("fiscal_year")
        name = body.str_field("name")
        kind = None
        if kind_text:
            try:
                kind = ProgramKind.parse(kind_text)
            except ValueError as exc:
                body._problem("kind", "unknown_kind", str(exc))
        if not name.strip():
            body._problem("name", "empty_name", "name must not be empty")
        if not 1990 <= fiscal_year <= 2100:
            body._problem("fiscal_year", "out_of_range", "fiscal_year must be 1990..2100")
        body.finish()
        assert kind is not None
        return Program(id=program_id, kind=kind, fiscal_year=fiscal_year, name=name.strip())

    @app.post("/api/v1/programs", status_code=201)
    async def create_program(request: Request, claims: TokenClaims = guard(Action.CREATE_PROGRAM)):
        program = _program_from_body(await _read_json(request), new_id())
        with db.transaction() as repo:
            repo.insert_program(program)
            repo.append_audit(claims.username, "create_program", "program", program.id)
        return program_json(program)

    @app.get("/api/v1/programs")
    async def list_programs(claims: TokenClaims = guard(Action.LIST_PROGRAMS)):
        with db.snapshot() as repo:
            return {"programs": [program_json(p) for p in repo.list_programs()]}

    @app.get("/api/v1/programs/{program_id}")
    async def get_program(program_id: str, claims: TokenClaims = guard(Action.GET_PROGRAM)):
        with db.snapshot() as repo:
            program = repo.get_program(program_id)
        if program is None:
            raise NotFound(f"program {program_id}")
        return program_json(program)

    @app.put("/api/v1/programs/{program_id}")
    async def update_program(
        program_id: str, request: Request, claims: TokenClaims = guard(Action.UPDATE_PROGRAM)
    ):
        program = _program_from_body(await _read_json(request), program_id)
        with db.transaction() as repo:
            repo.update_program(program)
            repo.append_audit(claims.username, "update_program", "program", program_id)
        return program_json(program)

    @app.delete("/api/v1/programs/{program_id}", status_code=204)
    async def delete_program(
        program_id: str, claims: TokenClaims = guard(Action.DELETE_PROGRAM)
    ):
        with db.transaction() as repo:
            repo.delete_program(program_id)
            repo.append_audit(claims.username, "delete_program", "program", program_id)
        return Response(status_code=204)

    # -- kecamatan ----------------------------------------------------------

    @app.post("/api/v1/kecamatan", status_code=201)
    async def create_kecamatan(
        request: Request, claims: TokenClaims = guard(Action.CREATE_KECAMATAN)
    ):
        body = await _read_json(request)
        name = body.str_field("name")
        if not name.strip():
            body._problem("name", "empty_name", "name must not be empty")
        body.finish()
        kecamatan = Kecamatan(id=new_id(), name=name.strip())
        with db.transaction() as repo:
            repo.insert_kecamatan(kecamatan)
            repo.append_audit(claims.username, "create_kecamatan", "kecamatan", kecamatan.id)
        return kecamatan_json(kecamatan)

    @app.get("/api/v1/kecamatan")
    async def list_kecamatan(claims: TokenClaims = guard(Action.LIST_KECAMATAN)):
        with db.snapshot() as repo:
            return {"kecamatan": [kecamatan_json(k) for k in repo.list_kecamatan()]}

    @app.get("/api/v1/kecamatan/{kecamatan_id}")
    async def get_kecamatan(
        kecamatan_id: str, claims: TokenClaims = guard(Action.GET_KECAMATAN)
    ):
        with db.snapshot() as repo:
            kecamatan = repo.get_kecamatan(kecamatan_id)
        if kecamatan is None:
            raise NotFound(f"kecamatan {kecamatan_id}")
        return kecamatan_json(kecamatan)

    @app.put("/api/v1/kecamatan/{kecamatan_id}")
    async def update_kecamatan(
        kecamatan_id: str, request: Request, claims: TokenClaims = guard(Action.UPDATE_KECAMATAN)
    ):
        body = await _read_json(request)
        name = body.str_field("name")
        if not name.strip():
            body._problem("name", "empty_name", "name must not be empty")
        body.finish()
        kecamatan = Kecamatan(id=kecamatan_id, name=name.strip())
        with db.transaction() as repo:
            repo.update_kecamatan(kecamatan)
            repo.append_audit(claims.username, "update_kecamatan", "kecamatan", kecamatan_id)
        return kecamatan_json(kecamatan)

    @app.delete("/api/v1/kecamatan/{kecamatan_id}", status_code=204)
    async def delete_kecamatan(
        kecamatan_id: str, claims: TokenClaims = guard(Action.DELETE_KECAMATAN)
    ):
        with db.transaction() as repo:
            repo.delete_kecamatan(kecamatan_id)
            repo.append_audit(claims.username, "delete_kecamatan", "kecamatan", kecamatan_id)
        return Response(status_code=204)

    # -- desa ---------------------------------------------------------------

    def _desa_from_body(body: _Body, desa_id: str) -> Desa:
        kecamatan_id = body.str_field("kecamatan_id")
        name = body.str_field("name")
        if not name.strip():
            body._problem("name", "empty_name", "name must not be empty")
        body.finish()
        return Desa(id=desa_id, kecamatan_id=kecamatan_id, name=name.strip())

    @app.post("/api/v1/desa", status_code=201)
    async def create_desa(request: Request, claims: TokenClaims = guard(Action.CREATE_DESA)):
        desa = _desa_from_body(await _read_json(request), new_id())
        with db.transaction() as repo:
            if repo.get_kecamatan(desa.kecamatan_id) is None:
                raise _verdict_error(
                    Verdict.single("kecamatan_id", "unknown_kecamatan", "unknown kecamatan")
                )
            repo.insert_desa(desa)
            repo.append_audit(claims.username, "create_desa", "desa", desa.id)
        return desa_json(desa)

    @app.get("/api/v1/desa")
    async def list_desa(
        kecamatan_id: str | None = None, claims: TokenClaims = guard(Action.LIST_DESA)
    ):
        with db.snapshot() as repo:
            return {"desa": [desa_json(d) for d in repo.list_desa(kecamatan_id)]}

    @app.get("/api/v1/desa/{desa_id}")
    async def get_desa(desa_id: str, claims: TokenClaims = guard(Action.GET_DESA)):
        with db.snapshot() as repo:
            desa = repo.get_desa(desa_id)
        if desa is None:
            raise NotFound(f"desa {desa_id}")
        return desa_json(desa)

    @app.put("/api/v1/desa/{desa_id}")
    async def update_desa(
        desa_id: str, request: Request, claims: TokenClaims = guard(Action.UPDATE_DESA)
    ):
        desa = _desa_from_body(await _read_json(request), desa_id)
        with db.transaction() as repo:
            if repo.get_kecamatan(desa.kecamatan_id) is None:
                raise _verdict_error(
                    Verdict.single("kecamatan_id", "unknown_kecamatan", "unknown kecamatan")
                )
            repo.update_desa(desa)
            repo.append_audit(claims.username, "update_desa", "desa", desa_id)
        return desa_json(desa)

    @app.delete("/api/v1/desa/{desa_id}", status_code=204)
    async def delete_desa(desa_id: str, claims: TokenClaims = guard(Action.DELETE_DESA)):
        with db.transaction() as repo:
            repo.delete_desa(desa_id)
            repo.append_audit(claims.username, "delete_desa", "desa", desa_id)
        return Response(status_code=204)

    # -- users --------------------------------------------------------------

    @app.post("/api/v1/users", status_code=201)
    async def create_user(request: Request, claims: TokenClaims = guard(Action.CREATE_USER)):
        body = await _read_json(request)
        username = body.str_field("username")
        password = body.str_field("password")
        role_text = body.str_field("role")
        if not username.strip():
            body._problem("username", "empty_username", "username must not be empty")
        if len(password) < 8:
            body._problem("password", "weak_password", "password must be at least 8 characters")
        role = None
        if role_text:
            try:
                role = Role(role_text)
            except ValueError:
                body._problem("role", "unknown_role", f"unknown role: {role_text}")
        body.finish()
        assert role is not None
        user = UserAccount(
            id=new_id(),
            username=username.strip(),
            password_hash=hash_password(password),
            role=role,
        )
        with db.transaction() as repo:
            repo.insert_user(user)
            repo.append_audit(claims.username, "create_user", "user", user.id)
        return user_json(user)

    @app.get("/api/v1/users")
    async def list_users(claims: TokenClaims = guard(Action.LIST_USERS)):
        with db.snapshot() as repo:
            return {"users": [user_json(u) for u in repo.list_users()]}

    @app.get("/api/v1/users/{user_id}")
    async def get_user(user_id: str, claims: TokenClaims = guard(Action.GET_USER)):
        with db.snapshot() as repo:
            user = repo.get_user(user_id)
        if user is None:
            raise NotFound(f"user {user_id}")
        return user_json(user)

    @app.put("/api/v1/users/{user_id}")
    async def update_user(
        user_id: str, request: Request, claims: TokenClaims = guard(Action.UPDATE_USER)
    ):
        body = await _read_json(request)
        username = body.str_field("username", required=False)
        password = body.str_field("password", required=False)
        role_text = body.str_field("role", required=False)
        if password and len(password) < 8:
            body._problem("password", "weak_password", "password must be at least 8 characters")
        role = None
        if role_text:
            try:
                role = Role(role_text)
            except ValueError:
                body._problem("role", "unknown_role", f"unknown role: {role_text}")
        body.finish()
        with db.transaction() as repo:
            user = repo.get_user(user_id)
            if user is None:
                raise NotFound(f"user {user_id}")
            user = UserAccount(
                id=user.id,
                username=username.strip() if username.strip() else user.username,
                password_hash=hash_password(password) if password else user.password_hash,
                role=role if role is not None else user.role,
            )
            repo.update_user(user)
            repo.append_audit(claims.username, "update_user", "user", user_id)
        return user_json(user)

    @app.delete("/api/v1/users/{user_id}", status_code=204)
    async def delete_user(user_id: str, claims: TokenClaims = guard(Action.DELETE_USER)):
        with db.transaction() as repo:
            repo.delete_user(user_id)
            repo.append_audit(claims.username, "delete_user", "user", user_id)
        return Response(status_code=204)

    # -- kegiatan (activities) ------------------------------------------------

    def _activity_from_body(body: _Body, activity_id: str) -> Activity:
        program_id = body.str_field("program_id")
        desa_id = body.str_field("desa_id")
        title = body.str_field("title")
        budget = body.int_field("budget", minimum=1)
        start_period = body.int_field("start_period")
        end_period = body.int_field("end_period")
        shares_raw = body.payload.get("tranche_shares")
        config_shares = None
        if shares_raw is not None:
            good = (
                isinstance(shares_raw, (list, tuple))
                and len(shares_raw) == 3
                and all(isinstance(s, int) and not isinstance(s, bool) for s in shares_raw)
            )
            if not good:
                body._problem(
                    "tranche_shares", "bad_type", "tranche_shares must be three integers"
                )
            else:
                try:
                    config_shares = TrancheConfig(tuple(Percent(s) for s in shares_raw))
                except ValueError as exc:
                    body._problem("tranche_shares", "invalid_shares", str(exc))
        body.finish()
        return Activity(
            id=activity_id,
            program_id=program_id,
            desa_id=desa_id,
            title=title,
            budget=Money(budget),
            start_period=start_period,
            end_period=end_period,
            tranche_config=config_shares or DEFAULT_TRANCHE_CONFIG,
        )

    @app.post("/api/v1/kegiatan", status_code=201)
    async def create_activity(
        request: Request, claims: TokenClaims = guard(Action.CREATE_ACTIVITY)
    ):
        activity = _activity_from_body(await _read_json(request), new_id())
        with db.transaction() as repo:
            verdict = validate_activity(
                activity,
                existing_desa={d.id for d in repo.list_desa()},
                existing_programs={p.id for p in repo.list_programs()},
            )
            if not verdict.ok:
                raise _verdict_error(verdict)
            repo.insert_activity(activity)
            repo.insert_stages(plan_tranches(activity.budget, activity.tranche_config, activity.id))
            repo.append_audit(claims.username, "create_activity", "activity", activity.id)
        return activity_json(activity)

    @app.get("/api/v1/kegiatan")
    async def list_activities(
        program_id: str | None = None,
        desa_id: str | None = None,
        kecamatan_id: str | None = None,
        claims: TokenClaims = guard(Action.LIST_ACTIVITIES),
    ):
        with db.snapshot() as repo:
            rows = repo.list_activities(program_id, desa_id, kecamatan_id)
            return {"kegiatan": [activity_json(a) for a in rows]}

    @app.get("/api/v1/kegiatan/{activity_id}")
    async def get_activity(activity_id: str, claims: TokenClaims = guard(Action.GET_ACTIVITY)):
        with db.snapshot() as repo:
            activity = repo.get_activity(activity_id)
        if activity is None:
            raise NotFound(f"activity {activity_id}")
        return activity_json(activity)

    @app.put("/api/v1/kegiatan/{activity_id}")
    async def update_activity(
        activity_id: str, request: Request, claims: TokenClaims = guard(Action.UPDATE_ACTIVITY)
    ):
        activity = _activity_from_body(await _read_json(request), activity_id)
        with db.transaction() as repo:
            current = repo.get_activity(activity_id)
            if current is None:
                raise NotFound(f"activity {activity_id}")
            verdict = validate_activity(
                activity,
                existing_desa={d.id for d in repo.list_desa()},
                existing_programs={p.id for p in repo.list_programs()},
            )
            if not verdict.ok:
                raise _verdict_error(verdict)
            plan_changed = (
                activity.budget != current.budget
                or activity.tranche_config != current.tranche_config
            )
            if plan_changed:
                stages = repo.get_stages(activity_id)
                if any(s.status is StageStatus.DISBURSED for s in stages):
                    raise Conflict("cannot change budget or shares after a disbursement")
                repo.delete_stages(activity_id)
                repo.insert_stages(
                    plan_tranches(activity.budget, activity.tranche_config, activity_id)
                )
            repo.update_activity(activity)
            repo.append_audit(claims.username, "update_activity", "activity", activity_id)
        return activity_json(activity)

    @app.delete("/api/v1/kegiatan/{activity_id}", status_code=204)
    async def delete_activity(
        activity_id: str, claims: TokenClaims = guard(Action.DELETE_ACTIVITY)
    ):
        with db.transaction() as repo:
            repo.delete_activity(activity_id)
            repo.append_audit(claims.username, "delete_activity", "activity", activity_id)
        return Response(status_code=204)

    # -- work targets ---------------------------------------------------------

    @app.put("/api/v1/kegiatan/{activity_id}/targets")
    async def set_targets(
        activity_id: str, request: Request, claims: TokenClaims = guard(Action.SET_WORK_TARGETS)
    ):
        body = await _read_json(request)
        entries_raw = body.payload.get("entries")
        if not isinstance(entries_raw, list):
            body._problem("entries", "bad_type", "entries must be a list")
            body.finish()
        entries: list[TargetEntry] = []
        for i, raw in enumerate(entries_raw):
            row = _Body(raw)
            period = row.int_field("period")
            physical = row.int_field("planned_physical", minimum=0)
            financial = row.int_field("planned_financial", minimum=0)
            for problem in row.problems:
                body._problem(f"entries[{i}].{problem['field']}", problem["code"], problem["message"])
            if row.problems:
                continue
            try:
                entries.append(TargetEntry(period, Percent(physical), Money(financial)))
            except ValueError as exc:
                body._problem(f"entries[{i}]", "invalid_entry", str(exc))
        body.finish()
        plan = WorkTargetPlan(activity_id=activity_id, entries=tuple(entries))
        with db.transaction() as repo:
            activity = repo.get_activity(activity_id)
            if activity is None:
                raise NotFound(f"activity {activity_id}")
            verdict = validate_work_target_plan(plan, activity)
            if not verdict.ok:
                raise _verdict_error(verdict)
            repo.set_work_target_plan(plan)
            repo.append_audit(claims.username, "set_work_targets", "activity", activity_id)
        return {"activity_id": activity_id, "entries": [target_entry_json(e) for e in plan.entries]}

    @app.get("/api/v1/kegiatan/{activity_id}/targets")
    async def get_targets(activity_id: str, claims: TokenClaims = guard(Action.GET_WORK_TARGETS)):
        with db.snapshot() as repo:
            if repo.get_activity(activity_id) is None:
                raise NotFound(f"activity {activity_id}")
            plan = repo.get_work_target_plan(activity_id)
        entries = [] if plan is None else [target_entry_json(e) for e in plan.entries]
        return {"activity_id": activity_id, "entries": entries}

    # -- reports ----------------------------------------------------------------

    @app.post("/api/v1/kegiatan/{activity_id}/reports", status_code=201)
    async def submit_report(activity_id: str, request: Request):
        claims = _claims(request)
        body = await _read_json(request)
        supersede = body.bool_field("supersede")
        # superseding is a stronger right than filing, checked separately
        action = Action.SUPERSEDE_REPORT if supersede else Action.SUBMIT_REPORT
        if not is_allowed(claims.role, action):
            raise ApiError(
                403, "forbidden", f"{action.value} is not allowed for role {claims.role.value}"
            )
        period = body.int_field("period")
        physical = body.int_field("physical", minimum=0)
        financial = body.int_field("financial_absorbed", minimum=0)
        labor = body.int_field("labor_count")
        submitted_at_text = body.str_field("submitted_at", required=False)
        body.finish()
        try:
            physical_pct = Percent(physical)
        except ValueError as exc:
            raise ApiError(
                422,
                "validation_failed",
                "request body invalid",
                [{"field": "physical", "code": "out_of_range", "message": str(exc)}],
            ) from None
        if submitted_at_text:
            try:
                submitted_at = datetime.fromisoformat(submitted_at_text.replace("Z", "+00:00"))
            except ValueError:
                raise ApiError(
                    422,
                    "validation_failed",
                    "request body invalid",
                    [
                        {
                            "field": "submitted_at",
                            "code": "bad_datetime",
                            "message": "submitted_at must be ISO 8601",
                        }
                    ],
                ) from None
            if submitted_at.tzinfo is None:
                submitted_at = submitted_at.replace(tzinfo=timezone.utc)
        else:
            submitted_at = datetime.now(timezone.utc).replace(microsecond=0)

        report = ProgressReport(
            id=new_id(),
            activity_id=activity_id,
            period=period,
            physical=physical_pct,
            financial_absorbed=Money(financial),
            labor_count=labor,
            submitted_by=claims.username,
            submitted_at=submitted_at,
        )
        with db.transaction() as repo:
            activity = repo.get_activity(activity_id)
            if activity is None:
                raise NotFound(f"activity {activity_id}")
            displaced = repo.active_report_for_period(activity_id, period)
            if displaced is not None and not supersede:
                raise Conflict(
                    f"a report for period {period} already exists; set supersede to replace it"
                )
            stages = repo.get_stages(activity_id)
            disbursed = disbursed_to_date(stages, submitted_at.date())
            if supersede and displaced is not None:
                prior = repo.latest_report(activity_id, before_period=period)
                successor = repo.next_report_after(activity_id, period)
            else:
                prior = repo.latest_report(activity_id)
                successor = None
            verdict = validate_progress_report(report, activity, prior, disbursed)
            if not verdict.ok:
                raise _verdict_error(verdict)
            if successor is not None:
                # the corrected week must keep the following week valid
                follow_up = validate_progress_report(
                    successor,
                    activity,
                    report,
                    disbursed_to_date(stages, successor.submitted_at.date()),
                )
                if not follow_up.ok:
                    raise ApiError(
                        422,
                        "validation_failed",
                        "correction would invalidate a later report",
                        [
                            {
                                "field": v.field,
                                "code": "would_invalidate_successor",
                                "message": f"period {successor.period}: {v.message}",
                            }
                            for v in follow_up.violations
                        ],
                    )
            if displaced is not None:
                repo.mark_report_superseded(displaced.id)
            repo.insert_report(report)
            repo.append_audit(
                claims.username,
                "supersede_report" if displaced is not None else "submit_report",
                "report",
                report.id,
                detail=f"activity={activity_id} period={period}",
            )
        return report_json(report)

    @app.get("/api/v1/kegiatan/{activity_id}/reports")
    async def list_reports(
        activity_id: str,
        include_superseded: bool = False,
        claims: TokenClaims = guard(Action.LIST_REPORTS),
    ):
        with db.snapshot() as repo:
            if repo.get_activity(activity_id) is None:
                raise NotFound(f"activity {activity_id}")
            rows = repo.list_reports(activity_id, include_superseded)
            old = repo.superseded_ids(activity_id) if include_superseded else set()
        return {"reports": [report_json(r, superseded=r.id in old) for r in rows]}

    @app.get("/api/v1/reports/{report_id}")
    async def get_report(report_id: str, claims: TokenClaims = guard(Action.GET_REPORT)):
        with db.snapshot() as repo:
            report = repo.get_report(report_id)
            if report is None:
                raise NotFound(f"report {report_id}")
            superseded = repo.is_superseded(report_id)
        return report_json(report, superseded=superseded)

    # -- disbursements ------------------------------------------------------------

    @app.post("/api/v1/kegiatan/{activity_id}/disbursements", status_code=201)
    async def record_disbursement_endpoint(
        activity_id: str, request: Request, claims: TokenClaims = guard(Action.RECORD_DISBURSEMENT)
    ):
        body = await _read_json(request)
        stage_number = body.int_field("stage_number")
        amount = body.int_field("amount", minimum=1)
        date_text = body.str_field("date")
        body.finish()
        on = parse_date(date_text)
        with db.transaction() as repo:
            if repo.get_activity(activity_id) is None:
                raise NotFound(f"activity {activity_id}")
            stages = repo.get_stages(activity_id)
            reports = repo.list_reports(activity_id)
            updated = record_disbursement(stage_number, Money(amount), on, stages, reports)
            target = next(s for s in updated if s.stage_number == stage_number)
            repo.replace_stage(target)
            repo.append_audit(
                claims.username,
                "record_disbursement",
                "activity",
                activity_id,
                detail=f"stage={stage_number} amount={amount} date={on.isoformat()}",
            )
        return stage_json(target)

    @app.get("/api/v1/kegiatan/{activity_id}/disbursements")
    async def list_disbursements(
        activity_id: str, claims: TokenClaims = guard(Action.LIST_DISBURSEMENTS)
    ):
        with db.snapshot() as repo:
            if repo.get_activity(activity_id) is None:
                raise NotFound(f"activity {activity_id}")
            stages = repo.get_stages(activity_id)
        return {"stages": [stage_json(s) for s in stages]}

    # -- photos ---------------------------------------------------------------------

    @app.post("/api/v1/reports/{report_id}/photos", status_code=201)
    async def upload_photo(
        report_id: str,
        request: Request,
        claims: TokenClaims = guard(Action.UPLOAD_PHOTO),
    ):
        form = await request.form()
        file = form.get("file")
        caption = form.get("caption", "")
        achieved_text = form.get("achieved_at_percent")
        problems: list[dict] = []
        if not isinstance(file, UploadFile):
            problems.append(
                {"field": "file", "code": "missing", "message": "a file part named 'file' is required"}
            )
        if not isinstance(caption, str):
            problems.append(
                {"field": "caption", "code": "bad_type", "message": "caption must be text"}
            )
        achieved = None
        if not isinstance(achieved_text, str) or not achieved_text.strip():
            problems.append(
                {
                    "field": "achieved_at_percent",
                    "code": "missing",
                    "message": "achieved_at_percent is required (basis points)",
                }
            )
        else:
            try:
                achieved = Percent(int(achieved_text))
            except ValueError:
                problems.append(
                    {
                        "field": "achieved_at_percent",
                        "code": "out_of_range",
                        "message": "achieved_at_percent must be integer basis points 0..10000",
                    }
                )
        if problems:
            raise ApiError(422, "validation_failed", "request invalid", problems)
        assert isinstance(file, UploadFile) and achieved is not None

        data = await file.read(config.photo_max_bytes + 1)
        if len(data) > config.photo_max_bytes:
            raise ApiError(
                413,
                "photo_too_large",
                f"photo exceeds the configured cap of {config.photo_max_bytes} bytes",
            )
        if data.startswith(_JPEG_MAGIC):
            media_type = "image/jpeg"
        elif data.startswith(_PNG_MAGIC):
            media_type = "image/png"
        else:
            raise ApiError(415, "unsupported_media_type", "only JPEG and PNG photos are accepted")

        digest = photos.put(data)
        photo = PhotoAttachment(
            id=new_id(),
            report_id=report_id,
            content_hash=digest,
            caption=caption,
            achieved_at_percent=achieved,
            media_type=media_type,
        )
        with db.transaction() as repo:
            report = repo.get_report(report_id)
            if report is None:
                raise NotFound(f"report {report_id}")
            if achieved > report.physical:
                raise _verdict_error(
                    Verdict.single(
                        "achieved_at_percent",
                        "photo_percent_above_report",
                        "photo claims more progress than the report it documents",
                    )
                )
            repo.insert_photo(photo)
            repo.append_audit(
                claims.username, "upload_photo", "photo", photo.id, detail=f"report={report_id}"
            )
        return photo_json(photo)

    @app.get("/api/v1/photos/{photo_id}")
    async def get_photo(photo_id: str, claims: TokenClaims = guard(Action.GET_PHOTO)):
        with db.snapshot() as repo:
            photo = repo.get_photo(photo_id)
        if photo is None:
            raise NotFound(f"photo {photo_id}")
        return photo_json(photo)

    @app.get("/api/v1/photos/{photo_id}/content")
    async def get_photo_content(photo_id: str, claims: TokenClaims = guard(Action.GET_PHOTO)):
        with db.snapshot() as repo:
            photo = repo.get_photo(photo_id)
        if photo is None:
            raise NotFound(f"photo {photo_id}")
        return Response(content=photos.get(photo.content_hash), media_type=photo.media_type)

    # -- monitoring views --------------------------------------------------------------

    @app.get("/api/v1/summary")
    async def summary(
        scope: str,
        id: str,
        as_of_period: int | None = None,
        claims: TokenClaims = guard(Action.VIEW_SUMMARY),
    ):
        kind = SCOPE_NAMES.get(scope)
        if kind is None:
            raise InvalidInput(f"unknown scope kind: {scope!r}")
        with db.snapshot() as repo:
            payload = build_summary(repo, Scope(kind, id), as_of_period)
        return _canonical(payload)

    @app.get("/api/v1/kegiatan/{activity_id}/s-curve")
    async def s_curve_endpoint(
        activity_id: str,
        through: int | None = None,
        claims: TokenClaims = guard(Action.VIEW_S_CURVE),
    ):
        with db.snapshot() as repo:
            payload = build_s_curve(repo, activity_id, through)
        return _canonical(payload)

    @app.get("/api/v1/kegiatan/{activity_id}/stage-chart")
    async def stage_chart_endpoint(
        activity_id: str, claims: TokenClaims = guard(Action.VIEW_STAGE_CHART)
    ):
        with db.snapshot() as repo:
            payload = build_stage_chart(repo, activity_id)
        return _canonical(payload)

    @app.get("/api/v1/late-reports")
    async def late_reports_endpoint(
        as_of: str | None = None,
        grace_days: int = DEFAULT_GRACE_DAYS,
        program_id: str | None = None,
        claims: TokenClaims = guard(Action.VIEW_LATE_REPORTS),
    ):
        day = parse_date(as_of) if as_of else datetime.now(timezone.utc).date()
        with db.snapshot() as repo:
            payload = build_late_reports(repo, day, grace_days, program_id)
        return _canonical(payload)

    return app

"""Shared test harness.

Tests marked ``@pytest.mark.acceptance("<criterion>")`` feed the acceptance
summary printed at the end of the run: one PASS/FAIL line per criterion.
A criterion with several backing tests fails if any of them fail.
"""

from __future__ import annotations

from pathlib import Path

import pytest

from desamon.api.app import create_app
from desamon.api.tokens import hash_password
from desamon.config import AppConfig
from desamon.core.types import Role, UserAccount, new_id
from desamon.storage import Database

FIXTURES = Path(__file__).parent / "fixtures"
DEMO_SEED = Path(__file__).parents[1] / "fixtures" / "demo_seed.yaml"

# criterion key -> printable title, in report order
CRITERIA = {
    "rbac_matrix": "Three-role RBAC matrix matches the checked-in fixture",
    "state_machine": "Disbursement state machine invariants and oracle agreement",
    "tranche_conservation": "Tranche planning conserves the budget exactly",
    "rollup_oracle": "Weighted rollup within 1 bp of brute force, hierarchy consistent",
    "report_monotonicity": "Accepted report sequences are monotone; regressions rejected",
    "ingestion_golden": "Golden CSV corpus splits and parser round-trips",
    "concurrency": "Racing disbursements: exactly one winner",
    "end_to_end": "Scripted three-stage scenario over the API",
    "export_equivalence": "CLI JSON export byte-equal to the API summary",
}

_RESULTS: dict[str, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(name): test backs the named acceptance criterion"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    name = marker.args[0]
    _RESULTS.setdefault(name, []).append(report.passed)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key, title in CRITERIA.items():
        outcomes = _RESULTS.get(key)
        if outcomes is None:
            verdict = "NOT RUN"
        elif all(outcomes):
            verdict = "PASS"
        else:
            verdict = "FAIL"
        terminalreporter.write_line(f"{verdict:7s} {title}")


@pytest.fixture
def store(tmp_path) -> Database:
    db = Database(tmp_path / "store.db")
    db.migrate()
    return db


class ApiHarness:
    """An app over a throwaway store with one account per role."""

    PASSWORDS = {
        Role.ADMIN: "admin-secret-1",
        Role.PETUGAS: "petugas-secret-1",
        Role.KASATKER: "kasatker-secret-1",
    }

    def __init__(self, tmp_path, **config_overrides):
        from fastapi.testclient import TestClient

        self.config = AppConfig(
            storage_path=tmp_path / "api.db",
            photo_dir=tmp_path / "photos",
            token_key=b"test-signing-key-0123456789abcdef",
            **config_overrides,
        )
        self.app = create_app(self.config)
        self.db: Database = self.app.state.db
        with self.db.transaction() as repo:
            for role, password in self.PASSWORDS.items():
                repo.insert_user(
                    UserAccount(
                        id=new_id(),
                        username=role.value,
                        password_hash=hash_password(password),
                        role=role,
                    )
                )
        self.client = TestClient(self.app)
        self._headers: dict[Role, dict] = {}

    def login(self, role: Role) -> dict:
        if role not in self._headers:
            response = self.client.post(
                "/api/v1/login",
                json={"username": role.value, "password": self.PASSWORDS[role]},
            )
            assert response.status_code == 200, response.text
            self._headers[role] = {"Authorization": "Bearer " + response.json()["token"]}
        return self._headers[role]

    @property
    def admin(self) -> dict:
        return self.login(Role.ADMIN)

    @property
    def petugas(self) -> dict:
        return self.login(Role.PETUGAS)

    @property
    def kasatker(self) -> dict:
        return self.login(Role.KASATKER)


@pytest.fixture
def api(tmp_path) -> ApiHarness:
    return ApiHarness(tmp_path)

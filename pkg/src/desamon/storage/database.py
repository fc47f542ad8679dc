"""File-backed relational store with migrations and transactional views.

SQLite in WAL mode: readers hold a consistent snapshot for the duration of
their transaction, writers serialize against each other (``BEGIN
IMMEDIATE``), so two racing transitions on the same activity cannot both
commit conflicting state.  Each transactional view runs on its own
connection, making the database object safe to share across threads.
"""

from __future__ import annotations

import re
import sqlite3
from contextlib import contextmanager
from importlib import resources
from pathlib import Path
from typing import Callable, Iterator, TypeVar

from desamon.errors import ConfigError, RetryableConflict
from desamon.storage.repository import Repository

T = TypeVar("T")

_MIGRATION_NAME = re.compile(r"^(\d{4})_[a-z0-9_]+\.sql$")
_BUSY_TIMEOUT_MS = 10_000


def _load_migrations() -> list[tuple[int, str, str]]:
    """(version, name, sql) triples shipped with the package, ordered."""
    found = []
    base = resources.files("desamon.storage") / "migrations"
    for entry in base.iterdir():
        m = _MIGRATION_NAME.match(entry.name)
        if m:
            found.append((int(m.group(1)), entry.name, entry.read_text(encoding="utf-8")))
    found.sort()
    if not found:
        raise ConfigError("no migration files shipped with the package")
    return found


class Database:
    """Handle on one store file; owns connections and migrations."""

    def __init__(self, path: str | Path):
        self.path = Path(path)

    def connect(self) -> sqlite3.Connection:
        conn = sqlite3.connect(
            self.path,
            timeout=_BUSY_TIMEOUT_MS / 1000,
            isolation_level=None,  # explicit BEGIN/COMMIT only
            detect_types=0,
        )
        conn.row_factory = sqlite3.Row
        conn.execute("PRAGMA foreign_keys = ON")
        conn.execute("PRAGMA journal_mode = WAL")
        conn.execute(f"PRAGMA busy_timeout = {_BUSY_TIMEOUT_MS}")
        return conn

    def schema_version(self) -> int:
        """Highest applied migration, 0 for a virgin store."""
        conn = self.connect()
        try:
            row = conn.execute(
                "SELECT name FROM sqlite_master WHERE type='table' AND name='schema_migrations'"
            ).fetchone()
            if row is None:
                return 0
            version = conn.execute("SELECT MAX(version) FROM schema_migrations").fetchone()[0]
            return int(version or 0)
        finally:
            conn.close()

    def migrate(self, through: int | None = None) -> int:
        """Apply pending migrations in order; rerunning is a no-op.

        Each step commits on its own, so a failing migration rolls back that
        step alone and leaves the store at the last good version.
        ``through`` caps the target version (used by upgrade tests).
        """
        conn = self.connect()
        try:
            conn.execute("BEGIN IMMEDIATE")
            conn.execute(
                "CREATE TABLE IF NOT EXISTS schema_migrations ("
                " version INTEGER PRIMARY KEY, name TEXT NOT NULL,"
                " applied_at TEXT NOT NULL DEFAULT (datetime('now')))"
            )
            conn.execute("COMMIT")
            applied = {
                row[0] for row in conn.execute("SELECT version FROM schema_migrations")
            }
            version = max(applied, default=0)
            for number, name, sql in _load_migrations():
                if number in applied or (through is not None and number > through):
                    continue
                conn.execute("BEGIN IMMEDIATE")
                try:
                    for statement in _split_statements(sql):
                        conn.execute(statement)
                    conn.execute(
                        "INSERT INTO schema_migrations (version, name) VALUES (?, ?)",
                        (number, name),
                    )
                    conn.execute("COMMIT")
                except Exception:
                    conn.execute("ROLLBACK")
                    raise
                version = number
            return version
        finally:
            conn.close()

    @contextmanager
    def transaction(self) -> Iterator[Repository]:
        """Writable view; all writes commit atomically or not at all."""
        conn = self.connect()
        try:
            try:
                conn.execute("BEGIN IMMEDIATE")
            except sqlite3.OperationalError as exc:
                raise RetryableConflict(str(exc)) from exc
            repo = Repository(conn)
            try:
                yield repo
            except BaseException:
                conn.execute("ROLLBACK")
                raise
            conn.execute("COMMIT")
        finally:
            conn.close()

    @contextmanager
    def snapshot(self) -> Iterator[Repository]:
        """Read-only view over one consistent snapshot; never takes locks
        that block writers (WAL)."""
        conn = self.connect()
        try:
            conn.execute("BEGIN")
            try:
                yield Repository(conn)
            finally:
                conn.execute("ROLLBACK")
        finally:
            conn.close()

    def within_transaction(self, work: Callable[[Repository], T]) -> T:
        with self.transaction() as repo:
            return work(repo)


def _split_statements(sql: str) -> list[str]:
    """Split a migration script on top-level semicolons."""
    statements = []
    buffer: list[str] = []
    for line in sql.splitlines():
        stripped = line.strip()
        if stripped.startswith("--"):
            continue
        buffer.append(line)
        if stripped.endswith(";"):
            statement = "\n".join(buffer).strip().rstrip(";")
            if statement:
                statements.append(statement)
            buffer = []
    tail = "\n".join(buffer).strip().rstrip(";")
    if tail:
        statements.append(tail)
    return statements

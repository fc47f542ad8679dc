"""Tiny ``key = value`` document parser.

Used for column-map files and the service config file.  One assignment per
line; ``#`` starts a comment; blank lines are ignored.  Values may be wrapped
in double quotes to preserve surrounding whitespace or to force a digit
string to stay text; quotes are kept in the raw value so callers can tell,
and stripped by :func:`unquote`.
"""

from __future__ import annotations

from desamon.errors import ParseError


def parse_kv_document(text: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ParseError(f"line {lineno}: empty key")
        if key in values:
            raise ParseError(f"line {lineno}: duplicate key {key!r}")
        values[key] = value.strip()
    return values


def is_quoted(value: str) -> bool:
    return len(value) >= 2 and value.startswith('"') and value.endswith('"')


def unquote(value: str) -> str:
    return value[1:-1] if is_quoted(value) else value

"""Password hashing and stateless signed session tokens.

Passwords use scrypt with per-user salts; the stored form records its own
parameters so they can be raised later without breaking old hashes.  Session
tokens are HMAC-SHA256 over a small JSON payload, verifiable without touching
the database.  All comparisons go through ``hmac.compare_digest``.
"""

from __future__ import annotations

import base64
import hashlib
import hmac
import json
import secrets
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

from desamon.core.types import Role, UserAccount

_SCRYPT_N = 2**14
_SCRYPT_R = 8
_SCRYPT_P = 1
_KEY_LEN = 32


def hash_password(password: str) -> str:
    salt = secrets.token_bytes(16)
    key = hashlib.scrypt(
        password.encode("utf-8"),
        salt=salt,
        n=_SCRYPT_N,
        r=_SCRYPT_R,
        p=_SCRYPT_P,
        dklen=_KEY_LEN,
    )
    return "$".join(
        (
            "scrypt",
            str(_SCRYPT_N),
            str(_SCRYPT_R),
            str(_SCRYPT_P),
            _b64e(salt),
            _b64e(key),
        )
    )


def verify_password(password: str, stored: str) -> bool:
    try:
        scheme, n_text, r_text, p_text, salt_text, key_text = stored.split("$")
        if scheme != "scrypt":
            return False
        salt = _b64d(salt_text)
        expected = _b64d(key_text)
        candidate = hashlib.scrypt(
            password.encode("utf-8"),
            salt=salt,
            n=int(n_text),
            r=int(r_text),
            p=int(p_text),
            dklen=len(expected),
        )
    except (ValueError, TypeError):
        return False
    return hmac.compare_digest(candidate, expected)


@dataclass(frozen=True, slots=True)
class TokenClaims:
    user_id: str
    username: str
    role: Role
    expires_at: datetime


def issue_token(
    key: bytes,
    user: UserAccount,
    ttl_hours: int = 8,
    now: datetime | None = None,
) -> str:
    now = now or datetime.now(timezone.utc)
    payload = {
        "uid": user.id,
        "sub": user.username,
        "role": user.role.value,
        "exp": int((now + timedelta(hours=ttl_hours)).timestamp()),
    }
    body = _b64e(json.dumps(payload, separators=(",", ":"), sort_keys=True).encode("utf-8"))
    return f"{body}.{_sign(key, body)}"


def verify_token(key: bytes, token: str, now: datetime | None = None) -> TokenClaims | None:
    """Claims for a valid unexpired token, else None. Never raises on junk."""
    now = now or datetime.now(timezone.utc)
    body, sep, signature = token.partition(".")
    if not sep or not hmac.compare_digest(signature, _sign(key, body)):
        return None
    try:
        payload = json.loads(_b64d(body))
        claims = TokenClaims(
            user_id=payload["uid"],
            username=payload["sub"],
            role=Role(payload["role"]),
            expires_at=datetime.fromtimestamp(int(payload["exp"]), tz=timezone.utc),
        )
    except (ValueError, TypeError, KeyError):
        return None
    if not (
        isinstance(claims.user_id, str)
        and isinstance(claims.username, str)
        and claims.user_id
    ):
        return None
    if claims.expires_at <= now:
        return None
    return claims


def _sign(key: bytes, body: str) -> str:
    return _b64e(hmac.new(key, body.encode("ascii"), hashlib.sha256).digest())


def _b64e(data: bytes) -> str:
    return base64.urlsafe_b64encode(data).decode("ascii").rstrip("=")


def _b64d(text: str) -> bytes:
    padded = text + "=" * (-len(text) % 4)
    return base64.urlsafe_b64decode(padded.encode("ascii"))

"""Content-addressed file store for report photos.

Files live under ``root/ab/cdef...`` keyed by the SHA-256 of their bytes, so
re-uploading identical content is a no-op and the database only ever stores
the hash.  Writes go through a temp file + rename to stay crash-safe.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from pathlib import Path

from desamon.errors import NotFound


def content_hash(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class PhotoStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)

    def put(self, data: bytes) -> str:
        """Store ``data``, returning its hash. Idempotent."""
        digest = content_hash(data)
        target = self.path_for(digest)
        if target.exists():
            return digest
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=".incoming-")
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
            os.replace(tmp, target)
        except BaseException:
            try:
                os.unlink(tmp)
            except FileNotFoundError:
                pass
            raise
        return digest

    def get(self, digest: str) -> bytes:
        target = self.path_for(digest)
        try:
            data = target.read_bytes()
        except FileNotFoundError:
            raise NotFound(f"photo content {digest}") from None
        return data

    def exists(self, digest: str) -> bool:
        return self.path_for(digest).exists()

    def path_for(self, digest: str) -> Path:
        if len(digest) != 64 or any(c not in "0123456789abcdef" for c in digest):
            raise ValueError(f"not a sha256 hex digest: {digest!r}")
        return self.root / digest[:2] / digest[2:]

    def verify(self, digest: str) -> bool:
        """True when the stored bytes still hash to their name."""
        try:
            return content_hash(self.get(digest)) == digest
        except NotFound:
            return False

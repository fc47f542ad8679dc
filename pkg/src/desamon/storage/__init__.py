from desamon.storage.database import Database
from desamon.storage.photostore import PhotoStore, content_hash
from desamon.storage.repository import AuditEntry, Repository

__all__ = ["AuditEntry", "Database", "PhotoStore", "Repository", "content_hash"]

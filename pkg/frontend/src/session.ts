/**
 * Login session kept in web storage so a reload does not log the user out.
 *
 * The stored token is opaque; expiry here is advisory (it avoids sending a
 * request that is guaranteed to fail). The server re-checks every call, so a
 * stale or tampered entry can never grant anything.
 */

import type { Role } from "./api.js";

export interface ClientSession {
  token: string;
  role: Role;
  username: string;
  expiresAt: string;
}

const SESSION_KEY = "desamon.session";
const ROLES: readonly string[] = ["admin", "petugas", "kasatker"];

export class SessionStore {
  constructor(private readonly storage: Storage) {}

  save(session: ClientSession): void {
    this.storage.setItem(SESSION_KEY, JSON.stringify(session));
  }

  /** Current session, or null if absent, corrupted, or expired. */
  load(now: Date = new Date()): ClientSession | null {
    const raw = this.storage.getItem(SESSION_KEY);
    if (raw === null) {
      return null;
    }
    let parsed: unknown;
    try {
      parsed = JSON.parse(raw);
    } catch {
      this.storage.removeItem(SESSION_KEY);
      return null;
    }
    if (!isSession(parsed)) {
      this.storage.removeItem(SESSION_KEY);
      return null;
    }
    if (new Date(parsed.expiresAt).getTime() <= now.getTime()) {
      this.storage.removeItem(SESSION_KEY);
      return null;
    }
    return parsed;
  }

  clear(): void {
    this.storage.removeItem(SESSION_KEY);
  }
}

function isSession(value: unknown): value is ClientSession {
  if (typeof value !== "object" || value === null) {
    return false;
  }
  const record = value as Record<string, unknown>;
  return (
    typeof record["token"] === "string" &&
    record["token"].length > 0 &&
    typeof record["role"] === "string" &&
    ROLES.includes(record["role"]) &&
    typeof record["username"] === "string" &&
    typeof record["expiresAt"] === "string" &&
    !Number.isNaN(new Date(record["expiresAt"]).getTime())
  );
}

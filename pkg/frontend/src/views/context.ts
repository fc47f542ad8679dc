import type { ApiClient } from "../api.js";
import type { ClientSession } from "../session.js";

/** Everything a signed-in view needs, injected so tests can fake it all. */
export interface ViewContext {
  doc: Document;
  api: ApiClient;
  session: ClientSession;
  /** Local drafts live here, independent of the session entry. */
  storage: Storage;
  photoMaxBytes: number;
  /** Token no longer valid: return to login, leaving drafts in place. */
  onUnauthorized(): void;
  navigate(hash: string): void;
}

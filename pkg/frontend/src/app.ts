/**
 * Application shell: owns the session, the router wiring, and the handoff
 * to whichever view the hash resolves to. The only configuration is the API
 * base URL; everything else comes from the API itself.
 */

import { ApiClient, ApiError } from "./api.js";
import { homeView, type ViewName } from "./rbac.js";
import { hashFor, renderForbidden, renderNav, resolve } from "./router.js";
import { SessionStore } from "./session.js";
import { DEFAULT_PHOTO_MAX_BYTES } from "./validation.js";
import type { ViewContext } from "./views/context.js";
import { renderDashboard } from "./views/dashboard.js";
import { renderLogin } from "./views/login.js";
import { renderMaster } from "./views/master.js";
import { renderReportEntry } from "./views/report-form.js";

export interface AppConfig {
  /** Where /api/v1 lives, for example "" (same origin) or "http://host:8000". */
  apiBaseUrl: string;
  photoMaxBytes?: number;
}

export interface AppDeps {
  window: Window;
  document: Document;
  storage: Storage;
  fetchImpl: (input: string, init?: RequestInit) => Promise<Response>;
}

export class App {
  private readonly api: ApiClient;
  private readonly sessions: SessionStore;
  private readonly root: HTMLElement;

  constructor(
    private readonly config: AppConfig,
    private readonly deps: AppDeps,
  ) {
    this.api = new ApiClient(config.apiBaseUrl, deps.fetchImpl);
    this.sessions = new SessionStore(deps.storage);
    const root = deps.document.getElementById("app");
    if (root === null) {
      throw new Error("missing #app element");
    }
    this.root = root;
  }

  start(): void {
    this.deps.window.addEventListener("hashchange", () => {
      void this.renderCurrent();
    });
    void this.renderCurrent();
  }

  private navigate(hash: string): void {
    if (this.deps.window.location.hash === hash) {
      void this.renderCurrent();
    } else {
      this.deps.window.location.hash = hash;
    }
  }

  private onUnauthorized(): void {
    // token gone stale server-side; drafts in storage stay untouched
    this.sessions.clear();
    this.api.setToken(null);
    this.navigate("#/login");
  }

  async renderCurrent(): Promise<void> {
    const session = this.sessions.load();
    this.api.setToken(session ? session.token : null);
    const resolution = resolve(this.deps.window.location.hash, session);

    if (resolution.kind === "login" || session === null) {
      this.renderLoginPage();
      return;
    }

    this.root.replaceChildren();
    const currentView: ViewName | null = resolution.kind === "view" ? resolution.view : null;
    this.root.append(
      renderNav(this.deps.document, session, currentView, () => {
        this.sessions.clear();
        this.api.setToken(null);
        this.navigate("#/login");
      }),
    );
    const body = this.deps.document.createElement("main");
    body.className = "view-root";
    this.root.append(body);

    if (resolution.kind === "forbidden") {
      body.append(renderForbidden(this.deps.document, resolution.view, resolution.role));
      return;
    }

    const ctx: ViewContext = {
      doc: this.deps.document,
      api: this.api,
      session,
      storage: this.deps.storage,
      photoMaxBytes: this.config.photoMaxBytes ?? DEFAULT_PHOTO_MAX_BYTES,
      onUnauthorized: () => this.onUnauthorized(),
      navigate: (hash) => this.navigate(hash),
    };

    try {
      switch (resolution.view) {
        case "master":
          await renderMaster(body, ctx);
          return;
        case "report-entry":
          await renderReportEntry(body, ctx);
          return;
        case "dashboard":
          await renderDashboard(body, ctx);
          return;
      }
    } catch (failure: unknown) {
      if (failure instanceof ApiError && failure.status === 401) {
        this.onUnauthorized();
        return;
      }
      const note = this.deps.document.createElement("p");
      note.className = "view-error";
      note.textContent =
        failure instanceof ApiError ? failure.body.message : "the server cannot be reached; reload to retry";
      body.append(note);
    }
  }

  private renderLoginPage(): void {
    this.root.replaceChildren();
    const body = this.deps.document.createElement("main");
    body.className = "view-root";
    this.root.append(body);
    renderLogin(body, {
      doc: this.deps.document,
      api: this.api,
      onSuccess: (login) => {
        this.sessions.save({
          token: login.token,
          role: login.role,
          username: login.username,
          expiresAt: login.expires_at,
        });
        this.api.setToken(login.token);
        this.navigate(hashFor(homeView(login.role)));
      },
    });
  }
}

export function mount(config: AppConfig): App {
  const app = new App(config, {
    window,
    document,
    storage: window.localStorage,
    fetchImpl: (input, init) => window.fetch(input, init),
  });
  app.start();
  return app;
}

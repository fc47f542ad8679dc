/**
 * Hash routing with the role rules applied before any view renders.
 *
 * Links a role may not use are not shown at all; typing such a hash by hand
 * still resolves, but to an explicit refusal page (never a blank or broken
 * view). Without a live session every route lands on the login form.
 */

import type { Role } from "./api.js";
import { canAccess, homeView, visibleViews, type ViewName } from "./rbac.js";
import type { ClientSession } from "./session.js";

export type Resolution =
  | { kind: "login" }
  | { kind: "view"; view: ViewName }
  | { kind: "forbidden"; view: ViewName; role: Role };

const HASH_VIEWS: Record<string, ViewName> = {
  "#/master": "master",
  "#/report-entry": "report-entry",
  "#/dashboard": "dashboard",
};

export function hashFor(view: ViewName): string {
  return `#/${view}`;
}

export function resolve(hash: string, session: ClientSession | null): Resolution {
  if (session === null) {
    return { kind: "login" };
  }
  if (hash === "#/login" || hash === "" || hash === "#" || hash === "#/") {
    return { kind: "view", view: homeView(session.role) };
  }
  const view = HASH_VIEWS[hash];
  if (view === undefined) {
    return { kind: "view", view: homeView(session.role) };
  }
  if (!canAccess(session.role, view)) {
    return { kind: "forbidden", view, role: session.role };
  }
  return { kind: "view", view };
}

const VIEW_TITLES: Record<ViewName, string> = {
  master: "Data master",
  "report-entry": "Laporan mingguan",
  dashboard: "Dasbor pemantauan",
};

export function renderNav(
  doc: Document,
  session: ClientSession,
  current: ViewName | null,
  onLogout: () => void,
): HTMLElement {
  const nav = doc.createElement("nav");
  nav.className = "top-nav";
  for (const view of visibleViews(session.role)) {
    const link = doc.createElement("a");
    link.href = hashFor(view);
    link.textContent = VIEW_TITLES[view];
    link.className = view === current ? "nav-link active" : "nav-link";
    link.dataset["view"] = view;
    nav.append(link);
  }
  const who = doc.createElement("span");
  who.className = "nav-user";
  who.textContent = `${session.username} (${session.role})`;
  nav.append(who);
  const logout = doc.createElement("button");
  logout.type = "button";
  logout.className = "nav-logout";
  logout.textContent = "Keluar";
  logout.addEventListener("click", onLogout);
  nav.append(logout);
  return nav;
}

export function renderForbidden(doc: Document, view: ViewName, role: Role): HTMLElement {
  const box = doc.createElement("section");
  box.className = "forbidden";
  const heading = doc.createElement("h2");
  heading.textContent = "Akses ditolak";
  const message = doc.createElement("p");
  message.className = "forbidden-message";
  message.textContent = `the ${view} view is not available for role ${role}`;
  box.append(heading, message);
  return box;
}

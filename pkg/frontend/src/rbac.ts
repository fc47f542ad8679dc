/**
 * Client-side mirror of the server's role rules, used only to decide which
 * views to offer. The server remains the authority; if the mirror ever
 * drifts, the worst outcome is a request the server answers with 403.
 */

import type { Role } from "./api.js";

export type ViewName = "master" | "report-entry" | "dashboard";

const VIEW_ROLES: Record<ViewName, readonly Role[]> = {
  // registry and account upkeep
  master: ["admin"],
  // field data entry: reports, disbursements, photos
  "report-entry": ["petugas"],
  // monitoring: summary, charts, lateness
  dashboard: ["admin", "kasatker"],
};

export const ALL_VIEWS: readonly ViewName[] = ["master", "report-entry", "dashboard"];

export function canAccess(role: Role, view: ViewName): boolean {
  return VIEW_ROLES[view].includes(role);
}

export function visibleViews(role: Role): ViewName[] {
  return ALL_VIEWS.filter((view) => canAccess(role, view));
}

/** Landing view after login: each role starts where its work is. */
export function homeView(role: Role): ViewName {
  switch (role) {
    case "admin":
      return "master";
    case "petugas":
      return "report-entry";
    case "kasatker":
      return "dashboard";
  }
}

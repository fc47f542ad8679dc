import { describe, expect, it } from "vitest";

import type { Role } from "../src/api.js";
import { ALL_VIEWS, canAccess, homeView, visibleViews } from "../src/rbac.js";

const ROLES: Role[] = ["admin", "petugas", "kasatker"];

// mirrors the server: master writes are admin's, field writes are petugas's,
// monitoring views belong to admin and kasatker
const EXPECTED: Record<Role, Record<string, boolean>> = {
  admin: { master: true, "report-entry": false, dashboard: true },
  petugas: { master: false, "report-entry": true, dashboard: false },
  kasatker: { master: false, "report-entry": false, dashboard: true },
};

describe("view access", () => {
  it("decides every role and view pair like the server matrix", () => {
    for (const role of ROLES) {
      for (const view of ALL_VIEWS) {
        expect(canAccess(role, view), `${role} ${view}`).toBe(EXPECTED[role][view]);
      }
    }
  });

  it("lists exactly the allowed views per role", () => {
    expect(visibleViews("admin")).toEqual(["master", "dashboard"]);
    expect(visibleViews("petugas")).toEqual(["report-entry"]);
    expect(visibleViews("kasatker")).toEqual(["dashboard"]);
  });

  it("lands each role on its working view", () => {
    expect(homeView("admin")).toBe("master");
    expect(homeView("petugas")).toBe("report-entry");
    expect(homeView("kasatker")).toBe("dashboard");
  });

  it("keeps every home view reachable for its role", () => {
    for (const role of ROLES) {
      expect(canAccess(role, homeView(role))).toBe(true);
    }
  });
});

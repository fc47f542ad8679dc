/**
 * Monitoring dashboard: rollup figures with drill-down, charts at the
 * activity level, and the lateness list.
 *
 * Drill-down follows the summary payload's own breakdown, program to
 * kecamatan to desa to activity; the client never recomputes a parent from
 * its children. A scope with no activities is said out loud, not drawn as a
 * zero-valued chart that would read as "work exists and stands still".
 */

import { ApiError, type ProgramJson, type ScopeRef, type SummaryJson } from "../api.js";
import { renderSCurve, renderStageChart } from "../charts.js";
import type { ViewContext } from "./context.js";
import { h } from "./dom.js";

interface Crumb {
  scope: ScopeRef;
  name: string;
}

export async function renderDashboard(container: HTMLElement, ctx: ViewContext): Promise<void> {
  const doc = ctx.doc;
  container.replaceChildren();
  const root = h(doc, "section", "dashboard-view");
  root.append(h(doc, "h2", undefined, "Dasbor pemantauan"));
  container.append(root);

  const { programs } = await ctx.api.listPrograms();
  if (programs.length === 0) {
    root.append(h(doc, "p", "empty-note", "belum ada program terdaftar"));
    return;
  }

  const pickLabel = h(doc, "label", undefined, "Program");
  const pick = doc.createElement("select");
  pick.name = "program";
  for (const program of programs) {
    const option = doc.createElement("option");
    option.value = program.id;
    option.textContent = `${program.kind} ${program.fiscal_year}: ${program.name}`;
    pick.append(option);
  }
  pickLabel.append(pick);
  root.append(pickLabel);

  const scopePanel = h(doc, "div", "scope-panel");
  const latePanel = h(doc, "div", "late-panel");
  root.append(scopePanel, latePanel);

  const current = (): ProgramJson => programs.find((p) => p.id === pick.value) ?? programs[0]!;
  const showProgram = (): Promise<void> => {
    const program = current();
    const trail: Crumb[] = [{ scope: { kind: "program", id: program.id }, name: program.name }];
    return Promise.all([
      renderScope(scopePanel, ctx, trail),
      renderLateReports(latePanel, ctx, program.id),
    ]).then(() => undefined);
  };
  pick.addEventListener("change", () => {
    void showProgram();
  });
  await showProgram();
}

async function renderScope(panel: HTMLElement, ctx: ViewContext, trail: Crumb[]): Promise<void> {
  const doc = ctx.doc;
  panel.replaceChildren();
  const here = trail[trail.length - 1]!;

  panel.append(breadcrumb(ctx, panel, trail));

  if (here.scope.kind === "activity") {
    await renderActivityCharts(panel, ctx, here.scope.id);
    return;
  }

  let summary: SummaryJson;
  try {
    summary = await ctx.api.getSummary(here.scope.kind, here.scope.id);
  } catch (failure: unknown) {
    if (failure instanceof ApiError && failure.status === 401) {
      ctx.onUnauthorized();
      return;
    }
    if (failure instanceof ApiError && failure.body.code === "empty_scope") {
      const note = h(doc, "p", "empty-scope-note", `tidak ada kegiatan dalam lingkup ${here.name}`);
      note.dataset["state"] = "empty-scope";
      panel.append(note);
      return;
    }
    panel.append(h(doc, "p", "scope-error", failure instanceof ApiError ? failure.body.message : "the server cannot be reached"));
    return;
  }

  panel.append(summaryCard(doc, summary, here.name));
  panel.append(breakdownTable(panel, ctx, trail, summary));
}

function breadcrumb(ctx: ViewContext, panel: HTMLElement, trail: Crumb[]): HTMLElement {
  const doc = ctx.doc;
  const nav = h(doc, "nav", "breadcrumb");
  trail.forEach((crumb, index) => {
    if (index > 0) {
      nav.append(h(doc, "span", "crumb-sep", " / "));
    }
    if (index === trail.length - 1) {
      nav.append(h(doc, "span", "crumb current", crumb.name));
      return;
    }
    const link = h(doc, "button", "crumb", crumb.name);
    link.type = "button";
    link.addEventListener("click", () => {
      void renderScope(panel, ctx, trail.slice(0, index + 1));
    });
    nav.append(link);
  });
  return nav;
}

function summaryCard(doc: Document, summary: SummaryJson, name: string): HTMLElement {
  const card = h(doc, "section", "summary-card");
  card.dataset["scopeKind"] = summary.scope.kind;
  card.dataset["scopeId"] = summary.scope.id;
  card.append(h(doc, "h3", undefined, name));
  card.append(h(doc, "p", "as-of", `sampai minggu ${summary.as_of_period}`));

  const figures = h(doc, "dl", "summary-figures");
  const figure = (label: string, value: string, cls: string, raw?: number) => {
    figures.append(h(doc, "dt", undefined, label));
    const cell = h(doc, "dd", cls, value);
    if (raw !== undefined) {
      cell.dataset["raw"] = String(raw);
    }
    figures.append(cell);
  };
  figure(
    "Fisik tertimbang",
    summary.weighted_physical.display,
    "weighted-physical",
    summary.weighted_physical.basis_points,
  );
  figure(
    "Keuangan rencana",
    summary.financial_planned.display,
    "financial-planned",
    summary.financial_planned.amount,
  );
  figure(
    "Keuangan realisasi",
    summary.financial_realized.display,
    "financial-realized",
    summary.financial_realized.amount,
  );
  figure("Jumlah kegiatan", String(summary.activity_count), "activity-count");
  figure("Belum lapor", String(summary.missing_report_count), "missing-count");
  card.append(figures);
  return card;
}

function breakdownTable(
  panel: HTMLElement,
  ctx: ViewContext,
  trail: Crumb[],
  summary: SummaryJson,
): HTMLElement {
  const doc = ctx.doc;
  const section = h(doc, "section", "breakdown");
  section.append(h(doc, "h4", undefined, "Rincian"));
  const table = h(doc, "table", "breakdown-table");
  const head = h(doc, "tr");
  for (const caption of ["Nama", "Fisik", "Realisasi keuangan", "Kegiatan", "Belum lapor", ""]) {
    head.append(h(doc, "th", undefined, caption));
  }
  table.append(head);
  for (const child of summary.breakdown) {
    const row = h(doc, "tr", "breakdown-row");
    row.dataset["scopeKind"] = child.scope.kind;
    row.dataset["scopeId"] = child.scope.id;
    row.append(h(doc, "td", "child-name", child.name));
    const physical = h(doc, "td", "child-physical", child.weighted_physical.display);
    physical.dataset["raw"] = String(child.weighted_physical.basis_points);
    row.append(physical);
    const realized = h(doc, "td", "child-realized", child.financial_realized.display);
    realized.dataset["raw"] = String(child.financial_realized.amount);
    row.append(realized);
    row.append(h(doc, "td", "child-count", String(child.activity_count)));
    row.append(h(doc, "td", "child-missing", String(child.missing_report_count)));
    const cell = h(doc, "td");
    const open = h(doc, "button", "drill", "Buka");
    open.type = "button";
    open.addEventListener("click", () => {
      void renderScope(panel, ctx, [...trail, { scope: child.scope, name: child.name }]);
    });
    cell.append(open);
    row.append(cell);
    table.append(row);
  }
  section.append(table);
  return section;
}

async function renderActivityCharts(panel: HTMLElement, ctx: ViewContext, activityId: string): Promise<void> {
  const doc = ctx.doc;
  const charts = h(doc, "div", "activity-charts");
  panel.append(charts);
  try {
    const [curve, stageChart] = await Promise.all([
      ctx.api.getSCurve(activityId),
      ctx.api.getStageChart(activityId),
    ]);
    charts.append(renderStageChart(doc, stageChart));
    charts.append(renderSCurve(doc, curve));
  } catch (failure: unknown) {
    if (failure instanceof ApiError && failure.status === 401) {
      ctx.onUnauthorized();
      return;
    }
    charts.append(
      h(
        doc,
        "p",
        "chart-error",
        failure instanceof ApiError ? failure.body.message : "the server cannot be reached",
      ),
    );
  }
}

async function renderLateReports(panel: HTMLElement, ctx: ViewContext, programId: string): Promise<void> {
  const doc = ctx.doc;
  panel.replaceChildren();
  const section = h(doc, "section", "late-reports");
  section.append(h(doc, "h3", undefined, "Keterlambatan laporan"));
  panel.append(section);
  try {
    const today = new Date().toISOString().slice(0, 10);
    const late = await ctx.api.getLateReports(today, programId);
    if (late.flags.length === 0) {
      section.append(h(doc, "p", "empty-note", "tidak ada keterlambatan"));
      return;
    }
    const list = h(doc, "ul", "late-list");
    for (const flag of late.flags) {
      const wording =
        flag.status === "missing"
          ? `belum ada laporan, ${flag.days_late} hari lewat`
          : flag.status === "late"
            ? `terlambat ${flag.days_late} hari`
            : "tepat waktu";
      const item = h(doc, "li", `late-row status-${flag.status}`, `${flag.activity_title}, minggu ${flag.period}: ${wording}`);
      item.dataset["activityId"] = flag.activity_id;
      item.dataset["status"] = flag.status;
      list.append(item);
    }
    section.append(list);
  } catch (failure: unknown) {
    if (failure instanceof ApiError && failure.status === 401) {
      ctx.onUnauthorized();
      return;
    }
    section.append(
      h(
        doc,
        "p",
        "late-error",
        failure instanceof ApiError ? failure.body.message : "the server cannot be reached",
      ),
    );
  }
}

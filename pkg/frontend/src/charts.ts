/**
 * DOM builders for the monitoring charts.
 *
 * Hard rule: no arithmetic on payload numbers. Every figure shown is the
 * server's pre-rendered display string, and bar sizing passes the raw
 * integer straight into flex-grow so the layout engine does the
 * proportioning. Raw values are also mirrored into data attributes, which
 * is what the tests compare against the payload.
 */

import type { SCurveJson, StageChartJson } from "./api.js";

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function bar(doc: Document, kind: "planned" | "realized", amount: number, display: string) {
  const track = el(doc, "div", `bar-track bar-${kind}`);
  const fill = el(doc, "div", "bar-fill");
  fill.style.flexGrow = String(amount);
  fill.dataset["amount"] = String(amount);
  const rest = el(doc, "div", "bar-rest");
  track.append(fill, rest);
  const label = el(doc, "span", "bar-label", display);
  label.dataset["amount"] = String(amount);
  const row = el(doc, "div", "bar-row");
  row.append(el(doc, "span", "bar-kind", kind === "planned" ? "Rencana" : "Realisasi"), track, label);
  return row;
}

/** Paired planned/realized bars, one pair per tranche stage. */
export function renderStageChart(doc: Document, chart: StageChartJson): HTMLElement {
  const root = el(doc, "section", "stage-chart");
  root.dataset["activityId"] = chart.activity_id;
  root.append(el(doc, "h3", "chart-title", `Tahap pencairan: ${chart.title}`));
  for (const row of chart.rows) {
    const group = el(doc, "div", "stage-group");
    group.dataset["stageNumber"] = String(row.stage_number);
    group.append(el(doc, "h4", "stage-heading", `Tahap ${row.stage_number}`));
    group.append(bar(doc, "planned", row.planned.amount, row.planned.display));
    group.append(bar(doc, "realized", row.realized.amount, row.realized.display));
    root.append(group);
  }
  return root;
}

/**
 * Plan-versus-realization series as a table: one row per period, planned and
 * realized columns for both physical and financial. Periods the field has
 * not reported yet show an en dash in the realized columns.
 */
export function renderSCurve(doc: Document, curve: SCurveJson): HTMLElement {
  const root = el(doc, "section", "s-curve");
  root.dataset["activityId"] = curve.activity_id;
  root.append(el(doc, "h3", "chart-title", `Kurva rencana vs realisasi: ${curve.title}`));
  const table = el(doc, "table", "s-curve-table");
  const head = el(doc, "tr");
  for (const caption of [
    "Minggu",
    "Fisik rencana",
    "Fisik realisasi",
    "Keuangan rencana",
    "Keuangan realisasi",
  ]) {
    head.append(el(doc, "th", undefined, caption));
  }
  table.append(head);
  for (const point of curve.points) {
    const row = el(doc, "tr", "s-curve-point");
    row.dataset["period"] = String(point.period);

    row.append(el(doc, "td", "period-cell", String(point.period)));

    const plannedPhys = el(doc, "td", "planned-physical", point.planned_physical.display);
    plannedPhys.dataset["basisPoints"] = String(point.planned_physical.basis_points);
    row.append(plannedPhys);

    const realizedPhys = el(doc, "td", "realized-physical");
    if (point.realized_physical === null) {
      realizedPhys.textContent = "–";
    } else {
      realizedPhys.textContent = point.realized_physical.display;
      realizedPhys.dataset["basisPoints"] = String(point.realized_physical.basis_points);
    }
    row.append(realizedPhys);

    const plannedFin = el(doc, "td", "planned-financial", point.planned_financial.display);
    plannedFin.dataset["amount"] = String(point.planned_financial.amount);
    row.append(plannedFin);

    const realizedFin = el(doc, "td", "realized-financial");
    if (point.realized_financial === null) {
      realizedFin.textContent = "–";
    } else {
      realizedFin.textContent = point.realized_financial.display;
      realizedFin.dataset["amount"] = String(point.realized_financial.amount);
    }
    row.append(realizedFin);

    table.append(row);
  }
  root.append(table);
  return root;
}

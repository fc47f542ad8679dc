/**
 * Weekly report entry for the field officer.
 *
 * The draft is written to local storage on every keystroke and restored on
 * render, so a connection drop or an expired login costs no typed work; it
 * is cleared only after the server has accepted the report. Client checks
 * are advisory and never block submission. What blocks or rejects is the
 * server, and its answers are shown as sent: 422 details inline at the named
 * field, gate refusals line by line, exactly as worded.
 */

import { ApiError, type ActivityJson, type ReportJson, type StageJson } from "../api.js";
import { checkDraft, percentToBasisPoints, photoSizeProblem } from "../validation.js";
import type { ViewContext } from "./context.js";
import { clearFieldProblems, h, labeledInput, showFieldProblems, showFormError } from "./dom.js";

export const REPORT_DRAFT_KEY = "desamon.draft.report";

export interface StoredDraft {
  activityId: string;
  period: string;
  physical: string;
  financial: string;
  labor: string;
  supersede: boolean;
}

export function loadDraft(storage: Storage): StoredDraft | null {
  const raw = storage.getItem(REPORT_DRAFT_KEY);
  if (raw === null) {
    return null;
  }
  try {
    const parsed = JSON.parse(raw) as StoredDraft;
    return typeof parsed === "object" && parsed !== null ? parsed : null;
  } catch {
    return null;
  }
}

export async function renderReportEntry(container: HTMLElement, ctx: ViewContext): Promise<void> {
  const doc = ctx.doc;
  container.replaceChildren();
  const root = h(doc, "section", "report-entry-view");
  root.append(h(doc, "h2", undefined, "Laporan mingguan"));
  container.append(root);

  const { kegiatan } = await ctx.api.listKegiatan();
  if (kegiatan.length === 0) {
    root.append(h(doc, "p", "empty-note", "belum ada kegiatan terdaftar"));
    return;
  }

  const draft = loadDraft(ctx.storage);
  const picker = h(doc, "div", "activity-picker");
  const pickLabel = h(doc, "label", undefined, "Kegiatan");
  const pick = doc.createElement("select");
  pick.name = "activity";
  for (const activity of kegiatan) {
    const option = doc.createElement("option");
    option.value = activity.id;
    option.textContent = activity.title;
    pick.append(option);
  }
  if (draft && kegiatan.some((a) => a.id === draft.activityId)) {
    pick.value = draft.activityId;
  }
  pickLabel.append(pick);
  picker.append(pickLabel);
  root.append(picker);

  const detail = h(doc, "div", "activity-detail");
  root.append(detail);

  const show = (): Promise<void> => {
    const chosen = kegiatan.find((a) => a.id === pick.value);
    return chosen ? renderActivityPanel(detail, ctx, chosen) : Promise.resolve();
  };
  pick.addEventListener("change", () => {
    void show();
  });
  await show();
}

async function renderActivityPanel(
  panel: HTMLElement,
  ctx: ViewContext,
  activity: ActivityJson,
): Promise<void> {
  const doc = ctx.doc;
  panel.replaceChildren();

  const [reports, stages] = await Promise.all([
    ctx.api.listReports(activity.id),
    ctx.api.listDisbursements(activity.id),
  ]);

  panel.append(reportHistory(doc, reports.reports));
  panel.append(reportForm(ctx, activity, reports.reports, () => renderActivityPanel(panel, ctx, activity)));
  panel.append(photoForm(ctx, reports.reports));
  panel.append(disbursementPanel(ctx, activity, stages.stages, () => renderActivityPanel(panel, ctx, activity)));
}

function reportHistory(doc: Document, reports: ReportJson[]): HTMLElement {
  const section = h(doc, "section", "report-history");
  section.append(h(doc, "h3", undefined, "Laporan tercatat"));
  if (reports.length === 0) {
    section.append(h(doc, "p", "empty-note", "belum ada laporan"));
    return section;
  }
  const list = h(doc, "ul", "report-list");
  for (const report of reports) {
    const item = h(
      doc,
      "li",
      "report-row",
      `minggu ${report.period}: fisik ${report.physical.display}, serapan ${report.financial_absorbed.display}, HOK ${report.labor_count}`,
    );
    item.dataset["id"] = report.id;
    item.dataset["period"] = String(report.period);
    list.append(item);
  }
  section.append(list);
  return section;
}

function saveDraft(ctx: ViewContext, draft: StoredDraft): void {
  ctx.storage.setItem(REPORT_DRAFT_KEY, JSON.stringify(draft));
}

function reportForm(
  ctx: ViewContext,
  activity: ActivityJson,
  reports: ReportJson[],
  refresh: () => Promise<void>,
): HTMLElement {
  const doc = ctx.doc;
  const section = h(doc, "section", "report-form-section");
  section.append(h(doc, "h3", undefined, "Laporan baru"));
  const form = h(doc, "form", "report-form");

  const period = labeledInput(doc, "period", "Minggu ke", "number");
  const physical = labeledInput(doc, "physical", "Fisik kumulatif (%)");
  const financial = labeledInput(doc, "financial_absorbed", "Serapan kumulatif (rupiah)", "number");
  const labor = labeledInput(doc, "labor_count", "HOK (hari orang kerja)", "number");

  const supersedeWrapper = h(doc, "div", "field");
  supersedeWrapper.dataset["field"] = "supersede";
  const supersedeLabel = h(doc, "label", undefined, "Koreksi minggu yang sudah dilaporkan");
  const supersede = doc.createElement("input");
  supersede.type = "checkbox";
  supersede.name = "supersede";
  supersedeLabel.prepend(supersede);
  supersedeWrapper.append(supersedeLabel);

  const advisory = h(doc, "ul", "advisory-warnings");
  const success = h(doc, "p", "submit-success");
  const submit = h(doc, "button", undefined, "Kirim laporan");
  submit.type = "submit";
  form.append(period.wrapper, physical.wrapper, financial.wrapper, labor.wrapper, supersedeWrapper, advisory, submit, success);
  section.append(form);

  const draft = loadDraft(ctx.storage);
  if (draft && draft.activityId === activity.id) {
    period.input.value = draft.period;
    physical.input.value = draft.physical;
    financial.input.value = draft.financial;
    labor.input.value = draft.labor;
    supersede.checked = draft.supersede;
  }

  const latest = reports.length > 0 ? reports[reports.length - 1] : undefined;

  const persist = () => {
    saveDraft(ctx, {
      activityId: activity.id,
      period: period.input.value,
      physical: physical.input.value,
      financial: financial.input.value,
      labor: labor.input.value,
      supersede: supersede.checked,
    });
  };

  const advise = () => {
    advisory.replaceChildren();
    const basisPoints = percentToBasisPoints(physical.input.value);
    if (physical.input.value.trim() !== "" && basisPoints === null) {
      advisory.append(h(doc, "li", "advisory", "physical progress does not read as a percentage"));
      return;
    }
    const problems = checkDraft(
      {
        period: Number(period.input.value || "0"),
        physicalBasisPoints: basisPoints ?? 0,
        financialAbsorbed: Number(financial.input.value || "0"),
        laborCount: Number(labor.input.value || "0"),
      },
      latest && !supersede.checked
        ? {
            period: latest.period,
            physicalBasisPoints: latest.physical.basis_points,
            financialAbsorbed: latest.financial_absorbed.amount,
          }
        : null,
    );
    for (const problem of problems) {
      advisory.append(h(doc, "li", "advisory", `${problem.field}: ${problem.message}`));
    }
  };

  for (const input of [period.input, physical.input, financial.input, labor.input]) {
    input.addEventListener("input", () => {
      persist();
      advise();
    });
  }
  supersede.addEventListener("change", () => {
    persist();
    advise();
  });

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    clearFieldProblems(form);
    success.textContent = "";
    const basisPoints = percentToBasisPoints(physical.input.value);
    if (basisPoints === null) {
      showFieldProblems(form, [
        {
          field: "physical",
          code: "unparseable",
          message: "enter physical progress as a percentage, for example 35 or 35,5",
        },
      ]);
      return;
    }
    void ctx.api
      .submitReport(activity.id, {
        period: Number(period.input.value),
        physical: basisPoints,
        financial_absorbed: Number(financial.input.value || "0"),
        labor_count: Number(labor.input.value || "0"),
        supersede: supersede.checked,
      })
      .then((accepted) => {
        ctx.storage.removeItem(REPORT_DRAFT_KEY);
        success.textContent = `laporan minggu ${accepted.period} diterima (${accepted.id})`;
        return refresh();
      })
      .catch((failure: unknown) => {
        if (failure instanceof ApiError && failure.status === 401) {
          // draft stays in storage; login brings the officer back to it
          ctx.onUnauthorized();
          return;
        }
        if (failure instanceof ApiError) {
          if (failure.body.details && failure.body.details.length > 0) {
            showFieldProblems(form, failure.body.details);
          } else {
            showFormError(form, failure.body.message);
          }
          return;
        }
        showFormError(form, "the server cannot be reached; the draft is saved locally");
      });
  });

  return section;
}

function photoForm(ctx: ViewContext, reports: ReportJson[]): HTMLElement {
  const doc = ctx.doc;
  const section = h(doc, "section", "photo-section");
  section.append(h(doc, "h3", undefined, "Foto lapangan"));
  if (reports.length === 0) {
    section.append(h(doc, "p", "empty-note", "foto menempel pada laporan; kirim laporan dahulu"));
    return section;
  }
  const form = h(doc, "form", "photo-form");

  const pickWrapper = h(doc, "div", "field");
  pickWrapper.dataset["field"] = "report_id";
  const pickLabel = h(doc, "label", undefined, "Laporan");
  const pick = doc.createElement("select");
  pick.name = "report_id";
  for (const report of reports) {
    const option = doc.createElement("option");
    option.value = report.id;
    option.textContent = `minggu ${report.period} (${report.physical.display})`;
    pick.append(option);
  }
  pick.selectedIndex = reports.length - 1;
  pickLabel.append(pick);
  pickWrapper.append(pickLabel);

  const fileWrapper = h(doc, "div", "field");
  fileWrapper.dataset["field"] = "file";
  const fileLabel = h(doc, "label", undefined, "Berkas (JPEG atau PNG)");
  const file = doc.createElement("input");
  file.type = "file";
  file.name = "file";
  fileLabel.append(file);
  const fileSlot = h(doc, "p", "field-error");
  fileSlot.dataset["errorFor"] = "file";
  fileWrapper.append(fileLabel, fileSlot);

  const caption = labeledInput(doc, "caption", "Keterangan");
  const achieved = labeledInput(doc, "achieved_at_percent", "Kemajuan pada foto (%)");
  const success = h(doc, "p", "photo-success");
  const submit = h(doc, "button", undefined, "Unggah foto");
  submit.type = "submit";
  form.append(pickWrapper, fileWrapper, caption.wrapper, achieved.wrapper, submit, success);
  section.append(form);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    clearFieldProblems(form);
    success.textContent = "";
    const chosen = file.files && file.files.length > 0 ? file.files[0] : undefined;
    if (!chosen) {
      showFieldProblems(form, [{ field: "file", code: "missing", message: "choose a photo first" }]);
      return;
    }
    const sizeProblem = photoSizeProblem(chosen.size, ctx.photoMaxBytes);
    if (sizeProblem !== null) {
      // the one hard client-side stop: do not stream a doomed upload
      showFieldProblems(form, [{ field: "file", code: "photo_too_large", message: sizeProblem }]);
      return;
    }
    const basisPoints = percentToBasisPoints(achieved.input.value);
    if (basisPoints === null) {
      showFieldProblems(form, [
        {
          field: "achieved_at_percent",
          code: "unparseable",
          message: "enter the progress shown by the photo as a percentage",
        },
      ]);
      return;
    }
    void ctx.api
      .uploadPhoto(pick.value, chosen, caption.input.value, basisPoints)
      .then((photo) => {
        success.textContent = `foto tersimpan (${photo.id})`;
        form.reset();
      })
      .catch((failure: unknown) => {
        if (failure instanceof ApiError && failure.status === 401) {
          ctx.onUnauthorized();
          return;
        }
        if (failure instanceof ApiError) {
          if (failure.body.details && failure.body.details.length > 0) {
            showFieldProblems(form, failure.body.details);
          } else {
            showFormError(form, failure.body.message);
          }
          return;
        }
        showFormError(form, "the server cannot be reached; try again");
      });
  });

  return section;
}

function disbursementPanel(
  ctx: ViewContext,
  activity: ActivityJson,
  stages: StageJson[],
  refresh: () => Promise<void>,
): HTMLElement {
  const doc = ctx.doc;
  const section = h(doc, "section", "disbursement-section");
  section.append(h(doc, "h3", undefined, "Pencairan tahap"));

  const list = h(doc, "ul", "stage-list");
  for (const stage of stages) {
    const state =
      stage.status === "disbursed"
        ? `cair ${stage.actual_amount?.display ?? ""} pada ${stage.disbursed_on ?? ""}`
        : "belum cair";
    const item = h(
      doc,
      "li",
      "stage-row",
      `tahap ${stage.stage_number}: rencana ${stage.planned_amount.display}, ${state}`,
    );
    item.dataset["stageNumber"] = String(stage.stage_number);
    item.dataset["status"] = stage.status;
    list.append(item);
  }
  section.append(list);

  const form = h(doc, "form", "disbursement-form");
  const stageNumber = labeledInput(doc, "stage_number", "Tahap", "number");
  const amount = labeledInput(doc, "amount", "Jumlah (rupiah)", "number");
  const date = labeledInput(doc, "date", "Tanggal (YYYY-MM-DD)");
  const gate = h(doc, "ul", "gate-reasons");
  const success = h(doc, "p", "disbursement-success");
  const submit = h(doc, "button", undefined, "Catat pencairan");
  submit.type = "submit";
  form.append(stageNumber.wrapper, amount.wrapper, date.wrapper, gate, submit, success);
  section.append(form);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    clearFieldProblems(form);
    gate.replaceChildren();
    success.textContent = "";
    void ctx.api
      .recordDisbursement(activity.id, {
        stage_number: Number(stageNumber.input.value),
        amount: Number(amount.input.value),
        date: date.input.value,
      })
      .then((stage) => {
        success.textContent = `tahap ${stage.stage_number} dicatat cair`;
        return refresh();
      })
      .catch((failure: unknown) => {
        if (failure instanceof ApiError && failure.status === 401) {
          ctx.onUnauthorized();
          return;
        }
        if (failure instanceof ApiError && failure.body.code === "gate_blocked") {
          // each refusal reason exactly as the server worded it
          for (const detail of failure.body.details ?? []) {
            gate.append(h(doc, "li", "gate-reason", detail.message));
          }
          return;
        }
        if (failure instanceof ApiError) {
          if (failure.body.details && failure.body.details.length > 0) {
            showFieldProblems(form, failure.body.details);
          } else {
            showFormError(form, failure.body.message);
          }
          return;
        }
        showFormError(form, "the server cannot be reached; try again");
      });
  });

  return section;
}

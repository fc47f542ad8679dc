/**
 * Registry upkeep for the admin: programs, kecamatan, desa, activities, and
 * each activity's work target plan. Every create or update round-trips to
 * the server and re-fetches the list; nothing is shown before the server has
 * confirmed it. Validation errors land next to the field they name.
 */

import {
  ApiError,
  type ActivityJson,
  type DesaJson,
  type KecamatanJson,
  type ProgramJson,
} from "../api.js";
import { percentToBasisPoints } from "../validation.js";
import type { ViewContext } from "./context.js";
import { clearFieldProblems, h, labeledInput, showFieldProblems, showFormError } from "./dom.js";

function handleFailure(ctx: ViewContext, form: HTMLElement, failure: unknown): void {
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
}

export async function renderMaster(container: HTMLElement, ctx: ViewContext): Promise<void> {
  const doc = ctx.doc;
  container.replaceChildren();
  const root = h(doc, "section", "master-view");
  root.append(h(doc, "h2", undefined, "Data master"));
  container.append(root);

  const [programs, kecamatan, desa, kegiatan] = await Promise.all([
    ctx.api.listPrograms(),
    ctx.api.listKecamatan(),
    ctx.api.listDesa(),
    ctx.api.listKegiatan(),
  ]);

  root.append(programsSection(ctx, programs.programs));
  root.append(kecamatanSection(ctx, kecamatan.kecamatan));
  root.append(desaSection(ctx, desa.desa, kecamatan.kecamatan));
  root.append(kegiatanSection(ctx, kegiatan.kegiatan, programs.programs, desa.desa));
  root.append(targetsSection(ctx, kegiatan.kegiatan));
}

function rerender(ctx: ViewContext, form: HTMLElement): void {
  const container = form.closest(".view-root") ?? form.ownerDocument.body;
  void renderMaster(container as HTMLElement, ctx);
}

function programsSection(ctx: ViewContext, programs: ProgramJson[]): HTMLElement {
  const doc = ctx.doc;
  const section = h(doc, "section", "programs");
  section.append(h(doc, "h3", undefined, "Program"));
  const list = h(doc, "ul", "program-list");
  for (const program of programs) {
    const item = h(doc, "li", "program-row", `${program.kind} ${program.fiscal_year}: ${program.name}`);
    item.dataset["id"] = program.id;
    list.append(item);
  }
  section.append(list);

  const form = h(doc, "form", "program-form");
  const kind = labeledInput(doc, "kind", "Jenis (PIP atau PAMSIMAS)");
  const year = labeledInput(doc, "fiscal_year", "Tahun anggaran", "number");
  const name = labeledInput(doc, "name", "Nama program");
  const submit = h(doc, "button", undefined, "Tambah program");
  submit.type = "submit";
  form.append(kind.wrapper, year.wrapper, name.wrapper, submit);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    clearFieldProblems(form);
    void ctx.api
      .createProgram({
        kind: kind.input.value,
        fiscal_year: Number(year.input.value),
        name: name.input.value,
      })
      .then(() => rerender(ctx, form))
      .catch((failure: unknown) => handleFailure(ctx, form, failure));
  });
  section.append(form);
  return section;
}

function kecamatanSection(ctx: ViewContext, rows: KecamatanJson[]): HTMLElement {
  const doc = ctx.doc;
  const section = h(doc, "section", "kecamatan");
  section.append(h(doc, "h3", undefined, "Kecamatan"));
  const list = h(doc, "ul", "kecamatan-list");
  for (const row of rows) {
    const item = h(doc, "li", "kecamatan-row", row.name);
    item.dataset["id"] = row.id;
    list.append(item);
  }
  section.append(list);

  const form = h(doc, "form", "kecamatan-form");
  const name = labeledInput(doc, "name", "Nama kecamatan");
  const submit = h(doc, "button", undefined, "Tambah kecamatan");
  submit.type = "submit";
  form.append(name.wrapper, submit);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    clearFieldProblems(form);
    void ctx.api
      .createKecamatan({ name: name.input.value })
      .then(() => rerender(ctx, form))
      .catch((failure: unknown) => handleFailure(ctx, form, failure));
  });
  section.append(form);
  return section;
}

function desaSection(ctx: ViewContext, rows: DesaJson[], kecamatan: KecamatanJson[]): HTMLElement {
  const doc = ctx.doc;
  const section = h(doc, "section", "desa");
  section.append(h(doc, "h3", undefined, "Desa"));
  const byKecamatan = new Map(kecamatan.map((k) => [k.id, k.name]));
  const list = h(doc, "ul", "desa-list");
  for (const row of rows) {
    const where = byKecamatan.get(row.kecamatan_id) ?? row.kecamatan_id;
    const item = h(doc, "li", "desa-row", `${row.name} (${where})`);
    item.dataset["id"] = row.id;
    list.append(item);
  }
  section.append(list);

  const form = h(doc, "form", "desa-form");
  const pickWrapper = h(doc, "div", "field");
  pickWrapper.dataset["field"] = "kecamatan_id";
  const pickLabel = h(doc, "label", undefined, "Kecamatan");
  const pick = doc.createElement("select");
  pick.name = "kecamatan_id";
  for (const k of kecamatan) {
    const option = doc.createElement("option");
    option.value = k.id;
    option.textContent = k.name;
    pick.append(option);
  }
  pickLabel.append(pick);
  const pickSlot = h(doc, "p", "field-error");
  pickSlot.dataset["errorFor"] = "kecamatan_id";
  pickWrapper.append(pickLabel, pickSlot);
  const name = labeledInput(doc, "name", "Nama desa");
  const submit = h(doc, "button", undefined, "Tambah desa");
  submit.type = "submit";
  form.append(pickWrapper, name.wrapper, submit);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    clearFieldProblems(form);
    void ctx.api
      .createDesa({ kecamatan_id: pick.value, name: name.input.value })
      .then(() => rerender(ctx, form))
      .catch((failure: unknown) => handleFailure(ctx, form, failure));
  });
  section.append(form);
  return section;
}

function kegiatanSection(
  ctx: ViewContext,
  rows: ActivityJson[],
  programs: ProgramJson[],
  desa: DesaJson[],
): HTMLElement {
  const doc = ctx.doc;
  const section = h(doc, "section", "kegiatan");
  section.append(h(doc, "h3", undefined, "Kegiatan"));
  const list = h(doc, "ul", "kegiatan-list");
  for (const row of rows) {
    const item = h(
      doc,
      "li",
      "kegiatan-row",
      `${row.title}, anggaran ${row.budget.display}, minggu ${row.start_period}-${row.end_period}`,
    );
    item.dataset["id"] = row.id;
    list.append(item);
  }
  section.append(list);

  const form = h(doc, "form", "kegiatan-form");
  const programPick = selectField(doc, "program_id", "Program", programs.map((p) => [p.id, p.name]));
  const desaPick = selectField(doc, "desa_id", "Desa", desa.map((d) => [d.id, d.name]));
  const title = labeledInput(doc, "title", "Judul kegiatan");
  const budget = labeledInput(doc, "budget", "Anggaran (rupiah)", "number");
  const start = labeledInput(doc, "start_period", "Minggu mulai", "number");
  const end = labeledInput(doc, "end_period", "Minggu selesai", "number");
  const submit = h(doc, "button", undefined, "Tambah kegiatan");
  submit.type = "submit";
  form.append(programPick.wrapper, desaPick.wrapper, title.wrapper, budget.wrapper, start.wrapper, end.wrapper, submit);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    clearFieldProblems(form);
    void ctx.api
      .createKegiatan({
        program_id: programPick.select.value,
        desa_id: desaPick.select.value,
        title: title.input.value,
        budget: Number(budget.input.value),
        start_period: Number(start.input.value),
        end_period: Number(end.input.value),
      })
      .then(() => rerender(ctx, form))
      .catch((failure: unknown) => handleFailure(ctx, form, failure));
  });
  section.append(form);
  return section;
}

function selectField(
  doc: Document,
  field: string,
  label: string,
  options: Array<[string, string]>,
): { wrapper: HTMLElement; select: HTMLSelectElement } {
  const wrapper = h(doc, "div", "field");
  wrapper.dataset["field"] = field;
  const labelNode = h(doc, "label", undefined, label);
  const select = doc.createElement("select");
  select.name = field;
  for (const [value, text] of options) {
    const option = doc.createElement("option");
    option.value = value;
    option.textContent = text;
    select.append(option);
  }
  labelNode.append(select);
  const slot = h(doc, "p", "field-error");
  slot.dataset["errorFor"] = field;
  wrapper.append(labelNode, slot);
  return { wrapper, select };
}

// one target entry per line: "period physical% financial"
function parseTargetLines(text: string): {
  entries: Array<{ period: number; planned_physical: number; planned_financial: number }>;
  problem: string | null;
} {
  const entries: Array<{ period: number; planned_physical: number; planned_financial: number }> = [];
  const lines = text
    .split("\n")
    .map((line) => line.trim())
    .filter((line) => line !== "");
  for (const line of lines) {
    const parts = line.split(/\s+/);
    if (parts.length !== 3) {
      return { entries: [], problem: `each line needs period, physical, financial: '${line}'` };
    }
    const period = Number(parts[0]);
    const physical = percentToBasisPoints(parts[1] ?? "");
    const financial = Number(parts[2]);
    if (!Number.isInteger(period) || physical === null || !Number.isInteger(financial)) {
      return { entries: [], problem: `cannot read '${line}'` };
    }
    entries.push({ period, planned_physical: physical, planned_financial: financial });
  }
  return { entries, problem: null };
}

function targetsSection(ctx: ViewContext, kegiatan: ActivityJson[]): HTMLElement {
  const doc = ctx.doc;
  const section = h(doc, "section", "targets");
  section.append(h(doc, "h3", undefined, "Target pekerjaan"));
  const form = h(doc, "form", "targets-form");
  const pick = selectField(doc, "activity_id", "Kegiatan", kegiatan.map((a) => [a.id, a.title]));
  const areaWrapper = h(doc, "div", "field");
  areaWrapper.dataset["field"] = "entries";
  const areaLabel = h(doc, "label", undefined, "Baris target: minggu fisik keuangan (contoh: 5 25% 62500000)");
  const area = doc.createElement("textarea");
  area.name = "entries";
  areaLabel.append(area);
  const areaSlot = h(doc, "p", "field-error");
  areaSlot.dataset["errorFor"] = "entries";
  areaWrapper.append(areaLabel, areaSlot);
  const submit = h(doc, "button", undefined, "Simpan target");
  submit.type = "submit";
  const saved = h(doc, "p", "targets-saved");
  form.append(pick.wrapper, areaWrapper, submit, saved);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    clearFieldProblems(form);
    saved.textContent = "";
    const parsed = parseTargetLines(area.value);
    if (parsed.problem !== null) {
      showFieldProblems(form, [{ field: "entries", code: "unparseable", message: parsed.problem }]);
      return;
    }
    void setTargets(ctx, pick.select.value, parsed.entries)
      .then((count) => {
        saved.textContent = `${count} target tersimpan`;
      })
      .catch((failure: unknown) => handleFailure(ctx, form, failure));
  });
  section.append(form);
  return section;
}

async function setTargets(
  ctx: ViewContext,
  activityId: string,
  entries: Array<{ period: number; planned_physical: number; planned_financial: number }>,
): Promise<number> {
  const result = await ctx.api.setTargets(activityId, entries);
  return result.entries.length;
}

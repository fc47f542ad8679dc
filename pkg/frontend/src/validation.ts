/**
 * Advisory input checks that run before a request is sent.
 *
 * These mirror the server's rules closely enough to catch typos at the form,
 * but they are deliberately not the authority: the form always submits when
 * the user insists, and whatever the server answers is what gets shown. The
 * one hard client-side stop is the photo size cap, because streaming a file
 * the server is guaranteed to refuse helps nobody on a rural uplink.
 */

export const DEFAULT_PHOTO_MAX_BYTES = 10 * 1024 * 1024;

export interface DraftProblem {
  field: string;
  message: string;
}

export interface ReportDraft {
  period: number;
  physicalBasisPoints: number;
  financialAbsorbed: number;
  laborCount: number;
}

export interface PriorSnapshot {
  period: number;
  physicalBasisPoints: number;
  financialAbsorbed: number;
}

/**
 * Percent text to basis points. Accepts "40", "40%", "40,5", "40.25";
 * rejects negatives, ambiguous separators, more than two decimals, and
 * anything over 100%. Returns null when the text does not parse.
 */
export function percentToBasisPoints(text: string): number | null {
  let token = text.trim();
  if (token.endsWith("%")) {
    token = token.slice(0, -1).trim();
  }
  if (token === "" || token.startsWith("-")) {
    return null;
  }
  const separators = token.split("").filter((c) => c === "," || c === ".");
  if (separators.length > 1) {
    return null;
  }
  const [intPart, fracPart = ""] = token.replace(",", ".").split(".");
  if (!/^\d+$/.test(intPart ?? "") || (fracPart !== "" && !/^\d+$/.test(fracPart))) {
    return null;
  }
  if (fracPart.length > 2) {
    return null;
  }
  const basisPoints = Number(intPart) * 100 + Number(fracPart.padEnd(2, "0") || "0");
  return basisPoints > 10_000 ? null : basisPoints;
}

/** Whole-rupiah amount from free text; digits only, optional dot or comma
 * thousands grouping is not attempted here (the server parses locale text
 * on import; the form asks for a plain number). */
export function moneyFromText(text: string): number | null {
  const token = text.trim();
  if (!/^\d+$/.test(token)) {
    return null;
  }
  return Number(token);
}

export function checkDraft(draft: ReportDraft, prior: PriorSnapshot | null): DraftProblem[] {
  const problems: DraftProblem[] = [];
  if (!Number.isInteger(draft.period) || draft.period < 1) {
    problems.push({ field: "period", message: "period must be a positive week number" });
  }
  if (draft.physicalBasisPoints < 0 || draft.physicalBasisPoints > 10_000) {
    problems.push({ field: "physical", message: "physical progress must be between 0% and 100%" });
  }
  if (draft.financialAbsorbed < 0) {
    problems.push({ field: "financial_absorbed", message: "absorption cannot be negative" });
  }
  if (!Number.isInteger(draft.laborCount) || draft.laborCount < 0) {
    problems.push({ field: "labor_count", message: "labor count must be a non-negative integer" });
  }
  if (prior !== null) {
    if (draft.period <= prior.period) {
      problems.push({
        field: "period",
        message: `period must be after the latest report (week ${prior.period})`,
      });
    }
    if (draft.physicalBasisPoints < prior.physicalBasisPoints) {
      problems.push({
        field: "physical",
        message: "physical progress is below the latest report; cumulative figures cannot fall",
      });
    }
    if (draft.financialAbsorbed < prior.financialAbsorbed) {
      problems.push({
        field: "financial_absorbed",
        message: "absorption is below the latest report; cumulative figures cannot fall",
      });
    }
  }
  return problems;
}

/** Message for a photo over the cap, or null when the size is acceptable. */
export function photoSizeProblem(
  sizeBytes: number,
  maxBytes: number = DEFAULT_PHOTO_MAX_BYTES,
): string | null {
  if (sizeBytes <= maxBytes) {
    return null;
  }
  return `photo is ${sizeBytes} bytes; the limit is ${maxBytes} bytes`;
}

import { describe, expect, it } from "vitest";

import {
  checkDraft,
  DEFAULT_PHOTO_MAX_BYTES,
  moneyFromText,
  percentToBasisPoints,
  photoSizeProblem,
} from "../src/validation.js";

describe("percentToBasisPoints", () => {
  it.each([
    ["40", 4000],
    ["40%", 4000],
    ["40 %", 4000],
    ["  40  ", 4000],
    ["40,5", 4050],
    ["40.5", 4050],
    ["40.25", 4025],
    ["0", 0],
    ["100", 10000],
    ["0,01", 1],
  ])("parses %s to %d basis points", (text, expected) => {
    expect(percentToBasisPoints(text)).toBe(expected);
  });

  it.each([
    ["", "empty"],
    ["   ", "blank"],
    ["-5", "negative"],
    ["12.34.5", "two separators"],
    ["12,34,5", "two comma separators"],
    ["12.3,4", "mixed separators"],
    ["40.123", "three decimals"],
    ["100.01", "over 100 percent"],
    ["101", "over 100 percent whole"],
    ["abc", "not a number"],
    ["4O", "letter for zero"],
  ])("rejects %s (%s)", (text) => {
    expect(percentToBasisPoints(text)).toBeNull();
  });
});

describe("moneyFromText", () => {
  it("reads plain digit strings", () => {
    expect(moneyFromText("62500000")).toBe(62_500_000);
    expect(moneyFromText(" 0 ")).toBe(0);
  });

  it("rejects grouped, signed, or fractional text", () => {
    expect(moneyFromText("62.500.000")).toBeNull();
    expect(moneyFromText("-5")).toBeNull();
    expect(moneyFromText("12,5")).toBeNull();
    expect(moneyFromText("")).toBeNull();
  });
});

describe("checkDraft", () => {
  const clean = { period: 3, physicalBasisPoints: 2000, financialAbsorbed: 30_000_000, laborCount: 8 };
  const prior = { period: 2, physicalBasisPoints: 1500, financialAbsorbed: 20_000_000 };

  it("accepts a clean draft against its prior", () => {
    expect(checkDraft(clean, prior)).toEqual([]);
  });

  it("accepts the first report with no prior", () => {
    expect(checkDraft(clean, null)).toEqual([]);
  });

  it("warns when cumulative physical falls below the latest report", () => {
    const problems = checkDraft({ ...clean, physicalBasisPoints: 1200 }, prior);
    expect(problems.map((p) => p.field)).toEqual(["physical"]);
    expect(problems[0]!.message).toContain("cumulative");
  });

  it("warns when absorption falls below the latest report", () => {
    const problems = checkDraft({ ...clean, financialAbsorbed: 10_000_000 }, prior);
    expect(problems.map((p) => p.field)).toEqual(["financial_absorbed"]);
  });

  it("warns when the period does not advance", () => {
    const problems = checkDraft({ ...clean, period: 2 }, prior);
    expect(problems.map((p) => p.field)).toEqual(["period"]);
    expect(problems[0]!.message).toContain("week 2");
  });

  it("flags out-of-range and negative fields", () => {
    const problems = checkDraft(
      { period: 0, physicalBasisPoints: 10_500, financialAbsorbed: -1, laborCount: -3 },
      null,
    );
    expect(problems.map((p) => p.field).sort()).toEqual([
      "financial_absorbed",
      "labor_count",
      "period",
      "physical",
    ]);
  });

  it("collects several problems at once", () => {
    const problems = checkDraft(
      { ...clean, physicalBasisPoints: 100, financialAbsorbed: 5 },
      prior,
    );
    expect(problems.map((p) => p.field).sort()).toEqual(["financial_absorbed", "physical"]);
  });
});

describe("photoSizeProblem", () => {
  it("passes a photo at or under the cap", () => {
    expect(photoSizeProblem(64, 64)).toBeNull();
    expect(photoSizeProblem(0, 64)).toBeNull();
  });

  it("names both the size and the limit when over", () => {
    const message = photoSizeProblem(100, 64);
    expect(message).toContain("100");
    expect(message).toContain("64");
  });

  it("defaults to the ten mebibyte cap", () => {
    expect(DEFAULT_PHOTO_MAX_BYTES).toBe(10 * 1024 * 1024);
    expect(photoSizeProblem(DEFAULT_PHOTO_MAX_BYTES)).toBeNull();
    expect(photoSizeProblem(DEFAULT_PHOTO_MAX_BYTES + 1)).toContain(String(DEFAULT_PHOTO_MAX_BYTES));
  });
});

"""Verdict-returning rule checks for activities, plans, and reports."""

from datetime import datetime, timezone

import pytest

from desamon.core.types import (
    Activity,
    Money,
    Percent,
    PhotoAttachment,
    ProgressReport,
    TargetEntry,
    WorkTargetPlan,
)
from desamon.core.validation import (
    Verdict,
    validate_activity,
    validate_progress_report,
    validate_work_target_plan,
)

DESA_IDS = {"desa-1"}
PROGRAM_IDS = {"prog-1"}


def make_activity(**kwargs):
    base = dict(
        id="act-1",
        program_id="prog-1",
        desa_id="desa-1",
        title="Rabat beton",
        budget=Money(250_000_000),
        start_period=1,
        end_period=20,
    )
    base.update(kwargs)
    return Activity(**base)


def make_report(**kwargs):
    base = dict(
        id="rep-1",
        activity_id="act-1",
        period=2,
        physical=Percent(1000),
        financial_absorbed=Money(10_000_000),
        labor_count=12,
        submitted_by="petugas",
        submitted_at=datetime(2014, 1, 18, 10, 0, tzinfo=timezone.utc),
    )
    base.update(kwargs)
    return ProgressReport(**base)


def codes(verdict: Verdict) -> list[str]:
    return [v.code for v in verdict.violations]


class TestValidateActivity:
    def test_good_activity_passes(self):
        assert validate_activity(make_activity(), DESA_IDS, PROGRAM_IDS).ok

    def test_each_rule_fires(self):
        verdict = validate_activity(
            make_activity(title="  ", budget=Money(0), start_period=5, end_period=3,
                          program_id="nope", desa_id="nope"),
            DESA_IDS,
            PROGRAM_IDS,
        )
        assert set(codes(verdict)) == {
            "empty_title",
            "budget_not_positive",
            "period_order",
            "unknown_program",
            "unknown_desa",
        }

    def test_start_period_floor(self):
        verdict = validate_activity(make_activity(start_period=0), DESA_IDS, PROGRAM_IDS)
        assert codes(verdict) == ["period_out_of_range"]


class TestValidateWorkTargetPlan:
    def plan(self, entries):
        return WorkTargetPlan(activity_id="act-1", entries=tuple(entries))

    def entry(self, period, bp, amount):
        return TargetEntry(period=period, planned_physical=Percent(bp),
                           planned_financial=Money(amount))

    def test_good_plan(self):
        plan = self.plan([
            self.entry(5, 2500, 62_500_000),
            self.entry(10, 5000, 125_000_000),
            self.entry(20, 10_000, 250_000_000),
        ])
        assert validate_work_target_plan(plan, make_activity()).ok

    def test_empty_plan(self):
        verdict = validate_work_target_plan(self.plan([]), make_activity())
        assert codes(verdict) == ["empty_plan"]

    def test_period_must_increase(self):
        plan = self.plan([self.entry(5, 5000, 10), self.entry(5, 10_000, 20)])
        assert "period_not_increasing" in codes(validate_work_target_plan(plan, make_activity()))

    def test_cumulative_values_must_not_decrease(self):
        plan = self.plan([
            self.entry(5, 6000, 30),
            self.entry(10, 5000, 20),
            self.entry(15, 10_000, 40),
        ])
        found = codes(validate_work_target_plan(plan, make_activity()))
        assert "planned_physical_regression" in found
        assert "planned_financial_regression" in found

    def test_must_end_at_exactly_hundred(self):
        plan = self.plan([self.entry(20, 9999, 10)])
        assert "plan_incomplete" in codes(validate_work_target_plan(plan, make_activity()))

    def test_must_stay_within_budget(self):
        plan = self.plan([self.entry(20, 10_000, 250_000_001)])
        assert "plan_exceeds_budget" in codes(validate_work_target_plan(plan, make_activity()))

    def test_must_fit_reporting_window(self):
        plan = self.plan([self.entry(21, 10_000, 10)])
        assert "plan_outside_window" in codes(validate_work_target_plan(plan, make_activity()))


class TestValidateProgressReport:
    def check(self, candidate, prior=None, disbursed=Money(100_000_000)):
        return validate_progress_report(candidate, make_activity(), prior, disbursed)

    def test_first_report_passes(self):
        assert self.check(make_report()).ok

    def test_flat_week_is_legal(self):
        prior = make_report(period=2)
        flat = make_report(id="rep-2", period=3)
        assert self.check(flat, prior).ok

    def test_negative_labor(self):
        verdict = self.check(make_report(labor_count=-1))
        assert codes(verdict) == ["labor_negative"]

    def test_period_window(self):
        assert codes(self.check(make_report(period=21))) == ["period_out_of_window"]
        assert codes(self.check(make_report(period=0))) == ["period_out_of_window"]

    def test_period_must_advance(self):
        prior = make_report(period=5, physical=Percent(500), financial_absorbed=Money(1))
        verdict = self.check(make_report(id="rep-2", period=5), prior)
        assert "period_not_after_prior" in codes(verdict)

    def test_physical_regression_names_both_values(self):
        prior = make_report(period=2, physical=Percent(3600))
        verdict = self.check(
            make_report(id="rep-2", period=3, physical=Percent(3000)), prior
        )
        assert codes(verdict) == ["physical_regression"]
        assert "3000 bp below prior 3600 bp" in verdict.violations[0].message

    def test_financial_regression(self):
        prior = make_report(period=2, financial_absorbed=Money(30_000_000))
        verdict = self.check(
            make_report(id="rep-2", period=3, financial_absorbed=Money(29_999_999)), prior
        )
        assert codes(verdict) == ["financial_regression"]

    def test_absorption_capped_by_disbursed(self):
        verdict = self.check(
            make_report(financial_absorbed=Money(100_000_001)), disbursed=Money(100_000_000)
        )
        assert codes(verdict) == ["absorption_exceeds_disbursed"]
        assert "100000001 > 100000000" in verdict.violations[0].message

    def test_photo_may_not_outrun_report(self):
        photo = PhotoAttachment(
            id="ph-1", report_id="rep-1", content_hash="0" * 64, caption="",
            achieved_at_percent=Percent(1500), media_type="image/jpeg",
        )
        verdict = self.check(make_report(physical=Percent(1000), photos=(photo,)))
        assert codes(verdict) == ["photo_percent_above_report"]

    def test_violations_accumulate(self):
        prior = make_report(period=5, physical=Percent(4000),
                            financial_absorbed=Money(50_000_000))
        verdict = self.check(
            make_report(id="rep-2", period=4, physical=Percent(3000),
                        financial_absorbed=Money(40_000_000), labor_count=-2),
            prior,
        )
        assert set(codes(verdict)) == {
            "labor_negative",
            "period_not_after_prior",
            "physical_regression",
            "financial_regression",
        }


def test_verdict_single():
    verdict = Verdict.single("field", "code", "message")
    assert not verdict.ok
    assert verdict.violations[0].field == "field"

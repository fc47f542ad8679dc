"""Acceptance gate.

Each test backs one criterion from the acceptance summary (see conftest for
the printed PASS/FAIL table).  These tests favor independent oracles over
reuse of production code paths: expected values are recomputed from first
principles (exact rational arithmetic, brute-force enumeration, checked-in
fixtures) and compared against what the package produces.
"""

import csv
import dataclasses
import io
import itertools
import json
import random
import threading
import time
from datetime import date, datetime, timedelta, timezone
from fractions import Fraction

import pytest
import yaml
from click.testing import CliRunner
from hypothesis import given, settings
from hypothesis import strategies as st

from desamon.aggregation import Scope, ScopeKind, rollup
from desamon.api.rbac import Action, is_allowed
from desamon.cli import main as cli_main
from desamon.core.types import (
    DEFAULT_TRANCHE_CONFIG,
    Activity,
    Desa,
    Money,
    Percent,
    ProgressReport,
    Role,
    TargetEntry,
    TrancheConfig,
    WorkTargetPlan,
)
from desamon.core.validation import validate_progress_report
from desamon.disbursement import (
    StageStatus,
    plan_tranches,
    record_disbursement,
    stage_gate_check,
)
from desamon.errors import ConfigError, Conflict, GateBlocked
from desamon.ingestion import (
    ColumnMap,
    ImportTarget,
    Locale,
    format_money,
    format_percent,
    import_report_csv,
    parse_money,
    parse_percent,
)
from desamon.seeding import apply_seed
from desamon.serialize import canonical_json
from tests.conftest import DEMO_SEED, FIXTURES, ApiHarness

UTC = timezone.utc


def quick_report(period, physical_bp, financial=0, day=None, report_id=None):
    submitted = datetime.combine(day, datetime.min.time(), UTC) if day else \
        datetime(2014, 1, 6, tzinfo=UTC) + timedelta(days=7 * period)
    return ProgressReport(
        id=report_id or f"r{period}",
        activity_id="act",
        period=period,
        physical=Percent(physical_bp),
        financial_absorbed=Money(financial),
        labor_count=1,
        submitted_by="test",
        submitted_at=submitted,
    )


# --- criterion: three-role RBAC matrix ------------------------------------


@pytest.mark.acceptance("rbac_matrix")
def test_rbac_matrix_matches_checked_in_fixture():
    started = time.monotonic()
    with open(FIXTURES / "rbac_matrix.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    fixture = {(r["role"], r["action"]): r["decision"] for r in rows}
    assert len(fixture) == len(rows), "fixture repeats a (role, action) pair"
    assert set(fixture.values()) <= {"allow", "deny"}

    full_product = {(role.value, action.value) for role in Role for action in Action}
    assert set(fixture) == full_product, "fixture is not the exhaustive product"

    mismatches = [
        (role.value, action.value, fixture[(role.value, action.value)])
        for role in Role
        for action in Action
        if is_allowed(role, action) != (fixture[(role.value, action.value)] == "allow")
    ]
    assert mismatches == []
    assert time.monotonic() - started < 5.0


# --- criterion: disbursement state machine ---------------------------------


def _disbursed_prefix(stages):
    numbers = sorted(
        s.stage_number for s in stages if s.status is StageStatus.DISBURSED
    )
    return numbers == list(range(1, len(numbers) + 1))


@pytest.mark.acceptance("state_machine")
def test_random_operation_sequences_keep_invariants():
    """10,000 random report/disburse sequences: the disbursed set is always a
    prefix of (1, 2, 3) and a blocked attempt never changes anything."""
    rng = random.Random(20140106)
    started = time.monotonic()
    levels = (0, 1500, 2999, 3000, 4500, 5999, 6000, 8000, 10000)
    for _ in range(10_000):
        stages = plan_tranches(
            Money(rng.randint(4, 10**9)), DEFAULT_TRANCHE_CONFIG, "act"
        )
        reports = []
        for _ in range(rng.randint(1, 8)):
            if rng.random() < 0.5:
                day = date(2014, 1, 1) + timedelta(days=rng.randrange(180))
                reports.append(
                    quick_report(len(reports) + 1, rng.choice(levels), day=day,
                                 report_id=f"r{len(reports)}")
                )
            else:
                number = rng.randint(1, 3)
                before = tuple(stages)
                target = next(s for s in stages if s.stage_number == number)
                decision = stage_gate_check(number, stages, reports)
                on = date(2014, 1, 1) + timedelta(days=rng.randrange(180))
                try:
                    updated = record_disbursement(
                        number, target.planned_amount, on, stages, reports
                    )
                except Conflict:
                    assert target.status is StageStatus.DISBURSED
                    assert tuple(stages) == before
                except GateBlocked as blocked:
                    assert not decision.open
                    assert blocked.reasons == decision.reasons
                    assert tuple(stages) == before
                else:
                    assert decision.open
                    assert target.status is StageStatus.PLANNED
                    stages = updated
            assert _disbursed_prefix(stages)
    assert time.monotonic() - started < 30.0


@pytest.mark.acceptance("state_machine")
def test_gate_agrees_with_brute_force_oracle():
    """Enumerate the full finite space: every stage-status combination times
    every report-timing/threshold relation, against a straight-line oracle."""
    payout_day = date(2014, 2, 3)
    thresholds = {2: 3000, 3: 6000}
    report_days = (None, date(2014, 1, 20), payout_day, date(2014, 2, 10))
    levels = (0, 2999, 3000, 5999, 6000, 10000)

    checked = 0
    for combo in itertools.product((False, True), repeat=3):
        base = plan_tranches(Money(9_000_000), DEFAULT_TRANCHE_CONFIG, "act")
        stages = [
            dataclasses.replace(
                stage,
                actual_amount=stage.planned_amount if disbursed else None,
                disbursed_on=payout_day if disbursed else None,
                status=StageStatus.DISBURSED if disbursed else StageStatus.PLANNED,
            )
            for stage, disbursed in zip(base, combo)
        ]
        scenarios = [(None, None)] + [
            (day, bp) for day in report_days[1:] for bp in levels
        ]
        for day, bp in scenarios:
            reports = [] if day is None else [quick_report(2, bp, day=day)]
            for number in (1, 2, 3):
                decision = stage_gate_check(number, stages, reports)

                if number == 1:
                    expected = True
                else:
                    prior_paid = combo[number - 2]
                    fresh_report = prior_paid and day is not None and day >= payout_day
                    cleared = day is not None and bp >= thresholds[number]
                    expected = prior_paid and fresh_report and cleared
                assert decision.open is expected, (combo, day, bp, number)
                checked += 1
    assert checked == 8 * 19 * 3


# --- criterion: tranche conservation ----------------------------------------


def _largest_remainder(budget, shares):
    """Independent re-derivation: floor each share, then hand the leftover
    rupiah to the largest remainders, earlier stages first on ties."""
    base = [budget * s // 10_000 for s in shares]
    remainders = [budget * s % 10_000 for s in shares]
    order = sorted(range(3), key=lambda i: (-remainders[i], i))
    for i in order[: budget - sum(base)]:
        base[i] += 1
    return base


@pytest.mark.acceptance("tranche_conservation")
def test_tranche_planning_conserves_budget_exactly():
    rng = random.Random(18)
    conserved = rejected = 0
    for i in range(10_000):
        if i % 20 == 0:
            # Extreme splits with tiny budgets exercise the rejection branch
            # and the case where leftover rupiah rescue a zero floor.
            budget = rng.randint(1, 20_000)
            first = rng.randint(1, 3)
        else:
            budget = rng.randint(1, 10**12)
            first = rng.randint(1, 9998)
        second = rng.randint(1, 9999 - first)
        shares = (first, second, 10_000 - first - second)
        config = TrancheConfig(tuple(Percent(s) for s in shares))
        expected = _largest_remainder(budget, shares)
        if min(expected) == 0:
            with pytest.raises(ConfigError):
                plan_tranches(Money(budget), config)
            rejected += 1
        else:
            amounts = [s.planned_amount.amount
                       for s in plan_tranches(Money(budget), config)]
            assert amounts == expected
            assert sum(amounts) == budget
            conserved += 1
    assert conserved > 7500 and rejected > 50, (conserved, rejected)

    for tiny in (1, 2):
        with pytest.raises(ConfigError):
            plan_tranches(Money(tiny), DEFAULT_TRANCHE_CONFIG)
    # Budget 3 is the smallest legal default split: remainders lift every stage
    # to exactly one rupiah.
    assert [s.planned_amount.amount
            for s in plan_tranches(Money(3), DEFAULT_TRANCHE_CONFIG)] == [1, 1, 1]


# --- criterion: rollup oracle ------------------------------------------------


@pytest.mark.acceptance("rollup_oracle")
def test_rollup_within_one_bp_of_brute_force_and_hierarchy_consistent():
    rng = random.Random(50)
    for round_number in range(1_000):
        kecamatan_ids = [f"kec{k}" for k in range(rng.randint(1, 4))]
        villages = [
            Desa(id=f"{kec}-d{j}", kecamatan_id=kec, name=f"{kec}-d{j}")
            for kec in kecamatan_ids
            for j in range(rng.randint(1, 3))
        ]
        desa_by_id = {d.id: d for d in villages}
        count = rng.randint(len(villages), max(len(villages), 50))
        as_of = rng.randint(1, 40)

        activities, latest, targets = [], {}, {}
        for i in range(count):
            home = villages[i % len(villages)]
            activity = Activity(
                id=f"a{i}", program_id="prog", desa_id=home.id, title=f"a{i}",
                budget=Money(rng.randint(1, 10**10)),
                start_period=1, end_period=52,
            )
            activities.append(activity)
            targets[activity.id] = WorkTargetPlan(
                activity.id, (TargetEntry(1, Percent(10_000), activity.budget),)
            )
            if rng.random() < 0.2:
                latest[activity.id] = None
            else:
                latest[activity.id] = quick_report(
                    rng.randint(1, 45), rng.randint(0, 10_000),
                    financial=rng.randint(0, activity.budget.amount),
                    report_id=f"rep{i}",
                )

        result = rollup(
            Scope(ScopeKind.PROGRAM, "prog"),
            activities, desa_by_id, latest, targets, as_of,
        )

        weight = sum(a.budget.amount for a in activities)
        weighted_sum = realized = 0
        counted_missing = 0
        for activity in activities:
            report = latest[activity.id]
            if report is not None and report.period > as_of:
                report = None
            if report is None:
                counted_missing += 1
            else:
                weighted_sum += activity.budget.amount * report.physical.basis_points
                realized += report.financial_absorbed.amount
        exact = Fraction(weighted_sum, weight)
        assert abs(result.weighted_physical.basis_points - exact) <= 1, round_number
        assert result.financial_realized.amount == realized
        assert result.financial_planned.amount == weight
        assert result.activity_count == count
        assert result.missing_report_count == counted_missing

        combined_sum = combined_weight = 0
        for kec in kecamatan_ids:
            sub = rollup(
                Scope(ScopeKind.KECAMATAN, kec),
                activities, desa_by_id, latest, targets, as_of,
            )
            kec_weight = sum(
                a.budget.amount
                for a in activities
                if desa_by_id[a.desa_id].kecamatan_id == kec
            )
            combined_sum += kec_weight * sub.weighted_physical.basis_points
            combined_weight += kec_weight
        combined = Fraction(combined_sum, combined_weight)
        assert abs(result.weighted_physical.basis_points - combined) <= 1, round_number


# --- criterion: report monotonicity ------------------------------------------


_ACTIVITY = Activity(
    id="act", program_id="p", desa_id="d", title="t",
    budget=Money(10**9), start_period=1, end_period=60,
)


@pytest.mark.acceptance("report_monotonicity")
@settings(max_examples=300, deadline=None)
@given(
    values=st.lists(
        st.tuples(st.integers(0, 10_000), st.integers(0, 10**9)),
        min_size=1, max_size=30,
    )
)
def test_accepted_report_sequences_are_monotone(values):
    """Chain-validate an arbitrary sequence: every acceptance keeps both
    cumulative series non-decreasing, every regression is rejected with the
    named violation (and only for genuine regressions)."""
    pool = Money(10**9)
    accepted = []
    for offset, (bp, financial) in enumerate(values):
        candidate = quick_report(offset + 1, bp, financial=financial,
                                 report_id=f"c{offset}")
        prior = accepted[-1] if accepted else None
        verdict = validate_progress_report(candidate, _ACTIVITY, prior, pool)
        if verdict.ok:
            accepted.append(candidate)
            continue
        codes = {v.code for v in verdict.violations}
        assert codes <= {"physical_regression", "financial_regression"}
        assert prior is not None
        assert ("physical_regression" in codes) == (candidate.physical < prior.physical)
        assert ("financial_regression" in codes) == (
            candidate.financial_absorbed < prior.financial_absorbed
        )
    for earlier, later in zip(accepted, accepted[1:]):
        assert later.physical >= earlier.physical
        assert later.financial_absorbed >= earlier.financial_absorbed


@pytest.mark.acceptance("report_monotonicity")
def test_regressions_carry_named_violations():
    prior = quick_report(2, 3600, financial=50_000_000)
    dip = quick_report(3, 3000, financial=40_000_000, report_id="dip")
    verdict = validate_progress_report(dip, _ACTIVITY, prior, Money(10**9))
    by_code = {v.code: v for v in verdict.violations}
    assert set(by_code) == {"physical_regression", "financial_regression"}
    assert "3000 bp below prior 3600 bp" in by_code["physical_regression"].message
    assert by_code["physical_regression"].field == "physical"
    assert by_code["financial_regression"].field == "financial_absorbed"


# --- criterion: ingestion golden corpus ---------------------------------------


def _golden_resolver():
    def disbursed_first_stage(activity, amount, on):
        stages = plan_tranches(activity.budget, activity.tranche_config, activity.id)
        stages[0] = dataclasses.replace(
            stages[0], actual_amount=Money(amount), disbursed_on=on,
            status=StageStatus.DISBURSED,
        )
        return tuple(stages)

    road = Activity(id="act-jln", program_id="p", desa_id="d", title="Rabat",
                    budget=Money(250_000_000), start_period=1, end_period=20)
    water = Activity(id="act-air", program_id="p", desa_id="d", title="Sumur",
                     budget=Money(200_000_000), start_period=1, end_period=24)
    targets = {
        "JLN-01": ImportTarget(
            road, 2014, None,
            disbursed_first_stage(road, 100_000_000, date(2014, 1, 6)),
        ),
        "AIR-02": ImportTarget(
            water, 2014,
            ProgressReport(
                id="prior-air", activity_id="act-air", period=3,
                physical=Percent(2000), financial_absorbed=Money(30_000_000),
                labor_count=10, submitted_by="import",
                submitted_at=datetime(2014, 1, 26, tzinfo=UTC),
            ),
            disbursed_first_stage(water, 80_000_000, date(2014, 1, 6)),
        ),
    }
    return lambda ref: targets.get(ref)


# filename -> (accepted rows as (activity, period, bp, financial, labor, date),
#              error diagnostics as (row, field, message))
GOLDEN = {
    "g1_indonesian_header": (
        [
            ("act-jln", 2, 1250, 25_000_000, 40, date(2014, 1, 19)),
            ("act-jln", 3, 1500, 31_250_000, 55, date(2014, 1, 26)),
        ],
        [
            (3, "period", "period 3 is not after the latest prior report (period 3)"),
            (4, "period", "period 2 is not after the latest prior report (period 3)"),
            (5, "physical", "physical regression: 1800 bp below prior 2000 bp"),
            (5, "financial_absorbed",
             "financial regression: cumulative absorption below the prior report"),
            (6, "financial", "not a number: 'abc'"),
            (7, "activity_ref", "unresolved activity: 'UNKNOWN-9'"),
            (8, "physical", "percent out of range: '120'"),
        ],
    ),
    "g2_plain_indexed": (
        [
            ("act-jln", 2, 1250, 25_000_000, 35, date(2014, 1, 19)),
            ("act-jln", 3, 1500, 30_000_000, 40, date(2014, 1, 26)),
        ],
        [
            (3, "financial", "fractional rupiah: '32.000.000'"),
            (4, "labor", "labor must be a non-negative integer, got 'x'"),
            (6, "period", "period 26 outside reporting window [1, 24]"),
        ],
    ),
    "g3_dated_rp": (
        [
            ("act-jln", 2, 1000, 20_000_000, 25, date(2014, 1, 13)),
            ("act-jln", 3, 1275, 31_500_000, 30, date(2014, 1, 20)),
            ("act-jln", 4, 1500, 40_000_000, 32, date(2014, 1, 27)),
            ("act-jln", 5, 2000, 55_000_000, 35, date(2014, 2, 3)),
        ],
        [
            (5, "period_or_date", "invalid date: '31/02/2014'"),
            (6, "period_or_date", "2015-01-05 is outside fiscal year 2014"),
            (7, "period", "period 1 is not after the latest prior report (period 5)"),
            (7, "financial_absorbed", "absorption exceeds disbursed: 70000000 > 0"),
        ],
    ),
    "g4_shuffled_extra": (
        [
            ("act-jln", 2, 500, 10_000_000, 15, date(2014, 1, 19)),
            ("act-jln", 3, 750, 20_000_000, 18, date(2014, 1, 26)),
            ("act-jln", 4, 1000, 30_000_000, 20, date(2014, 2, 2)),
            ("act-jln", 6, 1500, 50_000_000, 25, date(2014, 2, 16)),
        ],
        [
            (4, "activity_ref", "row has 5 columns, field needs column 6"),
            (4, "period_or_date", "row has 5 columns, field needs column 7"),
        ],
    ),
    "g5_error_zoo": (
        [
            ("act-jln", 7, 4000, 60_000_000, 20, date(2014, 2, 23)),
        ],
        [
            (2, "period_or_date", "period must be at least 1, got '0'"),
            (3, "period_or_date", "unrecognized date format: '2014/01/10'"),
            (4, "physical", "percent out of range: '100,01'"),
            (5, "physical", "more than two decimal places: '12,345'"),
            (6, "physical", "ambiguous number format: '1.234,5'"),
            (7, "labor", "labor must be a non-negative integer, got '-5'"),
            (8, "financial", "fractional rupiah: '1.000,50'"),
            (9, "financial", "malformed thousands grouping in '12.34.567'"),
            (10, "financial", "negative amount: '-5.000'"),
            (11, "financial_absorbed",
             "absorption exceeds disbursed: 150000000 > 100000000"),
            (12, "financial", "empty amount: ''"),
        ],
    ),
}


@pytest.mark.acceptance("ingestion_golden")
@pytest.mark.parametrize("stem", sorted(GOLDEN))
def test_golden_corpus_splits_and_diagnostics(stem):
    expected_accepted, expected_errors = GOLDEN[stem]
    cmap = ColumnMap.from_document(
        (FIXTURES / "golden" / f"{stem}.kv").read_text(encoding="utf-8")
    )
    result = import_report_csv(
        (FIXTURES / "golden" / f"{stem}.csv").read_bytes(), cmap, _golden_resolver()
    )

    produced = [
        (r.activity_id, r.period, r.physical.basis_points,
         r.financial_absorbed.amount, r.labor_count, r.submitted_at.date())
        for r in result.accepted
    ]
    assert produced == expected_accepted

    diagnostics = sorted(
        (d.row_number, d.field, d.message)
        for d in result.diagnostics
        if d.severity.value == "error"
    )
    assert diagnostics == sorted(expected_errors)
    assert result.rejected_rows == {row for row, _, _ in expected_errors}


@pytest.mark.acceptance("ingestion_golden")
def test_parser_round_trips_ten_thousand_values():
    rng = random.Random(101)
    for _ in range(10_000):
        amount = rng.randint(0, 10**6) if rng.random() < 0.5 else rng.randint(0, 10**13)
        bp = rng.randint(0, 10_000)
        for locale in (Locale.INDONESIAN, Locale.PLAIN):
            assert parse_money(format_money(Money(amount), locale), locale) \
                == Money(amount)
            assert parse_percent(format_percent(Percent(bp), locale)) == Percent(bp)


# --- criterion: racing disbursements -------------------------------------------


@pytest.mark.acceptance("concurrency")
def test_racing_disbursements_have_exactly_one_winner(tmp_path):
    from fastapi.testclient import TestClient

    api = ApiHarness(tmp_path)
    admin, petugas = api.admin, api.petugas
    program = api.client.post("/api/v1/programs", headers=admin, json={
        "kind": "PIP", "fiscal_year": 2014, "name": "Race",
    }).json()
    kecamatan = api.client.post("/api/v1/kecamatan", headers=admin,
                                json={"name": "Race"}).json()
    desa = api.client.post("/api/v1/desa", headers=admin, json={
        "kecamatan_id": kecamatan["id"], "name": "Race",
    }).json()
    second_client = TestClient(api.app)

    for rep in range(100):
        activity = api.client.post("/api/v1/kegiatan", headers=admin, json={
            "program_id": program["id"], "desa_id": desa["id"],
            "title": f"race {rep}", "budget": 10_000_000,
            "start_period": 1, "end_period": 10,
        }).json()
        url = f"/api/v1/kegiatan/{activity['id']}/disbursements"
        barrier = threading.Barrier(2)
        responses = []

        def attempt(client):
            body = {"stage_number": 1, "amount": 4_000_000, "date": "2014-01-20"}
            barrier.wait()
            responses.append(client.post(url, headers=petugas, json=body))

        threads = [
            threading.Thread(target=attempt, args=(client,))
            for client in (api.client, second_client)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()

        codes = sorted(r.status_code for r in responses)
        assert codes == [201, 409], [r.text for r in responses]
        loser = next(r for r in responses if r.status_code == 409)
        assert loser.json()["code"] == "conflict"
        assert "already disbursed" in loser.json()["message"]

        stages = api.client.get(url, headers=petugas).json()["stages"]
        first = next(s for s in stages if s["stage_number"] == 1)
        assert first["status"] == "disbursed"
        assert first["actual_amount"]["amount"] == 4_000_000
        assert all(s["status"] == "planned" for s in stages
                   if s["stage_number"] != 1)


# --- criterion: scripted end-to-end scenario ------------------------------------


def drive_three_stage_scenario(api):
    """Seed the demo fixture and walk one activity through all three gates.

    Returns ids needed by follow-up assertions.  Every timestamp is explicit,
    so repeated runs produce identical stores.
    """
    with api.db.transaction() as repo:
        outcome = apply_seed(
            repo, yaml.safe_load(DEMO_SEED.read_text(encoding="utf-8"))
        )
    assert outcome.counts["kegiatan"].created == 6

    listing = api.client.get("/api/v1/kegiatan", headers=api.kasatker).json()
    activity = next(a for a in listing["kegiatan"]
                    if a["title"] == "Rabat beton jalan lingkungan")
    aid = activity["id"]
    url = f"/api/v1/kegiatan/{aid}"

    def report(period, bp, financial, day):
        response = api.client.post(f"{url}/reports", headers=api.petugas, json={
            "period": period, "physical": bp, "financial_absorbed": financial,
            "labor_count": 20, "submitted_at": f"{day}T10:00:00+00:00",
        })
        assert response.status_code == 201, response.text
        return response.json()

    def disburse(stage, amount, day):
        return api.client.post(f"{url}/disbursements", headers=api.petugas, json={
            "stage_number": stage, "amount": amount, "date": day,
        })

    first = disburse(1, 100_000_000, "2014-01-13")
    assert first.status_code == 201, first.text

    report(2, 1000, 20_000_000, "2014-01-19")
    report(3, 2000, 40_000_000, "2014-01-26")

    early = disburse(2, 75_000_000, "2014-01-27")
    assert early.status_code == 409
    assert early.json()["code"] == "gate_blocked"
    assert [d["message"] for d in early.json()["details"]] == [
        "physical below threshold"
    ]

    report(4, 3500, 70_000_000, "2014-02-02")
    second = disburse(2, 75_000_000, "2014-02-03")
    assert second.status_code == 201, second.text

    report(5, 4500, 90_000_000, "2014-02-09")
    early_third = disburse(3, 75_000_000, "2014-02-10")
    assert early_third.status_code == 409
    assert early_third.json()["code"] == "gate_blocked"

    report(6, 6000, 120_000_000, "2014-02-16")
    third = disburse(3, 75_000_000, "2014-02-17")
    assert third.status_code == 201, third.text

    return {"activity_id": aid, "program_id": activity["program_id"]}


@pytest.mark.acceptance("end_to_end")
def test_three_stage_scenario_over_the_api(tmp_path):
    started = time.monotonic()
    api = ApiHarness(tmp_path)
    ids = drive_three_stage_scenario(api)
    url = f"/api/v1/kegiatan/{ids['activity_id']}"

    chart = api.client.get(f"{url}/stage-chart", headers=api.kasatker).json()
    assert [
        (row["stage_number"], row["planned"]["amount"], row["realized"]["amount"])
        for row in chart["rows"]
    ] == [
        (1, 100_000_000, 100_000_000),
        (2, 75_000_000, 75_000_000),
        (3, 75_000_000, 75_000_000),
    ]

    curve = api.client.get(f"{url}/s-curve", headers=api.kasatker,
                           params={"through": 6}).json()
    realized = [
        None if p["realized_physical"] is None
        else p["realized_physical"]["basis_points"]
        for p in curve["points"]
    ]
    assert realized == [None, 1000, 2000, 3500, 4500, 6000]
    financial = [
        None if p["realized_financial"] is None
        else p["realized_financial"]["amount"]
        for p in curve["points"]
    ]
    assert financial == [None, 20_000_000, 40_000_000, 70_000_000,
                         90_000_000, 120_000_000]

    summary = api.client.get("/api/v1/summary", headers=api.kasatker, params={
        "scope": "kegiatan", "id": ids["activity_id"], "as_of_period": 6,
    }).json()
    assert summary["weighted_physical"]["basis_points"] == 6000
    assert summary["financial_realized"]["amount"] == 120_000_000

    assert time.monotonic() - started < 60.0


# --- criterion: export equals API ------------------------------------------------


@pytest.mark.acceptance("export_equivalence")
def test_cli_json_export_summary_is_byte_equal_to_api(tmp_path):
    api = ApiHarness(tmp_path)
    ids = drive_three_stage_scenario(api)

    from_api = api.client.get("/api/v1/summary", headers=api.kasatker, params={
        "scope": "program", "id": ids["program_id"],
    })
    assert from_api.status_code == 200

    runner = CliRunner()
    result = runner.invoke(cli_main, [
        "--store", str(api.config.storage_path),
        "export", "program", ids["program_id"],
        "--format", "json", "--as-of", "2014-02-20",
    ])
    assert result.exit_code == 0, result.output
    exported = json.loads(result.output)
    assert set(exported) == {"summary", "s_curves", "stage_charts", "late_reports"}
    assert canonical_json(exported["summary"]).encode("utf-8") == from_api.content

"""Three-stage disbursement state machine.

Stages are planned once from the activity budget and tranche shares, then
disbursed strictly in order.  Later tranches are gated on evidenced progress:
the prior stage must be paid out, a field report must exist from after that
payout, and the latest reported physical progress must clear the stage's
threshold.  All functions here are pure; callers persist the returned state.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import date
from enum import Enum
from typing import Sequence

from desamon.core.types import Money, Percent, ProgressReport, TrancheConfig, ZERO_RUPIAH
from desamon.errors import Conflict, ConfigError, GateBlocked, InvalidInput

STAGE_NUMBERS = (1, 2, 3)

# Machine-readable gate reasons; stable strings, also shown to operators.
REASON_PRIOR_NOT_DISBURSED = "prior stage not disbursed"
REASON_NO_REPORT_AFTER_PRIOR = "no report after prior stage disbursement"
REASON_PHYSICAL_BELOW_THRESHOLD = "physical below threshold"


class StageStatus(str, Enum):
    PLANNED = "planned"
    DISBURSED = "disbursed"


@dataclass(frozen=True, slots=True)
class DisbursementStage:
    """One fund tranche; Disbursed iff actual amount and date are present."""

    activity_id: str
    stage_number: int
    planned_amount: Money
    actual_amount: Money | None = None
    disbursed_on: date | None = None
    status: StageStatus = StageStatus.PLANNED

    def __post_init__(self) -> None:
        if self.stage_number not in STAGE_NUMBERS:
            raise ValueError(f"stage number must be 1, 2 or 3, got {self.stage_number}")
        disbursed = self.status is StageStatus.DISBURSED
        has_actuals = self.actual_amount is not None and self.disbursed_on is not None
        if disbursed != has_actuals:
            raise ValueError(
                "actual amount and disbursement date must be present exactly when "
                "the stage is disbursed"
            )


@dataclass(frozen=True, slots=True)
class GateRule:
    """Progress thresholds a later tranche must clear before payout.

    Defaults (30% before stage 2, 60% before stage 3) are a configurable
    convention.
    """

    min_physical_for_stage2: Percent = Percent(3000)
    min_physical_for_stage3: Percent = Percent(6000)
    require_report_after_prior_stage: bool = True

    def __post_init__(self) -> None:
        if self.min_physical_for_stage2 > self.min_physical_for_stage3:
            raise ValueError("stage-2 threshold must not exceed the stage-3 threshold")

    def threshold_for(self, stage_number: int) -> Percent:
        if stage_number == 2:
            return self.min_physical_for_stage2
        if stage_number == 3:
            return self.min_physical_for_stage3
        raise InvalidInput(f"no gate threshold for stage {stage_number}")


DEFAULT_GATE_RULE = GateRule()


@dataclass(frozen=True, slots=True)
class GateDecision:
    stage_number: int
    open: bool
    reasons: tuple[str, ...] = ()


def plan_tranches(
    budget: Money, config: TrancheConfig, activity_id: str = ""
) -> list[DisbursementStage]:
    """Split the budget into three planned stages, conserving it exactly.

    Uses largest-remainder rounding so the planned amounts always sum to the
    budget.  A budget too small to give every tranche at least one rupiah is
    rejected.
    """
    if budget.amount <= 0:
        raise ConfigError("budget must be positive to plan tranches")
    shares = [s.basis_points for s in config.shares]
    base = [budget.amount * s // 10_000 for s in shares]
    remainders = [budget.amount * s % 10_000 for s in shares]
    leftover = budget.amount - sum(base)
    # Ties broken by stage order; leftover is at most 2 rupiah.
    for i in sorted(range(3), key=lambda i: (-remainders[i], i))[:leftover]:
        base[i] += 1
    if any(amount < 1 for amount in base):
        raise ConfigError("tranche rounds to zero: budget too small for the share split")
    return [
        DisbursementStage(
            activity_id=activity_id,
            stage_number=number,
            planned_amount=Money(amount),
        )
        for number, amount in zip(STAGE_NUMBERS, base)
    ]


def _stage_by_number(stages: Sequence[DisbursementStage], number: int) -> DisbursementStage:
    for stage in stages:
        if stage.stage_number == number:
            return stage
    raise InvalidInput(f"stage {number} not present in stage list")


def stage_gate_check(
    stage_number: int,
    stages: Sequence[DisbursementStage],
    reports: Sequence[ProgressReport],
    rule: GateRule = DEFAULT_GATE_RULE,
) -> GateDecision:
    """Decide whether a stage may be disbursed now.

    Stage 1 is always open.  A later stage is open iff the prior stage is
    disbursed, a report exists from on or after the prior payout date (when
    the rule requires one), and the latest report's physical progress meets
    the stage threshold.  ``reports`` must be ordered by period.
    """
    if stage_number not in STAGE_NUMBERS:
        raise InvalidInput(f"stage number must be 1, 2 or 3, got {stage_number}")
    if stage_number == 1:
        return GateDecision(1, open=True)

    reasons: list[str] = []
    prior = _stage_by_number(stages, stage_number - 1)
    if prior.status is not StageStatus.DISBURSED:
        reasons.append(REASON_PRIOR_NOT_DISBURSED)
    elif rule.require_report_after_prior_stage:
        # A same-day report counts: disbursed_on has no time of day.
        assert prior.disbursed_on is not None
        if not any(r.submitted_at.date() >= prior.disbursed_on for r in reports):
            reasons.append(REASON_NO_REPORT_AFTER_PRIOR)
    latest = reports[-1] if reports else None
    if latest is None or latest.physical < rule.threshold_for(stage_number):
        reasons.append(REASON_PHYSICAL_BELOW_THRESHOLD)
    return GateDecision(stage_number, open=not reasons, reasons=tuple(reasons))


def record_disbursement(
    stage_number: int,
    amount: Money,
    on: date,
    stages: Sequence[DisbursementStage],
    reports: Sequence[ProgressReport],
    rule: GateRule = DEFAULT_GATE_RULE,
) -> list[DisbursementStage]:
    """Mark one stage disbursed, leaving every other stage untouched.

    The actual amount may differ from the planned amount; the delta is
    surfaced by aggregation rather than rejected here.  A stage can be
    disbursed exactly once.
    """
    if amount.amount <= 0:
        raise InvalidInput("disbursement amount must be positive")
    target = _stage_by_number(stages, stage_number)
    if target.status is StageStatus.DISBURSED:
        raise Conflict(f"stage {stage_number} already disbursed")
    decision = stage_gate_check(stage_number, stages, reports, rule)
    if not decision.open:
        raise GateBlocked(stage_number, decision.reasons)
    updated = replace(
        target,
        actual_amount=amount,
        disbursed_on=on,
        status=StageStatus.DISBURSED,
    )
    return [updated if s.stage_number == stage_number else s for s in stages]


def disbursed_to_date(stages: Sequence[DisbursementStage], as_of: date) -> Money:
    """Total actually paid out on or before ``as_of``."""
    total = ZERO_RUPIAH
    for stage in stages:
        if stage.status is StageStatus.DISBURSED and stage.disbursed_on is not None:
            if stage.disbursed_on <= as_of:
                assert stage.actual_amount is not None
                total = total + stage.actual_amount
    return total

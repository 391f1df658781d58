"""Time-to-event monitor: risk-set betting on the log-rank score.

Records (events and censorings) are consumed in nondecreasing time-on-study
order.  At each event, the treated fraction of the risk set gives the null
probability that the event is a treated patient; the score increment is the
observed indicator minus that probability.  The bet has fixed magnitude and
adaptive direction: it follows the sign of the cumulative score, scaled by
the ramp and capped at ``lambda_max``, so every payout lies within
``1 +/- lambda_max`` and wealth can never be wiped out by one event.
Censored records shrink the risk set without touching wealth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import RampSchedule, WealthLedger, apply_signed_bet

DEFAULT_SCHEDULE = RampSchedule(burn_in=30, ramp=50)
DEFAULT_BET_CAP = 0.25


@dataclass(frozen=True)
class SurvivalRecord:
    """One subject's follow-up outcome on the time-on-study clock."""

    time: float
    status: int  # 1 = event, 0 = censored
    arm: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.time) and self.time >= 0.0):
            raise ValueError(f"time on study must be finite and >= 0, got {self.time!r}")
        if self.status not in (0, 1):
            raise ValueError(f"status must be 0 or 1, got {self.status}")
        if self.arm not in (0, 1):
            raise ValueError(f"arm must be 0 or 1, got {self.arm}")


def order_records(records, entry_times=None) -> list[SurvivalRecord]:
    """Stable-sort records by time on study; ties keep input order.

    With staggered recruitment, pass calendar event times in ``records`` and
    the matching ``entry_times``; each subject's time on study is the
    difference.  Rank order on that clock is all the monitor uses, so
    staggered and simultaneous entry are analyzed identically.
    """
    records = list(records)
    if entry_times is not None:
        entry_times = list(entry_times)
        if len(entry_times) != len(records):
            raise ValueError("entry_times must match records one-to-one")
        shifted = []
        for rec, entry in zip(records, entry_times):
            study_time = rec.time - entry
            if study_time < 0:
                raise ValueError(f"negative time on study: event {rec.time} before entry {entry}")
            shifted.append(SurvivalRecord(study_time, rec.status, rec.arm))
        records = shifted
    return sorted(records, key=lambda r: r.time)


@dataclass
class SurvivalState:
    """Streaming state for the survival monitor; one instance per trial.

    Risk sets start at the full per-arm cohort sizes, which must be known
    up front, and shrink by one for every record processed.
    """

    risk_trt: int
    risk_ctrl: int
    sched: RampSchedule = DEFAULT_SCHEDULE
    lambda_max: float = DEFAULT_BET_CAP
    alpha: float = 0.05
    record_steps: bool = True
    cum_z: float = 0.0
    records_seen: int = 0
    last_time: float = -math.inf
    ledger: WealthLedger = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.risk_trt < 0 or self.risk_ctrl < 0:
            raise ValueError("risk-set sizes must be >= 0")
        if not 0.0 < self.lambda_max < 1.0:
            raise ValueError(f"lambda_max must be in (0,1), got {self.lambda_max}")
        if self.ledger is None:
            self.ledger = WealthLedger(alpha=self.alpha, record_steps=self.record_steps)

    def risk_proportion(self) -> float:
        """Treated fraction of the current risk set (0.5 when it is empty)."""
        total = self.risk_trt + self.risk_ctrl
        return self.risk_trt / total if total > 0 else 0.5

    def bet(self, j: int | None = None) -> float:
        """Signed bet for record index ``j``: ramp * cap * sign of the score so far."""
        if j is None:
            j = self.records_seen + 1
        if j <= self.sched.burn_in:
            return 0.0
        c = self.sched.coefficient(j)
        sign = 0.0 if self.cum_z == 0.0 else math.copysign(1.0, self.cum_z)
        return c * self.lambda_max * sign

    def step(self, record: SurvivalRecord):
        """Consume the next time-ordered record.

        Events settle the signed bet and then add their score increment to
        the cumulative log-rank score; censorings only shrink the risk set.
        Returns the settled WealthStep, or None for a censored record.
        """
        if record.time < self.last_time:
            raise ValueError(
                f"stream not sorted: time {record.time} after {self.last_time}"
            )
        j = self.records_seen + 1
        step = None
        if record.status == 1:
            b = self.bet(j)
            u = score_increment(record.arm, self.risk_proportion())
            step = apply_signed_bet(self.ledger, b, u, j)
            self.cum_z += u
        if record.arm == 1:
            self.risk_trt = max(0, self.risk_trt - 1)
        else:
            self.risk_ctrl = max(0, self.risk_ctrl - 1)
        self.records_seen = j
        self.last_time = record.time
        return step

    def state_dict(self) -> dict:
        return {
            "burn_in": self.sched.burn_in,
            "ramp": self.sched.ramp,
            "lambda_max": self.lambda_max,
            "risk_trt": self.risk_trt,
            "risk_ctrl": self.risk_ctrl,
            "cum_z": self.cum_z.hex(),
            "records_seen": self.records_seen,
            "last_time": self.last_time.hex(),
            "ledger": self.ledger.state_dict(),
        }

    @classmethod
    def from_state_dict(cls, d: dict) -> "SurvivalState":
        state = cls(
            risk_trt=d["risk_trt"],
            risk_ctrl=d["risk_ctrl"],
            sched=RampSchedule(d["burn_in"], d["ramp"]),
            lambda_max=d["lambda_max"],
            alpha=d["ledger"]["alpha"],
            record_steps=False,
        )
        state.cum_z = float.fromhex(d["cum_z"])
        state.records_seen = d["records_seen"]
        state.last_time = float.fromhex(d["last_time"])
        state.ledger = WealthLedger.from_state_dict(d["ledger"])
        return state


def risk_proportion(state: SurvivalState) -> float:
    return state.risk_proportion()


def score_increment(event_arm: int, p_j: float) -> float:
    """Log-rank score increment: treated indicator minus risk-set proportion."""
    if event_arm not in (0, 1):
        raise ValueError(f"arm must be 0 or 1, got {event_arm}")
    return float(event_arm) - p_j


def survival_bet(state: SurvivalState, j: int) -> float:
    return state.bet(j)


def survival_step(state: SurvivalState, record: SurvivalRecord):
    return state.step(record)

"""Binary-outcome monitor: adaptive half-Kelly wagers on each patient's arm.

After a patient's event status is known but before their arm is revealed, the
wager tilts away from 0.5 by half the running event-rate difference between
arms, scaled by the ramp.  Events lean toward the arm where events have been
more common so far; non-events lean the other way.  The first patient places
no bet (there is no history to learn from).
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import RampSchedule, WealthLedger, apply_bet, clamp_wager

DEFAULT_SCHEDULE = RampSchedule(burn_in=50, ramp=100)


@dataclass
class BinaryState:
    """Streaming state for the binary monitor; one instance per trial stream."""

    sched: RampSchedule = DEFAULT_SCHEDULE
    p: float = 0.5
    alpha: float = 0.05
    record_steps: bool = True
    n_trt: int = 0
    n_ctrl: int = 0
    e_trt: int = 0
    e_ctrl: int = 0
    i: int = 0  # observations consumed so far
    ledger: WealthLedger = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.ledger is None:
            self.ledger = WealthLedger(alpha=self.alpha, record_steps=self.record_steps)

    def delta(self) -> float:
        """Running event-rate difference, treatment minus control.

        An arm with no patients yet contributes rate 0.5, so an empty trial
        has delta 0 and early one-sided enrollment stays bounded.
        """
        rate_trt = self.e_trt / self.n_trt if self.n_trt > 0 else 0.5
        rate_ctrl = self.e_ctrl / self.n_ctrl if self.n_ctrl > 0 else 0.5
        return rate_trt - rate_ctrl

    def wager(self, outcome: int, i: int | None = None) -> float:
        """Wager for the observation at index ``i`` given its outcome.

        Uses counts accumulated from observations 1..i-1 only.
        """
        if i is None:
            i = self.i + 1
        c = self.sched.coefficient(i)
        d = self.delta()
        lam = 0.5 + 0.5 * c * d if outcome == 1 else 0.5 - 0.5 * c * d
        return clamp_wager(lam)

    def step(self, outcome: int, arm: int):
        """Consume one (outcome, arm) observation: bet, settle, then update counts.

        Returns the settled WealthStep, or None for the first observation,
        which never bets.
        """
        if outcome not in (0, 1):
            raise ValueError(f"outcome must be 0 or 1, got {outcome}")
        if arm not in (0, 1):
            raise ValueError(f"arm must be 0 or 1, got {arm}")
        self.i += 1
        step = None
        if self.i >= 2:
            lam = self.wager(outcome, self.i)
            step = apply_bet(self.ledger, lam, arm, self.p, self.i)
        if arm == 1:
            self.n_trt += 1
            self.e_trt += outcome
        else:
            self.n_ctrl += 1
            self.e_ctrl += outcome
        return step

    def state_dict(self) -> dict:
        return {
            "burn_in": self.sched.burn_in,
            "ramp": self.sched.ramp,
            "p": self.p,
            "n_trt": self.n_trt,
            "n_ctrl": self.n_ctrl,
            "e_trt": self.e_trt,
            "e_ctrl": self.e_ctrl,
            "i": self.i,
            "ledger": self.ledger.state_dict(),
        }

    @classmethod
    def from_state_dict(cls, d: dict) -> "BinaryState":
        state = cls(
            sched=RampSchedule(d["burn_in"], d["ramp"]),
            p=d["p"],
            alpha=d["ledger"]["alpha"],
            record_steps=False,
        )
        state.n_trt = d["n_trt"]
        state.n_ctrl = d["n_ctrl"]
        state.e_trt = d["e_trt"]
        state.e_ctrl = d["e_ctrl"]
        state.i = d["i"]
        state.ledger = WealthLedger.from_state_dict(d["ledger"])
        return state


def binary_delta(state: BinaryState) -> float:
    return state.delta()


def binary_wager(state: BinaryState, outcome: int, i: int) -> float:
    return state.wager(outcome, i)


def binary_step(state: BinaryState, outcome: int, arm: int):
    return state.step(outcome, arm)

"""Deaths-only monitor: full-Kelly plug-in betting on the arm label of each death.

With 1:1 allocation and no treatment effect, each death is equally likely to
carry either arm label, so the stream of death labels is a fair coin.  The
monitor tracks the running fraction of treatment deaths and, once ramped,
wagers that fraction directly (the full Kelly bet for a coin).  Survivors are
never observed: the only input is the ordered stream of arms on deaths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import RampSchedule, WealthLedger, apply_bet, clamp_wager

DEFAULT_SCHEDULE = RampSchedule(burn_in=30, ramp=50)


def death_coin(p_ctrl: float, p_trt: float) -> float:
    """P(death came from treatment | a death occurred) under 1:1 allocation."""
    if not (0.0 <= p_ctrl <= 1.0 and 0.0 <= p_trt <= 1.0):
        raise ValueError("mortality rates must lie in [0,1]")
    if p_ctrl + p_trt <= 0.0:
        raise ValueError("no deaths possible: both mortality rates are zero")
    return p_trt / (p_trt + p_ctrl)


def expected_deaths(n_patients: int, p_ctrl: float, p_trt: float) -> int:
    """Expected death count for a 1:1 trial, rounded up."""
    if n_patients < 0:
        raise ValueError("n_patients must be >= 0")
    return math.ceil(n_patients / 2 * (p_ctrl + p_trt))


@dataclass(frozen=True)
class SignalConcentrationRow:
    baseline: float      # control mortality
    trt_rate: float      # treatment mortality = baseline - arr
    coin: float          # death-coin probability under the alternative
    tilt: float          # |coin - 0.5|
    tilt_over_arr: float # signal concentration factor


def signal_concentration_table(baselines, arr: float) -> list[SignalConcentrationRow]:
    """How far a fixed absolute risk reduction tilts the death coin from 0.5.

    At low baseline mortality the tilt exceeds the risk reduction itself:
    deaths filter out uninformative survivors and concentrate the signal.
    """
    rows = []
    for b in baselines:
        trt = b - arr
        if trt < 0:
            raise ValueError(f"treatment mortality would be negative at baseline {b}")
        coin = death_coin(b, trt)
        tilt = abs(coin - 0.5)
        rows.append(SignalConcentrationRow(b, trt, coin, tilt, tilt / arr if arr > 0 else 0.0))
    return rows


@dataclass
class DeathsState:
    """Streaming state for deaths-only monitoring; one instance per trial."""

    sched: RampSchedule = DEFAULT_SCHEDULE
    alpha: float = 0.05
    record_steps: bool = True
    d_trt: int = 0
    d_ctrl: int = 0
    ledger: WealthLedger = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.ledger is None:
            self.ledger = WealthLedger(alpha=self.alpha, record_steps=self.record_steps)

    @property
    def total(self) -> int:
        return self.d_trt + self.d_ctrl

    def p_hat(self) -> float:
        """Running fraction of deaths from the treatment arm (0.5 before any)."""
        return self.d_trt / self.total if self.total > 0 else 0.5

    def wager(self, i: int | None = None) -> float:
        """Wager for death index ``i`` from counts of deaths 1..i-1."""
        if i is None:
            i = self.total + 1
        if i > self.sched.burn_in and self.total > 0:
            c = self.sched.coefficient(i)
            return clamp_wager(0.5 + c * (self.p_hat() - 0.5))
        return 0.5

    def step(self, arm: int):
        """Consume one death: bet on its arm at the fair-coin null, then count it."""
        if arm not in (0, 1):
            raise ValueError(f"arm must be 0 or 1, got {arm}")
        i = self.total + 1
        lam = self.wager(i)
        step = apply_bet(self.ledger, lam, arm, 0.5, i)
        if arm == 1:
            self.d_trt += 1
        else:
            self.d_ctrl += 1
        return step

    def final_rr(self) -> float:
        """Relative risk implied by the final death split, guarded at the clamp edges."""
        p = self.p_hat()
        if p <= 0.001:
            return 0.0
        if p >= 0.999:
            return math.inf
        return p / (1.0 - p)

    def state_dict(self) -> dict:
        return {
            "burn_in": self.sched.burn_in,
            "ramp": self.sched.ramp,
            "d_trt": self.d_trt,
            "d_ctrl": self.d_ctrl,
            "ledger": self.ledger.state_dict(),
        }

    @classmethod
    def from_state_dict(cls, d: dict) -> "DeathsState":
        state = cls(
            sched=RampSchedule(d["burn_in"], d["ramp"]),
            alpha=d["ledger"]["alpha"],
            record_steps=False,
        )
        state.d_trt = d["d_trt"]
        state.d_ctrl = d["d_ctrl"]
        state.ledger = WealthLedger.from_state_dict(d["ledger"])
        return state


def deaths_wager(state: DeathsState, i: int) -> float:
    return state.wager(i)


def deaths_step(state: DeathsState, arm: int):
    return state.step(arm)

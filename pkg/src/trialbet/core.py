"""Variant-agnostic wealth ledger, ramp schedule, clamping and crossing logic.

Every monitor in this package is the same game wearing different clothes:
before each observation's arm label is revealed, a wager is chosen from past
data only; the wealth is multiplied by a payout whose conditional expectation
is exactly 1 when the arm label is pure randomization noise.  Wealth starting
at 1 is therefore a nonnegative martingale under the null, and by Ville's
inequality the probability it ever reaches ``1/alpha`` is at most ``alpha``.
Crossing that threshold is the (anytime-valid) rejection rule.

Wealth is tracked in log space: long null streams multiply thousands of
factors slightly below 1 and would underflow a plain product.  Exported
e-values exponentiate; the threshold test compares against ``log(1/alpha)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# Wager clamp shared by the two-sided monitors (binary, deaths, continuous).
# Keeps every payout strictly positive so log-wealth stays finite.
WAGER_MIN = 0.001
WAGER_MAX = 0.999


@dataclass(frozen=True)
class RampSchedule:
    """Betting-strength schedule: flat zero for ``burn_in`` observations,
    then a linear rise to 1 over ``ramp`` further observations."""

    burn_in: int
    ramp: int

    def __post_init__(self) -> None:
        if self.burn_in < 0:
            raise ValueError(f"burn_in must be >= 0, got {self.burn_in}")
        if self.ramp < 1:
            raise ValueError(f"ramp must be >= 1, got {self.ramp}")

    def coefficient(self, i: int) -> float:
        """Betting strength in [0, 1] at 1-based observation index ``i``."""
        return ramp_coefficient(i, self)


def ramp_coefficient(i: int, sched: RampSchedule) -> float:
    if i < 1:
        raise ValueError(f"observation index must be >= 1, got {i}")
    return min(1.0, max(0.0, (i - sched.burn_in) / sched.ramp))


def clamp_wager(raw: float, lo: float = WAGER_MIN, hi: float = WAGER_MAX) -> float:
    """Clamp a raw wager into [lo, hi]; identity on interior values."""
    if not math.isfinite(raw):
        raise ValueError(f"invalid wager: {raw!r}")
    return min(hi, max(lo, raw))


@dataclass(frozen=True)
class WealthStep:
    """One ledger row: the bet placed at ``index`` and its realized payout."""

    index: int          # 1-based observation index within the stream
    wager: float        # two-sided fraction in [0,1], or signed bet for survival
    multiplier: float   # realized payout factor, > 0
    log_wealth: float   # cumulative log wealth after this step
    crossed: bool       # threshold reached at or before this step

    @property
    def wealth(self) -> float:
        return math.exp(self.log_wealth)


@dataclass
class WealthLedger:
    """Cumulative wealth of one betting stream.

    Single-writer: one ledger per monitored stream.  ``crossed`` latches at
    the first step whose wealth reaches ``1/alpha`` and never unlatches, even
    if wealth later falls (anytime-valid semantics).
    """

    alpha: float = 0.05
    record_steps: bool = True
    log_wealth: float = 0.0
    n_steps: int = 0
    crossed: bool = False
    crossed_at: int | None = None
    steps: list[WealthStep] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0,1), got {self.alpha}")

    @property
    def threshold(self) -> float:
        return 1.0 / self.alpha

    @property
    def log_threshold(self) -> float:
        return -math.log(self.alpha)

    @property
    def wealth(self) -> float:
        return math.exp(self.log_wealth)

    def apply(self, wager: float, multiplier: float, index: int) -> WealthStep:
        """Multiply wealth by a realized payout and update the crossed latch."""
        if not (multiplier > 0.0 and math.isfinite(multiplier)):
            raise ValueError(f"multiplier must be positive and finite, got {multiplier}")
        self.log_wealth += math.log(multiplier)
        self.n_steps += 1
        if not self.crossed and self.log_wealth >= self.log_threshold:
            self.crossed = True
            self.crossed_at = index
        step = WealthStep(index, wager, multiplier, self.log_wealth, self.crossed)
        if self.record_steps:
            self.steps.append(step)
        return step

    def state_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "log_wealth": self.log_wealth.hex(),
            "n_steps": self.n_steps,
            "crossed": self.crossed,
            "crossed_at": self.crossed_at,
        }

    @classmethod
    def from_state_dict(cls, d: dict) -> "WealthLedger":
        led = cls(alpha=d["alpha"], record_steps=False)
        led.log_wealth = float.fromhex(d["log_wealth"])
        led.n_steps = d["n_steps"]
        led.crossed = d["crossed"]
        led.crossed_at = d["crossed_at"]
        return led


def apply_bet(ledger: WealthLedger, wager: float, arm: int, p: float, index: int) -> WealthStep:
    """Settle a two-sided wager against the revealed arm.

    ``wager`` is the fraction staked on arm 1 (allocation probability ``p``);
    the payout is ``wager/p`` if arm 1 was revealed, else ``(1-wager)/(1-p)``.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"allocation probability must be in (0,1), got {p}")
    if arm not in (0, 1):
        raise ValueError(f"arm must be 0 or 1, got {arm}")
    multiplier = wager / p if arm == 1 else (1.0 - wager) / (1.0 - p)
    return ledger.apply(wager, multiplier, index)


def apply_signed_bet(ledger: WealthLedger, bet: float, score: float, index: int) -> WealthStep:
    """Settle a signed bet on a zero-mean score: payout ``1 + bet * score``.

    Requires ``|bet * score| < 1`` so the payout stays positive.
    """
    return ledger.apply(bet, 1.0 + bet * score, index)


def martingale_audit(wager: float, p: float) -> float:
    """Expected payout of a two-sided wager under the null; must equal 1.

    ``p*(wager/p) + (1-p)*((1-wager)/(1-p))`` is algebraically 1 for any
    wager in [0,1] and p in (0,1).  Used as a self-test, not in monitoring.
    """
    if not 0.0 <= wager <= 1.0:
        raise ValueError(f"wager must be in [0,1], got {wager}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"allocation probability must be in (0,1), got {p}")
    return p * (wager / p) + (1.0 - p) * ((1.0 - wager) / (1.0 - p))

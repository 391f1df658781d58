"""Continuous-outcome monitor: doubly adaptive wagers from robust standardization.

Each new outcome is standardized against the median and raw MAD of all past
outcomes, squashed into (-1, 1), and multiplied by the running clamped
Cohen's d between arms.  The squash term says how unusual this outcome is;
Cohen's d says which arm unusual outcomes have favored so far.  Their product
(scaled by the ramp and a cap ``c_max``) sets the tilt of the wager away
from 0.5.  No bets are placed until ``burn_in`` past outcomes exist; wealth
is carried forward unchanged through that window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import RampSchedule, WealthLedger, apply_bet, clamp_wager

DEFAULT_SCHEDULE = RampSchedule(burn_in=50, ramp=100)
DEFAULT_C_MAX = 0.6


def robust_center_scale(values) -> tuple[float, float]:
    """Median and raw MAD (no consistency constant) of past outcomes.

    A zero or non-finite MAD falls back to scale 1 so standardization never
    degenerates (constant early histories are common).
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("insufficient history: need at least one past outcome")
    med = float(np.median(arr))
    mad = float(np.median(np.abs(arr - med)))
    if not math.isfinite(mad) or mad <= 0.0:
        mad = 1.0
    return med, mad


def squash(r: float) -> float:
    """Map a standardized residual into (-1, 1); odd and strictly monotone."""
    if not math.isfinite(r):
        raise ValueError(f"residual must be finite, got {r!r}")
    return r / (1.0 + abs(r))


@dataclass
class _ArmMoments:
    """Welford accumulator: numerically stable running mean and variance."""

    n: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def add(self, y: float) -> None:
        self.n += 1
        delta = y - self.mean
        self.mean += delta / self.n
        self.m2 += delta * (y - self.mean)

    def sd(self) -> float:
        """Sample standard deviation; 1.0 when undefined (n < 2) or zero."""
        if self.n < 2:
            return 1.0
        var = self.m2 / (self.n - 1)
        if var <= 0.0:
            return 1.0
        return math.sqrt(var)


@dataclass
class ContinuousState:
    """Streaming state for the continuous monitor; one instance per trial."""

    sched: RampSchedule = DEFAULT_SCHEDULE
    c_max: float = DEFAULT_C_MAX
    p: float = 0.5
    alpha: float = 0.05
    record_steps: bool = True
    values: list[float] = field(default_factory=list)
    trt: _ArmMoments = field(default_factory=_ArmMoments)
    ctrl: _ArmMoments = field(default_factory=_ArmMoments)
    ledger: WealthLedger = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if not 0.0 < self.c_max < 1.0:
            raise ValueError(f"c_max must be in (0,1), got {self.c_max}")
        if self.ledger is None:
            self.ledger = WealthLedger(alpha=self.alpha, record_steps=self.record_steps)

    @property
    def i(self) -> int:
        return len(self.values)

    def cohens_d(self) -> float:
        """Running standardized mean difference, clamped to [-1, 1].

        Degenerate cases follow the plug-in conventions: an empty arm gives
        d = 0; an undefined or zero arm SD is replaced by 1.
        """
        if self.trt.n == 0 or self.ctrl.n == 0:
            return 0.0
        sd_t, sd_c = self.trt.sd(), self.ctrl.sd()
        s_pooled = math.sqrt((sd_t * sd_t + sd_c * sd_c) / 2.0)
        d = (self.trt.mean - self.ctrl.mean) / s_pooled
        return min(1.0, max(-1.0, d))

    def wager(self, y: float, i: int | None = None) -> float:
        """Wager for outcome ``y`` arriving at index ``i`` (past data only)."""
        if i is None:
            i = self.i + 1
        if i < 2 or (i - 1) < self.sched.burn_in:
            return 0.5
        med, scale = robust_center_scale(self.values)
        g = squash((y - med) / scale)
        ramp_frac = self.sched.coefficient(i)
        lam = 0.5 + ramp_frac * self.c_max * g * self.cohens_d()
        return clamp_wager(lam)

    def step(self, y: float, arm: int):
        """Consume one (outcome, arm) pair: bet if past burn-in, then record it.

        Returns the settled WealthStep, or None during the no-bet window.
        """
        if not math.isfinite(y):
            raise ValueError(f"outcome must be finite, got {y!r}")
        if arm not in (0, 1):
            raise ValueError(f"arm must be 0 or 1, got {arm}")
        i = self.i + 1
        step = None
        if i >= 2 and (i - 1) >= self.sched.burn_in:
            lam = self.wager(y, i)
            step = apply_bet(self.ledger, lam, arm, self.p, i)
        self.values.append(y)
        (self.trt if arm == 1 else self.ctrl).add(y)
        return step

    def state_dict(self) -> dict:
        return {
            "burn_in": self.sched.burn_in,
            "ramp": self.sched.ramp,
            "c_max": self.c_max,
            "p": self.p,
            "values": [v.hex() for v in self.values],
            "trt": [self.trt.n, self.trt.mean.hex(), self.trt.m2.hex()],
            "ctrl": [self.ctrl.n, self.ctrl.mean.hex(), self.ctrl.m2.hex()],
            "ledger": self.ledger.state_dict(),
        }

    @classmethod
    def from_state_dict(cls, d: dict) -> "ContinuousState":
        state = cls(
            sched=RampSchedule(d["burn_in"], d["ramp"]),
            c_max=d["c_max"],
            p=d["p"],
            alpha=d["ledger"]["alpha"],
            record_steps=False,
        )
        state.values = [float.fromhex(v) for v in d["values"]]
        for key, tgt in (("trt", state.trt), ("ctrl", state.ctrl)):
            n, mean, m2 = d[key]
            tgt.n, tgt.mean, tgt.m2 = n, float.fromhex(mean), float.fromhex(m2)
        state.ledger = WealthLedger.from_state_dict(d["ledger"])
        return state


def running_cohens_d(state: ContinuousState) -> float:
    return state.cohens_d()


def continuous_wager(state: ContinuousState, y: float, i: int) -> float:
    return state.wager(y, i)


def continuous_step(state: ContinuousState, y: float, arm: int):
    return state.step(y, arm)

"""Multi-state trajectory monitor: one bet per state transition.

Each transition a patient makes is classified good (recovery-oriented) or
bad, and the monitor bets on the patient's arm exactly as the binary variant
does, using the running difference in good-transition rates between arms.  A
patient contributes as many bets as state changes, so trajectory improvements
register even when mortality barely moves.  Validity needs no Markov
assumption: only that arms are randomized and the wager uses past data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import RampSchedule, WealthLedger, apply_bet

DEFAULT_SCHEDULE = RampSchedule(burn_in=30, ramp=50)

# Wager clamp for the transition monitor (wider floor than the other
# two-sided variants; transition streams are short enough not to need it).
WAGER_MIN = 0.01
WAGER_MAX = 0.99

WARD, ICU, HOME, DEAD = "Ward", "ICU", "Home", "Dead"


@dataclass(frozen=True)
class StateModel:
    """State labels, absorbing states, and the set of good transitions."""

    states: tuple[str, ...] = (WARD, ICU, HOME, DEAD)
    absorbing: frozenset = frozenset({HOME, DEAD})
    good: frozenset = frozenset({(ICU, WARD), (WARD, HOME)})

    def __post_init__(self) -> None:
        unknown = {s for pair in self.good for s in pair} - set(self.states)
        if unknown:
            raise ValueError(f"good transitions reference unknown states: {sorted(unknown)}")
        if any(a == b for a, b in self.good):
            raise ValueError("good transitions must not contain self-loops")
        if any(a in self.absorbing for a, _ in self.good):
            raise ValueError("absorbing states have no outgoing transitions")

    def index(self, state: str) -> int:
        return self.states.index(state)


DEFAULT_MODEL = StateModel()


def classify(from_state: str, to_state: str, model: StateModel = DEFAULT_MODEL) -> bool:
    """True if the move is a good transition under the model."""
    for s in (from_state, to_state):
        if s not in model.states:
            raise ValueError(f"unknown state: {s!r}")
    if from_state == to_state:
        raise ValueError(f"not a transition: {from_state!r} -> {to_state!r}")
    if from_state in model.absorbing:
        raise ValueError(f"absorbing state {from_state!r} has no outgoing transitions")
    return (from_state, to_state) in model.good


@dataclass(frozen=True)
class TransitionMatrix:
    """Daily transition probabilities over the model's states, one row per state."""

    probs: tuple  # tuple of row tuples, row-stochastic
    model: StateModel = DEFAULT_MODEL

    def __post_init__(self) -> None:
        arr = np.asarray(self.probs, dtype=float)
        k = len(self.model.states)
        if arr.shape != (k, k):
            raise ValueError(f"transition matrix must be {k}x{k}, got {arr.shape}")
        if np.any(arr < 0.0):
            raise ValueError("transition probabilities must be >= 0")
        if np.any(np.abs(arr.sum(axis=1) - 1.0) > 1e-12):
            raise ValueError("each transition-matrix row must sum to 1")
        for s in self.model.absorbing:
            row = arr[self.model.index(s)]
            if row[self.model.index(s)] != 1.0:
                raise ValueError(f"absorbing state {s!r} must have an identity row")

    def as_array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)


# Daily transition probabilities of the simulated ICU trial (rows: Ward, ICU,
# Home, Dead).  Treatment improves the recovery moves ICU->Ward and
# Ward->Home while barely changing mortality.
CONTROL_DAILY = TransitionMatrix((
    (0.880, 0.070, 0.030, 0.020),
    (0.070, 0.915, 0.000, 0.015),
    (0.000, 0.000, 1.000, 0.000),
    (0.000, 0.000, 0.000, 1.000),
))
TREATMENT_DAILY = TransitionMatrix((
    (0.870, 0.050, 0.050, 0.030),
    (0.090, 0.900, 0.000, 0.010),
    (0.000, 0.000, 1.000, 0.000),
    (0.000, 0.000, 0.000, 1.000),
))


def simulate_patient_path(matrix: TransitionMatrix, rng, start: str = ICU,
                          horizon: int = 28):
    """Daily categorical draws from ``start`` until absorption or ``horizon``.

    Returns (final_state, transitions) where transitions is a list of
    (from_state, to_state, day) recording state changes only.
    """
    model = matrix.model
    arr = matrix.as_array()
    cum = np.cumsum(arr, axis=1)
    state = model.index(start)
    absorbing = {model.index(s) for s in model.absorbing}
    transitions = []
    for day in range(1, horizon + 1):
        if state in absorbing:
            break
        new_state = int(np.searchsorted(cum[state], rng.random(), side="right"))
        new_state = min(new_state, len(model.states) - 1)
        if new_state != state:
            transitions.append((model.states[state], model.states[new_state], day))
        state = new_state
    return model.states[state], transitions


@dataclass
class MultistateState:
    """Streaming state for the transition monitor; one instance per trial."""

    model: StateModel = DEFAULT_MODEL
    sched: RampSchedule = DEFAULT_SCHEDULE
    alpha: float = 0.05
    record_steps: bool = True
    good_trt: int = 0
    total_trt: int = 0
    good_ctrl: int = 0
    total_ctrl: int = 0
    ledger: WealthLedger = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.ledger is None:
            self.ledger = WealthLedger(alpha=self.alpha, record_steps=self.record_steps)

    @property
    def total(self) -> int:
        return self.total_trt + self.total_ctrl

    def delta(self) -> float:
        """Good-transition rate difference, treatment minus control.

        Only meaningful once both arms have at least one transition; callers
        gate on that before betting.
        """
        rate_trt = self.good_trt / self.total_trt if self.total_trt > 0 else 0.0
        rate_ctrl = self.good_ctrl / self.total_ctrl if self.total_ctrl > 0 else 0.0
        return rate_trt - rate_ctrl

    def wager(self, is_good: bool, i: int | None = None) -> float:
        if i is None:
            i = self.total + 1
        if i > self.sched.burn_in and self.total_trt > 0 and self.total_ctrl > 0:
            c = self.sched.coefficient(i)
            d = self.delta()
            lam = 0.5 + 0.5 * c * d if is_good else 0.5 - 0.5 * c * d
        else:
            lam = 0.5
        return min(WAGER_MAX, max(WAGER_MIN, lam))

    def step(self, from_state: str, to_state: str, arm: int):
        """Consume one transition: classify, bet on the arm, then update counts."""
        is_good = classify(from_state, to_state, self.model)
        return self.step_classified(is_good, arm)

    def step_classified(self, is_good: bool, arm: int):
        """Consume a transition already classified good/bad."""
        if arm not in (0, 1):
            raise ValueError(f"arm must be 0 or 1, got {arm}")
        i = self.total + 1
        lam = self.wager(is_good, i)
        step = apply_bet(self.ledger, lam, arm, 0.5, i)
        if arm == 1:
            self.total_trt += 1
            self.good_trt += is_good
        else:
            self.total_ctrl += 1
            self.good_ctrl += is_good
        return step

    def state_dict(self) -> dict:
        return {
            "burn_in": self.sched.burn_in,
            "ramp": self.sched.ramp,
            "states": list(self.model.states),
            "absorbing": sorted(self.model.absorbing),
            "good": sorted(list(pair) for pair in self.model.good),
            "good_trt": self.good_trt,
            "total_trt": self.total_trt,
            "good_ctrl": self.good_ctrl,
            "total_ctrl": self.total_ctrl,
            "ledger": self.ledger.state_dict(),
        }

    @classmethod
    def from_state_dict(cls, d: dict) -> "MultistateState":
        model = StateModel(
            states=tuple(d["states"]),
            absorbing=frozenset(d["absorbing"]),
            good=frozenset(tuple(pair) for pair in d["good"]),
        )
        state = cls(
            model=model,
            sched=RampSchedule(d["burn_in"], d["ramp"]),
            alpha=d["ledger"]["alpha"],
            record_steps=False,
        )
        state.good_trt = d["good_trt"]
        state.total_trt = d["total_trt"]
        state.good_ctrl = d["good_ctrl"]
        state.total_ctrl = d["total_ctrl"]
        state.ledger = WealthLedger.from_state_dict(d["ledger"])
        return state


def multistate_step(state: MultistateState, transition: tuple, arm: int):
    return state.step(transition[0], transition[1], arm)

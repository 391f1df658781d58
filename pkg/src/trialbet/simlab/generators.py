"""Trial generators for the Monte Carlo lab.

Every generator takes a ``numpy.random.Generator`` and draws in a fixed
order, so a replication is fully determined by its RNG stream.  Arms are
i.i.d. Bernoulli(p) rather than block-randomized, matching the simulation
design the operating characteristics are calibrated against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..multistate import DEFAULT_MODEL, TransitionMatrix


def binary_trial(rng, n: int, rate_trt: float, rate_ctrl: float, p_alloc: float = 0.5):
    """(treatment, outcome) arrays for ``n`` patients with per-arm event rates."""
    treatment = (rng.random(n) < p_alloc).astype(np.int8)
    rates = np.where(treatment == 1, rate_trt, rate_ctrl)
    outcome = (rng.random(n) < rates).astype(np.int8)
    return treatment, outcome


def death_stream(rng, n_deaths: int, coin: float):
    """Arm labels of ``n_deaths`` deaths; each is treatment with probability ``coin``."""
    return (rng.random(n_deaths) < coin).astype(np.int8)


def continuous_trial(rng, n: int, mu_trt: float, mu_ctrl: float, sd: float = 1.0,
                     p_alloc: float = 0.5):
    """(treatment, outcome) arrays with normal outcomes of equal variance."""
    treatment = (rng.random(n) < p_alloc).astype(np.int8)
    outcome = rng.normal(np.where(treatment == 1, mu_trt, mu_ctrl), sd)
    return treatment, outcome


def survival_trial(rng, n: int, hr: float = 1.0, shape: float = 1.2, scale: float = 10.0,
                   censor_upper: float | None = None, recruit_period: float | None = None):
    """Weibull survival trial; returns (time, status, treatment, entry).

    The hazard ratio acts through the treatment-arm scale,
    ``scale / hr**(1/shape)``, so ``shape`` is shared and the hazards are
    proportional.  ``shape=1`` gives exponential survival.  With
    ``censor_upper`` set, independent Uniform(0, censor_upper) censoring is
    applied.  With ``recruit_period`` set, entries are Uniform(0, period) and
    the returned times are calendar event times (entry + time on study);
    otherwise entry is all zeros.
    """
    treatment = (rng.random(n) < 0.5).astype(np.int8)
    scale_trt = scale / (hr ** (1.0 / shape))
    u = rng.random(n)
    time = np.where(treatment == 1, scale_trt, scale) * (-np.log(u)) ** (1.0 / shape)
    if censor_upper is not None:
        c = rng.uniform(0.0, censor_upper, n)
        status = (time <= c).astype(np.int8)
        time = np.minimum(time, c)
    else:
        status = np.ones(n, dtype=np.int8)
    if recruit_period is not None:
        entry = rng.uniform(0.0, recruit_period, n)
        time = entry + time
    else:
        entry = np.zeros(n)
    return time, status, treatment, entry


@dataclass(frozen=True)
class MultistateTrial:
    """One simulated trajectory trial, transitions flattened in patient order."""

    good: np.ndarray         # bool per transition
    arms: np.ndarray         # int8 per transition
    final_states: np.ndarray # state index per patient at the horizon
    patient_arms: np.ndarray # int8 per patient


def multistate_trial(rng, n_patients: int, matrix_trt: TransitionMatrix,
                     matrix_ctrl: TransitionMatrix, start: str = "ICU",
                     horizon: int = 28) -> MultistateTrial:
    """Simulate daily state paths for a cohort and flatten their transitions.

    Paths are drawn day-synchronously for the whole cohort (absorbing rows
    are identity, so absorbed patients simply stay put), then transitions are
    emitted grouped by patient in day order - the order the monitoring stream
    replays them in.
    """
    model = matrix_trt.model
    if matrix_ctrl.model != model:
        raise ValueError("arm matrices must share one state model")
    arms = (rng.random(n_patients) < 0.5).astype(np.int8)
    cum = np.stack([matrix_ctrl.as_array().cumsum(axis=1),
                    matrix_trt.as_array().cumsum(axis=1)])
    n_states = len(model.states)
    states = np.empty((n_patients, horizon + 1), dtype=np.int8)
    states[:, 0] = model.index(start)
    for day in range(horizon):
        rows = cum[arms, states[:, day]]
        u = rng.random(n_patients)
        # (u >= cum).sum() is the categorical draw; clip guards the
        # measure-zero case of u landing past a row that sums to 1-ulp.
        states[:, day + 1] = np.minimum((u[:, None] >= rows).sum(axis=1), n_states - 1)
    changed = states[:, 1:] != states[:, :-1]
    pat_idx, day_idx = np.nonzero(changed)  # row-major: grouped by patient
    frm = states[pat_idx, day_idx]
    to = states[pat_idx, day_idx + 1]
    good_pairs = {(model.index(a), model.index(b)) for a, b in model.good}
    good = np.zeros(len(pat_idx), dtype=bool)
    for a, b in good_pairs:
        good |= (frm == a) & (to == b)
    return MultistateTrial(
        good=good,
        arms=arms[pat_idx],
        final_states=states[:, horizon].copy(),
        patient_arms=arms,
    )


def day_horizon_distribution(rng, n_patients: int, matrix: TransitionMatrix,
                             start: str = "ICU", horizon: int = 28) -> np.ndarray:
    """Empirical state distribution at the horizon for one arm's matrix."""
    model = matrix.model
    cum = matrix.as_array().cumsum(axis=1)
    n_states = len(model.states)
    states = np.full(n_patients, model.index(start), dtype=np.int8)
    for _ in range(horizon):
        u = rng.random(n_patients)
        drawn = (u[:, None] >= cum[states]).sum(axis=1)
        states = np.minimum(drawn, n_states - 1).astype(np.int8)
    counts = np.bincount(states, minlength=len(model.states))
    return counts / n_patients


__all__ = [
    "binary_trial", "death_stream", "continuous_trial", "survival_trial",
    "MultistateTrial", "multistate_trial", "day_horizon_distribution",
    "DEFAULT_MODEL",
]

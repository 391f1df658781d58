"""Vectorized log-wealth engines for Monte Carlo replication.

Each function replays a complete event stream and returns the log-wealth
trajectory (one entry per observation, zero where no bet was placed).  The
semantics are identical to the streaming state classes - the equivalence is
pinned by tests - but expressed with cumulative sums so a replication costs
a handful of numpy passes instead of a Python loop.

Strategy variants used by the wage-asymmetry study live here as keyword
switches: ``fixed_dev`` for the binary monitor, ``bet_rule`` for survival,
``sign_only`` for continuous.
"""

from __future__ import annotations

import numpy as np

from ..core import WAGER_MAX, WAGER_MIN
from ..multistate import WAGER_MAX as MS_WAGER_MAX
from ..multistate import WAGER_MIN as MS_WAGER_MIN


def _ramp(idx: np.ndarray, burn_in: int, ramp: int) -> np.ndarray:
    return np.clip((idx - burn_in) / ramp, 0.0, 1.0)


def _shift(cum: np.ndarray) -> np.ndarray:
    """Prefix values: cum over entries strictly before each position."""
    out = np.empty_like(cum)
    out[0] = 0
    out[1:] = cum[:-1]
    return out


def first_crossing(log_wealth: np.ndarray, alpha: float) -> int | None:
    """1-based index of the first threshold crossing, or None."""
    hits = np.nonzero(log_wealth >= -np.log(alpha))[0]
    return int(hits[0]) + 1 if hits.size else None


def binary_log_wealth(treatment, outcome, p: float = 0.5, burn_in: int = 50,
                      ramp: int = 100, fixed_dev: float | None = None) -> np.ndarray:
    """Binary monitor replay; index i bets from counts over patients 1..i-1.

    ``fixed_dev`` switches to the prespecified-wager strategy: every patient
    (including the first) is bet at 0.5 + dev on events and 0.5 - dev on
    non-events, with no ramp.  A negative dev encodes a protective design
    direction.
    """
    t = np.asarray(treatment, dtype=np.int64)
    y = np.asarray(outcome, dtype=np.int64)
    n = t.size
    idx = np.arange(1, n + 1)
    if fixed_dev is None:
        n1_prev = _shift(np.cumsum(t))
        e1_prev = _shift(np.cumsum(t * y))
        n0_prev = idx - 1 - n1_prev
        e0_prev = _shift(np.cumsum((1 - t) * y))
        with np.errstate(invalid="ignore", divide="ignore"):
            rate1 = np.where(n1_prev > 0, e1_prev / np.maximum(n1_prev, 1), 0.5)
            rate0 = np.where(n0_prev > 0, e0_prev / np.maximum(n0_prev, 1), 0.5)
        delta = rate1 - rate0
        c = _ramp(idx, burn_in, ramp)
        lam = np.where(y == 1, 0.5 + 0.5 * c * delta, 0.5 - 0.5 * c * delta)
    else:
        lam = np.where(y == 1, 0.5 + fixed_dev, 0.5 - fixed_dev)
    lam = np.clip(lam, WAGER_MIN, WAGER_MAX)
    mult = np.where(t == 1, lam / p, (1.0 - lam) / (1.0 - p))
    log_mult = np.log(mult)
    if fixed_dev is None and n > 0:
        log_mult[0] = 0.0  # the first patient never bets
    return np.cumsum(log_mult)


def deaths_log_wealth(arms, burn_in: int = 30, ramp: int = 50) -> np.ndarray:
    """Deaths-only replay over an ordered stream of death arm labels."""
    a = np.asarray(arms, dtype=np.int64)
    n = a.size
    idx = np.arange(1, n + 1)
    d1_prev = _shift(np.cumsum(a))
    tot_prev = idx - 1
    p_obs = np.where(tot_prev > 0, d1_prev / np.maximum(tot_prev, 1), 0.5)
    c = _ramp(idx, burn_in, ramp)
    lam = np.where((idx > burn_in) & (tot_prev > 0),
                   np.clip(0.5 + c * (p_obs - 0.5), WAGER_MIN, WAGER_MAX),
                   0.5)
    mult = np.where(a == 1, lam / 0.5, (1.0 - lam) / 0.5)
    return np.cumsum(np.log(mult))


def survival_log_wealth(time, status, treatment, burn_in: int = 30, ramp: int = 50,
                        lambda_max: float = 0.25, bet_rule: str = "fixed",
                        presorted: bool = False) -> np.ndarray:
    """Survival replay; one entry per record (censored records bet nothing).

    ``bet_rule="fixed"`` is the standard monitor: magnitude ``c * lambda_max``
    in the direction of the cumulative score.  ``bet_rule="half_kelly"``
    replaces the fixed magnitude with half the running score-based log-hazard
    estimate Z/V (V the sum of p(1-p) over past events), clamped to [-0.5, 0.5].

    The ramp index counts records, not events, and risk sets start from the
    full cohort, so the whole trial's records are required up front.
    """
    t = np.asarray(time, dtype=float)
    s = np.asarray(status, dtype=np.int64)
    a = np.asarray(treatment, dtype=np.int64)
    if not presorted:
        order = np.argsort(t, kind="stable")
        t, s, a = t[order], s[order], a[order]
    elif np.any(np.diff(t) < 0):
        raise ValueError("stream not sorted by time on study")
    n = t.size
    idx = np.arange(1, n + 1)

    risk1 = int(a.sum()) - _shift(np.cumsum(a))
    risk0 = int((1 - a).sum()) - _shift(np.cumsum(1 - a))
    total = risk1 + risk0
    p_j = np.where(total > 0, risk1 / np.maximum(total, 1), 0.5)
    u = np.where(s == 1, a - p_j, 0.0)
    z_prev = _shift(np.cumsum(u))

    c = _ramp(idx, burn_in, ramp)
    if bet_rule == "fixed":
        b = np.where(idx > burn_in, c * lambda_max * np.sign(z_prev), 0.0)
    elif bet_rule == "half_kelly":
        v_prev = _shift(np.cumsum(np.where(s == 1, p_j * (1.0 - p_j), 0.0)))
        with np.errstate(invalid="ignore", divide="ignore"):
            log_hr_hat = np.where(v_prev > 0, z_prev / np.maximum(v_prev, 1e-300), 0.0)
        b = np.where(idx > burn_in, c * np.clip(0.5 * log_hr_hat, -0.5, 0.5), 0.0)
    else:
        raise ValueError(f"unknown bet_rule: {bet_rule!r}")
    mult = np.where(s == 1, 1.0 + b * u, 1.0)
    return np.cumsum(np.log(mult))


def multistate_log_wealth(good, arms, burn_in: int = 30, ramp: int = 50) -> np.ndarray:
    """Transition-stream replay; both arms need history before bets start."""
    g = np.asarray(good, dtype=np.int64)
    a = np.asarray(arms, dtype=np.int64)
    n = a.size
    idx = np.arange(1, n + 1)
    tot1_prev = _shift(np.cumsum(a))
    good1_prev = _shift(np.cumsum(a * g))
    tot0_prev = idx - 1 - tot1_prev
    good0_prev = _shift(np.cumsum((1 - a) * g))
    bettable = (idx > burn_in) & (tot1_prev > 0) & (tot0_prev > 0)
    rate1 = good1_prev / np.maximum(tot1_prev, 1)
    rate0 = good0_prev / np.maximum(tot0_prev, 1)
    delta = rate1 - rate0
    c = _ramp(idx, burn_in, ramp)
    lam = np.where(g == 1, 0.5 + 0.5 * c * delta, 0.5 - 0.5 * c * delta)
    lam = np.where(bettable, lam, 0.5)
    lam = np.clip(lam, MS_WAGER_MIN, MS_WAGER_MAX)
    mult = np.where(a == 1, lam / 0.5, (1.0 - lam) / 0.5)
    return np.cumsum(np.log(mult))


def continuous_log_wealth(treatment, outcome, p: float = 0.5, burn_in: int = 50,
                          ramp: int = 100, c_max: float = 0.6,
                          sign_only: bool = False) -> np.ndarray:
    """Continuous-monitor replay for a whole batch of same-length trials.

    ``treatment`` and ``outcome`` are (n_trials, n) matrices; rows are
    independent trials sharing a common length, which lets the per-step
    median/MAD scans run across the batch.  Returns the (n_trials, n)
    log-wealth matrix.  ``sign_only`` drops the magnitude of the running
    Cohen's d, keeping only its sign (the degraded strategy studied in the
    wage-asymmetry comparison).
    """
    t = np.atleast_2d(np.asarray(treatment, dtype=np.int64))
    y = np.atleast_2d(np.asarray(outcome, dtype=float))
    m, n = y.shape

    n1 = np.cumsum(t, axis=1)
    s1 = np.cumsum(t * y, axis=1)
    q1 = np.cumsum(t * y * y, axis=1)
    n0 = np.cumsum(1 - t, axis=1)
    s0 = np.cumsum((1 - t) * y, axis=1)
    q0 = np.cumsum((1 - t) * y * y, axis=1)

    def arm_stats(cnt, ssum, sqsum):
        with np.errstate(invalid="ignore", divide="ignore"):
            mean = ssum / np.maximum(cnt, 1)
            var = (sqsum - cnt * mean * mean) / np.maximum(cnt - 1, 1)
        sd = np.sqrt(np.maximum(var, 0.0))
        sd = np.where((cnt < 2) | (sd == 0.0), 1.0, sd)
        return mean, sd

    log_mult = np.zeros((m, n))
    for i in range(max(2, burn_in + 1), n + 1):  # 1-based index; (i-1) past values
        hist = y[:, : i - 1]
        med = np.median(hist, axis=1)
        mad = np.median(np.abs(hist - med[:, None]), axis=1)
        mad = np.where(np.isfinite(mad) & (mad > 0.0), mad, 1.0)
        r = (y[:, i - 1] - med) / mad
        g = r / (1.0 + np.abs(r))

        k = i - 2  # cumulative index of the last past observation
        m1, sd1 = arm_stats(n1[:, k], s1[:, k], q1[:, k])
        m0, sd0 = arm_stats(n0[:, k], s0[:, k], q0[:, k])
        s_pooled = np.sqrt((sd1 * sd1 + sd0 * sd0) / 2.0)
        d_hat = np.clip((m1 - m0) / s_pooled, -1.0, 1.0)
        d_hat = np.where((n1[:, k] == 0) | (n0[:, k] == 0), 0.0, d_hat)
        if sign_only:
            d_hat = np.sign(d_hat)

        ramp_frac = min(1.0, max(0.0, (i - burn_in) / ramp))
        lam = np.clip(0.5 + ramp_frac * c_max * g * d_hat, WAGER_MIN, WAGER_MAX)
        mult = np.where(t[:, i - 1] == 1, lam / p, (1.0 - lam) / (1.0 - p))
        log_mult[:, i - 1] = np.log(mult)
    return np.cumsum(log_mult, axis=1)

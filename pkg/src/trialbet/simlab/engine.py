"""Monte Carlo engine: operating characteristics, head-to-head, and wage studies.

Determinism contract: replication ``r`` of a scenario with master seed ``s``
always runs on ``SeedSequence(s, spawn_key=(r,))``, so results are identical
for any worker count and any chunking of the replication range.  Aggregation
uses only order-independent reductions over per-replication arrays.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..deaths import death_coin
from . import batch, generators
from .scenario import OperatingCharacteristics, SimScenario, multistate_matrices
from .sizing import size_logrank, size_t_test, size_two_proportion
from .strategies import BettingStrategy

_E_QUANTILES = (0.10, 0.25, 0.50, 0.75, 0.90)


def rep_rng(seed: int, rep: int) -> np.random.Generator:
    """Counter-derived RNG for replication ``rep`` of master seed ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(rep,)))


def _replicate(scenario: SimScenario, rep: int):
    """Run one replication; returns (first_crossing or nan, final_log_e, stream_len)."""
    p = scenario.params
    rng = rep_rng(scenario.seed, rep)
    variant = scenario.variant
    if variant == "binary":
        t, y = generators.binary_trial(rng, p["n_patients"], p["p_trt"], p["p_ctrl"],
                                       p["p_alloc"])
        logw = batch.binary_log_wealth(t, y, p["p_alloc"], p["burn_in"], p["ramp"],
                                       p["fixed_dev"])
    elif variant == "deaths":
        arms = generators.death_stream(rng, p["n_deaths"], p["coin"])
        logw = batch.deaths_log_wealth(arms, p["burn_in"], p["ramp"])
    elif variant == "survival":
        time, status, t, entry = generators.survival_trial(
            rng, p["n_patients"], p["hr"], p["shape"], p["scale"],
            p["censor_upper"], p["recruit_period"])
        study_time = time - entry  # identical to time when entry is simultaneous
        logw = batch.survival_log_wealth(study_time, status, t, p["burn_in"],
                                         p["ramp"], p["lambda_max"], p["bet_rule"])
    elif variant == "multistate":
        m_trt, m_ctrl = multistate_matrices(p["effect"], p["matrices"])
        trial = generators.multistate_trial(rng, p["n_patients"], m_trt, m_ctrl,
                                            p["start"], p["horizon"])
        if trial.arms.size < p["burn_in"]:
            return math.nan, 0.0, trial.arms.size
        logw = batch.multistate_log_wealth(trial.good, trial.arms, p["burn_in"],
                                           p["ramp"])
    elif variant == "continuous":
        raise RuntimeError("continuous replications run batched; see _run_range")
    else:  # pragma: no cover - scenario validation rejects this earlier
        raise ValueError(f"unknown variant {variant!r}")
    crossing = batch.first_crossing(logw, scenario.alpha)
    final = float(logw[-1]) if logw.size else 0.0
    return (math.nan if crossing is None else float(crossing)), final, logw.size


def _run_range(scenario: SimScenario, start: int, stop: int):
    """Replications [start, stop); returns (crossing, final_log_e, stream_len) arrays."""
    n = stop - start
    crossing = np.full(n, np.nan)
    final = np.zeros(n)
    length = np.zeros(n, dtype=np.int64)
    if scenario.variant == "continuous":
        p = scenario.params
        n_pat = p["n_patients"]
        t = np.empty((n, n_pat), dtype=np.int8)
        y = np.empty((n, n_pat))
        for k, rep in enumerate(range(start, stop)):
            rng = rep_rng(scenario.seed, rep)
            t[k], y[k] = generators.continuous_trial(
                rng, n_pat, p["mu_trt"], p["mu_ctrl"], p["sd"], p["p_alloc"])
        logw = batch.continuous_log_wealth(t, y, p["p_alloc"], p["burn_in"],
                                           p["ramp"], p["c_max"], p["sign_only"])
        log_thresh = -math.log(scenario.alpha)
        for k in range(n):
            hits = np.nonzero(logw[k] >= log_thresh)[0]
            crossing[k] = hits[0] + 1 if hits.size else math.nan
            final[k] = logw[k, -1]
            length[k] = n_pat
    else:
        for k, rep in enumerate(range(start, stop)):
            crossing[k], final[k], length[k] = _replicate(scenario, rep)
    return crossing, final, length


def _chunk_bounds(n: int, n_chunks: int) -> list[tuple[int, int]]:
    edges = np.linspace(0, n, n_chunks + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def run_operating_characteristics(scenario: SimScenario,
                                  n_workers: int = 1) -> OperatingCharacteristics:
    """Estimate rejection rate, crossing time, and final e-value quantiles.

    Deterministic given (scenario, seed): per-replication RNG streams are
    derived by counter from the master seed, and aggregation is
    order-independent, so any ``n_workers`` gives bit-identical results.
    """
    n = scenario.n_sims
    if n_workers <= 1:
        crossing, final, length = _run_range(scenario, 0, n)
    else:
        bounds = _chunk_bounds(n, n_workers * 4)
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            parts = list(pool.map(_run_range, [scenario] * len(bounds),
                                  [a for a, _ in bounds], [b for _, b in bounds]))
        crossing = np.concatenate([p[0] for p in parts])
        final = np.concatenate([p[1] for p in parts])
        length = np.concatenate([p[2] for p in parts])

    crossed = ~np.isnan(crossing)
    n_rejected = int(crossed.sum())
    rate = n_rejected / n
    se = math.sqrt(rate * (1.0 - rate) / n)
    median_len = float(np.median(length))
    if n_rejected:
        med_cross = float(np.median(crossing[crossed]))
        frac = med_cross / median_len if median_len > 0 else None
    else:
        med_cross, frac = None, None
    log_q = np.quantile(final, _E_QUANTILES)
    quantiles = {f"q{int(q * 100):02d}": float(np.exp(v))
                 for q, v in zip(_E_QUANTILES, log_q)}
    return OperatingCharacteristics(
        variant=scenario.variant,
        n_sims=n,
        alpha=scenario.alpha,
        n_rejected=n_rejected,
        rejection_rate=rate,
        se=se,
        median_first_crossing=med_cross,
        median_crossing_fraction=frac,
        median_stream_length=median_len,
        final_e_median=float(np.exp(np.median(final))),
        final_e_quantiles=quantiles,
        params=dict(scenario.params),
        seed=scenario.seed,
    )


@dataclass(frozen=True)
class HeadToHeadRow:
    """Per-baseline comparison of the two monitors on identical trials."""

    baseline: float
    coin: float
    n_patients: int
    mean_deaths: float
    binary_power: float
    deaths_power: float
    delta_pp: float       # deaths-only minus binary, percentage points
    winner: str


def head_to_head_deaths_vs_binary(baselines, arr: float = 0.05, power: float = 0.80,
                                  alpha: float = 0.05, n_sims: int = 1000,
                                  seed: int = 0) -> list[HeadToHeadRow]:
    """Run both monitors on the same simulated trials across baseline rates.

    The binary monitor sees every patient; the deaths-only monitor sees just
    the arm labels of patients with events, in enrollment order.  Each
    baseline is sized for the frequentist two-proportion design at ``power``.
    """
    rows = []
    for b_idx, baseline in enumerate(baselines):
        p_trt = baseline - arr
        n_pat = size_two_proportion(baseline, p_trt, power, alpha)
        coin = death_coin(baseline, p_trt)
        bin_hits = 0
        death_hits = 0
        total_deaths = 0
        for rep in range(n_sims):
            rng = rep_rng(seed, b_idx * n_sims + rep)
            t, y = generators.binary_trial(rng, n_pat, p_trt, baseline)
            logw_bin = batch.binary_log_wealth(t, y)
            if batch.first_crossing(logw_bin, alpha) is not None:
                bin_hits += 1
            death_arms = t[y == 1]
            total_deaths += death_arms.size
            logw_d = batch.deaths_log_wealth(death_arms)
            if logw_d.size and batch.first_crossing(logw_d, alpha) is not None:
                death_hits += 1
        bin_power = bin_hits / n_sims
        death_power = death_hits / n_sims
        delta = (death_power - bin_power) * 100.0
        winner = "deaths" if delta > 1.0 else ("binary" if delta < -1.0 else "tied")
        rows.append(HeadToHeadRow(baseline, coin, n_pat, total_deaths / n_sims,
                                  bin_power, death_power, delta, winner))
    return rows


@dataclass(frozen=True)
class WageCell:
    """Power and final-evidence summary for one (strategy, effect) cell."""

    variant: str
    strategy: str
    effect: float
    n_patients: int
    n_sims: int
    power: float
    se: float
    median_final_e: float
    median_crossing: float | None


def _wage_design_n(variant: str, effect: float, power: float, alpha: float,
                   p_ctrl: float) -> int:
    if variant == "survival":
        return size_logrank(effect, power, alpha)
    if variant == "binary":
        return size_two_proportion(p_ctrl, p_ctrl - effect, power, alpha)
    return size_t_test(effect, power, alpha)


def wage_study(variant: str, strategies, effects, n_patients: int | None = None,
               n_sims: int = 1000, alpha: float = 0.05, seed: int = 0,
               p_ctrl: float = 0.40, sd: float = 1.0, shape: float = 1.2,
               scale: float = 10.0, design_power: float = 0.80) -> list[WageCell]:
    """Compare betting strategies cell by cell on common simulated trials.

    ``effects`` are true hazard ratios (survival), true absolute risk
    reductions (binary, against ``p_ctrl``), or true standardized mean
    differences (continuous).  With ``n_patients=None`` each effect runs at
    its own frequentist design size at ``design_power`` (the convention the
    strategy comparisons are calibrated against); pass an explicit
    ``n_patients`` to hold the trial size fixed across effects.  Within one
    effect, every strategy replays the same trials, so cell contrasts are
    paired.
    """
    strategies = [s if isinstance(s, BettingStrategy) else BettingStrategy(*s)
                  for s in strategies]
    for s in strategies:
        s.validate(variant)
    if variant not in ("survival", "binary", "continuous"):
        raise ValueError(f"wage study does not cover variant {variant!r}")
    cells = []
    for e_idx, effect in enumerate(effects):
        n_pat = n_patients if n_patients is not None else \
            _wage_design_n(variant, effect, design_power, alpha, p_ctrl)
        trials = []
        for rep in range(n_sims):
            rng = rep_rng(seed, e_idx * n_sims + rep)
            if variant == "survival":
                time, status, t, _ = generators.survival_trial(
                    rng, n_pat, effect, shape, scale)
                order = np.argsort(time, kind="stable")
                trials.append((time[order], status[order], t[order]))
            elif variant == "binary":
                trials.append(generators.binary_trial(rng, n_pat,
                                                      p_ctrl - effect, p_ctrl))
            else:
                trials.append(generators.continuous_trial(rng, n_pat,
                                                          effect, 0.0, sd))
        for s in strategies:
            crossings, finals = _wage_evaluate(variant, s, trials, alpha)
            hits = [c for c in crossings if c is not None]
            power = len(hits) / n_sims
            cells.append(WageCell(
                variant=variant,
                strategy=s.label(),
                effect=effect,
                n_patients=n_pat,
                n_sims=n_sims,
                power=power,
                se=math.sqrt(power * (1.0 - power) / n_sims),
                median_final_e=float(np.exp(np.median(finals))),
                median_crossing=float(np.median(hits)) if hits else None,
            ))
    return cells


def _wage_evaluate(variant: str, strategy: BettingStrategy, trials, alpha: float):
    """Replay every trial under one strategy; continuous runs as one batch."""
    crossings, finals = [], []
    if variant == "continuous":
        t = np.stack([tr[0] for tr in trials])
        y = np.stack([tr[1] for tr in trials])
        if strategy.kind == "adaptive":
            logw = batch.continuous_log_wealth(t, y)
        else:
            logw = batch.continuous_log_wealth(t, y, c_max=strategy.value,
                                               sign_only=True)
        for row in logw:
            crossings.append(batch.first_crossing(row, alpha))
            finals.append(float(row[-1]))
        return crossings, finals
    for data in trials:
        if variant == "survival":
            time, status, t = data
            if strategy.kind == "fixed":
                logw = batch.survival_log_wealth(time, status, t, presorted=True,
                                                 lambda_max=strategy.value)
            else:
                logw = batch.survival_log_wealth(time, status, t, presorted=True,
                                                 bet_rule="half_kelly")
        else:  # binary
            t, y = data
            dev = None if strategy.kind == "adaptive" else -abs(strategy.value)
            logw = batch.binary_log_wealth(t, y, fixed_dev=dev)
        crossings.append(batch.first_crossing(logw, alpha))
        finals.append(float(logw[-1]))
    return crossings, finals

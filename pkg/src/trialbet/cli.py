"""Command-line interface: live monitoring, simulation studies, and exports.

Commands
--------
monitor       consume an NDJSON event stream, with resumable checkpoints
simulate      estimate operating characteristics for a scenario file
power         frequentist sample-size calculators used for trial design
compare       deaths-only vs binary monitor on identical simulated trials
wage          betting-strategy comparison (fixed vs adaptive wagers)
trajectories  export simulated wealth trajectories as CSV (and optional SVG)

Exit codes: 0 = completed without crossing, 10 = threshold crossed,
1 = error.  All randomness is controlled by explicit ``--seed`` flags.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from datetime import datetime, timezone

import numpy as np

from . import checkpoint as ckpt
from .binary import BinaryState
from .continuous import ContinuousState
from .core import RampSchedule
from .deaths import DeathsState
from .multistate import MultistateState
from .simlab import engine, generators, sizing
from .simlab.scenario import SCHEMA_VERSION, SimScenario, multistate_matrices
from .simlab.strategies import BettingStrategy
from .survival import SurvivalRecord, SurvivalState

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CROSSED = 10

_DEFAULT_SCHEDULES = {
    "binary": (50, 100),
    "deaths": (30, 50),
    "continuous": (50, 100),
    "survival": (30, 50),
    "multistate": (30, 50),
}

_EVENT_FIELDS = {
    "binary": ({"arm", "outcome"}, set()),
    "deaths": ({"arm"}, set()),
    "continuous": ({"arm", "y"}, set()),
    "survival": ({"time", "status", "arm"}, {"entry_time"}),
    "multistate": ({"from", "to", "arm"}, {"day"}),
}


class EventError(ValueError):
    pass


def _require_binary_flag(record: dict, key: str, line_no: int) -> int:
    v = record[key]
    if v not in (0, 1):
        raise EventError(f"line {line_no}: field {key!r} must be 0 or 1, got {v!r}")
    return int(v)


def _require_finite(record: dict, key: str, line_no: int) -> float:
    v = record[key]
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
        raise EventError(f"line {line_no}: field {key!r} must be a finite number, got {v!r}")
    return float(v)


def parse_event(variant: str, line: str, line_no: int) -> dict:
    """Parse and strictly validate one NDJSON record.

    Unknown fields are rejected rather than ignored: a misspelled field in a
    monitoring stream must fail loudly, not silently change the analysis.
    """
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise EventError(f"line {line_no}: invalid JSON ({exc.msg})") from exc
    if not isinstance(record, dict):
        raise EventError(f"line {line_no}: record must be a JSON object")
    required, optional = _EVENT_FIELDS[variant]
    missing = required - set(record)
    if missing:
        raise EventError(f"line {line_no}: missing fields {sorted(missing)}")
    unknown = set(record) - required - optional
    if unknown:
        raise EventError(f"line {line_no}: unknown fields {sorted(unknown)}")
    out: dict = {"arm": _require_binary_flag(record, "arm", line_no)}
    if variant == "binary":
        out["outcome"] = _require_binary_flag(record, "outcome", line_no)
    elif variant == "continuous":
        out["y"] = _require_finite(record, "y", line_no)
    elif variant == "survival":
        out["time"] = _require_finite(record, "time", line_no)
        out["status"] = _require_binary_flag(record, "status", line_no)
        if "entry_time" in record:
            entry = _require_finite(record, "entry_time", line_no)
            if out["time"] - entry < 0:
                raise EventError(f"line {line_no}: negative time on study")
            out["time"] -= entry
    elif variant == "multistate":
        for key in ("from", "to"):
            if not isinstance(record[key], str):
                raise EventError(f"line {line_no}: field {key!r} must be a state name")
        out["from"] = record["from"]
        out["to"] = record["to"]
    return out


# ---------------------------------------------------------------------------
# monitor
# ---------------------------------------------------------------------------

def _monitor_config(args) -> dict:
    burn_default, ramp_default = _DEFAULT_SCHEDULES[args.variant]
    cfg = {
        "variant": args.variant,
        "alpha": args.alpha,
        "burn_in": args.burn_in if args.burn_in is not None else burn_default,
        "ramp": args.ramp if args.ramp is not None else ramp_default,
    }
    if args.variant in ("binary", "continuous"):
        cfg["p"] = args.p
    if args.variant == "continuous":
        cfg["c_max"] = args.c_max
    if args.variant == "survival":
        if args.risk_trt is None or args.risk_ctrl is None:
            raise EventError("survival monitoring needs --risk-trt and --risk-ctrl "
                             "(initial per-arm cohort sizes)")
        cfg["lambda_max"] = args.lambda_max
        cfg["risk_trt"] = args.risk_trt
        cfg["risk_ctrl"] = args.risk_ctrl
    return cfg


def _build_state(cfg: dict):
    sched = RampSchedule(cfg["burn_in"], cfg["ramp"])
    variant = cfg["variant"]
    if variant == "binary":
        return BinaryState(sched=sched, p=cfg["p"], alpha=cfg["alpha"], record_steps=False)
    if variant == "deaths":
        return DeathsState(sched=sched, alpha=cfg["alpha"], record_steps=False)
    if variant == "continuous":
        return ContinuousState(sched=sched, c_max=cfg["c_max"], p=cfg["p"],
                               alpha=cfg["alpha"], record_steps=False)
    if variant == "survival":
        return SurvivalState(risk_trt=cfg["risk_trt"], risk_ctrl=cfg["risk_ctrl"],
                             sched=sched, lambda_max=cfg["lambda_max"],
                             alpha=cfg["alpha"], record_steps=False)
    return MultistateState(sched=sched, alpha=cfg["alpha"], record_steps=False)


def _apply_event(variant: str, state, ev: dict, line_no: int):
    try:
        if variant == "binary":
            return state.step(ev["outcome"], ev["arm"])
        if variant == "deaths":
            return state.step(ev["arm"])
        if variant == "continuous":
            return state.step(ev["y"], ev["arm"])
        if variant == "survival":
            return state.step(SurvivalRecord(ev["time"], ev["status"], ev["arm"]))
        return state.step(ev["from"], ev["to"], ev["arm"])
    except ValueError as exc:
        raise EventError(f"line {line_no}: {exc}") from exc


def _monitor_summary(variant: str, state, events: int) -> dict:
    led = state.ledger
    out = {
        "schema": SCHEMA_VERSION,
        "variant": variant,
        "events": events,
        "e_value": led.wealth,
        "log_e_value": led.log_wealth,
        "threshold": led.threshold,
        "crossed": led.crossed,
        "crossed_at": led.crossed_at,
    }
    if variant == "binary":
        out["delta_hat"] = state.delta()
        out["counts"] = {"n_trt": state.n_trt, "e_trt": state.e_trt,
                         "n_ctrl": state.n_ctrl, "e_ctrl": state.e_ctrl}
    elif variant == "deaths":
        out["p_hat"] = state.p_hat()
        out["relative_risk"] = state.final_rr()
        out["counts"] = {"d_trt": state.d_trt, "d_ctrl": state.d_ctrl}
    elif variant == "continuous":
        out["cohens_d"] = state.cohens_d()
        out["n"] = state.i
    elif variant == "survival":
        out["cum_score"] = state.cum_z
        out["risk_set"] = {"trt": state.risk_trt, "ctrl": state.risk_ctrl}
    elif variant == "multistate":
        out["delta_hat"] = state.delta()
        out["counts"] = {"good_trt": state.good_trt, "total_trt": state.total_trt,
                         "good_ctrl": state.good_ctrl, "total_ctrl": state.total_ctrl}
    if isinstance(out.get("relative_risk"), float) and math.isinf(out["relative_risk"]):
        out["relative_risk"] = "inf"
    return out


def _event_count(variant: str, state) -> int:
    if variant == "binary":
        return state.i
    if variant == "deaths":
        return state.total
    if variant == "continuous":
        return state.i
    if variant == "survival":
        return state.records_seen
    return state.total


def cmd_monitor(args) -> int:
    cfg = _monitor_config(args)
    variant = args.variant
    position = 0  # line number of the last processed event
    if args.checkpoint and args.resume:
        state, position = ckpt.read_checkpoint_file(args.checkpoint, variant, cfg)
        print(f"resumed from checkpoint at line {position}", file=sys.stderr)
    else:
        state = _build_state(cfg)

    already_crossed = state.ledger.crossed
    stream = sys.stdin if args.input == "-" else open(args.input, encoding="utf-8")
    try:
        for line_no, line in enumerate(stream, start=1):
            if not line.strip():
                continue
            if line_no <= position:
                continue  # input replays the full stream; skip processed lines
            ev = parse_event(variant, line, line_no)
            _apply_event(variant, state, ev, line_no)
            position = line_no
            if state.ledger.crossed and not already_crossed:
                already_crossed = True
                stamp = datetime.now(timezone.utc).isoformat()
                print(f"CROSSED at event {state.ledger.crossed_at}: "
                      f"e-value {state.ledger.wealth:.3f} >= {state.ledger.threshold:g} "
                      f"[{stamp}]", file=sys.stderr)
            n_events = _event_count(variant, state)
            if args.progress_every and n_events % args.progress_every == 0:
                print(f"event {n_events}: e-value {state.ledger.wealth:.4g}",
                      file=sys.stderr)
            if (args.checkpoint and args.checkpoint_every
                    and n_events % args.checkpoint_every == 0):
                ckpt.write_checkpoint_file(args.checkpoint, variant, state, cfg, position)
    finally:
        if stream is not sys.stdin:
            stream.close()

    if args.checkpoint:
        ckpt.write_checkpoint_file(args.checkpoint, variant, state, cfg, position)
    report = _monitor_summary(variant, state, _event_count(variant, state))
    json.dump(report, sys.stdout, indent=2)
    print()
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    return EXIT_CROSSED if state.ledger.crossed else EXIT_OK


# ---------------------------------------------------------------------------
# simulate / power / compare / wage / trajectories
# ---------------------------------------------------------------------------

def _load_scenario(args) -> SimScenario:
    with open(args.scenario, encoding="utf-8") as fh:
        doc = json.load(fh)
    scenario = SimScenario.from_dict(doc)
    sims = getattr(args, "sims", None)
    seed = getattr(args, "seed", None)
    if sims is not None or seed is not None:
        scenario = SimScenario(variant=scenario.variant, params=dict(scenario.params),
                               n_sims=sims if sims is not None else scenario.n_sims,
                               alpha=scenario.alpha,
                               seed=seed if seed is not None else scenario.seed)
    return scenario


def cmd_simulate(args) -> int:
    scenario = _load_scenario(args)
    oc = engine.run_operating_characteristics(scenario, n_workers=args.workers)
    med_cross = ("-" if oc.median_first_crossing is None
                 else f"{oc.median_first_crossing:.0f} ({100 * oc.median_crossing_fraction:.0f}%)")
    print(f"variant             {oc.variant}")
    print(f"replications        {oc.n_sims}  (seed {oc.seed})")
    print(f"rejection rate      {oc.rejection_rate:.4f}  (SE {oc.se:.4f})")
    print(f"median crossing     {med_cross}")
    print(f"median stream len   {oc.median_stream_length:.0f}")
    print(f"median final e      {oc.final_e_median:.4g}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(oc.to_dict(), fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def cmd_power(args) -> int:
    if args.variant in ("binary", "deaths") and (args.p1 is None or args.p2 is None):
        raise ValueError(f"--p1 and --p2 are required for {args.variant} sizing")
    if args.variant == "continuous" and args.d is None:
        raise ValueError("--d is required for continuous sizing")
    if args.variant == "survival" and args.hr is None:
        raise ValueError("--hr is required for survival sizing")
    if args.variant == "binary":
        print(sizing.size_two_proportion(args.p1, args.p2, args.power, args.alpha))
    elif args.variant == "continuous":
        print(sizing.size_t_test(args.d, args.power, args.alpha))
    elif args.variant == "survival":
        print(sizing.size_logrank(args.hr, args.power, args.alpha))
    else:  # deaths
        design = sizing.deaths_design(args.p1, args.p2, args.power, args.alpha)
        print(f"frequentist N       {design.n_freq}")
        print(f"deaths-only N       {design.n_patients}")
        print(f"expected deaths     {design.deaths_alt} (alt) / {design.deaths_null} (null)")
        print(f"death coin          {design.coin:.3f}")
    return EXIT_OK


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# schema: trialbet.v{SCHEMA_VERSION}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def cmd_compare(args) -> int:
    baselines = [float(b) for b in args.baselines.split(",")]
    rows = engine.head_to_head_deaths_vs_binary(
        baselines, arr=args.arr, power=args.power, alpha=args.alpha,
        n_sims=args.sims, seed=args.seed)
    print(f"{'baseline':>8} {'coin':>6} {'N':>6} {'deaths':>7} "
          f"{'binary':>7} {'deaths-only':>11} {'delta':>7}  winner")
    for r in rows:
        print(f"{r.baseline:8.2f} {r.coin:6.3f} {r.n_patients:6d} {r.mean_deaths:7.1f} "
              f"{100 * r.binary_power:6.1f}% {100 * r.deaths_power:10.1f}% "
              f"{r.delta_pp:+6.1f}pp  {r.winner}")
    if args.csv:
        _write_csv(args.csv,
                   ["baseline", "coin", "n_patients", "mean_deaths",
                    "binary_power", "deaths_power", "delta_pp", "winner"],
                   [[r.baseline, r.coin, r.n_patients, r.mean_deaths,
                     r.binary_power, r.deaths_power, r.delta_pp, r.winner] for r in rows])
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump({"schema": SCHEMA_VERSION,
                       "rows": [r.__dict__ for r in rows]}, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def _wage_setup(args):
    # n stays None unless --n is given: each effect then runs at its own
    # frequentist design size, the convention the comparisons calibrate to
    if args.variant == "survival":
        effects = [float(x) for x in args.hr.split(",")]
        fixed = args.fixed if args.fixed is not None else 0.25
        strategies = [BettingStrategy("fixed", fixed), BettingStrategy("half-kelly")]
    elif args.variant == "binary":
        effects = [float(x) for x in args.arr.split(",")]
        fixed = args.fixed if args.fixed is not None else 0.10
        strategies = [BettingStrategy("adaptive"), BettingStrategy("fixed", fixed)]
    else:
        effects = [float(x) for x in args.d.split(",")]
        strategies = [BettingStrategy("adaptive"), BettingStrategy("sign-only", args.sign_c)]
    return effects, args.n, strategies


def cmd_wage(args) -> int:
    effects, n, strategies = _wage_setup(args)
    cells = engine.wage_study(args.variant, strategies, effects, n,
                              n_sims=args.sims, alpha=args.alpha, seed=args.seed)
    print(f"{'effect':>8} {'strategy':>16} {'power':>7} {'median E':>10} {'med cross':>10}")
    for c in cells:
        cross = "-" if c.median_crossing is None else f"{c.median_crossing:.0f}"
        print(f"{c.effect:8.2f} {c.strategy:>16} {100 * c.power:6.1f}% "
              f"{c.median_final_e:10.3g} {cross:>10}")
    if args.csv:
        _write_csv(args.csv,
                   ["variant", "strategy", "effect", "n_patients", "n_sims",
                    "power", "se", "median_final_e", "median_crossing"],
                   [[c.variant, c.strategy, c.effect, c.n_patients, c.n_sims,
                     c.power, c.se, c.median_final_e, c.median_crossing] for c in cells])
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump({"schema": SCHEMA_VERSION,
                       "cells": [c.__dict__ for c in cells]}, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def _trajectory_rows(scenario: SimScenario, n_trials: int) -> list[list]:
    """Replay ``n_trials`` replications through the streaming monitors.

    Uses the same per-replication seeding as the Monte Carlo engine, so
    trajectory exports show exactly the trials the engine scored.
    """
    rows = []
    p = scenario.params
    for trial in range(n_trials):
        rng = engine.rep_rng(scenario.seed, trial)
        sched_args = dict(sched=RampSchedule(p["burn_in"], p["ramp"]),
                          alpha=scenario.alpha, record_steps=True)
        if scenario.variant == "binary":
            t, y = generators.binary_trial(rng, p["n_patients"], p["p_trt"],
                                           p["p_ctrl"], p["p_alloc"])
            state = BinaryState(p=p["p_alloc"], **sched_args)
            for outcome, arm in zip(y.tolist(), t.tolist()):
                state.step(outcome, arm)
        elif scenario.variant == "deaths":
            arms = generators.death_stream(rng, p["n_deaths"], p["coin"])
            state = DeathsState(**sched_args)
            for arm in arms.tolist():
                state.step(arm)
        elif scenario.variant == "continuous":
            t, y = generators.continuous_trial(rng, p["n_patients"], p["mu_trt"],
                                               p["mu_ctrl"], p["sd"], p["p_alloc"])
            state = ContinuousState(c_max=p["c_max"], p=p["p_alloc"], **sched_args)
            for value, arm in zip(y.tolist(), t.tolist()):
                state.step(value, arm)
        elif scenario.variant == "survival":
            time, status, t, entry = generators.survival_trial(
                rng, p["n_patients"], p["hr"], p["shape"], p["scale"],
                p["censor_upper"], p["recruit_period"])
            order = np.argsort(time - entry, kind="stable")
            state = SurvivalState(risk_trt=int(t.sum()), risk_ctrl=int((1 - t).sum()),
                                  lambda_max=p["lambda_max"], **sched_args)
            for k in order.tolist():
                state.step(SurvivalRecord(float(time[k] - entry[k]), int(status[k]),
                                          int(t[k])))
        else:  # multistate
            m_trt, m_ctrl = multistate_matrices(p["effect"], p["matrices"])
            trial_data = generators.multistate_trial(rng, p["n_patients"], m_trt,
                                                     m_ctrl, p["start"], p["horizon"])
            state = MultistateState(**sched_args)
            for is_good, arm in zip(trial_data.good.tolist(), trial_data.arms.tolist()):
                state.step_classified(is_good, arm)
        for step in state.ledger.steps:
            rows.append([trial + 1, step.index, step.wager, step.multiplier, step.wealth])
    return rows


def _write_svg(path: str, rows: list[list], threshold: float) -> None:
    """Minimal log-scale trajectory plot; one polyline per trial."""
    width, height, margin = 840, 520, 50
    by_trial: dict[int, list[tuple[int, float]]] = {}
    for trial, index, _, _, wealth in rows:
        by_trial.setdefault(trial, []).append((index, wealth))
    max_x = max((pt[0] for pts in by_trial.values() for pt in pts), default=1)
    vals = [max(pt[1], 1e-12) for pts in by_trial.values() for pt in pts]
    lo = min(min(vals, default=1.0), 1.0 / threshold)
    hi = max(max(vals, default=1.0), threshold * 2)
    ly_lo, ly_hi = math.log10(lo), math.log10(hi)

    def sx(x): return margin + (width - 2 * margin) * x / max_x
    def sy(v): return height - margin - (height - 2 * margin) * \
        (math.log10(max(v, 1e-12)) - ly_lo) / (ly_hi - ly_lo)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>']
    ty = sy(threshold)
    parts.append(f'<line x1="{margin}" y1="{ty:.1f}" x2="{width - margin}" y2="{ty:.1f}" '
                 f'stroke="red" stroke-dasharray="6,4"/>')
    oy = sy(1.0)
    parts.append(f'<line x1="{margin}" y1="{oy:.1f}" x2="{width - margin}" y2="{oy:.1f}" '
                 f'stroke="gray" stroke-dasharray="2,4"/>')
    decade = math.ceil(ly_lo)
    while decade <= ly_hi:
        yy = sy(10 ** decade)
        parts.append(f'<text x="4" y="{yy + 4:.1f}" font-size="11">1e{decade}</text>')
        decade += 1
    for pts in by_trial.values():
        path_d = " ".join(f"{sx(x):.1f},{sy(v):.1f}" for x, v in pts)
        parts.append(f'<polyline points="{path_d}" fill="none" stroke="steelblue" '
                     f'stroke-opacity="0.45" stroke-width="1"/>')
    parts.append(f'<text x="{margin}" y="{height - 12}" font-size="11">'
                 f'observation index (threshold {threshold:g})</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts))
        fh.write("\n")


def cmd_trajectories(args) -> int:
    scenario = _load_scenario(args)
    rows = _trajectory_rows(scenario, args.trials)
    _write_csv(args.out, ["trial", "index", "lambda", "multiplier", "wealth"], rows)
    if args.svg:
        _write_svg(args.svg, rows, 1.0 / scenario.alpha)
    print(f"wrote {len(rows)} steps from {args.trials} trials to {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trialbet",
        description="Anytime-valid betting monitors for randomized trials.")
    sub = parser.add_subparsers(dest="command", required=True)

    mon = sub.add_parser("monitor", help="monitor an NDJSON event stream")
    mon.add_argument("--variant", required=True, choices=list(_DEFAULT_SCHEDULES))
    mon.add_argument("--input", default="-", help="NDJSON file, or - for stdin")
    mon.add_argument("--alpha", type=float, default=0.05)
    mon.add_argument("--burn-in", type=int, default=None)
    mon.add_argument("--ramp", type=int, default=None)
    mon.add_argument("--p", type=float, default=0.5, help="allocation probability")
    mon.add_argument("--c-max", type=float, default=0.6)
    mon.add_argument("--lambda-max", type=float, default=0.25)
    mon.add_argument("--risk-trt", type=int, default=None)
    mon.add_argument("--risk-ctrl", type=int, default=None)
    mon.add_argument("--checkpoint", default=None)
    mon.add_argument("--resume", action="store_true",
                     help="resume from --checkpoint before reading input")
    mon.add_argument("--checkpoint-every", type=int, default=0)
    mon.add_argument("--progress-every", type=int, default=0)
    mon.add_argument("--report", default=None, help="also write the JSON report here")
    mon.set_defaults(func=cmd_monitor)

    sim = sub.add_parser("simulate", help="operating characteristics for a scenario")
    sim.add_argument("--scenario", required=True)
    sim.add_argument("--sims", type=int, default=None)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--workers", type=int, default=1)
    sim.add_argument("--json", default=None)
    sim.set_defaults(func=cmd_simulate)

    pow_ = sub.add_parser("power", help="frequentist sample-size calculators")
    pow_.add_argument("--variant", required=True,
                      choices=["binary", "continuous", "survival", "deaths"])
    pow_.add_argument("--p1", type=float, default=None)
    pow_.add_argument("--p2", type=float, default=None)
    pow_.add_argument("--d", type=float, default=None)
    pow_.add_argument("--hr", type=float, default=None)
    pow_.add_argument("--power", type=float, default=0.80)
    pow_.add_argument("--alpha", type=float, default=0.05)
    pow_.set_defaults(func=cmd_power)

    cmp_ = sub.add_parser("compare", help="deaths-only vs binary on the same trials")
    cmp_.add_argument("--baselines", default="0.10,0.15,0.20,0.25,0.30,0.35,0.40")
    cmp_.add_argument("--arr", type=float, default=0.05)
    cmp_.add_argument("--power", type=float, default=0.80)
    cmp_.add_argument("--alpha", type=float, default=0.05)
    cmp_.add_argument("--sims", type=int, default=1000)
    cmp_.add_argument("--seed", type=int, default=0)
    cmp_.add_argument("--csv", default=None)
    cmp_.add_argument("--json", default=None)
    cmp_.set_defaults(func=cmd_compare)

    wage = sub.add_parser("wage", help="fixed vs adaptive wager comparison")
    wage.add_argument("--variant", required=True,
                      choices=["survival", "binary", "continuous"])
    wage.add_argument("--hr", default="0.80")
    wage.add_argument("--arr", default="0.05")
    wage.add_argument("--d", default="0.20")
    wage.add_argument("--n", type=int, default=None)
    wage.add_argument("--fixed", type=float, default=None)
    wage.add_argument("--sign-c", type=float, default=0.6)
    wage.add_argument("--sims", type=int, default=1000)
    wage.add_argument("--alpha", type=float, default=0.05)
    wage.add_argument("--seed", type=int, default=0)
    wage.add_argument("--csv", default=None)
    wage.add_argument("--json", default=None)
    wage.set_defaults(func=cmd_wage)

    traj = sub.add_parser("trajectories", help="export wealth trajectories")
    traj.add_argument("--scenario", required=True)
    traj.add_argument("--trials", type=int, default=30)
    traj.add_argument("--out", required=True)
    traj.add_argument("--svg", default=None)
    traj.add_argument("--seed", type=int, default=None)
    traj.set_defaults(func=cmd_trajectories)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

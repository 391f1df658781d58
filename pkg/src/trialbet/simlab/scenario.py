"""Scenario and result containers for the Monte Carlo lab.

A scenario pins everything a run needs - variant, generator parameters,
replication count, alpha, and the master seed - so that identical scenarios
reproduce identical operating characteristics bit for bit, regardless of how
many workers execute them.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Mapping

from ..multistate import CONTROL_DAILY, TREATMENT_DAILY, TransitionMatrix

SCHEMA_VERSION = 1

VARIANTS = ("binary", "deaths", "continuous", "survival", "multistate")

# Per-variant parameter defaults; None marks a required key.
_PARAM_SPECS: dict[str, dict[str, Any]] = {
    "binary": {
        "n_patients": None, "p_ctrl": None, "p_trt": "=p_ctrl", "p_alloc": 0.5,
        "burn_in": 50, "ramp": 100, "fixed_dev": "none",
    },
    "deaths": {
        "n_deaths": None, "coin": 0.5, "burn_in": 30, "ramp": 50,
    },
    "continuous": {
        "n_patients": None, "mu_ctrl": 0.0, "mu_trt": "=mu_ctrl", "sd": 1.0,
        "p_alloc": 0.5, "burn_in": 50, "ramp": 100, "c_max": 0.6, "sign_only": False,
    },
    "survival": {
        "n_patients": None, "hr": 1.0, "shape": 1.2, "scale": 10.0,
        "censor_upper": "none", "recruit_period": "none",
        "burn_in": 30, "ramp": 50, "lambda_max": 0.25, "bet_rule": "fixed",
    },
    "multistate": {
        "n_patients": None, "effect": "alternative", "matrices": "none",
        "horizon": 28, "start": "ICU", "burn_in": 30, "ramp": 50,
    },
}


def normalize_params(variant: str, params: Mapping[str, Any]) -> dict[str, Any]:
    """Validate a raw parameter mapping and fill defaults.

    Unknown keys are rejected rather than ignored; a silently dropped typo in
    a monitoring configuration is worse than a hard error.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    param_spec = _PARAM_SPECS[variant]
    unknown = set(params) - set(param_spec)
    if unknown:
        raise ValueError(f"unknown parameters for {variant}: {sorted(unknown)}")
    out: dict[str, Any] = {}
    for key, default in param_spec.items():
        if key in params:
            out[key] = params[key]
        elif default is None:
            raise ValueError(f"missing required parameter {key!r} for {variant}")
        elif isinstance(default, str) and default.startswith("="):
            out[key] = None  # alias resolved below
        elif default == "none":
            out[key] = None
        else:
            out[key] = default
    if variant == "binary" and out["p_trt"] is None:
        out["p_trt"] = out["p_ctrl"]
    if variant == "continuous" and out["mu_trt"] is None:
        out["mu_trt"] = out["mu_ctrl"]
    if variant == "multistate":
        if out["effect"] not in ("alternative", "null"):
            raise ValueError("multistate effect must be 'alternative' or 'null'")
        if out["matrices"] is not None:
            m = out["matrices"]
            if set(m) != {"trt", "ctrl"}:
                raise ValueError("matrices must provide exactly 'trt' and 'ctrl' rows")
    return out


def multistate_matrices(effect: str,
                        matrices: Mapping[str, Any] | None = None,
                        ) -> tuple[TransitionMatrix, TransitionMatrix]:
    """(treatment, control) daily matrices for the configured scenario.

    Explicit ``matrices`` (row lists keyed ``trt``/``ctrl``) override the
    built-in pair; otherwise ``effect`` selects the built-in alternative or
    the all-control null.
    """
    if matrices is not None:
        return (TransitionMatrix(tuple(map(tuple, matrices["trt"]))),
                TransitionMatrix(tuple(map(tuple, matrices["ctrl"]))))
    if effect == "alternative":
        return TREATMENT_DAILY, CONTROL_DAILY
    return CONTROL_DAILY, CONTROL_DAILY


@dataclass(frozen=True)
class SimScenario:
    """One Monte Carlo configuration: variant, generator parameters, and seed."""

    variant: str
    params: dict[str, Any]
    n_sims: int = 2000
    alpha: float = 0.05
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_sims < 1:
            raise ValueError("n_sims must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must be in (0,1)")
        object.__setattr__(self, "params", normalize_params(self.variant, self.params))

    def to_dict(self) -> dict[str, Any]:
        return {"schema": SCHEMA_VERSION, **asdict(self)}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "SimScenario":
        d = dict(d)
        d.pop("schema", None)
        return cls(
            variant=d["variant"],
            params=dict(d.get("params", {})),
            n_sims=int(d.get("n_sims", 2000)),
            alpha=float(d.get("alpha", 0.05)),
            seed=int(d.get("seed", 0)),
        )


@dataclass(frozen=True)
class OperatingCharacteristics:
    """Estimated operating characteristics of one scenario."""

    variant: str
    n_sims: int
    alpha: float
    n_rejected: int
    rejection_rate: float
    se: float
    median_first_crossing: float | None
    median_crossing_fraction: float | None
    median_stream_length: float
    final_e_median: float
    final_e_quantiles: dict[str, float] = field(default_factory=dict)
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {"schema": SCHEMA_VERSION, **asdict(self)}

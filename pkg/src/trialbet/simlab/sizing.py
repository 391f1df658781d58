"""Frequentist sample-size calculators used to design the simulated trials.

These reproduce the conventional calculators the simulation studies size
against: the normal-approximation two-proportion test, the two-sample
noncentral-t power calculation, and the Schoenfeld-style event count for a
log-rank design.  Each returns a *total* count (both arms), with the per-arm
count rounded up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq
from scipy.stats import nct, norm
from scipy.stats import t as t_dist

from ..deaths import death_coin, expected_deaths

DEATHS_INFLATION = 2.5  # deaths-only design inflation over the frequentist N


def size_two_proportion(p1: float, p2: float, power: float, alpha: float = 0.05) -> int:
    """Total N (both arms) for a two-sided two-proportion z-test.

    Pooled-variance normal approximation; per-arm n is rounded up, matching
    the standard calculator this mirrors.
    """
    for name, p in (("p1", p1), ("p2", p2)):
        if not 0.0 < p < 1.0:
            raise ValueError(f"{name} must be in (0,1), got {p}")
    if p1 == p2:
        raise ValueError("rates must differ")
    if not (0.0 < power < 1.0 and 0.0 < alpha < 1.0):
        raise ValueError("power and alpha must be in (0,1)")
    z_a = norm.ppf(1.0 - alpha / 2.0)
    z_b = norm.ppf(power)
    d = abs(p1 - p2)
    pbar = (p1 + p2) / 2.0
    n = ((z_a * math.sqrt(2.0 * pbar * (1.0 - pbar))
          + z_b * math.sqrt(p1 * (1.0 - p1) + p2 * (1.0 - p2))) / d) ** 2
    return 2 * math.ceil(n)


def size_t_test(d: float, power: float, alpha: float = 0.05) -> int:
    """Total N (both arms) for a two-sided two-sample t-test at effect size ``d``.

    Solves the exact noncentral-t power equation for the continuous per-arm
    n, then rounds up.
    """
    if d <= 0.0:
        raise ValueError(f"effect size must be > 0, got {d}")
    if not (0.0 < power < 1.0 and 0.0 < alpha < 1.0):
        raise ValueError("power and alpha must be in (0,1)")

    def achieved(n: float) -> float:
        nu = 2.0 * (n - 1.0)
        t_crit = t_dist.ppf(1.0 - alpha / 2.0, nu)
        return nct.sf(t_crit, nu, math.sqrt(n / 2.0) * d)

    n = brentq(lambda n: achieved(n) - power, 1.0001, 1e7, xtol=1e-9, rtol=1e-12)
    return 2 * math.ceil(n)


def size_logrank(target_hr: float, power: float, alpha: float = 0.05) -> int:
    """Total event count for a two-sided log-rank design at the target hazard ratio."""
    if target_hr <= 0.0 or target_hr == 1.0:
        raise ValueError(f"hazard ratio must be positive and != 1, got {target_hr}")
    if not (0.0 < power < 1.0 and 0.0 < alpha < 1.0):
        raise ValueError("power and alpha must be in (0,1)")
    z_a = norm.ppf(1.0 - alpha / 2.0)
    z_b = norm.ppf(power)
    return math.ceil(4.0 * ((z_a + z_b) / math.log(target_hr)) ** 2)


@dataclass(frozen=True)
class DeathsDesign:
    """Deaths-only design: inflated enrollment and the death streams it implies."""

    n_freq: int          # frequentist two-proportion total N
    n_patients: int      # inflated enrollment for deaths-only monitoring
    deaths_null: int     # expected deaths if both arms sit at the control rate
    deaths_alt: int      # expected deaths under the alternative
    coin: float          # death-coin probability under the alternative


def deaths_design(p_ctrl: float, p_trt: float, power: float = 0.80,
                  alpha: float = 0.05, inflation: float = DEATHS_INFLATION) -> DeathsDesign:
    """Size a deaths-only design by inflating the frequentist N.

    Deaths-only monitoring discards survivor information, so enrollment is
    inflated (default 2.5x) relative to the two-proportion design.
    """
    n_freq = size_two_proportion(p_ctrl, p_trt, power, alpha)
    n_patients = math.ceil(n_freq * inflation)
    return DeathsDesign(
        n_freq=n_freq,
        n_patients=n_patients,
        deaths_null=expected_deaths(n_patients, p_ctrl, p_ctrl),
        deaths_alt=expected_deaths(n_patients, p_ctrl, p_trt),
        coin=death_coin(p_ctrl, p_trt),
    )

import math

import numpy as np
import pytest

from trialbet.simlab import batch
from trialbet.simlab.engine import (
    head_to_head_deaths_vs_binary,
    run_operating_characteristics,
    wage_study,
)
from trialbet.simlab.scenario import SimScenario
from trialbet.simlab.strategies import BettingStrategy


def small_scenario(**over):
    base = dict(variant="binary",
                params={"n_patients": 150, "p_ctrl": 0.40, "p_trt": 0.30},
                n_sims=60, seed=42)
    base.update(over)
    return SimScenario(**base)


class TestScenario:
    def test_unknown_parameter_rejected(self):
        with pytest.raises(ValueError, match="unknown parameters"):
            SimScenario("binary", {"n_patients": 10, "p_ctrl": 0.4, "ramp_up": 3})

    def test_missing_required_rejected(self):
        with pytest.raises(ValueError, match="missing required"):
            SimScenario("binary", {"p_ctrl": 0.4})

    def test_unknown_variant_rejected(self):
        with pytest.raises(ValueError, match="unknown variant"):
            SimScenario("bayesian", {"n_patients": 10})

    def test_null_defaults(self):
        sc = SimScenario("binary", {"n_patients": 10, "p_ctrl": 0.4})
        assert sc.params["p_trt"] == 0.4
        assert sc.params["burn_in"] == 50 and sc.params["ramp"] == 100

    def test_json_round_trip(self):
        sc = small_scenario()
        clone = SimScenario.from_dict(sc.to_dict())
        assert clone == sc


class TestDeterminism:
    def test_identical_runs(self):
        a = run_operating_characteristics(small_scenario())
        b = run_operating_characteristics(small_scenario())
        assert a.to_dict() == b.to_dict()

    def test_seed_changes_results(self):
        a = run_operating_characteristics(small_scenario())
        b = run_operating_characteristics(small_scenario(seed=43))
        assert a.to_dict() != b.to_dict()

    def test_worker_count_invariance(self):
        scenario = small_scenario(n_sims=50)
        serial = run_operating_characteristics(scenario, n_workers=1)
        parallel = run_operating_characteristics(scenario, n_workers=2)
        assert serial.to_dict() == parallel.to_dict()

    def test_worker_count_invariance_continuous(self):
        scenario = SimScenario("continuous",
                               {"n_patients": 120, "mu_trt": 0.4},
                               n_sims=24, seed=7)
        serial = run_operating_characteristics(scenario, n_workers=1)
        parallel = run_operating_characteristics(scenario, n_workers=3)
        assert serial.to_dict() == parallel.to_dict()


class TestOperatingCharacteristics:
    def test_se_consistent_with_rate(self):
        oc = run_operating_characteristics(small_scenario())
        assert oc.se == pytest.approx(
            math.sqrt(oc.rejection_rate * (1 - oc.rejection_rate) / oc.n_sims))
        assert 0.0 <= oc.rejection_rate <= 1.0
        assert oc.n_rejected == round(oc.rejection_rate * oc.n_sims)

    def test_crossing_fraction_of_stream(self):
        oc = run_operating_characteristics(small_scenario(n_sims=200))
        if oc.median_first_crossing is not None:
            assert oc.median_crossing_fraction == pytest.approx(
                oc.median_first_crossing / oc.median_stream_length)

    def test_multistate_custom_matrices(self):
        rows = [[0.880, 0.070, 0.030, 0.020], [0.070, 0.915, 0.000, 0.015],
                [0, 0, 1, 0], [0, 0, 0, 1]]
        sc = SimScenario("multistate",
                         {"n_patients": 40,
                          "matrices": {"trt": rows, "ctrl": rows}},
                         n_sims=8, seed=2)
        oc = run_operating_characteristics(sc)
        assert oc.n_sims == 8
        with pytest.raises(ValueError, match="'trt' and 'ctrl'"):
            SimScenario("multistate", {"n_patients": 40, "matrices": {"trt": rows}})

    def test_multistate_short_trials_never_reject(self):
        # 2 patients rarely produce >= 30 transitions; such trials must not count
        sc = SimScenario("multistate", {"n_patients": 2}, n_sims=30, seed=1)
        oc = run_operating_characteristics(sc)
        assert oc.rejection_rate == 0.0

    def test_quantiles_present(self):
        oc = run_operating_characteristics(small_scenario())
        assert set(oc.final_e_quantiles) == {"q10", "q25", "q50", "q75", "q90"}
        assert oc.final_e_quantiles["q10"] <= oc.final_e_quantiles["q90"]


def test_first_crossing_is_anytime_valid():
    """Crossing is recorded at the first threshold hit even if wealth falls back."""
    logw = np.array([0.0, 1.0, math.log(25.0), 0.5, -2.0])
    assert batch.first_crossing(logw, 0.05) == 3
    assert batch.first_crossing(np.array([0.0, 1.0]), 0.05) is None


def test_head_to_head_smoke():
    rows = head_to_head_deaths_vs_binary([0.15, 0.40], n_sims=40, seed=3)
    assert [r.baseline for r in rows] == [0.15, 0.40]
    assert rows[0].n_patients == 1372 and rows[1].n_patients == 2942
    for r in rows:
        assert 0.0 <= r.binary_power <= 1.0 and 0.0 <= r.deaths_power <= 1.0
        assert r.delta_pp == pytest.approx(100 * (r.deaths_power - r.binary_power))


def test_wage_study_pairs_strategies_on_common_trials():
    cells = wage_study("binary",
                       [BettingStrategy("adaptive"), BettingStrategy("fixed", 0.05)],
                       effects=[0.05], n_patients=400, n_sims=30, seed=9)
    assert {c.strategy for c in cells} == {"adaptive", "fixed(0.05)"}
    for c in cells:
        assert c.n_sims == 30 and c.effect == 0.05


def test_wage_study_rejects_bad_strategy():
    with pytest.raises(ValueError, match="not available"):
        wage_study("binary", [BettingStrategy("half-kelly")], [0.05], 100)


def test_wage_study_sizes_per_effect_when_n_omitted():
    cells = wage_study("survival", [BettingStrategy("fixed", 0.25)],
                       effects=[0.70, 0.80], n_sims=5, seed=1)
    sizes = {c.effect: c.n_patients for c in cells}
    assert sizes == {0.70: 247, 0.80: 631}


import numpy as np
import pytest

from trialbet.continuous import ContinuousState, robust_center_scale, squash
from trialbet.core import RampSchedule
from trialbet.simlab import batch
from trialbet.simlab.generators import continuous_trial

from oracles import mean_final_wealth


class TestRobustCenterScale:
    def test_hand_computed(self):
        # |deviations| from median 3 are {2,1,0,1,97}; their median is 1
        assert robust_center_scale([1, 2, 3, 4, 100]) == (3.0, 1.0)

    def test_degenerate_scale_falls_back(self):
        assert robust_center_scale([5, 5, 5]) == (5.0, 1.0)
        assert robust_center_scale([0]) == (0.0, 1.0)

    def test_empty_history(self):
        with pytest.raises(ValueError, match="insufficient history"):
            robust_center_scale([])

    def test_even_history_averages_middle_pair(self):
        med, mad = robust_center_scale([1.0, 2.0, 4.0, 8.0])
        assert med == 3.0
        assert mad == 1.5  # |deviations| sorted {1,1,2,5}; middle pair averages to 1.5


class TestSquash:
    def test_values(self):
        assert squash(0.0) == 0.0
        assert squash(4.0) == pytest.approx(0.8, abs=0)
        assert squash(-1.0) == -0.5

    def test_odd_monotone_bounded(self):
        xs = np.linspace(-50, 50, 401)
        gs = [squash(float(x)) for x in xs]
        assert all(-1 < g < 1 for g in gs)
        assert all(b > a for a, b in zip(gs, gs[1:]))
        for x in xs:
            assert squash(float(-x)) == -squash(float(x))

    def test_nonfinite(self):
        with pytest.raises(ValueError):
            squash(float("nan"))


class TestCohensD:
    def test_empty_arm_gives_zero(self):
        st = ContinuousState()
        assert st.cohens_d() == 0.0
        st.step(1.0, 1)
        assert st.cohens_d() == 0.0  # control arm still empty

    def test_clamped_at_one(self):
        st = ContinuousState()
        for y in (0.0, 1.0, 2.0):
            st.step(float(y + 10), 1)
            st.step(float(y), 0)
        # means 11 vs 1, pooled sd 1 -> raw d = 10, clamped
        assert st.cohens_d() == 1.0

    def test_hand_computed_unit_effect(self):
        st = ContinuousState()
        for y in (1.0, 2.0, 3.0):
            st.step(y, 1)
        for y in (0.0, 1.0, 2.0):
            st.step(y, 0)
        assert st.cohens_d() == pytest.approx(1.0, rel=1e-12)

    def test_single_observation_arm_uses_unit_sd(self):
        st = ContinuousState()
        st.step(4.0, 1)
        st.step(1.0, 0)
        # both sds undefined -> 1; d = (4-1)/1 = 3 -> clamped to 1
        assert st.cohens_d() == 1.0


class TestWager:
    def make_ramped_state(self):
        # history of 101 values with median 0 and MAD 1, fully ramped
        st = ContinuousState(sched=RampSchedule(50, 50))
        values = [0.0] * 34 + [1.0] * 34 + [-1.0] * 33
        for k, y in enumerate(values):
            st.step(y, k % 2)
        # force a strong direction estimate
        st.trt.n, st.trt.mean, st.trt.m2 = 50, 10.0, 49.0
        st.ctrl.n, st.ctrl.mean, st.ctrl.m2 = 51, 0.0, 50.0
        return st

    def test_worked_example_strong_bet(self):
        st = self.make_ramped_state()
        assert st.cohens_d() == 1.0
        # r = 4 -> g = 0.8; lambda = 0.5 + 1.0*0.6*0.8*1.0 = 0.98
        assert st.wager(4.0, 102) == pytest.approx(0.98, abs=1e-12)

    def test_typical_observation_is_neutral(self):
        st = self.make_ramped_state()
        assert st.wager(0.0, 102) == 0.5  # y at the running median

    def test_no_direction_is_neutral(self):
        st = ContinuousState(sched=RampSchedule(10, 10))
        for k in range(30):
            st.step(float(k % 5), k % 2)
        st.trt.n, st.trt.mean = 15, st.ctrl.mean  # zero mean gap
        st.ctrl.n = 15
        st.trt.m2 = st.ctrl.m2 = 14.0
        assert st.wager(99.0, 31) == 0.5

    def test_burn_in_carries_wealth(self):
        st = ContinuousState()  # burn-in 50
        for k in range(50):
            step = st.step(float(k), k % 2)
            assert step is None
        assert st.ledger.wealth == 1.0
        assert st.step(3.0, 1) is not None  # 50 past values now exist


def test_strong_bet_multipliers():
    st = ContinuousState(sched=RampSchedule(1, 1))
    st.step(0.0, 0)
    st.step(0.5, 1)  # bets start once one past value exists
    st.trt.n, st.trt.mean, st.trt.m2 = 10, 10.0, 9.0
    st.ctrl.n, st.ctrl.mean, st.ctrl.m2 = 10, 0.0, 9.0
    lam = st.wager(4.0)
    step = st.step(4.0, 1)
    assert step.multiplier == pytest.approx(lam / 0.5, rel=1e-12)


def test_location_scale_equivariance():
    """y -> a*y + b leaves every wager and the whole trajectory unchanged."""
    rng = np.random.default_rng(11)
    t, y = continuous_trial(rng, 240, 0.4, 0.0)
    for a, b in [(2.5, 30.0), (0.5, -75.0), (1.7, 0.0)]:
        st0 = ContinuousState()
        st1 = ContinuousState()
        for yy, tt in zip(y.tolist(), t.tolist()):
            s0 = st0.step(yy, tt)
            s1 = st1.step(a * yy + b, tt)
            assert (s0 is None) == (s1 is None)
            if s0 is not None:
                assert abs(s0.wager - s1.wager) < 1e-9
        assert abs(st0.ledger.log_wealth - st1.ledger.log_wealth) < 1e-9


def test_streaming_matches_batch_replay():
    for seed in range(3):
        rng = np.random.default_rng(seed)
        t, y = continuous_trial(rng, 220, 0.3, 0.0)
        st = ContinuousState()
        for yy, tt in zip(y.tolist(), t.tolist()):
            st.step(yy, tt)
        logw = batch.continuous_log_wealth(t[None, :], y[None, :])[0]
        assert abs(st.ledger.log_wealth - logw[-1]) < 1e-10


def test_wagers_always_interior():
    rng = np.random.default_rng(2)
    t, y = continuous_trial(rng, 300, 3.0, 0.0, sd=4.0)
    st = ContinuousState(sched=RampSchedule(5, 5))
    for yy, tt in zip(y.tolist(), t.tolist()):
        step = st.step(yy, tt)
        if step is not None:
            assert 0.0 < step.wager < 1.0


def test_enumeration_fairness_oracle():
    values = [0.3, -1.2, 2.4, 0.0, 5.1, -0.7, 1.1, 0.9, -2.2, 0.4, 1.8, -0.1]

    def make_state():
        return ContinuousState(sched=RampSchedule(1, 4), c_max=0.6)

    def apply_arm(state, j, arm):
        state.step(values[j], arm)

    assert mean_final_wealth(make_state, apply_arm, len(values)) == \
        pytest.approx(1.0, abs=1e-9)


def test_state_dict_round_trip_bit_exact():
    rng = np.random.default_rng(9)
    t, y = continuous_trial(rng, 120, 0.5, 0.0)
    st = ContinuousState()
    for yy, tt in zip(y.tolist(), t.tolist()):
        st.step(yy, tt)
    clone = ContinuousState.from_state_dict(st.state_dict())
    rng2 = np.random.default_rng(10)
    t2, y2 = continuous_trial(rng2, 80, 0.5, 0.0)
    for yy, tt in zip(y2.tolist(), t2.tolist()):
        st.step(yy, tt)
        clone.step(yy, tt)
    assert clone.ledger.log_wealth == st.ledger.log_wealth

"""Step-size controller: scale vector, error norm, proposals, advance loop."""

import numpy as np
import pytest

from spectralrk import (
    AdvanceOutcome,
    ControllerConfig,
    ControllerState,
    Grid,
    StepSizeUnderflowError,
    adaptive_advance,
    error_norm_delta,
    make_bs5,
    make_dp5,
    propose_step,
    scale_vector,
)


class TestScaleVector:
    def test_formula(self):
        cfg = ControllerConfig(tol_abs=1e-6, tol_rel=1e-3)
        prev = np.array([1.0 + 0j, 3.0j, 0.0])
        new = np.array([2.0 + 0j, 1.0j, 0.0])
        sc = scale_vector(prev, new, cfg)
        assert np.allclose(sc, [1e-6 + 2e-3, 1e-6 + 3e-3, 1e-6])
        assert np.all(sc >= cfg.tol_abs)

    def test_complex_modulus_used(self):
        cfg = ControllerConfig(tol_abs=0.0, tol_rel=1.0)
        prev = np.array([3.0 + 4.0j])
        sc = scale_vector(prev, np.array([0.0 + 0j]), cfg)
        assert np.isclose(sc[0], 5.0)


class TestErrorNorm:
    def test_rms_then_max_over_components(self):
        # two components of 4 modes each: RMS per component, max across
        delta = np.array([[2.0, 2.0, 2.0, 2.0], [1.0, 1.0, 1.0, 1.0]])
        sc = np.ones((2, 4))
        assert np.isclose(error_norm_delta(delta, sc), 2.0)

    def test_scaling(self):
        delta = np.array([[1.0 + 0j, 1.0j]])
        sc = np.array([[0.5, 0.5]])
        assert np.isclose(error_norm_delta(delta, sc), 2.0)


class TestProposeStep:
    def make(self, **kw):
        return ControllerConfig(tol_abs=1e-6, tol_rel=1e-6, **kw)

    def test_err_one_gives_safety_times_h(self):
        state = ControllerState(h=1.0)
        h_new, accepted = propose_step(1.0, state, self.make())
        assert accepted
        assert np.isclose(h_new, 0.8)

    def test_tiny_err_caps_at_twice_h(self):
        state = ControllerState(h=1.0)
        h_new, accepted = propose_step(1e-12, state, self.make())
        assert accepted
        assert h_new == 2.0

    def test_err_32_rejects_at_04h(self):
        state = ControllerState(h=1.0)
        h_new, accepted = propose_step(32.0, state, self.make())
        assert not accepted
        assert np.isclose(h_new, 0.4)  # 0.8 * 32^(-1/5) = 0.4

    def test_post_rejection_growth_capped_at_one(self):
        state = ControllerState(h=1.0, prev_rejected=True)
        h_new, accepted = propose_step(1e-12, state, self.make())
        assert accepted
        assert h_new == 1.0

    def test_huge_err_shrink_floor(self):
        state = ControllerState(h=1.0)
        h_new, accepted = propose_step(1e30, state, self.make())
        assert not accepted
        assert np.isclose(h_new, 0.01)

    def test_err_zero_caps(self):
        state = ControllerState(h=1.0)
        h_new, accepted = propose_step(0.0, state, self.make())
        assert accepted
        assert h_new == 2.0

    def test_infinite_err_rejects_at_floor(self):
        state = ControllerState(h=1.0)
        h_new, accepted = propose_step(np.inf, state, self.make())
        assert not accepted
        assert np.isclose(h_new, 0.01)

    def test_underflow_raises(self):
        cfg = self.make(h_min=1e-3)
        state = ControllerState(h=1e-3)
        with pytest.raises(StepSizeUnderflowError):
            propose_step(1e30, state, cfg)

    def test_counters_updated(self):
        cfg = self.make()
        state = ControllerState(h=1.0)
        propose_step(0.5, state, cfg)
        assert state.acceptances == 1 and state.rejections == 0
        propose_step(50.0, state, cfg)
        assert state.acceptances == 1 and state.rejections == 1
        assert state.prev_rejected

    def test_embedded_order_exponent(self):
        # err^(-1/(q+1)) with q = 4: err = 2^5 halves the step
        cfg = ControllerConfig(tol_abs=1e-6, tol_rel=1e-6, safety=1.0)
        state = ControllerState(h=1.0)
        h_new, accepted = propose_step(32.0, state, cfg)
        assert np.isclose(h_new, 0.5)


class TestAdaptiveAdvance:
    def setup_method(self):
        self.pair = make_bs5()
        self.cfg = ControllerConfig(tol_abs=1e-8, tol_rel=1e-8)

    def test_accepts_and_grows_on_easy_problem(self):
        f = lambda t, y: -y
        state = ControllerState(h=1e-4)
        y = np.array([1.0 + 0j])
        out = adaptive_advance(y, 0.0, self.pair, state, self.cfg, f)
        assert isinstance(out, AdvanceOutcome)
        assert out.rejections == 0
        assert out.h_used == 1e-4
        assert out.h_next == 2e-4  # cap
        assert np.isclose(out.t_new, 1e-4)
        assert np.allclose(out.y_new, np.exp(-1e-4), atol=1e-12)
        assert out.rhs_evals == 8

    def test_oversized_h0_rejected_then_accepted(self):
        f = lambda t, y: -40.0 * y
        state = ControllerState(h=1e3)
        out = adaptive_advance(np.array([1.0 + 0j]), 0.0, self.pair, state,
                               self.cfg, f)
        assert out.rejections >= 1
        assert out.h_used < 1e3
        # each rejected attempt costs a full set of stages
        assert out.rhs_evals == 8 * (out.rejections + 1)
        assert state.prev_rejected is False  # last attempt accepted

    def test_first_stage_only_used_on_first_attempt(self):
        f = lambda t, y: -40.0 * y
        y0 = np.array([1.0 + 0j])
        state = ControllerState(h=1e3)
        out = adaptive_advance(y0, 0.0, self.pair, state, self.cfg, f,
                               first_stage=f(0.0, y0))
        assert out.rejections >= 1
        assert out.rhs_evals == 8 * (out.rejections + 1) - 1

    def test_nonfinite_treated_as_rejection(self):
        calls = {"n": 0}

        def f(t, y):
            calls["n"] += 1
            if calls["n"] <= 2:
                return y * np.nan
            return -y

        state = ControllerState(h=1.0)
        out = adaptive_advance(np.array([1.0 + 0j]), 0.0, self.pair, state,
                               self.cfg, f)
        assert out.rejections >= 1
        assert np.isfinite(out.y_new).all()

    def test_underflow_propagates(self):
        cfg = ControllerConfig(tol_abs=1e-14, tol_rel=1e-14, h_min=0.45)
        f = lambda t, y: -y
        state = ControllerState(h=0.5)
        with pytest.raises(StepSizeUnderflowError):
            adaptive_advance(np.array([1.0 + 0j]), 0.0, self.pair, state, cfg, f)

    def test_requires_embedded_weights(self):
        from spectralrk import make_rk4

        state = ControllerState(h=0.1)
        with pytest.raises(ValueError):
            adaptive_advance(np.array([1.0 + 0j]), 0.0, make_rk4(), state,
                             self.cfg, lambda t, y: -y)

    def test_tolerance_sweep_h_monotone(self):
        # on a fixed problem the accepted h shrinks as tolerance tightens
        f = lambda t, y: np.array([np.cos(3 * t) * y[0]])
        h_acc = []
        for tol in (1e-4, 1e-6, 1e-8):
            cfg = ControllerConfig(tol_abs=tol, tol_rel=tol)
            state = ControllerState(h=1e-3)
            y = np.array([1.0 + 0j])
            t = 0.0
            # advance enough steps for h to settle
            for _ in range(60):
                out = adaptive_advance(y, t, make_dp5(), state, cfg, f)
                y, t = out.y_new, out.t_new
            h_acc.append(out.h_used)
        assert h_acc[0] > h_acc[1] * 0.95
        assert h_acc[1] > h_acc[2] * 0.95

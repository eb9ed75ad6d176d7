import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from distqc import cost_model as cm
from distqc import estimation as est
from distqc import ghz_protocol as ghz
from distqc.purification import SchemeParams

COSTS_X100 = cm.CostParams(100, 10, 1)
COSTS_X1000 = cm.CostParams(1000, 10, 1)


def ratio_from_parts(n, params, pair_cost, pair_fidelity, gt, eps=0.01):
    """Assemble C2/C1 from the repetition counts and per-run costs, one n at a time."""
    x = pair_fidelity ** (n - 1)
    R1 = est.r1_required(n, eps, gt, 1.0)
    R2 = est.r2_required(n, eps, F=x, g=gt, t_c=1.0)
    P2 = (n - 1) * pair_cost + (n - 2) * params.Y
    return cm.cost_entangled(n, R2, P2, params) / cm.cost_disentangled(n, R1, params)


def brute_window(ratios):
    below = [n for n, r in ratios if r < 1]
    return (below[0], below[-1]) if below else (None, None)


class TestTotals:
    def test_cost_disentangled(self):
        assert cm.cost_disentangled(1, 10, COSTS_X100) == 10
        assert cm.cost_disentangled(3, 1, COSTS_X100) == 23
        assert cm.cost_disentangled(5, 0, COSTS_X100) == 0

    def test_cost_entangled(self):
        assert cm.cost_entangled(2, 1, 100, COSTS_X100) == 112
        assert cm.cost_entangled(3, 2, 210, COSTS_X100) == 466
        assert cm.cost_entangled(4, 3.5, 0, COSTS_X100) == cm.cost_disentangled(4, 3.5, COSTS_X100)
        with pytest.raises(ValueError):
            cm.cost_entangled(1, 1, 0, COSTS_X100)

    def test_params_validation(self):
        with pytest.raises(ValueError):
            cm.CostParams(-1, 1, 1)
        with pytest.raises(ValueError):
            cm.CostParams(1, 0, 0)


class TestIdealRatio:
    def test_examples(self):
        assert cm.ratio_ideal(2, COSTS_X100) == pytest.approx(112 / 24)
        assert cm.ratio_ideal(11, COSTS_X100) == pytest.approx(1201 / 1221)
        assert cm.ratio_ideal(10, COSTS_X100) == pytest.approx(1.08)

    @pytest.mark.parametrize("params", [COSTS_X100, COSTS_X1000, cm.CostParams(3, 2, 0.5)])
    def test_matches_assembled_costs(self, params):
        for n in range(2, 200):
            P2 = ghz.precomputation_cost(n, params.X, params.Y).cost_value
            C1 = cm.cost_disentangled(n, est.r1_required(n, 0.01), params)
            C2 = cm.cost_entangled(n, est.r2_required(n, 0.01), P2, params)
            assert cm.ratio_ideal(n, params) == pytest.approx(C2 / C1, rel=1e-12)

    def test_decreasing_to_zero(self):
        values = np.array([cm.ratio_ideal(n, COSTS_X100) for n in range(2, 10_001)])
        assert np.all(np.diff(values) < 0)
        assert values[-1] < 0.002

    def test_n_min_approx(self):
        assert cm.n_min_approx(COSTS_X100) == pytest.approx(11.0)
        assert cm.n_min_approx(COSTS_X1000) == pytest.approx(1021 / 11)
        assert cm.n_min_approx(COSTS_X1000) == pytest.approx(92.8, abs=0.05)
        assert cm.n_min_approx(cm.CostParams(5, 5, 0)) == pytest.approx(3.0)


class TestNoisyAndDephased:
    def test_reduces_to_ideal_shape(self):
        # F0 = 1 makes x_n = 1; scheme 2 with b s = X reproduces the ideal ratio.
        scheme = SchemeParams(2, 1.0, a=0.5, b=50)
        for n in range(2, 50):
            assert cm.ratio_noisy(n, COSTS_X100, scheme, 2) == pytest.approx(cm.ratio_ideal(n, COSTS_X100), rel=1e-12)

    def test_golden_scheme2(self):
        scheme = SchemeParams(2, 0.95, a=0.5, b=100)
        assert scheme.fidelity(3) == pytest.approx(0.99375)
        assert scheme.fidelity(3) ** 2 == pytest.approx(0.98754, abs=1e-5)
        # (2*300 + 3*10 + 3) / (3 * 0.99375**4 * 23)
        expected = 633 / (3 * 0.99375**4 * 23)
        assert cm.ratio_noisy(3, COSTS_X100, scheme, 3) == pytest.approx(expected, rel=1e-12)
        assert cm.ratio_noisy(3, COSTS_X100, scheme, 3) == pytest.approx(9.406889718730666, rel=1e-12)

    def test_window_closes(self):
        scheme = SchemeParams(2, 0.95, a=0.5, b=100)
        s = 3  # F_s = 0.99375
        values = [cm.ratio_noisy(n, COSTS_X100, scheme, s) for n in range(2, 2000)]
        assert values[-1] > 1
        tail = values[500:]
        assert all(b > a for a, b in zip(tail, tail[1:]))

    def test_scheme2_eventually_increasing(self):
        scheme = SchemeParams(2, 0.9, a=0.6, b=30)
        vals = [cm.ratio_noisy(n, COSTS_X100, scheme, 5) for n in range(2, 3000)]
        assert max(vals[-100:]) > 1
        assert vals[-1] > vals[-2]

    def test_dephasing_factor(self):
        assert cm.ratio_dephased(7, COSTS_X100, 0.0, 3.0) == cm.ratio_ideal(7, COSTS_X100)
        assert cm.ratio_dephased(5, COSTS_X100, 0.01, 1.0) / cm.ratio_ideal(5, COSTS_X100) == pytest.approx(math.exp(0.08))
        assert math.exp(0.08) == pytest.approx(1.0833, abs=1e-4)

    @given(n=st.integers(2, 100), gt=st.floats(0, 0.2),
           X=st.floats(0, 1e4), Y=st.floats(0.1, 100), Z=st.floats(0, 100))
    def test_dephasing_factor_independent_of_costs(self, n, gt, X, Y, Z):
        params = cm.CostParams(X, Y, Z)
        got = cm.ratio_dephased(n, params, gt, 1.0) / cm.ratio_ideal(n, params)
        assert abs(got - math.exp(2 * gt * (n - 1))) <= 1e-12 * math.exp(2 * gt * (n - 1))


class TestScan:
    def test_ideal_thresholds(self):
        a = cm.scan_window(COSTS_X100, cm.Regime(), 2, 200)
        assert a.window.n_min == 11 and a.window.n_max is None and a.window.open_at_bound
        b = cm.scan_window(COSTS_X1000, cm.Regime(), 2, 400)
        assert b.window.n_min == 93

    @pytest.mark.parametrize("X,Y,Z", [(100, 10, 1), (1000, 10, 1), (50, 10, 0), (500, 20, 5), (60, 1, 1)])
    def test_scan_near_approximation(self, X, Y, Z):
        params = cm.CostParams(X, Y, Z)
        approx = cm.n_min_approx(params)
        assert approx >= 5
        n_min = cm.scan_window(params, cm.Regime(), 2, 5000).window.n_min
        assert abs(n_min - round(approx)) <= 2

    def test_rows_match_closed_forms(self):
        res = cm.scan_window(COSTS_X100, cm.Regime(), 2, 300, epsilon=0.02)
        for r in res.rows:
            assert r.ratio == pytest.approx(cm.ratio_ideal(r.n, COSTS_X100), rel=1e-12)
            assert r.C1 == pytest.approx(r.R1 * (r.n * 1 + (r.n - 1) * 10), rel=1e-15)
            assert r.C2 == pytest.approx(r.R2 * (r.P2 + r.n * 1 + (r.n - 1) * 10), rel=1e-15)
            assert r.ratio == pytest.approx(r.C2 / r.C1, rel=1e-15)
            assert r.R1 == pytest.approx(est.r1_required(r.n, 0.02), rel=1e-13)
            assert r.P2 == ghz.precomputation_cost(r.n, 100, 10).cost_value

    def test_noisy_scan_against_oracle(self):
        scheme = SchemeParams(2, 0.95, a=0.5, b=100)
        res = cm.scan_window(COSTS_X100, cm.Regime(scheme, F_target=0.995), 2, 600)
        assert res.metadata["steps"] == 4 and res.metadata["steps_mode"] == "auto"
        oracle = [(n, ratio_from_parts(n, COSTS_X100, 400.0, 0.996875, 0.0)) for n in range(2, 601)]
        for r, (n, value) in zip(res.rows, oracle):
            assert r.ratio == pytest.approx(value, rel=1e-12)
            assert r.ratio == pytest.approx(cm.ratio_noisy(n, COSTS_X100, scheme, 4), rel=1e-12)
        assert (res.window.n_min, res.window.n_max) == brute_window(oracle) == (53, 358)

    def test_dephased_scan_against_oracle(self):
        res = cm.scan_window(COSTS_X100, cm.Regime(gt=0.01), 2, 400)
        oracle = [(n, ratio_from_parts(n, COSTS_X100, 100.0, 1.0, 0.01)) for n in range(2, 401)]
        for r, (n, value) in zip(res.rows, oracle):
            assert r.ratio == pytest.approx(value, rel=1e-12)
            assert r.ratio == pytest.approx(cm.ratio_dephased(n, COSTS_X100, 0.01, 1.0), rel=1e-12)
        assert (res.window.n_min, res.window.n_max) == brute_window(oracle) == (15, 120)

    def test_dephasing_0_02_has_no_window(self):
        # g t_c = 0.02 with (100, 10, 1): the ratio never dips below 1.
        res = cm.scan_window(COSTS_X100, cm.Regime(gt=0.02), 2, 2000)
        assert res.window.empty
        assert min(r.ratio for r in res.rows) == pytest.approx(1.1412620815939511, rel=1e-9)

    def test_scheme1_no_gain(self):
        scheme = SchemeParams(1, 0.95, U=100)
        for s in range(0, 15):
            assert cm.scan_window(COSTS_X100, cm.Regime(scheme, steps=s), 2, 64).window.empty

    def test_window_invariant(self):
        scheme = SchemeParams(2, 0.9, a=0.5, b=60)
        res = cm.scan_window(COSTS_X100, cm.Regime(scheme, steps=5, gt=0.0005), 2, 3000)
        w = res.window
        assert w.n_min is not None and w.n_max is not None and w.n_min <= w.n_max
        assert all(r.ratio < 1 for r in res.rows if w.n_min <= r.n <= w.n_max)

    def test_dephasing_shrinks_window(self):
        scheme = SchemeParams(2, 0.95, a=0.5, b=100)
        clean = cm.scan_window(COSTS_X100, cm.Regime(scheme, F_target=0.995), 2, 600).window
        noisy = cm.scan_window(COSTS_X100, cm.Regime(scheme, F_target=0.995, gt=0.001), 2, 600).window
        assert noisy.n_max < clean.n_max
        assert noisy.n_min >= clean.n_min

    def test_tie_is_no_gain(self):
        ns = np.array([2, 3, 4])
        assert cm._find_window(ns, np.array([1.0, 1.0, 1.0])).empty

    def test_range_errors(self):
        with pytest.raises(ValueError):
            cm.scan_window(COSTS_X100, cm.Regime(), 10, 5)
        with pytest.raises(ValueError):
            cm.scan_window(COSTS_X100, cm.Regime(), 1, 5)
        with pytest.raises(ValueError):
            cm.scan_window(COSTS_X100, cm.Regime(), 2, 10**6 + 1)

    def test_million_nodes(self):
        res = cm.scan_window(COSTS_X100, cm.Regime(), 2, 10**6)
        assert len(res.rows) == 10**6 - 1
        assert res.window.n_min == 11 and res.window.open_at_bound

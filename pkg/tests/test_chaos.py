import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dissipative_memory import analytics, chaos
from dissipative_memory.exceptions import (
    BadThreshold,
    GridMismatch,
    InsufficientSamples,
    UnorderedTimes,
    WindowContainsZeroCrossing,
    ZeroSqueeze,
)
from dissipative_memory.modes import MemoryCode, build_grid


def pair(theta, theta_p, gamma=0.5):
    g = build_grid([(1.0, gamma)])
    return MemoryCode(g, (theta,)), MemoryCode(g, (theta_p,))


class TestDivergence:
    def test_identical(self, code_factory):
        a = code_factory([1.0, 0.2])
        for s in chaos.divergence_series(a, a, [0, 1, 2]):
            assert np.all(s.delta_n == 0) and np.all(s.linearized == 0)

    def test_t0_values(self):
        a, b = pair(1.0, 1.01)
        s = chaos.divergence_series(a, b, [0.0])[0]
        # sinh^2(-1.01) - sinh^2(-1) at 40 digits
        assert s.delta_n[0] == pytest.approx(0.036647254143695261, rel=1e-12)
        assert s.linearized[0] == pytest.approx(0.036268604078470188, rel=1e-12)
        assert s.delta_theta == pytest.approx(-0.01)

    def test_exponential_growth(self):
        a, b = pair(1.0, 1.01)
        s = chaos.divergence_series(a, b, [18.0, 20.0])[0]
        assert s.delta_n[1] / s.delta_n[0] == pytest.approx(math.exp(2.0), rel=1e-6)

    def test_unordered(self):
        a, b = pair(1.0, 1.01)
        with pytest.raises(UnorderedTimes):
            chaos.divergence_series(a, b, [1.0, 0.5])

    def test_grid_mismatch(self):
        a, _ = pair(1.0, 1.0)
        _, b = pair(1.0, 1.0, gamma=0.4)
        with pytest.raises(GridMismatch):
            chaos.divergence_series(a, b, [0.0])


class TestRate:
    def test_zero(self):
        a, _ = pair(1.0, 1.0)
        assert chaos.divergence_rate(a, a, 3.0, 0).linearized == 0

    def test_at_crossing(self):
        a, b = pair(1.0, 0.99)
        assert chaos.divergence_rate(a, b, 2.0, 0).linearized == pytest.approx(0.01, rel=1e-12)

    def test_t6(self):
        a, b = pair(1.0, 0.99)
        assert chaos.divergence_rate(a, b, 6.0, 0).linearized == pytest.approx(
            0.27308232836016487, rel=1e-12)

    @pytest.mark.parametrize("t", [0.5, 2.0, 6.0, 11.0])
    def test_exact_rate_finite_difference(self, t):
        a, b = pair(1.0, 0.97)
        h = 1e-6
        s = chaos.divergence_series(a, b, [t - h, t + h])[0]
        fd = (s.delta_n[1] - s.delta_n[0]) / (2 * h)
        exact = chaos.divergence_rate(a, b, t, 0).exact
        assert abs(fd - exact) / abs(exact) < 1e-6


class TestLyapunov:
    @pytest.mark.parametrize("gamma, expected", [(0.5, 1.0), (0.25, 0.5)])
    def test_recovery(self, gamma, expected):
        a, b = pair(1.0, 1.0 - 1e-3, gamma)
        lo, hi = (8.0, 20.0) if gamma == 0.5 else (16.0, 40.0)
        s = chaos.divergence_series(a, b, np.linspace(lo, hi, 25))[0]
        fit = chaos.lyapunov_estimate(s)
        assert fit.exponent == pytest.approx(expected, rel=0.02)
        assert fit.residual >= 0
        assert fit.window == (lo, hi)

    def test_zero_crossing(self):
        a, b = pair(1.0, 1.001)
        s = chaos.divergence_series(a, b, np.linspace(0.5, 4.0, 25))[0]
        with pytest.raises(WindowContainsZeroCrossing):
            chaos.lyapunov_estimate(s)

    def test_identical_codes_refused(self):
        a, _ = pair(1.0, 1.0)
        s = chaos.divergence_series(a, a, np.linspace(8, 20, 25))[0]
        with pytest.raises(WindowContainsZeroCrossing):
            chaos.lyapunov_estimate(s)

    def test_insufficient_samples(self):
        a, b = pair(1.0, 1.001)
        s = chaos.divergence_series(a, b, np.linspace(8, 20, 5))[0]
        with pytest.raises(InsufficientSamples):
            chaos.lyapunov_estimate(s)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(-6, -2).map(lambda e: 10.0**e), st.sampled_from([0.25, 0.5, 1.0]),
           st.floats(0, 2))
    def test_property(self, dtheta, gamma, theta):
        a, b = pair(theta, theta - dtheta, gamma)
        w = chaos.asymptotic_window(a, b, 0)
        s = chaos.divergence_series(a, b, np.linspace(*w, 25))[0]
        assert chaos.lyapunov_estimate(s).relative_error < 0.02


class TestLifetimes:
    def test_single(self):
        rep = chaos.lifetimes(pair(1.0, 1.0)[0])
        assert rep.per_mode.tolist() == [2.0]
        assert rep.recognition_window == 0.0

    def test_two_modes(self):
        code = MemoryCode(build_grid([(1, 0.5), (1, 0.25)]), (1.0, 1.0))
        rep = chaos.lifetimes(code)
        assert rep.tau == 4.0 and rep.tau_min == 2.0 and rep.recognition_window == 2.0
        assert not rep.flagged

    def test_empty_code(self):
        assert chaos.lifetimes(pair(0.0, 0.0)[0]).tau == 0.0

    def test_negative_flagged(self):
        rep = chaos.lifetimes(pair(-1.0, 0.0)[0])
        assert rep.flagged and rep.per_mode[0] == -2.0

    def test_state_is_empty_vacuum_at_lifetime(self, code_factory):
        code = code_factory([1.0, 0.4], gammas=[0.5, 0.2])
        for k, t in enumerate(chaos.lifetimes(code).per_mode):
            assert analytics.occupation(code.at(t), k) == 0.0


class TestCrossings:
    def test_degenerate(self):
        a, _ = pair(1.0, 1.0)
        c = chaos.crossing_times(a, a)[0]
        assert c.exact == 2.0 and c.approx == 2.0

    def test_nearby(self):
        a, b = pair(1.0, 1.01)
        c = chaos.crossing_times(a, b)[0]
        assert c.exact == pytest.approx(2.01) and c.approx == 2.0
        s = chaos.divergence_series(a, b, [c.exact])[0]
        assert abs(s.delta_n[0]) < 1e-14

    def test_opposite_arguments(self):
        a, b = pair(0.0, 2.0, gamma=1.0)
        assert chaos.crossing_times(a, b)[0].exact == 1.0


class TestAssociation:
    def test_identical(self, code_factory):
        a = code_factory([1.0, 0.5])
        ev = chaos.association_events([a, a], [0, 1, 2], 0.5)
        assert [e.time for e in ev] == [0.0, 1.0, 2.0]
        assert all(e.overlap == 1.0 for e in ev)

    def test_ten_modes_no_events(self, code_factory):
        ev = chaos.association_events(
            [code_factory([0.0] * 10), code_factory([1.0] * 10)], np.linspace(0, 10, 11), 0.05)
        assert ev == []

    def test_two_modes_events(self, code_factory):
        ev = chaos.association_events(
            [code_factory([0.0] * 2), code_factory([1.0] * 2)], np.linspace(0, 10, 11), 0.05)
        assert ev
        assert ev[0].overlap == pytest.approx(0.41997434161402608, rel=1e-12)

    def test_sorted_and_thread_independent(self, code_factory):
        codes = [code_factory([0.1 * i, 0.3]) for i in range(5)]
        times = np.linspace(0, 3, 7)
        serial = chaos.association_events(codes, times, 0.9)
        with ThreadPoolExecutor(4) as ex:
            threaded = chaos.association_events(codes, times, 0.9, executor=ex)
        assert serial == threaded
        ovs = [e.overlap for e in serial]
        assert ovs == sorted(ovs, reverse=True)

    @pytest.mark.parametrize("th", [0.0, 1.0, -0.1, 1.5])
    def test_bad_threshold(self, code_factory, th):
        with pytest.raises(BadThreshold):
            chaos.association_events([code_factory([1.0])] * 2, [0.0], th)


class TestEntropyDivergence:
    def test_identical(self):
        a, _ = pair(1.0, 1.0)
        r = chaos.entropy_divergence_check(a, a, 6.0, 1e-4)
        assert r.lhs == 0 and r.rhs == 0 and r.gap == 0

    def test_quasi_equilibrium(self):
        a, b = pair(1.0, 1.0 - 1e-3)
        assert chaos.entropy_divergence_check(a, b, 6.0, 1e-4).gap < 1e-6

    def test_reference_linearization_is_first_order(self):
        a, b = pair(1.0, 1.0 - 1e-3)
        r = chaos.entropy_divergence_check(a, b, 6.0, 1e-4, linearize_at="reference")
        # relative error of the first-order expansion ~ delta_theta * tanh(2x)
        assert r.gap == pytest.approx(1e-3, rel=0.01)

    def test_fixed_beta_reports_gap(self):
        a, b = pair(1.0, 1.0 - 1e-3)
        r = chaos.entropy_divergence_check(a, b, 6.0, 1e-4, beta=1.0)
        assert r.gap > 1e-3

    def test_zero_squeeze(self):
        a, b = pair(1.0, 1.0 - 1e-3)
        with pytest.raises(ZeroSqueeze):
            chaos.entropy_divergence_check(a, b, 2.0, 1e-4)


def test_non_periodicity(code_factory):
    for m in (1, 4, 9):
        code = code_factory([0.7] * m)
        prof = chaos.self_overlap_profile(code, 1.0, np.linspace(0.1, 5, 30))
        assert np.all(prof < 1) and np.all(np.diff(prof) < 0)
        assert np.allclose(prof, np.cosh(0.5 * np.linspace(0.1, 5, 30)) ** -m, rtol=1e-12)


def test_non_crossing_for_distinct_codes(code_factory):
    a = code_factory([1.0, 0.3])
    b = code_factory([1.0, 0.31])
    for t in np.linspace(0, 10, 21):
        for tp in np.linspace(0, 10, 21):
            assert analytics.overlap(a.at(t), b.at(tp)) < 1 or t != tp


def test_refresh(code_factory):
    a = code_factory([1.0])
    assert chaos.refresh(a) is a
    assert chaos.refresh(a, [2.0]).thetas == (2.0,)

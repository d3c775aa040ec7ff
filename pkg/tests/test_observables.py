import math

import pytest

from tiltedlattice.analytic1d import GaussianSpec1D, LatticeParams1D, amplitude_A, center_expectation, gaussian_1d, moments, propagate_exact
from tiltedlattice.errors import DomainError
from tiltedlattice.lattice2d import GaussianSpec2D, LatticeParams2D
from tiltedlattice.lissajous import LissajousTarget, plan
from tiltedlattice.observables import (
    bloch_period_grid,
    breathing_profile,
    breathing_variance_propagated,
    max_deviation,
    oscillation_amplitude,
    predicted_center,
    record_trajectory,
)


def _circle_plan(sigma):
    return plan(LissajousTarget(1, 1, -math.pi / 2, amp_A=25.0, amp_B=25.0), width_sigma=sigma)


class TestRecordTrajectory:
    def test_initial_sample(self):
        spec = GaussianSpec2D(3.0, -2.0, 0.5, 1.0, 2.0)
        (s,) = record_trajectory(spec, LatticeParams2D(1.0, 0.3, 0.4), [0.0])
        assert abs(s.center_x - 3.0) <= 1e-9 and abs(s.center_y + 2.0) <= 1e-9
        assert s.deviation <= 1e-9
        assert s.var_x >= 0 and s.var_y >= 0

    def test_prediction_is_center_expectation(self):
        spec = GaussianSpec2D(1.0, 0.0, 0.4, -0.2, 1.5)
        params = LatticeParams2D(1.0, 0.3, 0.5)
        times = [0.0, 2.0, 7.5, 13.0]
        for s in record_trajectory(spec, params, times):
            ex = center_expectation(spec.axis("x"), params.axis("x"), s.time)
            ey = center_expectation(spec.axis("y"), params.axis("y"), s.time)
            assert abs(s.predicted_x - ex) <= 1e-12 and abs(s.predicted_y - ey) <= 1e-12
            # integer centers: the closed form is exact, so the deviation is rounding
            assert s.deviation <= 1e-9

    def test_untilted_axis_prediction(self):
        spec = GaussianSpec2D(0.0, 0.0, 0.7, 0.0, 2.0)
        params = LatticeParams2D(1.0, 0.0, 0.5)
        samples = record_trajectory(spec, params, [0.0, 3.0, 6.0])
        assert max_deviation(samples) <= 1e-9
        assert predicted_center(spec, params, 0.0) == (0.0, 0.0)

    def test_keep_states(self):
        samples, states = record_trajectory(GaussianSpec2D(), LatticeParams2D(1.0, 1.0, 1.0), [0.0, 1.0], keep_states=True)
        assert len(samples) == len(states) == 2

    @pytest.mark.parametrize("times", [[], [1.0, 0.5]])
    def test_bad_times(self, times):
        with pytest.raises(DomainError):
            record_trajectory(GaussianSpec2D(), LatticeParams2D(1.0, 1.0, 1.0), times)

    def test_circle_tracks_curve(self):
        wide, narrow = _circle_plan(5.0), _circle_plan(1.0)
        times = [wide.period_T * k / 16 for k in range(16)]
        d_wide = max_deviation(record_trajectory(wide.spec, wide.params, times, predictor=wide))
        d_narrow = max_deviation(record_trajectory(narrow.spec, narrow.params, times, predictor=narrow))
        assert d_wide <= 1.0
        assert d_narrow > d_wide


class TestBreathing:
    def test_profile_values(self):
        F = 0.5
        p = LatticeParams1D(1.0, F)
        (t0, v0), (t1, v1), (t2, v2) = breathing_profile(0, p, [0.0, math.pi / F, 2 * math.pi / F])
        assert v0 == 0.0
        assert v1 == pytest.approx(8 / F**2, rel=1e-12)
        assert abs(v2) <= 1e-10

    @pytest.mark.parametrize("t", [0.3, 2.0, 9.0])
    def test_matches_closed_form_and_propagation(self, t):
        p = LatticeParams1D(1.0, 0.2)
        (_, v), = breathing_profile(4, p, [t])
        assert v == pytest.approx(8 / 0.2**2 * math.sin(0.1 * t) ** 2, rel=1e-12, abs=1e-14)
        assert v == pytest.approx(breathing_variance_propagated(4, p, t), rel=1e-12, abs=1e-14)

    def test_requires_tilt(self):
        with pytest.raises(DomainError):
            breathing_profile(0, LatticeParams1D(1.0, 0.0), [1.0])


class TestAmplitudeCrossover:
    def test_grid(self):
        g = bloch_period_grid(10.0, 8)
        assert g[0] == 0.0 and g[-1] == 10.0 and g[4] == 5.0 and len(g) == 9

    def test_oscillation_amplitude(self):
        assert oscillation_amplitude([1.0, -3.0, 0.5]) == 2.0

    def test_monotone_in_width(self):
        p = LatticeParams1D(1.0, 0.1)
        times = bloch_period_grid(p.bloch_period)
        amps = []
        for sigma in (0.1, 0.5, 1.0, 2.0, 5.0, 10.0):
            g = gaussian_1d(GaussianSpec1D(0.0, 0.0, sigma))
            centers = [moments(propagate_exact(g, p, t))[0] for t in times]
            amps.append(oscillation_amplitude(centers))
            # (max - min)/2 of X + A(cos Ft - 1) is A
            assert amps[-1] == pytest.approx(amplitude_A(0.0, sigma, p), abs=1e-9)
        assert all(b >= a for a, b in zip(amps, amps[1:]))
        assert amps[0] <= 1e-3 * p.ladder_ratio

import math

import numpy as np
import pytest

from cvcat.errors import DegenerateSuperpositionError, DomainError
from cvcat.states import CatParams, GateParams, GridSpec, WaveFunction, \
    cat_params_from_gate, default_grid, make_cubic_phase_state, \
    make_ideal_cat, make_squeezed_vacuum, wavefunction_from_json, \
    wavefunction_to_json


def moment(wf, k):
    return float(np.trapezoid(wf.x ** k * wf.density(), dx=wf.dx))


class TestSqueezedVacuum:
    def test_vacuum_value_at_origin(self):
        wf = make_squeezed_vacuum(1.0, GridSpec(-8.0, 8.0, 2049))
        at_zero = wf.amplitudes[wf.n_points // 2]
        assert abs(at_zero - math.pi ** -0.25) < 1e-12

    def test_norm(self):
        for s in (1.0, 0.5, 0.1995262314968879):
            wf = make_squeezed_vacuum(s)
            assert abs(wf.norm_squared() - 1.0) < 1e-9

    def test_variance(self):
        wf = make_squeezed_vacuum(0.5)
        assert abs(moment(wf, 2) - 2.0) < 1e-6

    def test_grid_too_narrow(self):
        with pytest.raises(DomainError):
            make_squeezed_vacuum(0.1, GridSpec(-8.0, 8.0))

    def test_rejects_nonpositive_s(self):
        with pytest.raises(DomainError):
            make_squeezed_vacuum(0.0)


class TestCubicPhaseState:
    def test_pure_phase_factor(self):
        grid = GridSpec(-12.0, 12.0, 1024)
        cubic = make_cubic_phase_state(0.1, 1.0, grid)
        base = make_squeezed_vacuum(1.0, grid)
        assert np.allclose(np.abs(cubic.amplitudes), np.abs(base.amplitudes),
                           rtol=0, atol=1e-15)

    def test_gamma_zero_identity(self):
        grid = GridSpec(-12.0, 12.0, 1024)
        cubic = make_cubic_phase_state(0.0, 1.0, grid)
        base = make_squeezed_vacuum(1.0, grid)
        assert np.array_equal(cubic.amplitudes, base.amplitudes)


class TestIdealCat:
    def test_alpha_zero_theta_zero_is_vacuum(self):
        grid = GridSpec(-8.0, 8.0, 1024)
        cat = make_ideal_cat(CatParams(0.0, 0.0), grid)
        vac = make_squeezed_vacuum(1.0, grid)
        assert np.allclose(cat.amplitudes, vac.amplitudes, rtol=0, atol=1e-12)

    def test_norm(self):
        for p_plus, theta in ((3.1623, 0.7854), (1.0, -2.0), (0.3, 0.0)):
            wf = make_ideal_cat(CatParams(p_plus, theta))
            assert abs(wf.norm_squared() - 1.0) < 1e-9

    def test_momentum_peaks(self):
        cat = make_ideal_cat(CatParams(3.162, 0.7854),
                             GridSpec(-16.0, 16.0, 4096))
        spec = np.fft.fftshift(np.fft.fft(cat.amplitudes))
        p = 2.0 * math.pi * np.fft.fftshift(np.fft.fftfreq(cat.n_points,
                                                           d=cat.dx))
        dens = np.abs(spec) ** 2
        pos = p > 0
        neg = p < 0
        assert abs(p[pos][np.argmax(dens[pos])] - 3.162) < 0.05
        assert abs(p[neg][np.argmax(dens[neg])] + 3.162) < 0.05

    def test_parity_symmetric_density_at_theta_zero(self):
        grid = GridSpec(-12.0, 12.0, 2001)
        cat = make_ideal_cat(CatParams(2.0, 0.0), grid)
        dens = cat.density()
        assert np.allclose(dens, dens[::-1], rtol=0, atol=1e-12)

    def test_degenerate_superposition(self):
        with pytest.raises(DegenerateSuperpositionError):
            make_ideal_cat(CatParams(0.0, math.pi / 2.0))

    def test_unknown_convention(self):
        with pytest.raises(DomainError):
            make_ideal_cat(CatParams(1.0, 0.0), convention="bogus")


class TestCatParamsFromGate:
    def test_ym_zero(self):
        cat = cat_params_from_gate(GateParams(gamma=0.3, s=1.0, y_m=0.0))
        assert cat.p_plus == 0.0
        assert abs(cat.theta - math.pi / 4.0) < 1e-15

    def test_direct_evaluation(self):
        cat = cat_params_from_gate(GateParams(gamma=0.1, s=1.0, y_m=3.0))
        assert abs(cat.p_plus - math.sqrt(10.0)) < 1e-12
        want = math.pi / 4.0 - (2.0 / (3.0 * math.sqrt(0.3))) * 3.0 ** 1.5
        want = math.remainder(want, 2.0 * math.pi)
        assert abs(cat.theta - want) < 1e-12
        assert cat.alpha == 1j * cat.p_plus

    def test_proportional_gamma_family(self):
        for y_m in (3.0, 6.0, 9.0, 12.0, 15.0):
            cat = cat_params_from_gate(GateParams(gamma=y_m / 30.0, s=1.0,
                                                  y_m=y_m))
            assert abs(cat.p_plus - math.sqrt(10.0)) < 1e-12

    def test_theta_reduced(self):
        for y_m in (3.0, 7.0, 15.0, 40.0):
            cat = cat_params_from_gate(GateParams(gamma=0.2, s=1.0, y_m=y_m))
            assert -math.pi < cat.theta <= math.pi

    def test_rejects_negative_ym(self):
        with pytest.raises(DomainError):
            cat_params_from_gate(GateParams(gamma=0.1, s=1.0, y_m=-1.0))


class TestWaveFunction:
    def test_grid_halving_moment_stability(self):
        coarse = make_squeezed_vacuum(1.0, GridSpec(-10.0, 10.0, 2048))
        fine = make_squeezed_vacuum(1.0, GridSpec(-10.0, 10.0, 4096))
        for k in (0, 2, 4):
            assert abs(moment(coarse, k) - moment(fine, k)) < 1e-8

    def test_json_round_trip(self):
        wf = make_cubic_phase_state(0.1, 0.5, GridSpec(-20.0, 20.0, 512))
        back = wavefunction_from_json(wavefunction_to_json(wf))
        assert back.grid == wf.grid
        assert back.label == wf.label
        assert np.array_equal(back.amplitudes, wf.amplitudes)

    def test_normalized_flag_checked(self):
        with pytest.raises(DomainError):
            WaveFunction(-1.0, 1.0, 32, np.ones(32, dtype=complex),
                         normalized=True)

    def test_rejects_non_finite_amplitudes(self):
        amp = np.ones(32, dtype=complex)
        amp[3] = np.nan
        with pytest.raises(DomainError):
            WaveFunction(-1.0, 1.0, 32, amp)

    def test_default_grid_covers_lobes(self):
        grid = default_grid(3.0, 512)
        assert grid.x_min == -11.0 and grid.x_max == 11.0

    def test_gate_params_validation(self):
        with pytest.raises(DomainError):
            GateParams(gamma=0.1, s=0.0, y_m=3.0)
        with pytest.raises(DomainError):
            GateParams(gamma=-0.1, s=1.0, y_m=3.0)

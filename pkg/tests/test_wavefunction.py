import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import eval_hermite

from shoberry.errors import InvalidRepresentationError
from shoberry.numerics import integrate_1d
from shoberry.representation import PhysicalConfig, Representation
from shoberry.wavefunction import (MAX_HERMITE_DEGREE, QuantumState, alpha,
                                   alpha_dot, energy_expectation,
                                   energy_expectation_quadrature,
                                   grid_halfwidth, hermite, norm_quadrature,
                                   overlap, psi, psi_dx)

STRETCHED = Representation(1.0, 1.0, 2.0, 0.0)
TILTED = Representation(1.5, 0.8, 0.7, math.pi / 6)
STATIONARY = Representation(1.0, 1.0, 1.0, 0.0)


class TestHermite:
    def test_basis_cases(self):
        xs = np.linspace(-3.0, 3.0, 11)
        assert np.allclose(hermite(0, xs), 1.0)
        assert np.allclose(hermite(1, xs), 2.0 * xs)
        assert np.allclose(hermite(2, xs), 4.0 * xs ** 2 - 2.0)

    def test_cubic_value(self):
        assert hermite(3, 1.0) == -4.0  # 8x^3 - 12x at x = 1

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 12), st.floats(-6.0, 6.0))
    def test_parity(self, n, x):
        assert hermite(n, -x) == pytest.approx((-1.0) ** n * hermite(n, x),
                                               rel=1e-12, abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 20), st.floats(-5.0, 5.0))
    def test_against_scipy(self, n, x):
        assert hermite(n, x) == pytest.approx(float(eval_hermite(n, x)),
                                              rel=1e-10, abs=1e-9)

    def test_rejects_negative_degree(self):
        with pytest.raises(ValueError):
            hermite(-1, 0.0)

    def test_degree_cap(self):
        with pytest.raises(ValueError):
            hermite(MAX_HERMITE_DEGREE + 1, 0.0)

    def test_overflow_reported(self):
        with pytest.raises(OverflowError):
            hermite(64, 1e9)


class TestQuantumState:
    def test_requires_full_validity(self):
        with pytest.raises(InvalidRepresentationError):
            QuantumState(Representation(1, 1, -0.5, 0.0), 0)

    def test_requires_nonnegative_n(self):
        with pytest.raises(ValueError):
            QuantumState(STATIONARY, -1)


class TestPsi:
    def test_stationary_ground_value_at_origin(self):
        value = psi(QuantumState(STATIONARY, 0), 0.0, 0.0)
        assert value == pytest.approx((1.0 / math.pi) ** 0.25)
        assert value.imag == 0.0

    def test_stationary_probability_is_time_independent(self):
        state = QuantumState(STATIONARY, 3)
        xs = np.linspace(-5.0, 5.0, 101)
        base = np.abs(psi(state, xs, 0.0))
        for t in (0.7, 2.9, 4.1):
            assert np.max(np.abs(np.abs(psi(state, xs, t)) - base)) < 1e-12

    @pytest.mark.parametrize("rep", [STRETCHED, TILTED])
    @pytest.mark.parametrize("n", range(7))
    def test_normalization(self, rep, n):
        state = QuantumState(rep, n)
        for t in (0.0, 0.4 * rep.tau0):
            assert abs(norm_quadrature(state, t) - 1.0) < 1e-8

    def test_orthogonality(self):
        t = 0.9
        states = [QuantumState(STRETCHED, n) for n in range(7)]
        for i in range(7):
            for j in range(i + 1, 7):
                assert abs(overlap(states[i], t, states[j], t)) < 1e-8

    def test_quasiperiodicity_identity(self):
        rng = np.random.default_rng(7)
        for _ in range(6):
            rep = Representation(float(rng.uniform(0.5, 2.0)),
                                 float(rng.uniform(0.5, 2.0)),
                                 float(rng.uniform(0.3, 3.0)),
                                 float(rng.uniform(-1.0, 1.0)))
            n = int(rng.integers(0, 7))
            t = float(rng.uniform(0.0, rep.tau0))
            state = QuantumState(rep, n)
            xs = np.linspace(-grid_halfwidth(state), grid_halfwidth(state), 301)
            lhs = psi(state, xs, t + 0.5 * rep.tau0)
            rhs = np.exp(-1j * (n + 0.5) * math.pi) * psi(state, xs, t)
            assert np.max(np.abs(lhs - rhs)) < 1e-9

    def test_psi_dx_matches_finite_difference(self):
        state = QuantumState(TILTED, 3)
        xs = np.linspace(-3.0, 3.0, 41)
        h = 1e-6
        fd = (psi(state, xs + h, 0.8) - psi(state, xs - h, 0.8)) / (2 * h)
        assert np.max(np.abs(psi_dx(state, xs, 0.8) - fd)) < 1e-7

    def test_schrodinger_residual(self):
        # fourth-order differences in t and x against H = p^2/2M + M w^2 x^2/2
        rep = STRETCHED
        state = QuantumState(rep, 2)
        hbar = state.config.hbar
        dx, h, t0 = 0.02, 1e-3, 0.7
        xs = np.arange(-4.0, 4.0 + 1e-12, dx)
        stack = [psi(state, xs, t0 + k * h) for k in (-2, -1, 1, 2)]
        dpsi_dt = (-stack[3] + 8 * stack[2] - 8 * stack[1] + stack[0]) / (12 * h)
        p = psi(state, xs, t0)
        lap = (-p[:-4] + 16 * p[1:-3] - 30 * p[2:-2] + 16 * p[3:-1] - p[4:]) \
            / (12 * dx * dx)
        inner = slice(2, -2)
        hpsi = -hbar ** 2 / (2 * rep.M) * lap \
            + 0.5 * rep.M * rep.w ** 2 * xs[inner] ** 2 * p[inner]
        residual = 1j * hbar * dpsi_dt[inner] - hpsi
        rel = np.linalg.norm(residual) / np.linalg.norm(hpsi)
        assert rel < 1e-5


class TestAlpha:
    def test_stationary_constant(self):
        for t in (0.0, 0.3, 1.9):
            value = alpha(STATIONARY, t)
            assert value == pytest.approx(0.5)
            assert value.imag == pytest.approx(0.0, abs=1e-15)

    def test_stretched_quarter_period(self):
        value = alpha(STRETCHED, math.pi / 4)
        assert value == pytest.approx(0.4 - 0.3j)

    def test_real_part_positive(self):
        ts = np.linspace(0.0, TILTED.tau0, 200)
        assert np.all(np.real(alpha(TILTED, ts)) > 0)

    def test_alpha_dot_matches_finite_difference(self):
        h = 1e-6
        ts = np.linspace(0.0, STRETCHED.tau0, 37)
        fd = (alpha(STRETCHED, ts + h) - alpha(STRETCHED, ts - h)) / (2 * h)
        assert np.max(np.abs(alpha_dot(STRETCHED, ts) - fd)) < 1e-7


class TestEnergy:
    def test_stationary_eigenvalues(self):
        for n in range(5):
            state = QuantumState(STATIONARY, n)
            for t in (0.0, 1.1):
                assert energy_expectation(state, t) == pytest.approx(n + 0.5)

    def test_stretched_value_at_zero(self):
        assert energy_expectation(QuantumState(STRETCHED, 0), 0.0) \
            == pytest.approx(5.0 / 8.0)

    @pytest.mark.parametrize("rep,n", [(STRETCHED, 0), (STRETCHED, 2),
                                       (TILTED, 1)])
    def test_closed_form_vs_spatial_quadrature(self, rep, n):
        state = QuantumState(rep, n)
        for t in (0.0, 0.37 * rep.tau0):
            closed = energy_expectation(state, t)
            quad = energy_expectation_quadrature(state, t)
            assert abs(closed - quad) < 1e-8 * abs(closed)

    def test_scales_with_hbar(self):
        lo = QuantumState(STRETCHED, 1, PhysicalConfig(0.5))
        hi = QuantumState(STRETCHED, 1, PhysicalConfig(1.0))
        assert energy_expectation(hi, 0.9) == pytest.approx(
            2.0 * energy_expectation(lo, 0.9))

    def test_period_average_offset_independent(self):
        state = QuantumState(STRETCHED, 1)
        tau = STRETCHED.tau0

        def average(start):
            value, _ = integrate_1d(
                lambda ts: energy_expectation(state, ts), start, start + tau)
            return value / tau

        assert average(0.0) == pytest.approx(average(1.234), rel=1e-10)

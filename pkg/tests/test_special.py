"""Tests for the special module: traveling waves, Lax pairs and similarity solutions."""

import numpy as np
import pytest

from nullflow.exceptions import (
    DomainError,
    InstabilityError,
    InvalidParametersError,
    NearPoleError,
    PoleEncounteredError,
)
from nullflow.geometry import integrate_frenet
from nullflow.hierarchy import hierarchy_motion
from nullflow.special import (
    WeierstrassParams,
    build_lax,
    charpoly_spread,
    invariants_from_initial_data,
    lax_residual,
    miura_check,
    miura_curvature,
    miura_scale,
    mu_invariant,
    painleve2_pole_free,
    painleve2_residual,
    painleve2_solve,
    rescale_curvature,
    similarity_profile,
    similarity_scale,
    stationary_residual,
    traveling_wave,
    traveling_wave_jet,
    traveling_wave_ode,
    traveling_wave_residual,
    weierstrass_jet,
    weierstrass_p,
)


INVARIANTS = [(4.0, 0.0), (4.0, -1.0), (3.0, 0.5)]
LAX_RESIDUAL_CONSTANT = 50.0


@pytest.fixture
def lemniscatic():
    """Weierstrass invariants g2 = 4, g3 = 0 with roots 1, 0, -1."""
    return WeierstrassParams.from_invariants(4.0, 0.0)


class TestWeierstrassParams:
    """Tests for roots and periods."""

    def test_roots(self, lemniscatic):
        """Test the roots of 4x^3 - 4x."""
        assert (lemniscatic.e1, lemniscatic.e2, lemniscatic.e3) == pytest.approx((1.0, 0.0, -1.0), abs=1e-12)
        assert lemniscatic.parameter == pytest.approx(0.5)
        assert lemniscatic.omega1 == pytest.approx(lemniscatic.omega3)

    @pytest.mark.parametrize(("g2", "g3"), [(0.0, 1.0), (3.0, 1.0), (-1.0, 0.0)])
    def test_rejects_non_real_roots(self, g2, g3):
        """Test invariants without three distinct real roots."""
        with pytest.raises(InvalidParametersError):
            WeierstrassParams.from_invariants(g2, g3)

    def test_general_invariants(self):
        """Test the roots sum to zero and solve the cubic."""
        p = WeierstrassParams.from_invariants(12.0, -2.0)
        roots = np.array([p.e1, p.e2, p.e3])
        assert p.e1 > p.e2 > p.e3
        assert roots.sum() == pytest.approx(0.0, abs=1e-12)
        np.testing.assert_allclose(4 * roots**3 - 12.0 * roots + 2.0, 0.0, atol=1e-10)


class TestWeierstrassFunction:
    """Tests for the Weierstrass function on both real branches."""

    def test_half_period(self, lemniscatic):
        """Test P(w1) = e1 with vanishing slope."""
        value, slope = weierstrass_p(lemniscatic.omega1, lemniscatic)
        assert isinstance(value, float)
        assert value == pytest.approx(1.0)
        assert slope == pytest.approx(0.0, abs=1e-12)

    def test_laurent_behaviour(self, lemniscatic):
        """Test P(x) ~ 1/x^2 near the origin."""
        value, slope = weierstrass_p(1e-3, lemniscatic)
        assert value == pytest.approx(1e6, rel=1e-9)
        assert slope == pytest.approx(-2e9, rel=1e-9)

    @pytest.mark.parametrize(("g2", "g3"), [*INVARIANTS, (12.0, -2.0)])
    @pytest.mark.parametrize("shifted", [False, True])
    def test_differential_equation(self, g2, g3, shifted):
        """Test P'^2 = 4 P^3 - g2 P - g3 on either branch."""
        params = WeierstrassParams.from_invariants(g2, g3)
        x = np.linspace(0.1, params.period - 0.1, 50)
        value, slope = weierstrass_p(x, params, shifted=shifted)
        scale = np.maximum(1.0, np.abs(value) ** 3)
        np.testing.assert_allclose((slope**2 - (4 * value**3 - g2 * value - g3)) / scale, 0.0, atol=1e-10)

    def test_shifted_branch_is_bounded(self, lemniscatic):
        """Test P(x + w3) stays in [e3, e2] and is periodic."""
        x = np.linspace(0.0, lemniscatic.period, 101)
        value, _ = weierstrass_p(x, lemniscatic, shifted=True)
        assert np.all(value >= lemniscatic.e3 - 1e-12)
        assert np.all(value <= lemniscatic.e2 + 1e-12)
        assert value[-1] == pytest.approx(value[0], abs=1e-12)

    @pytest.mark.parametrize("k", [0, 1, -2])
    def test_near_pole(self, lemniscatic, k):
        """Test arguments at lattice points are rejected."""
        with pytest.raises(NearPoleError):
            weierstrass_p(np.array([0.5, k * lemniscatic.period]), lemniscatic)


class TestTravelingWave:
    """Tests for the elliptic traveling wave and its ODE oracle."""

    @pytest.mark.parametrize(("g2", "g3"), INVARIANTS)
    @pytest.mark.parametrize("lam", [0.0, 1.0, -2.5])
    @pytest.mark.parametrize("n", [64, 256, 1024])
    def test_residual(self, g2, g3, lam, n):
        """Test f''' + 6 f f' - lambda f' = 0 on the exact jet at every resolution."""
        params = WeierstrassParams.from_invariants(g2, g3)
        assert traveling_wave_residual(lam, params, n) <= 1e-8

    def test_jet_solves_weierstrass_equation(self):
        """Test the Jacobi derivatives satisfy P'' = 6 P^2 - g2/2 and P''' = 12 P P'."""
        for g2, g3 in INVARIANTS:
            params = WeierstrassParams.from_invariants(g2, g3)
            x = np.linspace(0.0, params.period, 97)
            p, dp, ddp, dddp = weierstrass_jet(x, params)
            np.testing.assert_allclose(ddp, 6 * p**2 - g2 / 2, atol=1e-10)
            np.testing.assert_allclose(dddp, 12 * p * dp, atol=1e-10)

    def test_jet_is_consistent(self, lemniscatic):
        """Test the exact jet against finite differences of the profile."""
        s = np.linspace(0.0, 2.0, 2001)
        h = s[1] - s[0]
        f, f1, f2, _ = traveling_wave_jet(1.0, lemniscatic, s)
        np.testing.assert_allclose(np.gradient(f, h)[1:-1], f1[1:-1], atol=1e-5)
        np.testing.assert_allclose(np.gradient(f1, h)[1:-1], f2[1:-1], atol=1e-4)

    def test_invariants_recovered(self):
        """Test invariants_from_initial_data inverts the wave at any point."""
        params = WeierstrassParams.from_invariants(12.0, -2.0)
        f, f1, f2, _ = traveling_wave_jet(0.7, params, np.array([0.3]))
        g2, g3 = invariants_from_initial_data(0.7, f[0], f1[0], f2[0])
        assert (g2, g3) == pytest.approx((12.0, -2.0), abs=1e-9)

    @pytest.mark.parametrize(("g2", "g3"), INVARIANTS)
    @pytest.mark.parametrize("lam", [0.0, 1.0])
    def test_ode_oracle(self, g2, g3, lam):
        """Test direct integration reproduces the closed form over a period."""
        params = WeierstrassParams.from_invariants(g2, g3)
        s = np.linspace(0.0, params.period, 400)
        f, f1, f2, _ = traveling_wave_jet(lam, params, s[:1])
        numeric = traveling_wave_ode(lam, f[0], f1[0], f2[0], s)
        np.testing.assert_allclose(numeric, traveling_wave(lam, params, s), atol=1e-8)

    def test_ode_blow_up(self, lemniscatic):
        """Test data on the unbounded branch runs into a pole."""
        x0 = 0.5
        value, slope = weierstrass_p(x0, lemniscatic)
        f0, f0p, f0pp = -2.0 * value, -2.0 * slope, -2.0 * (6.0 * value**2 - 2.0)
        s = np.linspace(x0, x0 + lemniscatic.period, 200)
        with pytest.raises(InstabilityError):
            traveling_wave_ode(0.0, f0, f0p, f0pp, s)

    def test_stationary_profile(self):
        """Test -2 s^-2 is a stationary solution away from the origin."""
        assert stationary_residual(np.linspace(0.5, 3.0, 100)) <= 1e-9


class TestLaxPair:
    """Tests for the Lax pair of traveling waves."""

    @pytest.fixture
    def wave_pair(self, lemniscatic):
        """Lax pair of the KdV motion along the lambda = 1 traveling wave, h = 1e-3."""
        lam, h = 1.0, 1e-3
        s = h * np.arange(int(lemniscatic.period / h))
        jets = traveling_wave_jet(lam, lemniscatic, s)
        pair = build_lax(hierarchy_motion(2), jets, lam, s=s)
        midpoints = traveling_wave(lam, lemniscatic, s[:-1] + 0.5 * h)
        curve = integrate_frenet(jets[0], h, midpoints=midpoints)
        return pair, curve

    def test_lax_equation(self, lemniscatic):
        """Test L' = [L, K] along the wave up to C h^2, C measured near 43."""
        residuals = []
        for h in (2e-3, 1e-3):
            s = h * np.arange(int(lemniscatic.period / h))
            pair = build_lax(hierarchy_motion(2), traveling_wave_jet(1.0, lemniscatic, s), 1.0, s=s)
            assert pair.h == pytest.approx(h)
            residuals.append(lax_residual(pair))
            assert residuals[-1] <= LAX_RESIDUAL_CONSTANT * h**2
        assert 3.5 <= residuals[0] / residuals[1] <= 4.5

    def test_mu_is_constant(self, wave_pair):
        """Test F L F^-1 is constant along the curve."""
        pair, curve = wave_pair
        assert mu_invariant(pair, curve.frames) <= 1e-6

    def test_isospectral(self, wave_pair):
        """Test the characteristic polynomial of L is constant."""
        pair, _ = wave_pair
        assert np.all(charpoly_spread(pair) <= 1e-8)

    def test_negative_control(self):
        """Test kappa = sin s is no traveling wave of speed 1."""
        h = 1e-3
        s = h * np.arange(2000)
        jets = [np.sin(s), np.cos(s), -np.sin(s), -np.cos(s)]
        pair = build_lax(hierarchy_motion(2), jets, 1.0, s=s)
        assert lax_residual(pair) > 0.1

    def test_samples_need_step(self):
        """Test plain samples need a grid step for differentiation."""
        with pytest.raises(ValueError, match="grid step"):
            build_lax(hierarchy_motion(2), np.zeros(50), 1.0)
        pair = build_lax(hierarchy_motion(2), np.zeros(50), 1.0, h=0.1)
        assert pair.k.shape == pair.p.shape == (50, 4, 4)
        assert pair.s[-1] == pytest.approx(4.9)


class TestPainleve:
    """Tests for Painleve II and the Miura map."""

    @pytest.mark.parametrize(
        ("c", "v0", "v0p", "window"),
        [(0.0, 0.1, 0.0, (-2.0, 3.0)), (1.0, 0.0, 0.0, (-1.0, 1.0)), (0.5, 0.2, -0.1, (-1.0, 1.0))],
    )
    def test_miura_map(self, c, v0, v0p, window):
        """Test the Miura image of a Painleve II solution solves the reduced flow."""
        x = np.linspace(*window, int(round((window[1] - window[0]) / 1e-3)) + 1)
        solution = painleve2_solve(c, v0, v0p, x)
        assert painleve2_residual(solution) <= 1e-5
        assert miura_check(solution) <= 1e-6

    @pytest.mark.parametrize(("c", "v0", "v0p"), [(0.0, 0.1, 0.0), (0.5, 0.0, 0.1), (1.0, -0.2, 0.0)])
    def test_miura_map_up_to_the_pole(self, c, v0, v0p):
        """Test the Miura residual on [-5, 2] cut short of the movable pole on the left."""
        x = np.linspace(-5.0, 2.0, 7001)
        with pytest.raises(PoleEncounteredError):
            painleve2_solve(c, v0, v0p, x)
        solution = painleve2_pole_free(c, v0, v0p, x)
        assert -5.0 < solution.x[0] < -1.0
        assert solution.x[-1] == 2.0
        assert np.max(np.abs(solution.v)) < 10.0
        assert miura_check(solution) <= 1e-6
        assert miura_check(solution, a=-3.0) <= 1e-6

    def test_miura_residual_does_not_depend_on_the_grid(self):
        """Test the residual stays at rounding level on coarse and fine grids."""
        for count in (71, 701, 7001):
            x = np.linspace(-1.5, 2.0, count)
            assert miura_check(painleve2_solve(0.0, 0.1, 0.0, x)) <= 1e-9

    def test_pole_free_needs_room(self):
        """Test a window that lies beyond the pole is reported."""
        x = np.linspace(0.0, 5.0, 501)
        with pytest.raises(PoleEncounteredError):
            painleve2_pole_free(0.0, 10.0, 0.0, x, margin=10.0)

    def test_initial_data(self):
        """Test the sampled solution honours the data at x0."""
        x = np.linspace(-1.0, 1.0, 21)
        solution = painleve2_solve(0.0, 0.3, -0.2, x)
        assert solution.v[10] == pytest.approx(0.3)
        assert solution.vp[10] == pytest.approx(-0.2)
        np.testing.assert_allclose(solution.second_derivative()[10], 2 * 0.3**3)

    def test_data_off_grid_centre(self):
        """Test integration from an x0 at the window edge."""
        x = np.linspace(0.0, 1.0, 11)
        solution = painleve2_solve(0.0, 0.0, 1.0, x, x0=0.0)
        assert solution.v[0] == 0.0
        assert solution.v[-1] > 0.9

    def test_pole(self):
        """Test a large initial value blows up and reports the valid window."""
        x = np.linspace(0.0, 5.0, 501)
        with pytest.raises(PoleEncounteredError) as exc_info:
            painleve2_solve(0.0, 10.0, 0.0, x)
        error = exc_info.value
        assert 0.0 < error.x_pole < 1.0
        assert error.partial.x.max() <= error.x_pole
        assert error.partial.values.shape == (error.partial.x.size, 2)

    def test_zero_solution(self):
        """Test v = 0 maps to zero curvature."""
        x = np.linspace(-1.0, 1.0, 201)
        solution = painleve2_solve(0.0, 0.0, 0.0, x)
        _, jet = miura_curvature(solution)
        assert len(jet) == 4
        assert all(np.all(k == 0.0) for k in jet)

    def test_miura_scale(self):
        """Test lambda = cbrt(-a/3)."""
        assert miura_scale(-3.0) == pytest.approx(1.0)
        assert miura_scale(3.0) == pytest.approx(-1.0)
        with pytest.raises(ValueError, match="nonzero"):
            miura_scale(0.0)

    def test_negative_scale_reverses_grid(self):
        """Test the curvature nodes are increasing for a negative scale."""
        x = np.linspace(-1.0, 1.0, 101)
        nodes, _ = miura_curvature(painleve2_solve(0.0, 0.1, 0.0, x), a=1.0)
        assert np.all(np.diff(nodes) > 0)


class TestSimilarity:
    """Tests for the self-similar rescaling."""

    def test_scale(self):
        """Test r = (a t + b)^(2/3)."""
        assert similarity_scale(1.0, 1.0, 7.0) == pytest.approx(4.0)
        with pytest.raises(DomainError):
            similarity_scale(1.0, -2.0, 1.0)

    def test_callable_profile(self):
        """Test the rescaling of a function profile."""
        x = np.linspace(-1.0, 1.0, 5)
        result = similarity_profile(x, np.cos, 1.0, 1.0, 7.0)
        np.testing.assert_allclose(result, np.cos(x / 2.0) / 4.0)

    def test_sampled_profile(self):
        """Test sampled profiles are interpolated and NaN outside their nodes."""
        x = np.linspace(-1.0, 1.0, 201)
        inside = rescale_curvature(x, x**2, 4.0)
        np.testing.assert_allclose(inside, x**2 / 16.0, atol=1e-12)
        outside = rescale_curvature(x, x**2, 0.25)
        assert np.all(np.isnan(outside[np.abs(x) > 0.51]))
        assert not np.any(np.isnan(outside[np.abs(x) < 0.49]))

    def test_non_positive_scale(self):
        """Test r <= 0 is rejected."""
        with pytest.raises(ValueError, match="positive"):
            rescale_curvature(np.linspace(0, 1, 5), np.cos, 0.0)

    def test_domain_error_from_profile(self):
        """Test the profile checks a t + b > 0."""
        with pytest.raises(DomainError):
            similarity_profile(np.zeros(3), np.cos, -1.0, 1.0, 2.0)

"""Tests for the hierarchy module."""

import time
from fractions import Fraction

import numpy as np
import pytest

from nullflow.diffpoly import DiffPoly, apply_script_D, euler_operator, total_derivative
from nullflow.exceptions import NotAdmissibleError
from nullflow.hierarchy import (
    density_table,
    generate,
    hamiltonian_forms,
    hierarchy_motion,
    is_admissible,
    kdv_rhs,
    lenard_step,
    linear_symbol,
    motion_from_p3,
    nonlinear_part,
)


class TestGenerate:
    """Tests for the Lenard recursion."""

    def test_first_gradients(self):
        """Test g_0..g_3 against their known closed forms."""
        start = time.perf_counter()
        table = generate(3)
        assert time.perf_counter() - start < 1.0
        assert table.g[0] == DiffPoly.constant(Fraction(1, 2))
        assert table.g[1] == DiffPoly.parse("u0")
        assert table.g[2] == DiffPoly.parse("3*u0^2 + u2")
        assert str(table.g[3]) == "10*u0^3 + 10*u0*u2 + 5*u1^2 + u4"

    def test_densities_reproduce_gradients(self):
        """Test E(p_n) = g_n for every generated member."""
        table = generate(4)
        for p, g in zip(table.p, table.g, strict=True):
            assert euler_operator(p) == g

    def test_lenard_step(self):
        """Test D g_2 = SD g_1 through a single step."""
        g2 = lenard_step(DiffPoly.parse("u0"))
        assert g2 == DiffPoly.parse("3*u0^2 + u2")
        assert total_derivative(g2) == apply_script_D(DiffPoly.parse("u0"))

    def test_n_zero(self):
        """Test generate(0) holds only g_0."""
        table = generate(0)
        assert table.n == 0
        assert table.to_json()["rhs"] is None

    def test_depth_bound(self):
        """Test n beyond the depth bound is rejected."""
        with pytest.raises(ValueError, match="depth"):
            generate(6, max_depth=5)
        assert generate(5, max_depth=5).n == 5

    def test_negative_n(self):
        """Test negative indices are rejected."""
        with pytest.raises(ValueError):
            generate(-1)

    def test_json(self):
        """Test the JSON document layout."""
        document = generate(2).to_json()
        assert document["n"] == 2
        assert len(document["g"]) == len(document["p"]) == 3
        assert DiffPoly.from_json(document["rhs"]) == DiffPoly.parse("-6*u0*u1 - u3")


class TestFlows:
    """Tests for the flows and their Hamiltonian forms."""

    def test_kdv(self):
        """Test the second flow is KdV, u_t = -6 u u_s - u_sss."""
        assert kdv_rhs(2) == DiffPoly.parse("-6*u0*u1 - u3")

    def test_first_flow_is_translation(self):
        """Test the first flow is u_t = -u_s."""
        assert kdv_rhs(1) == DiffPoly.parse("-u1")

    def test_bi_hamiltonian_identity(self):
        """Test D g_n = SD g_{n-1} for n = 1..5."""
        start = time.perf_counter()
        g = generate(5).g
        for n in range(1, 6):
            first, second = hamiltonian_forms(n, g)
            assert first == second
        assert time.perf_counter() - start < 10.0

    def test_fifth_order_flow(self):
        """Test the third flow against its expanded form."""
        expected = DiffPoly.parse("-30*u0^2*u1 - 20*u1*u2 - 10*u0*u3 - u5")
        assert kdv_rhs(3) == expected

    def test_density_table(self):
        """Test the textbook densities agree with the generated ones modulo im(D)."""
        rows = density_table()
        assert len(rows) == 3
        assert all(equal for _, _, equal in rows)


class TestAdmissibility:
    """Tests for the local-motion condition."""

    @pytest.mark.parametrize("text", ["2", "4*u0", "u0^2", "12*u0^2 + 4*u2"])
    def test_admissible(self, text):
        """Test polynomials in u0 and gradients are admissible."""
        assert is_admissible(DiffPoly.parse(text))

    @pytest.mark.parametrize("text", ["u1", "u0*u1"])
    def test_not_admissible(self, text):
        """Test odd-looking generators are rejected."""
        assert not is_admissible(DiffPoly.parse(text))
        with pytest.raises(NotAdmissibleError):
            motion_from_p3(DiffPoly.parse(text))


class TestMotion:
    """Tests for motion_from_p3 and hierarchy_motion."""

    def test_constant_p3(self):
        """Test every component of the motion with p3 = 2."""
        m = motion_from_p3(DiffPoly.constant(2))
        assert m.p1 == DiffPoly.parse("2*u0")
        assert m.p2.is_zero
        assert m.p4 == DiffPoly.parse("-2*u0")
        assert m.p5 == DiffPoly.parse("2*u1")
        assert m.p6 == DiffPoly.parse("4*u0^2 + 2*u2")
        assert m.rhs == DiffPoly.parse("-6*u0*u1 - u3")

    def test_zero_p3(self):
        """Test p3 = 0 gives the trivial motion."""
        m = motion_from_p3(DiffPoly.zero())
        assert all(w.is_zero for w in m.components)
        assert m.rhs.is_zero

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_hierarchy_motion_matches_flow(self, n):
        """Test the n-th motion induces the n-th KdV flow."""
        assert hierarchy_motion(n).rhs == kdv_rhs(n)

    def test_hierarchy_motion_generators(self):
        """Test p3 = 4 g_{n-2}."""
        assert hierarchy_motion(2).p3 == DiffPoly.constant(2)
        assert hierarchy_motion(3).p3 == DiffPoly.parse("4*u0")

    def test_hierarchy_motion_rejects_first_flow(self):
        """Test n < 2 has no curve motion."""
        with pytest.raises(ValueError, match="n >= 2"):
            hierarchy_motion(1)

    def test_evaluate_constant_curvature(self):
        """Test numeric evaluation of p1..p6 for constant curvature."""
        m = motion_from_p3(DiffPoly.constant(2))
        kappa0 = 0.7
        jet = [np.full(4, kappa0)] + [np.zeros(4)] * m.order
        p1, p2, p3, p4, p5, p6 = m.evaluate(jet)
        np.testing.assert_allclose(p1, 2 * kappa0)
        np.testing.assert_allclose(p2, 0.0)
        np.testing.assert_allclose(p3, 2.0)
        np.testing.assert_allclose(p4, -2 * kappa0)
        np.testing.assert_allclose(p5, 0.0)
        np.testing.assert_allclose(p6, 4 * kappa0**2)

    def test_json(self):
        """Test the motion JSON carries every component."""
        document = hierarchy_motion(3).to_json()
        assert set(document) == {"p1", "p2", "p3", "p4", "p5", "p6", "rhs"}


class TestSplitting:
    """Tests for the linear/nonlinear split used by the integrating-factor stepper."""

    def test_linear_symbol_of_kdv(self):
        """Test the symbol of -u3 is i k^3."""
        k = np.array([0.0, 1.0, 2.0])
        np.testing.assert_allclose(linear_symbol(kdv_rhs(2), k), 1j * k**3)

    def test_nonlinear_part(self):
        """Test the nonlinear part of KdV is -6 u0 u1."""
        assert nonlinear_part(kdv_rhs(2)) == DiffPoly.parse("-6*u0*u1")

import math

import numpy as np
import pytest

from src.exceptions import DomainError, MalformedMatrixError, UnphysicalStateError, UnsupportedShapeError
from src.gaussian_core import (
    OMEGA, CovarianceMatrix, StandardForm, symplectic_invariants, symplectic_eigenvalues, is_physical,
    purity, is_pure, standard_form, symmetric_state, pure_symmetric_state, is_symmetric_family,
    single_mode_purity, correlation_coefficient, rotation, single_mode_squeezer, apply_local_symplectic,
    partial_transpose_symplectic_eigenvalue
)

SQRT3_2 = math.sqrt(3.0) / 2.0


class TestCovarianceMatrix:
    """Construction and validation of the 4x4 data model"""

    def test_blocks(self, mixed_c06):
        cm = mixed_c06.to_covariance_matrix()
        assert np.allclose(cm.alpha, np.eye(2))
        assert np.allclose(cm.beta, np.eye(2))
        assert np.allclose(cm.gamma, np.diag([0.6, -0.6]))

    def test_non_symmetric_rejected(self):
        entries = np.eye(4) * 0.5
        entries[0, 2] = 0.1
        with pytest.raises(MalformedMatrixError):
            CovarianceMatrix(entries)

    @pytest.mark.parametrize("entries", [
        np.eye(3),
        [[1, 2], [3, 4]],
        np.full((4, 4), np.nan),
        "not a matrix",
    ])
    def test_malformed_rejected(self, entries):
        with pytest.raises(MalformedMatrixError):
            CovarianceMatrix(entries)

    def test_immutable(self, vacuum):
        cm = vacuum.to_covariance_matrix()
        with pytest.raises(ValueError):
            cm.entries[0, 0] = 3.0
        with pytest.raises(AttributeError):
            cm.foo = 1

    def test_equality_and_hash(self, pure_n1):
        a = pure_n1.to_covariance_matrix()
        b = pure_n1.to_covariance_matrix()
        assert a == b
        assert hash(a) == hash(b)

    def test_standard_form_rejects_non_finite(self):
        with pytest.raises(DomainError):
            StandardForm(float("inf"), 1.0, 0.0, 0.0)


class TestSymplecticInvariants:

    def test_vacuum(self, vacuum):
        inv = symplectic_invariants(vacuum.to_covariance_matrix())
        assert inv.I1 == pytest.approx(0.25)
        assert inv.I2 == pytest.approx(0.25)
        assert inv.I3 == pytest.approx(0.0)
        assert inv.I4 == pytest.approx(1.0 / 16.0)

    def test_pure_n1(self, pure_n1):
        inv = symplectic_invariants(pure_n1.to_covariance_matrix())
        assert inv.I1 == pytest.approx(1.0)
        assert inv.I2 == pytest.approx(1.0)
        assert inv.I3 == pytest.approx(-0.75)
        assert inv.I4 == pytest.approx(1.0 / 16.0, abs=1e-14)

    def test_mixed(self, mixed_c06):
        inv = symplectic_invariants(mixed_c06.to_covariance_matrix())
        assert inv.I3 == pytest.approx(-0.36)
        assert inv.I4 == pytest.approx(0.4096)

    def test_standard_form_identities(self):
        sf = StandardForm(1.3, 0.9, 0.4, -0.2)
        inv = symplectic_invariants(sf.to_covariance_matrix())
        nm = sf.n * sf.m
        assert inv.I1 == pytest.approx(sf.n ** 2)
        assert inv.I2 == pytest.approx(sf.m ** 2)
        assert inv.I3 == pytest.approx(sf.c1 * sf.c2)
        assert inv.I4 == pytest.approx((nm - sf.c1 ** 2) * (nm - sf.c2 ** 2))

    def test_eigenvalues_match_closed_form(self):
        sf = StandardForm(1.3, 0.9, 0.4, -0.2)
        inv = symplectic_invariants(sf.to_covariance_matrix())
        root = math.sqrt(inv.delta ** 2 - 4.0 * inv.I4)
        assert inv.d_minus ** 2 == pytest.approx((inv.delta - root) / 2.0)
        assert inv.d_plus ** 2 == pytest.approx((inv.delta + root) / 2.0)
        assert inv.d_minus <= inv.d_plus

    def test_rejects_raw_arrays(self):
        with pytest.raises(MalformedMatrixError):
            symplectic_invariants(np.eye(4))

    def test_invariant_under_local_rotations(self, random_symmetric_states):
        rng = np.random.default_rng(7)
        for n, c in random_symmetric_states(20, seed=3):
            cm = symmetric_state(n, c).to_covariance_matrix()
            reference = symplectic_invariants(cm)
            for _ in range(100):
                theta_a, theta_b = rng.uniform(0.0, 2.0 * math.pi, 2)
                rotated = symplectic_invariants(apply_local_symplectic(cm, rotation(theta_a), rotation(theta_b)))
                for name in ("I1", "I2", "I3", "I4"):
                    assert abs(getattr(rotated, name) - getattr(reference, name)) <= 1e-10


class TestPhysicality:

    def test_vacuum_saturates(self, vacuum):
        report = is_physical(vacuum.to_covariance_matrix())
        assert report.physical
        assert report.invariant_lhs == pytest.approx(0.5)
        assert report.invariant_rhs == pytest.approx(0.5)
        assert report.d_minus == pytest.approx(0.5)

    def test_pure_state_is_physical(self, pure_n1):
        report = is_physical(pure_n1.to_covariance_matrix())
        assert report.physical
        assert report.d_minus == pytest.approx(0.5, abs=1e-12)

    def test_invariant_inequality_false_positive(self):
        """d_minus = 0.4 rejects the state although the squared inequality holds"""
        cm = StandardForm(0.5, 0.5, 0.3, -0.3).to_covariance_matrix()
        report = is_physical(cm)
        assert not report.physical
        assert report.positive_definite
        assert report.d_minus == pytest.approx(0.4)
        assert report.invariant_lhs == pytest.approx(0.32)
        assert report.invariant_rhs == pytest.approx(0.3524)
        assert report.invariant_inequality_holds

    def test_not_positive_definite(self):
        report = is_physical(StandardForm(1.0, 1.0, 1.5, -1.5).to_covariance_matrix())
        assert not report.physical
        assert not report.positive_definite
        assert math.isnan(report.d_minus)

    def test_agrees_with_uncertainty_matrix(self):
        rng = np.random.default_rng(11)
        for index in range(1000):
            if index % 2:
                n = rng.uniform(0.3, 3.0)
                c = rng.uniform(0.0, n * 0.99)
                entries = symmetric_state(n, c).to_covariance_matrix().entries
            else:
                m = rng.normal(0.0, 0.6, (4, 4))
                product = m @ m.T + 0.05 * np.eye(4)
                entries = 0.5 * (product + product.T)

            cm = CovarianceMatrix(entries)
            brute = np.linalg.eigvalsh(entries + 0.5j * OMEGA)[0] >= -1e-12
            assert is_physical(cm).physical == brute


class TestPurity:

    def test_vacuum(self, vacuum):
        assert purity(vacuum.to_covariance_matrix()) == pytest.approx(1.0)

    def test_thermal(self, thermal):
        assert purity(thermal.to_covariance_matrix()) == pytest.approx(0.25)

    def test_pure_entangled(self, pure_n1):
        cm = pure_n1.to_covariance_matrix()
        assert purity(cm) == pytest.approx(1.0, abs=1e-12)
        assert abs(np.linalg.det(cm.entries) - 1.0 / 16.0) <= 1e-12
        assert is_pure(cm)

    def test_mixed_not_pure(self, mixed_c06):
        assert not is_pure(mixed_c06.to_covariance_matrix())

    def test_unphysical_raises(self):
        with pytest.raises(UnphysicalStateError):
            purity(StandardForm(0.5, 0.5, 0.3, -0.3).to_covariance_matrix())


class TestStandardForm:

    def test_fixed_point(self, mixed_c06):
        sf = standard_form(mixed_c06.to_covariance_matrix())
        assert (sf.n, sf.m, sf.c1, sf.c2) == pytest.approx((1.0, 1.0, 0.6, -0.6), abs=1e-12)

    def test_vacuum(self, vacuum):
        sf = standard_form(vacuum.to_covariance_matrix())
        assert (sf.n, sf.m, sf.c1, sf.c2) == pytest.approx((0.5, 0.5, 0.0, 0.0))

    def test_rotated_pure_state(self, pure_n1):
        cm = apply_local_symplectic(pure_n1.to_covariance_matrix(), rotation(0.7), rotation(2.1))
        sf = standard_form(cm)
        assert (sf.n, sf.m, sf.c1, sf.c2) == pytest.approx((1.0, 1.0, SQRT3_2, -SQRT3_2), abs=1e-9)

    def test_squeezed_asymmetric_state(self):
        original = StandardForm(1.4, 0.8, 0.5, -0.3)
        cm = apply_local_symplectic(original.to_covariance_matrix(),
                                    single_mode_squeezer(0.3) @ rotation(0.4), rotation(-1.2))
        sf = standard_form(cm)
        assert (sf.n, sf.m, sf.c1, sf.c2) == pytest.approx((1.4, 0.8, 0.5, -0.3), abs=1e-9)

    def test_positive_cross_product(self):
        sf = standard_form(StandardForm(1.0, 1.2, 0.2, 0.4).to_covariance_matrix())
        assert sf.c1 == pytest.approx(0.4)
        assert sf.c2 == pytest.approx(0.2)

    def test_round_trip(self, random_symmetric_states):
        for n, c in random_symmetric_states(200, seed=5):
            sf = symmetric_state(n, c)
            back = standard_form(sf.to_covariance_matrix())
            assert abs(back.n - n) <= 1e-12
            assert abs(back.m - n) <= 1e-12
            assert abs(back.c1 - c) <= 1e-12
            assert abs(back.c2 + c) <= 1e-12

    def test_correlation_bounded_by_purity(self, random_symmetric_states):
        for n, c in random_symmetric_states(200, seed=6):
            sf = standard_form(symmetric_state(n, c).to_covariance_matrix())
            assert sf.c1 <= math.sqrt(sf.n ** 2 - 0.25) + 1e-12


class TestSymmetricFamily:

    @pytest.mark.parametrize("n, c", [(0.5, 0.0), (1.0, SQRT3_2), (2.0, math.sqrt(3.75))])
    def test_pure_symmetric_state(self, n, c):
        sf = pure_symmetric_state(n)
        assert sf.c1 == pytest.approx(c)
        assert sf.c2 == pytest.approx(-c)
        assert np.linalg.det(sf.to_covariance_matrix().entries) == pytest.approx(1.0 / 16.0, abs=1e-12)

    def test_pure_symmetric_state_domain(self):
        with pytest.raises(DomainError):
            pure_symmetric_state(0.4)

    def test_single_mode_quantities(self, vacuum, pure_n1, mixed_c06):
        assert single_mode_purity(vacuum) == pytest.approx(1.0)
        assert correlation_coefficient(vacuum) == pytest.approx(0.0)

        assert single_mode_purity(pure_n1) == pytest.approx(0.5)
        assert correlation_coefficient(pure_n1) == pytest.approx(SQRT3_2)
        assert single_mode_purity(pure_n1) ** 2 + correlation_coefficient(pure_n1) ** 2 == pytest.approx(1.0)

        assert single_mode_purity(mixed_c06) == pytest.approx(0.5)
        assert correlation_coefficient(mixed_c06) == pytest.approx(0.6)

    def test_asymmetric_rejected(self):
        sf = StandardForm(1.0, 1.2, 0.3, -0.3)
        assert not is_symmetric_family(sf)
        with pytest.raises(UnsupportedShapeError):
            single_mode_purity(sf)
        with pytest.raises(UnsupportedShapeError):
            correlation_coefficient(sf)


class TestLocalOperations:

    def test_non_symplectic_rejected(self, vacuum):
        with pytest.raises(DomainError):
            apply_local_symplectic(vacuum.to_covariance_matrix(), 2.0 * np.eye(2), np.eye(2))

    def test_partial_transpose_eigenvalue(self, pure_n1, vacuum):
        assert partial_transpose_symplectic_eigenvalue(pure_n1.to_covariance_matrix()) == pytest.approx(1.0 - SQRT3_2)
        assert partial_transpose_symplectic_eigenvalue(vacuum.to_covariance_matrix()) == pytest.approx(0.5)

    def test_symplectic_eigenvalues_of_thermal(self, thermal):
        assert symplectic_eigenvalues(thermal.to_covariance_matrix()) == pytest.approx((1.0, 1.0))

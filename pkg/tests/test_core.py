"""Tests for matrix validation, the Perron root and the negative part."""

import numpy as np
import pytest

from minreflect import (
    JumpEvent,
    NegativeEntryError,
    NoConvergenceError,
    NonSquareError,
    NonzeroDiagonalError,
    negative_part,
    spectral_radius,
    validate_reflection_matrix,
)


class TestValidateReflectionMatrix:
    def test_symmetric_transfer_matrix(self):
        rm = validate_reflection_matrix([[0, 2], [2, 0]])
        assert rm.n == 2
        assert rm.q[0, 1] == 2 and rm.q[1, 0] == 2

    def test_zero_matrix_is_valid_decoupled_system(self):
        rm = validate_reflection_matrix([[0, 0], [0, 0]])
        assert np.all(rm.q == 0)

    def test_negative_entry_rejected(self):
        with pytest.raises(NegativeEntryError):
            validate_reflection_matrix([[0, -1], [1, 0]])

    def test_nonzero_diagonal_rejected(self):
        with pytest.raises(NonzeroDiagonalError):
            validate_reflection_matrix([[0, 1], [1, 0.5]])

    def test_non_square_rejected(self):
        with pytest.raises(NonSquareError):
            validate_reflection_matrix([[0, 1, 2], [1, 0, 3]])

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            validate_reflection_matrix([[0, np.inf], [1, 0]])

    def test_matrix_is_read_only(self):
        rm = validate_reflection_matrix([[0, 2], [2, 0]])
        with pytest.raises(ValueError):
            rm.q[0, 1] = 3.0

    def test_i_minus_q(self):
        rm = validate_reflection_matrix([[0, 2], [2, 0]])
        assert np.array_equal(rm.i_minus_q, [[1, -2], [-2, 1]])


class TestSpectralRadius:
    def test_symmetric_two(self):
        rm = validate_reflection_matrix([[0, 2], [2, 0]])
        assert spectral_radius(rm) == pytest.approx(2.0, abs=1e-10)

    def test_zero_matrix(self):
        rm = validate_reflection_matrix(np.zeros((3, 3)))
        assert spectral_radius(rm) == 0.0

    def test_symmetric_supercritical(self):
        rm = validate_reflection_matrix([[0, 1.05], [1.05, 0]])
        assert spectral_radius(rm) == pytest.approx(1.05, abs=1e-10)

    def test_matches_two_firm_closed_form(self):
        # For zero-diagonal 2x2 the eigenvalues are +-sqrt(q12*q21).
        rng = np.random.default_rng(1234)
        for _ in range(400):
            q12, q21 = rng.uniform(0.0, 2.0, size=2)
            rm = validate_reflection_matrix([[0, q12], [q21, 0]])
            assert spectral_radius(rm, tol=1e-10) == pytest.approx(
                np.sqrt(q12 * q21), abs=1e-10
            )

    def test_matches_dense_eigensolver(self):
        rng = np.random.default_rng(99)
        for _ in range(50):
            n = int(rng.integers(2, 7))
            q = rng.uniform(0.0, 2.0, size=(n, n))
            np.fill_diagonal(q, 0.0)
            rm = validate_reflection_matrix(q)
            expected = float(np.max(np.abs(np.linalg.eigvals(q))))
            assert spectral_radius(rm, tol=1e-10) == pytest.approx(expected, abs=1e-8)

    def test_max_iter_exhaustion_is_reported(self):
        rm = validate_reflection_matrix([[0, 1], [4, 0]])
        with pytest.raises(NoConvergenceError) as exc:
            spectral_radius(rm, tol=1e-12, max_iter=1)
        assert exc.value.iterations == 1

    def test_tol_must_be_positive(self):
        rm = validate_reflection_matrix([[0, 1], [1, 0]])
        with pytest.raises(ValueError):
            spectral_radius(rm, tol=0.0)


class TestNegativePart:
    @pytest.mark.parametrize("a,expected", [(-3, 3), (5, 0), (0, 0), (-0.25, 0.25)])
    def test_values(self, a, expected):
        assert negative_part(a) == expected

    def test_cancellation_identities(self):
        rng = np.random.default_rng(5)
        for a in rng.uniform(-10, 10, size=200):
            npart = negative_part(a)
            if a >= 0:
                assert npart == 0.0
            else:
                assert a + npart == 0.0

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            negative_part(float("nan"))


class TestJumpEvent:
    def test_zero_jump_rejected(self):
        with pytest.raises(ValueError):
            JumpEvent(1.0, np.zeros(2))

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            JumpEvent(-0.5, np.array([1.0, 0.0]))

    def test_fields_are_frozen(self):
        ev = JumpEvent(0.0, np.array([1.0, -1.0]))
        assert ev.t == 0.0
        with pytest.raises(ValueError):
            ev.dz[0] = 2.0

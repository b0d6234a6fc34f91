import numpy as np
import pytest

from sdeim import linalg
from sdeim.errors import DimensionError


class TestQRColumnPivot:
    def test_identity_keeps_natural_order(self):
        fac = linalg.qr_column_pivot(np.eye(3))
        assert list(fac.perm) == [0, 1, 2]
        assert np.allclose(fac.q, np.eye(3))
        assert np.allclose(fac.r, np.eye(3))

    def test_largest_column_norm_first(self):
        # column norms 2 and 1: column 0 must be the first pivot
        fac = linalg.qr_column_pivot(np.array([[0.0, 1.0], [2.0, 0.0]]))
        assert list(fac.perm) == [0, 1]

    def test_reconstruction_identity(self):
        rng = np.random.default_rng(3)
        a = rng.normal(size=(6, 4))
        fac = linalg.qr_column_pivot(a)
        p = np.eye(4)[:, fac.perm]
        assert np.linalg.norm(a @ p - fac.q @ fac.r) / np.linalg.norm(a) < 1e-12
        assert np.linalg.norm(fac.q.T @ fac.q - np.eye(4)) < 1e-12

    def test_diagonal_of_r_nonincreasing(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            a = rng.normal(size=(8, 8))
            fac = linalg.qr_column_pivot(a)
            d = np.abs(np.diag(fac.r))
            assert np.all(np.diff(d) <= 1e-12 * d[0])

    def test_wide_and_tall_shapes(self):
        rng = np.random.default_rng(5)
        for shape in [(3, 7), (7, 3)]:
            a = rng.normal(size=shape)
            fac = linalg.qr_column_pivot(a)
            k = min(shape)
            assert fac.q.shape == (shape[0], k)
            assert fac.r.shape == (k, shape[1])
            p = np.eye(shape[1])[:, fac.perm]
            assert np.linalg.norm(a @ p - fac.q @ fac.r) < 1e-12 * np.linalg.norm(a)

    def test_exact_ties_pick_lowest_index(self):
        # all columns have norm 1; pivot order must be the natural order
        a = np.eye(4)[:, ::-1] * 1.0
        fac = linalg.qr_column_pivot(a)
        assert fac.perm[0] == 0

    def test_empty_matrix_rejected(self):
        with pytest.raises(DimensionError):
            linalg.qr_column_pivot(np.zeros((0, 3)))

    def test_nonfinite_rejected(self):
        with pytest.raises(DimensionError):
            linalg.qr_column_pivot(np.array([[np.nan, 1.0]]))


class TestSvdThin:
    def test_diagonal_case(self):
        _, s, _ = linalg.svd_thin(np.diag([3.0, 1.0]))
        assert np.allclose(s, [3.0, 1.0])

    def test_rank_one(self):
        a = np.outer([1.0, 2.0, 3.0], [4.0, 5.0])
        u, s, v = linalg.svd_thin(a)
        assert np.sum(s > 1e-12 * s[0]) == 1

    def test_reconstruction(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=(5, 3))
        u, s, v = linalg.svd_thin(a)
        assert np.linalg.norm(a - (u * s) @ v.T) / np.linalg.norm(a) < 1e-12
        assert np.linalg.norm(u.T @ u - np.eye(3)) < 1e-12
        assert np.linalg.norm(v.T @ v - np.eye(3)) < 1e-12
        assert np.all(np.diff(s) <= 0)


class TestPinv:
    def test_identity(self):
        assert np.allclose(linalg.pinv(np.eye(4)), np.eye(4))

    def test_row_vector_against_closed_form(self):
        # full row rank: pinv = A^T (A A^T)^(-1)
        a = np.array([[1.0, 2.0]])
        assert np.allclose(linalg.pinv(a), np.array([[0.2], [0.4]]))

    def test_right_inverse_for_full_row_rank(self):
        rng = np.random.default_rng(1)
        a = rng.normal(size=(3, 7))
        assert np.linalg.norm(a @ linalg.pinv(a) - np.eye(3)) < 1e-10

    def test_rank_tol_truncates(self):
        a = np.diag([1.0, 1e-14])
        ap = linalg.pinv(a, rank_tol=1e-8)
        assert ap[1, 1] == 0.0


class TestNullspace:
    def test_full_rank_gives_empty(self):
        z = linalg.nullspace_orthonormal(np.eye(2))
        assert z.shape == (2, 0)

    def test_one_dimensional_kernel(self):
        z = linalg.nullspace_orthonormal(np.array([[1.0, 1.0]]))
        assert z.shape == (2, 1)
        expected = np.array([1.0, -1.0]) / np.sqrt(2.0)
        assert min(
            np.linalg.norm(z.ravel() - expected), np.linalg.norm(z.ravel() + expected)
        ) < 1e-12

    def test_defining_property(self):
        rng = np.random.default_rng(2)
        a = rng.normal(size=(3, 8))
        z = linalg.nullspace_orthonormal(a)
        assert z.shape == (8, 5)
        assert np.linalg.norm(a @ z) < 1e-10 * (1 + np.linalg.norm(a))
        assert np.linalg.norm(z.T @ z - np.eye(5)) < 1e-10


class TestSpectralNorm:
    def test_identity(self):
        assert linalg.spectral_norm(np.eye(5)) == pytest.approx(1.0)

    def test_diagonal(self):
        assert linalg.spectral_norm(np.diag([3.0, 1.0])) == pytest.approx(3.0)

    def test_matches_power_iteration(self):
        rng = np.random.default_rng(4)
        a = rng.normal(size=(6, 4))
        v = rng.normal(size=4)
        for _ in range(500):
            v = a.T @ (a @ v)
            v /= np.linalg.norm(v)
        estimate = np.linalg.norm(a @ v)
        assert linalg.spectral_norm(a) == pytest.approx(estimate, rel=1e-8)


class TestCsvRoundTrip:
    def test_round_trip_preserves_exactly(self, tmp_path):
        rng = np.random.default_rng(7)
        a = rng.normal(size=(4, 3)) * np.pi
        path = tmp_path / "m.csv"
        linalg.save_matrix_csv(path, a)
        b = linalg.load_matrix_csv(path)
        assert np.array_equal(a, b)

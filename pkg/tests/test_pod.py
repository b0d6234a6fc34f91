import numpy as np
import pytest

from sdeim.errors import DimensionError, RankError
from sdeim.pod import BasisMatrix, SnapshotSet, compute_pod, truncation_error


def random_orthonormal(rng, n, m):
    q, _ = np.linalg.qr(rng.normal(size=(n, m)))
    return q[:, :m]


class TestComputePod:
    def test_rank_one_snapshots(self):
        col = np.array([3.0, 0.0, 4.0])
        snaps = np.tile(col[:, None], (1, 7))
        basis = compute_pod(snaps, 1)
        direction = basis.phi[:, 0]
        assert np.allclose(np.abs(direction), np.abs(col) / 5.0)

    def test_orthonormal_output(self):
        rng = np.random.default_rng(0)
        basis = compute_pod(rng.normal(size=(9, 30)), 4)
        gram = basis.phi.T @ basis.phi
        assert np.linalg.norm(gram - np.eye(4)) < 1e-10

    def test_full_spectrum_attached(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=(5, 12))
        basis = compute_pod(x, 2)
        assert basis.singular_values.shape == (5,)
        assert np.allclose(basis.singular_values, np.linalg.svd(x, compute_uv=False))

    def test_m_beyond_rank_raises_with_rank_in_message(self):
        rng = np.random.default_rng(2)
        x = rng.normal(size=(8, 3)) @ rng.normal(size=(3, 20))
        with pytest.raises(RankError, match="rank 3"):
            compute_pod(x, 4)

    def test_snapshotset_wrapper(self):
        rng = np.random.default_rng(3)
        snap = SnapshotSet(rng.normal(size=(6, 11)), source="unit test")
        assert snap.dim == 6 and snap.count == 11
        basis = compute_pod(snap, 2)
        assert basis.n_modes == 2


class TestBasisMatrix:
    def test_rejects_non_orthonormal(self):
        with pytest.raises(ValueError, match="orthonormal"):
            BasisMatrix(np.array([[1.0, 0.0], [0.0, 2.0]]))

    def test_leading_sub_basis(self):
        rng = np.random.default_rng(4)
        basis = BasisMatrix(random_orthonormal(rng, 7, 4))
        sub = basis.leading(2)
        assert sub.n_modes == 2
        assert np.array_equal(sub.phi, basis.phi[:, :2])


class TestCsvHelpers:
    def test_snapshot_and_spectrum_round_trip(self, tmp_path):
        from sdeim.linalg import load_matrix_csv, save_matrix_csv
        from sdeim.pod import load_snapshots, save_singular_values

        rng = np.random.default_rng(9)
        x = rng.normal(size=(5, 8))
        save_matrix_csv(tmp_path / "snaps.csv", x)
        snap = load_snapshots(tmp_path / "snaps.csv")
        assert np.array_equal(snap.snapshots, x)
        basis = compute_pod(snap, 3)
        save_singular_values(tmp_path / "sv.csv", basis)
        back = load_matrix_csv(tmp_path / "sv.csv").ravel()
        assert np.array_equal(back, basis.singular_values)


class TestTruncationError:
    def test_in_range_state_has_zero_error(self):
        rng = np.random.default_rng(5)
        basis = BasisMatrix(random_orthonormal(rng, 8, 3))
        u = basis.phi @ rng.normal(size=3)
        assert truncation_error(u, basis) < 1e-12 * np.linalg.norm(u)

    def test_orthogonal_state_keeps_full_norm(self):
        rng = np.random.default_rng(6)
        q = random_orthonormal(rng, 8, 4)
        basis = BasisMatrix(q[:, :2])
        u = q[:, 3] * 2.5
        assert truncation_error(u, basis) == pytest.approx(2.5, rel=1e-12)

    def test_monotone_in_mode_count(self):
        rng = np.random.default_rng(7)
        x = rng.normal(size=(10, 40))
        b1 = compute_pod(x, 2)
        b2 = compute_pod(x, 5)
        for _ in range(10):
            u = rng.normal(size=10)
            assert truncation_error(u, b2) <= truncation_error(u, b1) + 1e-12

    def test_dimension_mismatch(self):
        rng = np.random.default_rng(8)
        basis = BasisMatrix(random_orthonormal(rng, 6, 2))
        with pytest.raises(DimensionError):
            truncation_error(np.ones(5), basis)

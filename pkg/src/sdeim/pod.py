"""Orthonormal basis extraction from snapshot data."""

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DimensionError, RankError

ORTHONORMALITY_TOL = 1e-10


@dataclass(frozen=True)
class SnapshotSet:
    """Snapshot matrix, one state per column (N x K)."""

    snapshots: np.ndarray
    source: str = ""

    def __post_init__(self):
        snaps = linalg._as_matrix(self.snapshots, "snapshots")
        object.__setattr__(self, "snapshots", snaps)

    @property
    def dim(self):
        return self.snapshots.shape[0]

    @property
    def count(self):
        return self.snapshots.shape[1]


@dataclass(frozen=True)
class BasisMatrix:
    """Orthonormal N x m basis with the full singular spectrum of the data
    it came from."""

    phi: np.ndarray
    singular_values: np.ndarray = field(default=None)

    def __post_init__(self):
        phi = linalg._as_matrix(self.phi, "phi")
        object.__setattr__(self, "phi", phi)
        gram_err = np.linalg.norm(phi.T @ phi - np.eye(phi.shape[1]))
        if gram_err > ORTHONORMALITY_TOL:
            raise ValueError(f"basis columns not orthonormal (||Phi^T Phi - I||_F = {gram_err:.3e})")
        sv = self.singular_values
        if sv is None:
            sv = np.ones(phi.shape[1])
        sv = np.asarray(sv, dtype=float)
        if np.any(np.diff(sv) > 0):
            raise ValueError("singular values must be nonincreasing")
        object.__setattr__(self, "singular_values", sv)

    @property
    def dim(self):
        return self.phi.shape[0]

    @property
    def n_modes(self):
        return self.phi.shape[1]

    def leading(self, m):
        """Sub-basis of the first m modes (same spectrum)."""
        if not 1 <= m <= self.n_modes:
            raise RankError(f"m={m} outside 1..{self.n_modes}")
        return BasisMatrix(self.phi[:, :m].copy(), self.singular_values)


def compute_pod(snapshots, m):
    """Leading m left singular vectors of the snapshot matrix, as given
    (no mean subtraction). singular_values carries the full spectrum."""
    if isinstance(snapshots, SnapshotSet):
        x = snapshots.snapshots
    else:
        x = linalg._as_matrix(snapshots, "snapshots")
    u, s, _ = linalg.svd_thin(x)
    rank = int(np.sum(s > linalg.default_rank_tol(x.shape, s[0])))
    if not 1 <= m <= rank:
        raise RankError(f"m={m} exceeds the numerical rank {rank} of the snapshot matrix")
    return BasisMatrix(u[:, :m].copy(), s)


def truncation_error(u, basis):
    """|| u - Phi Phi^T u ||_2, the best-in-range approximation error."""
    u = np.asarray(u, dtype=float)
    if u.shape != (basis.dim,):
        raise DimensionError(f"state length {u.shape} does not match basis dim {basis.dim}")
    phi = basis.phi
    return float(np.linalg.norm(u - phi @ (phi.T @ u)))


def load_snapshots(path, source=""):
    return SnapshotSet(linalg.load_matrix_csv(path), source=source or str(path))


def save_singular_values(path, basis):
    linalg.save_matrix_csv(path, basis.singular_values.reshape(-1, 1))

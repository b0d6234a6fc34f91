"""Sensor placement, observation extraction, and noise injection."""

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import AssumptionError, DimensionError
from .pod import BasisMatrix

UNIFORM_SPACING_TOL = 1e-12


@dataclass(frozen=True)
class SensorSelection:
    """Ordered distinct row indices into a length-N state vector; stands in
    for the selection matrix S (columns of the identity)."""

    n_state: int
    indices: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=int)
        if idx.ndim != 1 or idx.size < 1:
            raise DimensionError("need at least one sensor index")
        if idx.size > self.n_state:
            raise DimensionError("more sensors than state components")
        if np.any(idx < 0) or np.any(idx >= self.n_state):
            raise DimensionError(f"indices must lie in 0..{self.n_state - 1}")
        if len(set(idx.tolist())) != idx.size:
            raise DimensionError("sensor indices must be distinct")
        object.__setattr__(self, "indices", idx)

    @property
    def n(self):
        return int(self.indices.size)

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write(",".join(str(i) for i in self.indices) + "\n")

    @classmethod
    def from_csv(cls, path, n_state):
        with open(path) as fh:
            idx = [int(tok) for tok in fh.read().strip().split(",")]
        return cls(n_state, np.array(idx))


@dataclass(frozen=True)
class NoiseSpec:
    """Additive Gaussian observation noise, reproducible per seed."""

    std_dev: float
    seed: int = 0

    def __post_init__(self):
        if not np.isfinite(self.std_dev) or self.std_dev < 0:
            raise ValueError("std_dev must be finite and nonnegative")


@dataclass(frozen=True)
class ObservationSeries:
    """Uniformly spaced sensor samples: times (K,), samples (K, n)."""

    times: np.ndarray
    samples: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        y = np.atleast_2d(np.asarray(self.samples, dtype=float))
        if y.shape[0] != t.size:
            raise DimensionError("times and samples length mismatch")
        if t.size < 2:
            raise DimensionError("need at least two samples")
        gaps = np.diff(t)
        if np.any(gaps <= 0):
            raise DimensionError("times must be strictly increasing")
        if gaps.max() - gaps.min() > UNIFORM_SPACING_TOL * max(1.0, abs(t[-1])):
            raise DimensionError("observation spacing must be uniform")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "samples", y)

    @property
    def dt(self):
        return float(self.times[1] - self.times[0])

    @property
    def n(self):
        return self.samples.shape[1]

    def to_csv(self, path):
        linalg.save_matrix_csv(path, np.column_stack([self.times, self.samples]))

    @classmethod
    def from_csv(cls, path):
        a = linalg.load_matrix_csv(path)
        return cls(a[:, 0], a[:, 1:])


def qdeim_place(basis, n):
    """Sensor placement from the column-pivot order of Phi^T: the first n
    pivots. Deterministic given the basis (ties resolve to lowest index)."""
    if not 1 <= n <= basis.dim:
        raise DimensionError(f"n={n} outside 1..{basis.dim}")
    fac = linalg.qr_column_pivot(basis.phi.T)
    return SensorSelection(basis.dim, fac.perm[:n].copy())


def observe(u, sel):
    """y = S^T u: pick the sensed components."""
    u = np.asarray(u, dtype=float)
    if u.shape != (sel.n_state,):
        raise DimensionError(f"state length {u.shape} does not match N={sel.n_state}")
    return u[sel.indices].copy()


def scatter(y, sel):
    """S y: embed observations into a zero state vector."""
    y = np.asarray(y, dtype=float)
    if y.shape != (sel.n,):
        raise DimensionError(f"observation length {y.shape} does not match n={sel.n}")
    out = np.zeros(sel.n_state)
    out[sel.indices] = y
    return out


def observe_trajectory(times, states, sel):
    """Sample a trajectory at the sensor indices into an ObservationSeries."""
    states = np.asarray(states, dtype=float)
    return ObservationSeries(np.asarray(times, dtype=float), states[:, sel.indices])


def add_noise(series, spec):
    """Independent N(0, std) draws on every sample entry; the seeded
    generator makes equal seeds produce bit-identical output."""
    if spec.std_dev == 0.0:
        return ObservationSeries(series.times.copy(), series.samples.copy())
    rng = np.random.default_rng(spec.seed)
    noise = rng.normal(0.0, spec.std_dev, size=series.samples.shape)
    return ObservationSeries(series.times.copy(), series.samples + noise)


@dataclass(frozen=True)
class DeimCore:
    """Cached factorizations for one (basis, sensors) pair.

    s_phi = S^T Phi (n x m), s_phi_pinv its pseudoinverse, kernel_matrix Z
    an orthonormal basis of N[S^T Phi] (m x (m-n) when n < m), and
    prefactor = ||(S^T Phi)^+||_2, the error-bound constant.
    """

    basis: BasisMatrix
    selection: SensorSelection
    s_phi: np.ndarray
    s_phi_pinv: np.ndarray
    kernel_matrix: np.ndarray
    prefactor: float

    @property
    def dim(self):
        return self.basis.dim

    @property
    def n_modes(self):
        return self.basis.n_modes

    @property
    def n_sensors(self):
        return self.selection.n

    @property
    def kernel_dim(self):
        return self.kernel_matrix.shape[1]


def build_deim_core(basis, sel):
    """Factor S^T Phi once; raises AssumptionError when it is rank
    deficient (the full-rank sampling assumption)."""
    if sel.n_state != basis.dim:
        raise DimensionError("selection and basis dimension mismatch")
    s_phi = basis.phi[sel.indices, :].copy()
    n, m = s_phi.shape
    rank = linalg.matrix_rank(s_phi)
    if rank != min(n, m):
        raise AssumptionError(
            f"rank(S^T Phi) = {rank} < min(n, m) = {min(n, m)}: sampled basis is rank deficient"
        )
    s_phi_pinv = linalg.pinv(s_phi)
    kernel = linalg.nullspace_orthonormal(s_phi)
    prefactor = linalg.spectral_norm(s_phi_pinv)
    return DeimCore(
        basis=basis,
        selection=sel,
        s_phi=s_phi,
        s_phi_pinv=s_phi_pinv,
        kernel_matrix=kernel,
        prefactor=prefactor,
    )

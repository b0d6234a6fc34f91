"""Vector fields and fixed-step time integration."""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import linalg
from .errors import DimensionError, DivergenceError

DIVERGENCE_LIMIT = 1e8


@dataclass(frozen=True)
class VectorField:
    """Autonomous ODE right-hand side u' = rhs(u) on R^dim."""

    dim: int
    rhs: Callable[[np.ndarray], np.ndarray]
    params: dict = field(default_factory=dict)

    def __call__(self, u):
        return self.rhs(u)


@dataclass(frozen=True)
class Trajectory:
    """Recorded solution: times (K,) strictly increasing, states (K, dim)."""

    times: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        x = np.atleast_2d(np.asarray(self.states, dtype=float))
        if x.shape[0] != t.size:
            raise DimensionError("times and states length mismatch")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise DimensionError("times must be strictly increasing")
        if not np.all(np.isfinite(x)):
            raise DimensionError("states contain non-finite entries")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "states", x)

    @property
    def dim(self):
        return self.states.shape[1]

    def to_csv(self, path):
        linalg.save_matrix_csv(path, np.column_stack([self.times, self.states]))

    @classmethod
    def from_csv(cls, path):
        a = linalg.load_matrix_csv(path)
        return cls(a[:, 0], a[:, 1:])


def lorenz63(sigma=10.0, rho=28.0, beta=8.0 / 3.0):
    """Classic three-variable convection model:
    u1' = sigma (u2 - u1), u2' = u1 (rho - u3) - u2, u3' = u1 u2 - beta u3.
    """

    def rhs(u):
        return np.array([
            sigma * (u[1] - u[0]),
            u[0] * (rho - u[2]) - u[1],
            u[0] * u[1] - beta * u[2],
        ])

    return VectorField(dim=3, rhs=rhs, params={"sigma": sigma, "rho": rho, "beta": beta})


def lorenz96(n_sites=40, forcing=2.0):
    """Cyclic lattice model u_i' = (u_{i+1} - u_{i-2}) u_{i-1} - u_i + F
    with periodic index wrapping; needs at least 4 sites."""
    if n_sites < 4:
        raise DimensionError("lorenz96 needs n_sites >= 4")
    ip1 = np.roll(np.arange(n_sites), -1)
    im1 = np.roll(np.arange(n_sites), 1)
    im2 = np.roll(np.arange(n_sites), 2)

    def rhs(u):
        return (u[ip1] - u[im2]) * u[im1] - u + forcing

    return VectorField(dim=n_sites, rhs=rhs, params={"N": n_sites, "F": forcing})


def linear_field(a):
    """u' = A u for a square matrix A."""
    a = linalg._as_matrix(a, "linear field matrix")
    if a.shape[0] != a.shape[1]:
        raise DimensionError("linear field needs a square matrix")

    def rhs(u):
        return a @ u

    return VectorField(dim=a.shape[0], rhs=rhs, params={"a": a})


def shifted_field(f, offset):
    """The field seen from coordinates v = u - offset: v' = f(v + offset)."""
    offset = np.asarray(offset, dtype=float)
    if offset.shape != (f.dim,):
        raise DimensionError("offset length does not match field dimension")

    def rhs(v):
        return f.rhs(v + offset)

    return VectorField(dim=f.dim, rhs=rhs, params=dict(f.params, offset=offset))


def rk4_step(f, u, dt):
    k1 = f.rhs(u)
    k2 = f.rhs(u + 0.5 * dt * k1)
    k3 = f.rhs(u + 0.5 * dt * k2)
    k4 = f.rhs(u + dt * k3)
    return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(f, u0, t_end, dt, record_every=1):
    """Classical fixed-step RK4 from t=0 to t_end.

    Records every record_every-th step plus the initial and final states;
    raises DivergenceError (with the last valid time) if the state leaves
    the finite range.
    """
    if dt <= 0 or t_end <= 0:
        raise ValueError("dt and t_end must be positive")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    u = np.asarray(u0, dtype=float).copy()
    if u.shape != (f.dim,):
        raise DimensionError(f"initial state length {u.shape} does not match dim {f.dim}")
    n_steps = int(round(t_end / dt))
    times = [0.0]
    states = [u.copy()]
    for k in range(1, n_steps + 1):
        u = rk4_step(f, u, dt)
        if not np.all(np.isfinite(u)) or np.max(np.abs(u)) > DIVERGENCE_LIMIT:
            raise DivergenceError(
                f"state diverged at t={k * dt:.6g}", t_last=(k - 1) * dt
            )
        if k % record_every == 0 or k == n_steps:
            times.append(k * dt)
            states.append(u.copy())
    return Trajectory(np.array(times), np.array(states))


def advance(f, u0, t_span, dt):
    """Endpoint state only (spin-up helper; nothing recorded)."""
    traj_free = np.asarray(u0, dtype=float).copy()
    n_steps = int(round(t_span / dt))
    for k in range(n_steps):
        traj_free = rk4_step(f, traj_free, dt)
        if not np.all(np.isfinite(traj_free)) or np.max(np.abs(traj_free)) > DIVERGENCE_LIMIT:
            raise DivergenceError(f"state diverged at t={(k + 1) * dt:.6g}", t_last=k * dt)
    return traj_free

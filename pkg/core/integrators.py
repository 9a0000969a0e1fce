"""Time integration of the pendulum equations

Velocity Verlet is the production scheme; classical RK4 is kept as the
non-symplectic reference used to cross-check it.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from config.settings import DEFAULT_STEP, DEFAULT_STRIDE
from core.dynamics import PhaseState, SystemParams, hamiltonian_array
from core.exceptions import ConfigError, IntegrationDivergence, ZeroEnergy

logger = logging.getLogger(__name__)

METHODS = ("verlet", "reference")


@dataclass(frozen=True)
class IntegratorConfig:
    k: float = DEFAULT_STEP
    method: str = "verlet"
    t_final: float = 1.0
    sample_stride: int = DEFAULT_STRIDE

    def __post_init__(self):
        if not self.k > 0:
            raise ConfigError(f"step size must be positive, got {self.k}")
        if not self.t_final > 0:
            raise ConfigError(f"t_final must be positive, got {self.t_final}")
        if self.sample_stride < 1:
            raise ConfigError(f"sample_stride must be >= 1, got {self.sample_stride}")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method '{self.method}', expected one of {METHODS}")

    @property
    def n_steps(self) -> int:
        # Guard against t_final/k landing a hair above an integer
        return max(1, math.ceil(self.t_final / self.k - 1e-9))


@dataclass
class Trajectory:
    """Sampled solution; row i of `samples` is the state (q1, p1, q2, p2) at times[i]"""
    params: SystemParams
    times: np.ndarray
    samples: np.ndarray

    def __len__(self) -> int:
        return len(self.times)

    @property
    def states(self) -> List[PhaseState]:
        return [PhaseState.from_sequence(row) for row in self.samples]

    def state_at(self, index: int) -> PhaseState:
        return PhaseState.from_sequence(self.samples[index])

    @property
    def final_state(self) -> PhaseState:
        return self.state_at(-1)


def _verlet_raw(q1, p1, q2, p2, k, kappa, rho, eps):
    f1 = -kappa * q1 - 2.0 * eps * q1 * q2 * q2
    f2 = -rho * q2 - 2.0 * eps * q2 * q1 * q1
    half_k2 = 0.5 * k * k
    # both positions move before either momentum update
    x = q1 + k * p1 + half_k2 * f1
    y = q2 + k * p2 + half_k2 * f2
    g1 = -kappa * x - 2.0 * eps * x * y * y
    g2 = -rho * y - 2.0 * eps * y * x * x
    return x, p1 + 0.5 * k * (g1 + f1), y, p2 + 0.5 * k * (g2 + f2)


def _rhs(q1, p1, q2, p2, kappa, rho, eps):
    return (p1, -kappa * q1 - 2.0 * eps * q1 * q2 * q2,
            p2, -rho * q2 - 2.0 * eps * q2 * q1 * q1)


def _rk4_raw(q1, p1, q2, p2, k, kappa, rho, eps):
    a = _rhs(q1, p1, q2, p2, kappa, rho, eps)
    h = 0.5 * k
    b = _rhs(q1 + h * a[0], p1 + h * a[1], q2 + h * a[2], p2 + h * a[3], kappa, rho, eps)
    c = _rhs(q1 + h * b[0], p1 + h * b[1], q2 + h * b[2], p2 + h * b[3], kappa, rho, eps)
    d = _rhs(q1 + k * c[0], p1 + k * c[1], q2 + k * c[2], p2 + k * c[3], kappa, rho, eps)
    w = k / 6.0
    return (q1 + w * (a[0] + 2.0 * b[0] + 2.0 * c[0] + d[0]),
            p1 + w * (a[1] + 2.0 * b[1] + 2.0 * c[1] + d[1]),
            q2 + w * (a[2] + 2.0 * b[2] + 2.0 * c[2] + d[2]),
            p2 + w * (a[3] + 2.0 * b[3] + 2.0 * c[3] + d[3]))


_STEPPERS = {"verlet": _verlet_raw, "reference": _rk4_raw}


def verlet_step(params: SystemParams, s: PhaseState, k: float) -> PhaseState:
    """One velocity Verlet step of size k"""
    if not k > 0:
        raise ConfigError(f"step size must be positive, got {k}")
    return PhaseState(*_verlet_raw(s.q1, s.p1, s.q2, s.p2, k,
                                   params.kappa, params.rho, params.epsilon))


def reference_step(params: SystemParams, s: PhaseState, k: float) -> PhaseState:
    """One classical Runge-Kutta step of size k"""
    if not k > 0:
        raise ConfigError(f"step size must be positive, got {k}")
    return PhaseState(*_rk4_raw(s.q1, s.p1, s.q2, s.p2, k,
                                params.kappa, params.rho, params.epsilon))


def step_with(method: str, params: SystemParams, state: Tuple[float, float, float, float],
              k: float) -> Tuple[float, float, float, float]:
    """Tuple-level single step, used by crossing refinement"""
    return _STEPPERS[method](*state, k, params.kappa, params.rho, params.epsilon)


def integrate(params: SystemParams, s0: PhaseState, cfg: IntegratorConfig) -> Trajectory:
    """Integrate from s0 for ceil(t_final/k) steps, sampling every sample_stride steps

    The final step is always sampled. Raises IntegrationDivergence with the
    offending step index if the state stops being finite.
    """
    stepper = _STEPPERS[cfg.method]
    n_steps = cfg.n_steps
    stride = cfg.sample_stride
    n_samples = n_steps // stride + 1 + (1 if n_steps % stride else 0)

    times = np.empty(n_samples)
    samples = np.empty((n_samples, 4))
    times[0] = 0.0
    samples[0] = s0.as_tuple()

    k, kappa, rho, eps = cfg.k, params.kappa, params.rho, params.epsilon
    q1, p1, q2, p2 = s0.as_tuple()
    row = 1
    for i in range(1, n_steps + 1):
        q1, p1, q2, p2 = stepper(q1, p1, q2, p2, k, kappa, rho, eps)
        if not math.isfinite(q1 + p1 + q2 + p2):
            logger.error(f"Integration diverged at step {i} (t={i * k})")
            raise IntegrationDivergence(i)
        if i % stride == 0 or i == n_steps:
            times[row] = i * k
            samples[row] = (q1, p1, q2, p2)
            row += 1

    logger.debug(f"{cfg.method}: {n_steps} steps, {row} samples, eps={eps}")
    return Trajectory(params=params, times=times[:row], samples=samples[:row])


def reverse_state(s: PhaseState) -> PhaseState:
    """Momentum flip; integrating from it runs the time-reversed system"""
    return PhaseState(s.q1, -s.p1, s.q2, -s.p2)


def energy_drift(traj: Trajectory) -> float:
    """max_t |H(s_t) - H(s_0)| / |H(s_0)| over the samples"""
    if len(traj) == 0:
        raise ConfigError("empty trajectory")
    energies = hamiltonian_array(traj.params, traj.samples)
    e0 = energies[0]
    if e0 == 0.0:
        raise ZeroEnergy("energy drift is undefined when H(s0) = 0")
    return float(np.max(np.abs(energies - e0)) / abs(e0))

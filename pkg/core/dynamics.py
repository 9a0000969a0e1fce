"""Phase space, parameters, Hamiltonian and the exact H0 flow of the pendulum"""

import math
from dataclasses import dataclass, astuple
from typing import Tuple

import numpy as np

from config.settings import PRESET_MASS, PRESET_INERTIA, PRESET_OMEGA1, PRESET_OMEGA2
from core.exceptions import ConfigError


@dataclass(frozen=True)
class SystemParams:
    """Mass, inertia, mode frequencies and coupling of the quartic-coupled oscillator"""
    m: float = PRESET_MASS
    I: float = PRESET_INERTIA
    omega1: float = PRESET_OMEGA1
    omega2: float = PRESET_OMEGA2
    epsilon: float = 0.0

    def __post_init__(self):
        if self.m <= 0 or self.I <= 0:
            raise ConfigError(f"mass and inertia must be positive (m={self.m}, I={self.I})")
        if self.omega1 <= 0 or self.omega2 <= 0:
            raise ConfigError(f"frequencies must be positive ({self.omega1}, {self.omega2})")
        if self.epsilon < 0 or not math.isfinite(self.epsilon):
            raise ConfigError(f"coupling must be finite and nonnegative, got {self.epsilon}")

    @property
    def kappa(self) -> float:
        """Elongation stiffness m*omega1^2"""
        return self.m * self.omega1 ** 2

    @property
    def rho(self) -> float:
        """Torsion stiffness I*omega2^2"""
        return self.I * self.omega2 ** 2

    @property
    def is_resonant(self) -> bool:
        return (self.omega1, self.omega2) == (1.0, 2.0)

    def with_epsilon(self, epsilon: float) -> "SystemParams":
        return SystemParams(self.m, self.I, self.omega1, self.omega2, epsilon)


def resonant_params(epsilon: float = 0.0) -> SystemParams:
    """The resonant preset m = I = omega1 = 1, omega2 = 2"""
    return SystemParams(epsilon=epsilon)


@dataclass(frozen=True)
class PhaseState:
    """A point (q1, p1, q2, p2) of the 4D phase space"""
    q1: float
    p1: float
    q2: float
    p2: float

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return astuple(self)

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_sequence(cls, values) -> "PhaseState":
        q1, p1, q2, p2 = (float(v) for v in values)
        return cls(q1, p1, q2, p2)

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in astuple(self))


def hamiltonian(params: SystemParams, s: PhaseState) -> float:
    """Full Hamiltonian H = 1/2(p1^2 + k q1^2 + p2^2 + r q2^2) + eps q1^2 q2^2"""
    return (0.5 * (s.p1 ** 2 + params.kappa * s.q1 ** 2 + s.p2 ** 2 + params.rho * s.q2 ** 2)
            + params.epsilon * s.q1 ** 2 * s.q2 ** 2)


def hamiltonian_array(params: SystemParams, states: np.ndarray) -> np.ndarray:
    """Vectorized hamiltonian over rows (q1, p1, q2, p2)"""
    q1, p1, q2, p2 = states[:, 0], states[:, 1], states[:, 2], states[:, 3]
    return (0.5 * (p1 ** 2 + params.kappa * q1 ** 2 + p2 ** 2 + params.rho * q2 ** 2)
            + params.epsilon * q1 ** 2 * q2 ** 2)


def h0(params: SystemParams, s: PhaseState) -> float:
    """Unperturbed part with unit mass and inertia"""
    return 0.5 * (s.p1 ** 2 + (params.omega1 * s.q1) ** 2 + s.p2 ** 2 + (params.omega2 * s.q2) ** 2)


def forces(params: SystemParams, x: float, y: float) -> Tuple[float, float]:
    """Generalized forces (F1, F2) at positions (q1, q2) = (x, y)"""
    eps = params.epsilon
    return (-params.kappa * x - 2.0 * eps * x * y * y,
            -params.rho * y - 2.0 * eps * y * x * x)


def vector_field(params: SystemParams, s: PhaseState) -> Tuple[float, float, float, float]:
    """(dq1, dp1, dq2, dp2) of the first-order system"""
    f1, f2 = forces(params, s.q1, s.q2)
    return (s.p1, f1, s.p2, f2)


def vector_field_array(params: SystemParams, y: np.ndarray) -> np.ndarray:
    q1, p1, q2, p2 = y
    f1, f2 = forces(params, q1, q2)
    return np.array([p1, f1, p2, f2])


def jacobian(params: SystemParams, y: np.ndarray) -> np.ndarray:
    """Derivative of the vector field at y = (q1, p1, q2, p2)"""
    q1, _, q2, _ = y
    eps = params.epsilon
    return np.array([
        [0.0, 1.0, 0.0, 0.0],
        [-params.kappa - 2.0 * eps * q2 * q2, 0.0, -4.0 * eps * q1 * q2, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [-4.0 * eps * q1 * q2, 0.0, -params.rho - 2.0 * eps * q1 * q1, 0.0],
    ])


def _rotate(q: float, p: float, omega: float, t: float) -> Tuple[float, float]:
    c, sn = math.cos(omega * t), math.sin(omega * t)
    return q * c + (p / omega) * sn, -q * omega * sn + p * c


def h0_flow(omega1: float, omega2: float, s: PhaseState, t: float) -> PhaseState:
    """Exact flow of X_H0 at time t"""
    if omega1 <= 0 or omega2 <= 0:
        raise ConfigError("frequencies must be positive")
    q1, p1 = _rotate(s.q1, s.p1, omega1, t)
    q2, p2 = _rotate(s.q2, s.p2, omega2, t)
    return PhaseState(q1, p1, q2, p2)


# Canonical symplectic matrix in the ordering (q1, p1, q2, p2)
SYMPLECTIC_J = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
])

"""Poincare section q2 = 0 on an energy level of the full Hamiltonian"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from config.settings import (
    BISECTION_MAX_ITER, DEFAULT_SEED, DEFAULT_STEP, SECTION_COUNT, SECTION_ENERGY,
    SECTION_J_RANGE, SECTION_MAX_CROSSINGS, SECTION_ORDERINGS, SECTION_Q1, SECTION_Q2,
    TOLERANCES,
)
from core.dynamics import PhaseState, SystemParams, hamiltonian, resonant_params
from core.exceptions import ConfigError, DiscriminantNegative, EmptySample, IntegrationDivergence
from core.integrators import step_with
from utils.seeds import derive_seed

logger = logging.getLogger(__name__)

BRANCHES = ("+", "-", "both")


@dataclass(frozen=True)
class SectionConfig:
    h: float = SECTION_ENERGY
    epsilon: float = 0.0
    branch: str = "+"
    max_crossings: int = SECTION_MAX_CROSSINGS
    k: float = DEFAULT_STEP
    seed: int = DEFAULT_SEED
    count: int = SECTION_COUNT
    ordering: str = "section"
    t_max: Optional[float] = None

    def __post_init__(self):
        if not self.h > 0:
            raise ConfigError(f"section energy must be positive, got {self.h}")
        if self.max_crossings < 1:
            raise ConfigError("max_crossings must be >= 1")
        if self.branch not in BRANCHES:
            raise ConfigError(f"branch must be one of {BRANCHES}, got '{self.branch}'")
        if self.ordering not in SECTION_ORDERINGS:
            raise ConfigError(f"ordering must be one of {SECTION_ORDERINGS}")
        if not self.k > 0 or self.count < 1:
            raise ConfigError("k must be positive and count >= 1")

    @property
    def time_limit(self) -> float:
        # q2 oscillates at frequency >= 2, so crossings come at least every pi/2
        return self.t_max if self.t_max is not None else math.pi * self.max_crossings

    def params(self, base: Optional[SystemParams] = None) -> SystemParams:
        return (base or resonant_params()).with_epsilon(self.epsilon)


@dataclass(frozen=True)
class SectionPoint:
    p1: float
    q1: float
    t_cross: float
    branch_at_crossing: str
    q2_residual: float = 0.0


def solve_p2(h: float, p1: float, q1: float, q2: float, epsilon: float, branch: str = "+",
             params: Optional[SystemParams] = None) -> float:
    """Momentum p2 closing the energy equation H = h; branch picks the root sign"""
    params = (params or resonant_params()).with_epsilon(epsilon)
    discriminant = (2.0 * (h - epsilon * (q1 * q2) ** 2)
                    - (p1 ** 2 + params.kappa * q1 ** 2 + params.rho * q2 ** 2))
    if discriminant < 0:
        raise DiscriminantNegative(
            f"state (p1={p1}, q1={q1}, q2={q2}) is not on the level h={h} (disc={discriminant:.3e})")
    root = math.sqrt(discriminant)
    return root if branch == "+" else -root


def complete_state(point: SectionPoint, h: float, epsilon: float,
                   params: Optional[SystemParams] = None) -> PhaseState:
    """Lift a section point back to phase space with q2 = 0"""
    p2 = solve_p2(h, point.p1, point.q1, 0.0, epsilon, point.branch_at_crossing, params)
    return PhaseState(point.q1, point.p1, 0.0, p2)


def _assemble(cfg: SectionConfig, j: int, branch: str,
              params: SystemParams) -> PhaseState:
    a, b = j / 100.0, SECTION_Q1
    p1, q1 = (a, b) if cfg.ordering == "section" else (b, a)
    q2 = SECTION_Q2
    p2 = solve_p2(cfg.h, p1, q1, q2, cfg.epsilon, branch, params)
    return PhaseState(q1, p1, q2, p2)


def sample_initial_conditions(cfg: SectionConfig,
                              params: Optional[SystemParams] = None) -> List[PhaseState]:
    """Draw cfg.count states of the form (j/100, 1.5, p2, 0.01) on the level cfg.h

    Draw i uses its own RNG stream derived from (seed, i). With branch "both"
    each draw contributes one state per sign of p2.
    """
    params = cfg.params(params)
    branches = ("+", "-") if cfg.branch == "both" else (cfg.branch,)
    low, high = SECTION_J_RANGE
    states = []
    for i in range(cfg.count):
        rng = np.random.default_rng(derive_seed(cfg.seed, "ic", i))
        j = int(rng.integers(low, high + 1))
        for branch in branches:
            try:
                states.append(_assemble(cfg, j, branch, params))
            except DiscriminantNegative as e:
                logger.debug(f"Skipping draw {i} (j={j}): {e}")
    if not states:
        raise EmptySample(f"no initial condition fits on the level h={cfg.h}")
    logger.info(f"Sampled {len(states)} initial conditions on h={cfg.h}, eps={cfg.epsilon}")
    return states


def _crosses(q_prev: float, q_new: float) -> bool:
    return (q_prev < 0.0 <= q_new) or (q_prev > 0.0 >= q_new)


def _refine(params: SystemParams, state, k: float, tol: float):
    """Bisect the sub-step tau in (0, k] until |q2| < tol"""
    q_left = state[2]
    lo, hi = 0.0, k
    refined = step_with("verlet", params, state, hi)
    if refined[2] == 0.0:
        return hi, refined
    for _ in range(BISECTION_MAX_ITER):
        mid = 0.5 * (lo + hi)
        trial = step_with("verlet", params, state, mid)
        if abs(trial[2]) < tol:
            return mid, trial
        if (trial[2] < 0.0) == (q_left < 0.0):
            lo = mid
        else:
            hi, refined = mid, trial
        if hi - lo <= 4.0 * np.finfo(float).eps * max(hi, 1e-300):
            break
    return hi, refined


def section_points(params: SystemParams, s0: PhaseState, cfg: SectionConfig) -> List[SectionPoint]:
    """Record crossings of q2 = 0 along the Verlet trajectory from s0"""
    energy = hamiltonian(params, s0)
    if abs(energy - cfg.h) > TOLERANCES["surface"]:
        raise ConfigError(f"initial state has H={energy!r}, expected h={cfg.h}")

    k, tol = cfg.k, TOLERANCES["crossing"]
    n_max = math.ceil(cfg.time_limit / k)

    points: List[SectionPoint] = []
    state = s0.as_tuple()
    for i in range(n_max):
        new = step_with("verlet", params, state, k)
        if not math.isfinite(sum(new)):
            raise IntegrationDivergence(i + 1)
        if _crosses(state[2], new[2]):
            tau, hit = _refine(params, state, k, tol)
            points.append(SectionPoint(
                p1=hit[1], q1=hit[0], t_cross=i * k + tau,
                branch_at_crossing="+" if hit[3] >= 0.0 else "-",
                q2_residual=abs(hit[2]),
            ))
            if len(points) >= cfg.max_crossings:
                break
        state = new

    if len(points) < cfg.max_crossings:
        logger.warning(f"Only {len(points)}/{cfg.max_crossings} crossings before t={cfg.time_limit}")
    return points


def circle_residuals(points: List[SectionPoint], s0: PhaseState) -> np.ndarray:
    """|p1^2 + q1^2 - (p1_0^2 + q1_0^2)| per point; zero at eps = 0 up to O(k^2)"""
    r0 = s0.p1 ** 2 + s0.q1 ** 2
    return np.array([abs(pt.p1 ** 2 + pt.q1 ** 2 - r0) for pt in points])

"""Periodic orbits: full-system shooting with Floquet stability, and the
restricted system on the mode-2 action level L = h

Restricted coordinates (p1, q1, L, theta) map to phase space by
q2 = sqrt(L) cos(theta), p2 = -2 sqrt(L) sin(theta). With L frozen at h:
    dq1/dt = p1
    dp1/dt = -q1 - 2 eps h q1 cos^2(theta)
    dtheta/dt = 2 + eps q1^2 cos^2(theta)
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from config.settings import NEWTON_MAX_ITER, RETURN_WRAPS, TOLERANCES, TWO_PI
from core.dynamics import (
    PhaseState, SYMPLECTIC_J, SystemParams, h0, jacobian, resonant_params, vector_field_array,
)
from core.exceptions import (
    ConfigError, DegenerateJacobian, IntegrationDivergence, NoConvergence,
)
from core.reduction import (
    ReducedPoint, critical_points_N1, hessian_test, hopf_map, lift_reduced_point,
)

logger = logging.getLogger(__name__)

STABILITY_LABELS = ("elliptic", "hyperbolic", "degenerate")
SHOOTING_METHODS = ("auto", "reversible", "section")

# integration noise sits near 1e-12, so Newton stops two decades above it
_NEWTON_TOL = 1e-2 * TOLERANCES["closure"]

_ODE = dict(method="DOP853", rtol=TOLERANCES["ode_rtol"], atol=TOLERANCES["ode_atol"])


@dataclass(frozen=True)
class RestrictedState:
    p1: float
    q1: float
    L: float
    theta: float

    def __post_init__(self):
        if not self.L > 0:
            raise ConfigError(f"mode-2 action must be positive, got L={self.L}")


@dataclass
class OrbitResult:
    initial_state: PhaseState
    period: float
    closure_residual: float
    floquet_multipliers: np.ndarray
    stability: str
    monodromy: Optional[np.ndarray] = None
    method: str = "section"
    iterations: int = 0

    @property
    def energy(self) -> float:
        return h0(resonant_params(), self.initial_state)


@dataclass
class FixedPointResult:
    p1: float
    q1: float
    period: float
    residual: float
    iterations: int
    state: PhaseState
    seed: Tuple[float, float] = (0.0, 0.0)

    @property
    def displacement(self) -> float:
        return math.hypot(self.p1 - self.seed[0], self.q1 - self.seed[1])


def psi_chart(r: RestrictedState) -> PhaseState:
    """(p1, q1, L, theta) -> (q1, p1, sqrt(L) cos theta, -2 sqrt(L) sin theta)"""
    root = math.sqrt(r.L)
    return PhaseState(r.q1, r.p1, root * math.cos(r.theta), -2.0 * root * math.sin(r.theta))


def _restricted_rhs(h: float, epsilon: float):
    def rhs(t, y):
        p1, q1, theta = y
        c2 = math.cos(theta) ** 2
        return [-q1 - 2.0 * epsilon * h * q1 * c2, p1, 2.0 + epsilon * q1 * q1 * c2]
    return rhs


def _check_restricted(h: float, epsilon: float) -> None:
    if not h > 0:
        raise ConfigError(f"h must be positive, got {h}")
    if epsilon < 0:
        raise ConfigError(f"epsilon must be nonnegative, got {epsilon}")


def restricted_flow(h: float, epsilon: float, r0: RestrictedState, t: float) -> RestrictedState:
    """Integrate the restricted system for time t; theta returned in [0, 2pi)"""
    _check_restricted(h, epsilon)
    y0 = [r0.p1, r0.q1, r0.theta]
    if t == 0:
        return RestrictedState(r0.p1, r0.q1, h, r0.theta % TWO_PI)
    sol = solve_ivp(_restricted_rhs(h, epsilon), (0.0, t), y0, **_ODE)
    if not sol.success or not np.all(np.isfinite(sol.y[:, -1])):
        raise IntegrationDivergence(len(sol.t), f"restricted flow failed: {sol.message}")
    p1, q1, theta = sol.y[:, -1]
    return RestrictedState(float(p1), float(q1), h, float(theta % TWO_PI))


def _advance_theta(h: float, epsilon: float, p1_0: float, q1_0: float,
                   delta: float) -> Tuple[float, float, float]:
    """Run from (p1_0, q1_0, theta = 0) until theta has grown by delta"""
    def event(t, y):
        return y[2] - delta
    event.terminal = True
    event.direction = 1.0

    # theta grows at rate >= 2
    t_max = 0.5 * delta + 1.0
    sol = solve_ivp(_restricted_rhs(h, epsilon), (0.0, t_max), [p1_0, q1_0, 0.0],
                    events=event, **_ODE)
    if sol.status != 1 or not len(sol.t_events[0]):
        raise IntegrationDivergence(len(sol.t), f"theta did not advance by {delta} before t={t_max}")
    p1, q1, theta = sol.y_events[0][0]
    if abs(theta - delta) > TOLERANCES["crossing"]:
        logger.warning(f"theta crossing refined only to {abs(theta - delta):.2e}")
    return float(p1), float(q1), float(sol.t_events[0][0])


def return_map(h: float, epsilon: float, p1_0: float, q1_0: float,
               wraps: int = RETURN_WRAPS) -> Tuple[float, float, float]:
    """Image of (p1_0, q1_0) on theta = 0 after theta advances by 2pi*wraps, and the elapsed time"""
    _check_restricted(h, epsilon)
    if wraps < 1:
        raise ConfigError(f"wraps must be >= 1, got {wraps}")
    if epsilon == 0:
        # decoupled: theta = 2t exactly
        t = math.pi * wraps
        c, s = math.cos(t), math.sin(t)
        return p1_0 * c - q1_0 * s, q1_0 * c + p1_0 * s, t
    return _advance_theta(h, epsilon, p1_0, q1_0, TWO_PI * wraps)


def return_time_formula(q1_0: float, epsilon: float) -> float:
    """First-order return time 2pi - eps (pi/2) q1_0^2, as commonly quoted"""
    return TWO_PI - epsilon * 0.5 * math.pi * q1_0 ** 2


def return_time_averaged(p1_0: float, q1_0: float, epsilon: float) -> float:
    """First-order return time from averaging theta' over the unperturbed q1 motion"""
    return TWO_PI - epsilon * 0.25 * math.pi * (p1_0 ** 2 + q1_0 ** 2)


def _fixed_point_state(h: float, p1: float, q1: float) -> PhaseState:
    return psi_chart(RestrictedState(p1, q1, h, 0.0))


def find_fixed_point(h: float, epsilon: float, seed: Optional[Tuple[float, float]] = None,
                     wraps: int = RETURN_WRAPS) -> FixedPointResult:
    """Fixed point of the restricted return map near (0, 2 sqrt(h))

    The map is the identity at first order on the whole circle p1^2 + q1^2 = 4h,
    so a seed with p1 = 0 is solved on the reversibility line: the symmetric
    orbit through (0, q1) reaches p1 = 0 again after half the wraps. Other
    seeds use Newton on G = P - id with a central-difference Jacobian.
    """
    _check_restricted(h, epsilon)
    p1_0, q1_0 = seed if seed is not None else (0.0, 2.0 * math.sqrt(h))
    tol = TOLERANCES["fixed_point"]

    if epsilon == 0:
        _, _, T = return_map(h, 0.0, p1_0, q1_0, wraps)
        return FixedPointResult(p1_0, q1_0, T, 0.0, 0, _fixed_point_state(h, p1_0, q1_0), (p1_0, q1_0))

    if p1_0 == 0.0 and wraps % 2 == 0:
        q1, iterations = _symmetric_fixed_point(h, epsilon, q1_0, wraps // 2)
        p1 = 0.0
    else:
        p1, q1, iterations = _newton_fixed_point(h, epsilon, p1_0, q1_0, wraps)

    p1n, q1n, T = return_map(h, epsilon, p1, q1, wraps)
    residual = math.hypot(p1n - p1, q1n - q1)
    if residual > tol:
        raise NoConvergence(f"return-map residual {residual:.2e} above {tol:.0e}", residual, iterations)
    logger.info(f"Fixed point at eps={epsilon}: (p1, q1)=({p1:.12f}, {q1:.12f}), T={T:.12f}")
    return FixedPointResult(p1, q1, T, residual, iterations, _fixed_point_state(h, p1, q1), (p1_0, q1_0))


def _symmetric_fixed_point(h: float, epsilon: float, q1: float, half_wraps: int) -> Tuple[float, int]:
    d = TOLERANCES["fd_step"]

    def g(q):
        return _advance_theta(h, epsilon, 0.0, q, TWO_PI * half_wraps)[0]

    for it in range(1, NEWTON_MAX_ITER + 1):
        value = g(q1)
        if abs(value) < 0.1 * TOLERANCES["fixed_point"]:
            return q1, it
        slope = (g(q1 + d) - g(q1 - d)) / (2.0 * d)
        if abs(slope) < TOLERANCES["degenerate"]:
            raise DegenerateJacobian(f"symmetric return derivative vanishes at q1={q1}")
        step = value / slope
        q1 -= step
        if abs(step) < 1e-15 * max(1.0, abs(q1)):
            return q1, it
    raise NoConvergence(f"symmetric fixed point did not converge from q1={q1}", abs(g(q1)), NEWTON_MAX_ITER)


def _newton_fixed_point(h: float, epsilon: float, p1: float, q1: float,
                        wraps: int) -> Tuple[float, float, int]:
    d = TOLERANCES["fd_step"]

    def G(u):
        img = return_map(h, epsilon, u[0], u[1], wraps)
        return np.array([img[0] - u[0], img[1] - u[1]])

    u = np.array([p1, q1])
    for it in range(1, NEWTON_MAX_ITER + 1):
        r = G(u)
        if np.linalg.norm(r) < 0.1 * TOLERANCES["fixed_point"]:
            return float(u[0]), float(u[1]), it
        J = np.empty((2, 2))
        for j in range(2):
            e = np.zeros(2)
            e[j] = d
            J[:, j] = (G(u + e) - G(u - e)) / (2.0 * d)
        if np.linalg.svd(J, compute_uv=False)[-1] < TOLERANCES["degenerate"]:
            raise DegenerateJacobian(f"return-map Jacobian is singular at {u.tolist()}")
        u = u - np.linalg.solve(J, r)
    raise NoConvergence(f"fixed-point Newton did not converge from ({p1}, {q1})",
                        float(np.linalg.norm(G(u))), NEWTON_MAX_ITER)


# Full-system shooting

def flow_with_stm(params: SystemParams, y0: np.ndarray, t: float) -> Tuple[np.ndarray, np.ndarray]:
    """State and state-transition matrix at time t from the variational equations"""
    def rhs(_, w):
        y = w[:4]
        phi = w[4:].reshape(4, 4)
        return np.concatenate([vector_field_array(params, y), (jacobian(params, y) @ phi).ravel()])

    w0 = np.concatenate([np.asarray(y0, dtype=float), np.eye(4).ravel()])
    if t == 0:
        return w0[:4], np.eye(4)
    sol = solve_ivp(rhs, (0.0, t), w0, **_ODE)
    if not sol.success or not np.all(np.isfinite(sol.y[:, -1])):
        raise IntegrationDivergence(len(sol.t), f"variational integration failed: {sol.message}")
    return sol.y[:4, -1], sol.y[4:, -1].reshape(4, 4)


def _check_degenerate(J: np.ndarray, where: str) -> None:
    sv = np.linalg.svd(J, compute_uv=False)
    if sv[-1] < TOLERANCES["degenerate"] * max(1.0, sv[0]):
        raise DegenerateJacobian(f"{where}: smallest singular value {sv[-1]:.2e}")


def _shoot_reversible(params: SystemParams, seed: np.ndarray, T_guess: float):
    """Symmetric orbit through p1 = p2 = 0: momenta vanish again at T/2"""
    pin = int(np.argmax(np.abs(seed[[0, 2]]))) * 2
    free = 2 - pin
    y0 = seed.copy()
    half = 0.5 * T_guess
    for it in range(1, NEWTON_MAX_ITER + 1):
        y, phi = flow_with_stm(params, y0, half)
        r = y[[1, 3]]
        if np.linalg.norm(r) < _NEWTON_TOL * max(1.0, np.abs(y).max()):
            return y0, 2.0 * half, it
        f = vector_field_array(params, y)
        J = np.column_stack([phi[[1, 3], free], f[[1, 3]]])
        _check_degenerate(J, "reversible shooting")
        step = np.linalg.solve(J, -r)
        y0[free] += step[0]
        half += step[1]
        if not half > 0:
            raise NoConvergence("half period became nonpositive", float(np.linalg.norm(r)), it)
        if np.linalg.norm(step) < 1e-14 * max(1.0, half):
            return y0, 2.0 * half, it
    raise NoConvergence("reversible shooting did not converge", float(np.linalg.norm(r)), NEWTON_MAX_ITER)


def _shoot_section(params: SystemParams, seed: np.ndarray, T_guess: float):
    """Gauss-Newton on Fl^T(s) - s with the section coordinate and one amplitude pinned"""
    f0 = np.abs(vector_field_array(params, seed))
    section = int(np.argmax(f0))
    order = [i for i in np.argsort(-np.abs(seed), kind="stable") if i != section]
    free = sorted(order[1:])
    y0 = seed.copy()
    T = T_guess
    for it in range(1, NEWTON_MAX_ITER + 1):
        y, phi = flow_with_stm(params, y0, T)
        r = y - y0
        if np.linalg.norm(r) < _NEWTON_TOL * max(1.0, np.abs(y0).max()):
            return y0, T, it
        J = np.column_stack([phi[:, free] - np.eye(4)[:, free], vector_field_array(params, y)])
        _check_degenerate(J, "section shooting")
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        y0[free] += step[:2]
        T += step[2]
        if not T > 0:
            raise NoConvergence("period became nonpositive", float(np.linalg.norm(r)), it)
        if np.linalg.norm(step) < 1e-14 * max(1.0, T):
            return y0, T, it
    raise NoConvergence("section shooting did not converge", float(np.linalg.norm(r)), NEWTON_MAX_ITER)


def shoot_periodic(params: SystemParams, seed_state: PhaseState, T_guess: float,
                   method: str = "auto") -> OrbitResult:
    """Closed orbit of the full system near seed_state with period near T_guess

    "auto" uses reversible shooting when both seed momenta vanish, else the
    section formulation. At eps = 0 the resonant system is periodic
    everywhere and there is no isolated orbit to find.
    """
    if method not in SHOOTING_METHODS:
        raise ConfigError(f"method must be one of {SHOOTING_METHODS}")
    if not T_guess > 0:
        raise ConfigError(f"T_guess must be positive, got {T_guess}")
    if params.epsilon == 0 and params.is_resonant:
        raise DegenerateJacobian("eps = 0: every orbit of the resonant oscillator is periodic")

    seed = seed_state.as_array()
    if method == "auto":
        method = "reversible" if seed[1] == 0.0 and seed[3] == 0.0 else "section"
    solver = _shoot_reversible if method == "reversible" else _shoot_section
    y0, T, iterations = solver(params, seed, T_guess)

    end, M = flow_with_stm(params, y0, T)
    closure = float(np.linalg.norm(end - y0))
    if closure > TOLERANCES["closure"]:
        raise NoConvergence(f"orbit closes only to {closure:.2e}", closure, iterations)
    multipliers = np.linalg.eigvals(M)
    orbit = OrbitResult(PhaseState.from_sequence(y0), float(T), closure, multipliers,
                        classify_stability(multipliers), M, method, iterations)
    logger.info(f"Orbit ({method}, {iterations} it): T={T:.12f}, closure={closure:.2e}, {orbit.stability}")
    return orbit


def monodromy(params: SystemParams, orbit: OrbitResult) -> Tuple[np.ndarray, np.ndarray]:
    """Monodromy matrix over one period and its eigenvalues"""
    _, M = flow_with_stm(params, orbit.initial_state.as_array(), orbit.period)
    return M, np.linalg.eigvals(M)


def symplectic_defect(M: np.ndarray) -> float:
    return float(np.abs(M.T @ SYMPLECTIC_J @ M - SYMPLECTIC_J).max())


def classify_stability(multipliers: Sequence[complex], tol: float = TOLERANCES["unit_circle"]) -> str:
    mu = np.asarray(multipliers, dtype=complex)
    moduli = np.abs(mu)
    if np.any(moduli > 1.0 + tol):
        return "hyperbolic"
    if np.all(np.abs(moduli - 1.0) <= tol):
        # the trivial pair sits at 1; judge the two farthest from it
        pair = mu[np.argsort(np.abs(mu - 1.0))[-2:]]
        if np.all(np.abs(pair - 1.0) <= tol):
            return "degenerate"
        if np.all(np.abs(pair.imag) > tol) or abs(pair[0] - pair[1]) > tol:
            return "elliptic"
    return "degenerate"


def normal_mode_orbit(mode: int, epsilon: float, amplitude: float = 1.0) -> OrbitResult:
    """Mode-1 (q1 only) or mode-2 (q2 only) orbit of the resonant preset"""
    if mode not in (1, 2):
        raise ConfigError(f"mode must be 1 or 2, got {mode}")
    params = resonant_params(epsilon)
    if mode == 1:
        return shoot_periodic(params, PhaseState(amplitude, 0.0, 0.0, 0.0), TWO_PI)
    return shoot_periodic(params, PhaseState(0.0, 0.0, amplitude, 0.0), math.pi)


def fixed_point_orbit(h: float, epsilon: float, fp: Optional[FixedPointResult] = None) -> OrbitResult:
    """Full-system orbit continued from the restricted fixed point Psi(p1*, q1*, h, 0)"""
    fp = fp or find_fixed_point(h, epsilon)
    return shoot_periodic(resonant_params(epsilon), fp.state, fp.period)


@dataclass
class MoserOrbit:
    reduced: ReducedPoint
    orbit: OrbitResult
    hopf_error: float = 0.0


def moser_orbits(h: float, epsilon: float) -> List[MoserOrbit]:
    """Shoot the orbit behind every non-degenerate isolated critical point of K on M_h

    The only isolated point is the pole (0, 0, 2h); its orbit is checked to map
    to the pole of its own H0 level.
    """
    if not epsilon > 0:
        raise ConfigError("moser_orbits needs eps > 0")
    report = critical_points_N1(h)
    if hessian_test(h).verdict != "non-degenerate":
        logger.warning(f"Pole of M_{h} is degenerate; no orbit predicted")
        return []
    out = []
    for cp in report.isolated:
        orbit = shoot_periodic(resonant_params(epsilon), lift_reduced_point(cp.point, h), TWO_PI)
        image = hopf_map(orbit.initial_state).reduced().as_array()
        pole = np.array([0.0, 0.0, 2.0 * orbit.energy])
        out.append(MoserOrbit(cp.point, orbit, float(np.linalg.norm(image - pole))))
    return out


def return_time_table(h: float, q1_values: Sequence[float], epsilons: Sequence[float],
                      wraps: int = RETURN_WRAPS) -> List[Dict]:
    """Measured return time against both first-order predictions"""
    rows = []
    for q1 in q1_values:
        for eps in epsilons:
            _, _, T = return_map(h, eps, 0.0, q1, wraps)
            printed = return_time_formula(q1, eps)
            averaged = return_time_averaged(0.0, q1, eps)
            rows.append({
                "q1_0": q1, "epsilon": eps, "T": T,
                "printed": printed, "averaged": averaged,
                "remainder_printed": abs(T - printed) / eps ** 2,
                "remainder_averaged": abs(T - averaged) / eps ** 2,
                "first_order_coefficient": (TWO_PI - T) / (eps * q1 ** 2) if q1 else float("nan"),
            })
    return rows

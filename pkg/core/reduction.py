"""Singular reduced space of the 1:2 resonance

The H0 orbit space on the level H0 = h is the pinched sphere
M_h = {F = 0, 0 < z <= 2h}, F = x^2 + y^2 - z^2 (2h - z), in the
coordinates (x, y, z) = (rho3, rho4, rho1). Functions on it carry the
bracket {f, g} = 2 <grad g, grad f x grad F>.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq, newton
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, ring

from config.settings import CRITICAL_GRID, GAMMA_SAMPLES, NEWTON_MAX_ITER, TOLERANCES
from core.dynamics import PhaseState
from core.exceptions import ConfigError, DegenerateChart
from core.symmath import (
    N2_PRINTED, WILBERFORCE_H1, evaluate, format_poly,
    normal_form_order1, to_hopf,
)

logger = logging.getLogger(__name__)

REDUCED_RING, X, Y, Z = ring("x,y,z", QQ)
LEVEL_RING, LX, LY, LZ, LH = ring("x,y,z,h", QQ)


@dataclass(frozen=True)
class HopfPoint:
    rho1: float
    rho2: float
    rho3: float
    rho4: float

    def as_array(self) -> np.ndarray:
        return np.array([self.rho1, self.rho2, self.rho3, self.rho4])

    @property
    def level(self) -> float:
        """h with H0 = (rho1 + rho2) / 2"""
        return 0.5 * (self.rho1 + self.rho2)

    def reduced(self) -> "ReducedPoint":
        return ReducedPoint(self.rho3, self.rho4, self.rho1)


@dataclass(frozen=True)
class ReducedPoint:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @classmethod
    def from_sequence(cls, values) -> "ReducedPoint":
        x, y, z = (float(v) for v in values)
        return cls(x, y, z)

    def on_surface(self, h: float, tol: float = TOLERANCES["surface"]) -> bool:
        return abs(casimir_F(self, h)) < tol and 0.0 < self.z <= 2.0 * h + tol


@dataclass(frozen=True)
class ReducedFunction:
    """Scalar field on (x, y, z) with exact first and second derivatives"""
    name: str
    value: Callable
    gradient: Callable
    hessian: Callable
    poly: Optional[PolyElement] = None

    @classmethod
    def from_poly(cls, poly: PolyElement, name: str = "") -> "ReducedFunction":
        grads = [poly.diff(v) for v in (X, Y, Z)]
        hess = [[g.diff(v) for v in (X, Y, Z)] for g in grads]

        def value(x, y, z):
            return evaluate(poly, (x, y, z))

        def gradient(x, y, z):
            return tuple(evaluate(g, (x, y, z)) for g in grads)

        def hessian(x, y, z):
            return np.array([[evaluate(e, (x, y, z)) for e in row] for row in hess], dtype=float)

        return cls(name or format_poly(poly), value, gradient, hessian, poly)

    def __call__(self, p: ReducedPoint) -> float:
        return float(self.value(p.x, p.y, p.z))

    def grad(self, p: ReducedPoint) -> np.ndarray:
        return np.array(self.gradient(p.x, p.y, p.z), dtype=float)

    def hess(self, p: ReducedPoint) -> np.ndarray:
        return self.hessian(p.x, p.y, p.z)


# Hopf map and the surface

def hopf_map(s: PhaseState) -> HopfPoint:
    """(rho1, rho2, rho3, rho4) of a phase point at the 1:2 resonance"""
    q1, p1, q2, p2 = s.as_tuple()
    d = p1 * p1 - q1 * q1
    return HopfPoint(
        rho1=q1 * q1 + p1 * p1,
        rho2=4.0 * q2 * q2 + p2 * p2,
        rho3=p2 * d + 4.0 * p1 * q1 * q2,
        rho4=2.0 * q2 * d - 2.0 * q1 * p1 * p2,
    )


def syzygy_residual(hp: HopfPoint) -> float:
    return hp.rho3 ** 2 + hp.rho4 ** 2 - hp.rho1 ** 2 * hp.rho2


def casimir_F(p: ReducedPoint, h: float) -> float:
    return p.x ** 2 + p.y ** 2 - p.z ** 2 * (2.0 * h - p.z)


def grad_F(p: ReducedPoint, h: float) -> np.ndarray:
    return np.array([2.0 * p.x, 2.0 * p.y, -4.0 * h * p.z + 3.0 * p.z ** 2])


def hess_F(p: ReducedPoint, h: float) -> np.ndarray:
    return np.diag([2.0, 2.0, -4.0 * h + 6.0 * p.z])


def exact_level(h: float):
    """h as an exact binary rational"""
    num, den = float(h).as_integer_ratio()
    return QQ(num, den)


def casimir_function(h: float) -> ReducedFunction:
    hq = exact_level(h)
    return ReducedFunction.from_poly(X ** 2 + Y ** 2 - Z ** 2 * (2 * hq - Z), name="F")


def reduced_bracket(f: ReducedFunction, g: ReducedFunction, p: ReducedPoint, h: float) -> float:
    """{f, g}(p) = 2 <grad g, grad f x grad F>"""
    return float(2.0 * np.dot(g.grad(p), np.cross(f.grad(p), grad_F(p, h))))


def reduced_vector_field(Q: ReducedFunction, p: ReducedPoint, h: float) -> np.ndarray:
    """X_Q = 2 grad Q x grad F; tangent to the level sets of F"""
    return 2.0 * np.cross(Q.grad(p), grad_F(p, h))


def restrict_symbolic(P: PolyElement) -> PolyElement:
    """P(z, 2h - z, x, y) with h kept as a variable"""
    subs = (LZ, 2 * LH - LZ, LX, LY)
    total = LEVEL_RING.zero
    for monom, coeff in P.terms():
        term = LEVEL_RING.one
        for base, exponent in zip(subs, monom):
            if exponent:
                term = term * base ** exponent
        total += term * coeff
    return total


def _fix_level(Ps: PolyElement, h: float) -> PolyElement:
    hq = exact_level(h)
    out: Dict[Tuple[int, int, int], object] = {}
    for (a, b, c, e), coeff in Ps.items():
        key = (a, b, c)
        out[key] = out.get(key, QQ(0)) + coeff * hq ** e
    return REDUCED_RING({k: v for k, v in out.items() if v})


def restrict_to_level(P: PolyElement, h: float, name: str = "") -> ReducedFunction:
    """Substitute rho1 = z, rho2 = 2h - z, rho3 = x, rho4 = y with exact coefficients"""
    return ReducedFunction.from_poly(_fix_level(restrict_symbolic(P), h), name)


def reduced_K(h: float) -> ReducedFunction:
    """K = N1 on the level; (2hz - z^2)/16"""
    return restrict_to_level(to_hopf(normal_form_order1(WILBERFORCE_H1)), h, name="K")


def reduced_K_eps(h: float, epsilon: float) -> ReducedFunction:
    """K_eps = N1 + eps N2 on the level, with N2 in its printed representative"""
    n1 = to_hopf(normal_form_order1(WILBERFORCE_H1))
    poly = _fix_level(restrict_symbolic(n1 + N2_PRINTED * exact_level(epsilon)), h)
    return ReducedFunction.from_poly(poly, name=f"K_eps[{epsilon}]")


def lift_reduced_point(p: ReducedPoint, h: float) -> PhaseState:
    """A phase state on H0 = h whose Hopf image is p

    With z1 = p1 + i q1 real and positive, z2 = p2 + 2i q2 = (x + i y)/z.
    The pinch z = 0 lifts to the mode-2 normal mode.
    """
    if p.z < 0 or p.z > 2.0 * h + TOLERANCES["surface"]:
        raise ConfigError(f"z={p.z} is outside [0, 2h] for h={h}")
    if p.z <= TOLERANCES["singular_z"]:
        return PhaseState(0.0, 0.0, 0.0, math.sqrt(2.0 * h))
    return PhaseState(0.0, math.sqrt(p.z), p.y / (2.0 * p.z), p.x / p.z)


# Critical-point search on M_h

@dataclass(frozen=True)
class CriticalPoint:
    point: ReducedPoint
    kind: str           # "gradient-zero" or "parallel"
    residual: float     # |grad Q x grad F|
    surface_residual: float

    def to_dict(self) -> Dict:
        return {
            "type": "point",
            "location": [self.point.x, self.point.y, self.point.z],
            "kind": self.kind,
            "residuals": {"parallel": self.residual, "surface": self.surface_residual},
        }


def parallel_residual(Q: ReducedFunction, p: ReducedPoint, h: float) -> float:
    return float(np.linalg.norm(np.cross(Q.grad(p), grad_F(p, h))))


def surface_grid(h: float, n: int = CRITICAL_GRID):
    """(x, y, z) arrays over M_h from z in (0, 2h], angle in [0, 2pi)"""
    z = np.linspace(0.0, 2.0 * h, n + 1)[1:]
    phi = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    zz, pp = np.meshgrid(z, phi, indexing="ij")
    r = np.sqrt(np.clip(zz ** 2 * (2.0 * h - zz), 0.0, None))
    return r * np.cos(pp), r * np.sin(pp), zz


def _tangential_norm(Q: ReducedFunction, x, y, z, h: float) -> np.ndarray:
    """Norm of the component of grad Q tangent to M_h"""
    gq = [np.zeros_like(x) + g for g in Q.gradient(x, y, z)]
    gf = [2.0 * x, 2.0 * y, -4.0 * h * z + 3.0 * z ** 2]
    cross = np.stack([
        gq[1] * gf[2] - gq[2] * gf[1],
        gq[2] * gf[0] - gq[0] * gf[2],
        gq[0] * gf[1] - gq[1] * gf[0],
    ])
    return np.linalg.norm(cross, axis=0) / np.linalg.norm(np.stack(gf), axis=0)


def _grid_seeds(t: np.ndarray) -> np.ndarray:
    """Indices of non-strict local minima; angle axis periodic"""
    inf_row = np.full((1, t.shape[1]), np.inf)
    mask = (t <= np.roll(t, 1, axis=1)) & (t <= np.roll(t, -1, axis=1))
    mask &= t <= np.vstack([t[1:], inf_row])
    mask &= t <= np.vstack([inf_row, t[:-1]])
    return np.argwhere(mask)


def _polish(Q: ReducedFunction, h: float, seed: np.ndarray) -> Optional[np.ndarray]:
    """Newton (least squares) on grad Q = lam grad F, F = 0"""
    p = ReducedPoint.from_sequence(seed)
    gf = grad_F(p, h)
    lam = float(np.dot(Q.grad(p), gf) / max(np.dot(gf, gf), 1e-300))
    v = np.append(seed, lam)
    for _ in range(NEWTON_MAX_ITER):
        p = ReducedPoint.from_sequence(v[:3])
        gq, gf = Q.grad(p), grad_F(p, h)
        G = np.append(gq - v[3] * gf, casimir_F(p, h))
        if np.linalg.norm(G) < 1e-14 * max(1.0, h ** 3):
            break
        J = np.zeros((4, 4))
        J[:3, :3] = Q.hess(p) - v[3] * hess_F(p, h)
        J[:3, 3] = -gf
        J[3, :3] = gf
        step = np.linalg.lstsq(J, -G, rcond=None)[0]
        v = v + step
        if np.linalg.norm(step) < 1e-16 * max(1.0, np.linalg.norm(v)):
            break
    p = ReducedPoint.from_sequence(v[:3])
    if not np.all(np.isfinite(v)) or p.z <= TOLERANCES["singular_z"] * h:
        return None
    if abs(casimir_F(p, h)) > TOLERANCES["surface"] or parallel_residual(Q, p, h) > TOLERANCES["gradient"]:
        return None
    return v[:3]


def critical_search(Q: ReducedFunction, h: float, grid: int = CRITICAL_GRID) -> List[CriticalPoint]:
    """Critical points of X_Q on M_h: grid scan plus Newton polish, duplicates merged

    The pinch z = 0 is excluded.
    """
    x, y, z = surface_grid(h, grid)
    t = _tangential_norm(Q, x, y, z, h)
    seeds = {tuple(np.round([x[i, j], y[i, j], z[i, j]], 9)) for i, j in _grid_seeds(t)}
    logger.debug(f"{Q.name}: {len(seeds)} seeds on a {grid}x{grid} grid (h={h})")

    found: List[np.ndarray] = []
    for seed in sorted(seeds):
        v = _polish(Q, h, np.array(seed))
        if v is None:
            continue
        if all(np.linalg.norm(v - u) > TOLERANCES["dedupe"] for u in found):
            found.append(v)

    points = []
    for v in sorted(found, key=lambda u: (u[2], u[0], u[1])):
        p = ReducedPoint.from_sequence(v)
        kind = "gradient-zero" if np.linalg.norm(Q.grad(p)) < TOLERANCES["degenerate"] else "parallel"
        points.append(CriticalPoint(p, kind, parallel_residual(Q, p, h), abs(casimir_F(p, h))))
    return points


def gamma_samples(h: float, n: int = GAMMA_SAMPLES) -> List[ReducedPoint]:
    """Points of the circle x^2 + y^2 = h^3, z = h"""
    r = h ** 1.5
    return [ReducedPoint(r * math.cos(a), r * math.sin(a), h)
            for a in np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)]


def on_gamma(p: ReducedPoint, h: float, tol: float = 1e-8) -> bool:
    return abs(p.z - h) < tol * max(1.0, h) and abs(p.x ** 2 + p.y ** 2 - h ** 3) < tol * max(1.0, h ** 3)


@dataclass
class CriticalSetReport:
    h: float
    isolated: List[CriticalPoint]
    circle_radius_sq: float
    circle_z: float
    circle_max_residual: float
    circle_found_by_search: int
    unexpected: List[CriticalPoint] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        """Only the predicted point and circle were found"""
        return not self.unexpected and len(self.isolated) == 1

    def to_dict(self) -> Dict:
        return {
            "h": self.h,
            "critical_sets": [p.to_dict() for p in self.isolated] + [{
                "type": "circle",
                "location": {"z": self.circle_z, "radius_sq": self.circle_radius_sq},
                "residuals": {"parallel_max": self.circle_max_residual},
                "search_hits": self.circle_found_by_search,
            }],
            "unexpected": [p.to_dict() for p in self.unexpected],
        }


def critical_points_N1(h: float, grid: int = CRITICAL_GRID) -> CriticalSetReport:
    """Isolated point (0, 0, 2h) and the circle Gamma_h, confirmed by a full search"""
    if not h > 0:
        raise ConfigError(f"h must be positive, got {h}")
    K = reduced_K(h)
    pole = ReducedPoint(0.0, 0.0, 2.0 * h)

    isolated, unexpected, on_circle = [], [], 0
    for cp in critical_search(K, h, grid):
        if on_gamma(cp.point, h):
            on_circle += 1
        elif np.linalg.norm(cp.point.as_array() - pole.as_array()) < TOLERANCES["dedupe"]:
            isolated.append(cp)
        else:
            unexpected.append(cp)
    if not isolated:
        logger.warning(f"Search missed (0, 0, {2 * h}); reporting the analytic point")
        isolated.append(CriticalPoint(pole, "parallel", parallel_residual(K, pole, h), 0.0))
    if unexpected:
        logger.warning(f"{len(unexpected)} critical points of K off the predicted set at h={h}")

    circle_res = max(parallel_residual(K, p, h) for p in gamma_samples(h))
    logger.info(f"K on M_{h}: {len(isolated)} isolated point(s), {on_circle} search hits on Gamma_h")
    return CriticalSetReport(h, isolated, h ** 3, h, circle_res, on_circle, unexpected)


# Hessian of K restricted to the surface

def psi_chart(x: float, y: float, h: float, z_guess: float) -> float:
    """z = psi(x, y) solving F = 0 near z_guess"""
    r2 = x * x + y * y

    def f(z):
        return r2 - z * z * (2.0 * h - z)

    def fp(z):
        return -4.0 * h * z + 3.0 * z * z

    if abs(fp(z_guess)) < TOLERANCES["degenerate"]:
        raise DegenerateChart(f"dF/dz vanishes at z={z_guess}")
    if abs(z_guess - 2.0 * h) < 1e-12 * max(1.0, h) and r2 < (32.0 / 27.0) * h ** 3:
        # branch through the pole: F is monotone on [4h/3, 2h]
        return brentq(f, 4.0 * h / 3.0, 2.0 * h, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return float(newton(f, z_guess, fprime=fp, tol=1e-15, maxiter=NEWTON_MAX_ITER))


def restricted_hessian(Q: ReducedFunction, p: ReducedPoint, h: float) -> np.ndarray:
    """Hessian of Q(x, y, psi(x, y)) at p by implicit differentiation"""
    gF, HF = grad_F(p, h), hess_F(p, h)
    if abs(gF[2]) < TOLERANCES["degenerate"]:
        raise DegenerateChart(f"dF/dz = 0 at {p}")
    gQ, HQ = Q.grad(p), Q.hess(p)
    psi = -gF[:2] / gF[2]
    out = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            psi_ij = -(HF[i, j] + HF[i, 2] * psi[j] + HF[j, 2] * psi[i] + HF[2, 2] * psi[i] * psi[j]) / gF[2]
            out[i, j] = (HQ[i, j] + HQ[i, 2] * psi[j] + HQ[j, 2] * psi[i]
                         + HQ[2, 2] * psi[i] * psi[j] + gQ[2] * psi_ij)
    return out


def fd_restricted_hessian(Q: ReducedFunction, p: ReducedPoint, h: float,
                          step: float = TOLERANCES["fd_hessian_step"]) -> np.ndarray:
    """Central-difference oracle for restricted_hessian"""
    def k(dx, dy):
        x, y = p.x + dx, p.y + dy
        return Q(ReducedPoint(x, y, psi_chart(x, y, h, p.z)))

    d = step
    k0 = k(0.0, 0.0)
    kxx = (k(d, 0.0) - 2.0 * k0 + k(-d, 0.0)) / d ** 2
    kyy = (k(0.0, d) - 2.0 * k0 + k(0.0, -d)) / d ** 2
    kxy = (k(d, d) - k(d, -d) - k(-d, d) + k(-d, -d)) / (4.0 * d ** 2)
    return np.array([[kxx, kxy], [kxy, kyy]])


@dataclass
class HessianReport:
    h: float
    matrix: np.ndarray
    eigenvalues: np.ndarray
    determinant: float
    fd_matrix: np.ndarray
    printed_value: float
    reproduced_by: str
    verdict: str

    def to_dict(self) -> Dict:
        return {
            "h": self.h,
            "point": [0.0, 0.0, 2.0 * self.h],
            "matrix": self.matrix.tolist(),
            "eigenvalues": self.eigenvalues.tolist(),
            "determinant": self.determinant,
            "fd_matrix": self.fd_matrix.tolist(),
            "printed_value": self.printed_value,
            "reproduced_by": self.reproduced_by,
            "verdict": self.verdict,
        }


def hessian_test(h: float) -> HessianReport:
    """Restricted Hessian of K at the pole (0, 0, 2h)

    The exact matrix is Id/(16h). The commonly quoted 1/(16h^2) is compared
    against both the eigenvalue and the determinant.
    """
    if not h > 0:
        raise ConfigError(f"h must be positive, got {h}")
    K = reduced_K(h)
    pole = ReducedPoint(0.0, 0.0, 2.0 * h)
    H = restricted_hessian(K, pole, h)
    eig = np.sort(np.linalg.eigvalsh(H))
    det = float(np.linalg.det(H))
    printed = 1.0 / (16.0 * h * h)

    def close(a):
        return abs(a - printed) < 1e-12 * max(1.0, abs(printed))

    if all(close(e) for e in eig):
        reproduced = "eigenvalue"
    elif close(det):
        reproduced = "determinant"
    else:
        reproduced = "none"
    verdict = "non-degenerate" if abs(det) > TOLERANCES["degenerate"] * max(1.0, np.abs(H).max() ** 2) else "degenerate"
    logger.info(f"Hessian at (0,0,{2 * h}): eig={eig.tolist()}, det={det:.6e}, printed={printed:.6e} ({reproduced})")
    return HessianReport(h, H, eig, det, fd_restricted_hessian(K, pole, h), printed, reproduced, verdict)


# Second-order analysis

@dataclass
class EpsilonScan:
    epsilon: float
    critical: List[CriticalPoint]
    gamma_min_gradient: float
    gamma_bound: float
    grid_min_gradient: float
    gradient_zeros: List[ReducedPoint]

    @property
    def gamma_certified(self) -> bool:
        return self.gamma_min_gradient >= self.gamma_bound

    def to_dict(self) -> Dict:
        return {
            "epsilon": self.epsilon,
            "critical_points": [c.to_dict() for c in self.critical],
            "gamma_min_gradient": self.gamma_min_gradient,
            "gamma_bound": self.gamma_bound,
            "gamma_certified": self.gamma_certified,
            "grid_min_gradient": self.grid_min_gradient,
            "gradient_zeros": [[p.x, p.y, p.z] for p in self.gradient_zeros],
        }


@dataclass
class DegeneracyReport:
    h: float
    order0_root: str
    order1_at_root: str
    vanishes_only_at_h0: bool
    axis_points: List[ReducedPoint]
    scans: List[EpsilonScan]

    @property
    def no_gradient_zero(self) -> bool:
        return all(not s.gradient_zeros for s in self.scans)

    @property
    def gamma_certified(self) -> bool:
        return all(s.gamma_certified for s in self.scans)

    @property
    def gamma_critical_for_all(self) -> bool:
        """Some point of Gamma_h stays critical at every epsilon"""
        if not self.scans:
            return False
        per_eps = [[c.point for c in s.critical if on_gamma(c.point, self.h)] for s in self.scans]
        return any(
            all(any(np.linalg.norm(p.as_array() - q.as_array()) < TOLERANCES["dedupe"] for q in pts)
                for pts in per_eps[1:])
            for p in per_eps[0]
        )

    def to_dict(self) -> Dict:
        return {
            "h": self.h,
            "order0_root": self.order0_root,
            "order1_at_root": self.order1_at_root,
            "vanishes_only_at_h0": self.vanishes_only_at_h0,
            "axis_points": [{"location": [p.x, p.y, p.z], "F": casimir_F(p, self.h)} for p in self.axis_points],
            "scans": [s.to_dict() for s in self.scans],
            "no_gradient_zero": self.no_gradient_zero,
            "gamma_certified": self.gamma_certified,
            "gamma_critical_for_all": self.gamma_critical_for_all,
        }


def _order_split() -> Tuple[PolyElement, PolyElement]:
    n1 = to_hopf(normal_form_order1(WILBERFORCE_H1))
    return restrict_symbolic(n1), restrict_symbolic(N2_PRINTED)


def epsilon_certificate() -> Tuple[str, str, bool]:
    """Order-by-order vanishing of grad K_eps, with h symbolic

    The zeroth order leaves z = h; the first-order z-derivative at z = h is a
    monomial in h, so the gradient can only vanish identically when h = 0.
    """
    k0, k1 = _order_split()
    dz0 = k0.diff(LZ)
    if dz0.diff(LX) or dz0.diff(LY) or dz0.degree(LZ) != 1:
        raise ArithmeticError(f"unexpected zeroth-order z-derivative {format_poly(dz0)}")
    # dz0 = a z + b(h), so z = -b/a
    a = dz0.coeff(LZ)
    root = (LZ * a - dz0) * (1 / a)
    at_root = k1.diff(LZ).compose(LZ, root)
    only_h0 = len(at_root) == 1 and all(e == 0 for e in at_root.monoms()[0][:3])
    return format_poly(root), format_poly(at_root), only_h0


def axis_points(h: float) -> List[ReducedPoint]:
    """Points (0, 0, z) where the first-order z-derivative of K_eps vanishes"""
    _, k1 = _order_split()
    dz1 = _fix_level(k1.diff(LZ), h)
    coeffs = {}
    for (a, b, c), coeff in dz1.items():
        if a == 0 and b == 0:
            coeffs[c] = coeffs.get(c, 0.0) + int(QQ.numer(coeff)) / int(QQ.denom(coeff))
    degree = max(coeffs) if coeffs else 0
    poly = np.poly1d([coeffs.get(d, 0.0) for d in range(degree, -1, -1)])
    roots = []
    for r in np.roots(poly.coeffs):
        if abs(r.imag) < 1e-9:
            roots.append(float(newton(poly, r.real, fprime=poly.deriv(), tol=1e-15, maxiter=NEWTON_MAX_ITER)))
    return [ReducedPoint(0.0, 0.0, z) for z in sorted(roots)]


def critical_points_Keps(h: float, epsilons: Sequence[float], grid: int = CRITICAL_GRID) -> DegeneracyReport:
    if not h > 0:
        raise ConfigError(f"h must be positive, got {h}")
    for eps in epsilons:
        if not 0.0 < eps <= 1.0:
            raise ConfigError(f"epsilon must lie in (0, 1], got {eps}")

    root, at_root, only_h0 = epsilon_certificate()
    scans = []
    for eps in epsilons:
        Q = reduced_K_eps(h, eps)
        gamma_grads = [np.linalg.norm(Q.grad(p)) for p in gamma_samples(h)]
        x, y, z = surface_grid(h, grid)
        grid_grad = np.linalg.norm(np.stack([np.zeros_like(x) + g for g in Q.gradient(x, y, z)]), axis=0)
        # x and y components force x = y = 0; the only smooth surface point left is the pole
        candidates = [ReducedPoint(0.0, 0.0, 2.0 * h)]
        zeros = [p for p in candidates if np.linalg.norm(Q.grad(p)) < TOLERANCES["gradient"]]
        scans.append(EpsilonScan(
            epsilon=eps,
            critical=critical_search(Q, h, grid),
            gamma_min_gradient=float(min(gamma_grads)),
            gamma_bound=eps * h ** 1.5 / 96.0,
            grid_min_gradient=float(grid_grad.min()),
            gradient_zeros=zeros,
        ))
        logger.info(f"K_eps at eps={eps}: {len(scans[-1].critical)} critical points of X_K on M_{h}")
    return DegeneracyReport(h, root, at_root, only_h0, axis_points(h), scans)

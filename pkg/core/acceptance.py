"""End-to-end acceptance checks run by `main.py verify`

Each check returns a CriterionResult. Thresholds live in one table and can
be overridden per run, which is how the harness is made to fail on purpose.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from sympy.polys.domains import QQ

from config.settings import (
    DEFAULT_SEED, FIXED_POINT_EPSILONS, KEPS_EPSILONS, SECTION_COUNT, SECTION_ENERGY,
    TOLERANCES, TRAJECTORY_INITIAL_STATE,
)
from core.dynamics import PhaseState, resonant_params
from core.integrators import IntegratorConfig, Trajectory, energy_drift, integrate
from core.orbits import (
    find_fixed_point, fixed_point_orbit, normal_mode_orbit, return_time_table,
    symplectic_defect,
)
from core.poincare import SectionConfig, sample_initial_conditions
from core.reduction import (
    critical_points_Keps, critical_points_N1, hessian_test, hopf_map,
)
from core.symmath import (
    N2_PRINTED, PHASE_RING, R1, R2, WILBERFORCE_H1, average, bracket_table,
    equal_mod_syzygy, format_poly, h0_poly, hopf_generators, normal_form_order1,
    normal_form_order2, poisson, random_phase_poly, s_operator, to_hopf,
)
from core.exceptions import WilberforceError
from utils.seeds import derive_seed

logger = logging.getLogger(__name__)

GROUPS = ("symbolic", "numeric")

THRESHOLDS = {
    "hopf_drift": 1e-6,
    "energy_drift": 1e-5,
    "drift_ratio": 2.0,
    "halving_low": 3.0,
    "halving_high": 5.0,
    "circle_std": 1e-6,
    "crossing_fraction": 0.9,
    "critical_residual": 1e-10,
    "hessian": 1e-12,
    "fd_hessian": 1e-6,
    "axis_points": 1e-8,
    "period": 1e-8,
    "unit_circle": TOLERANCES["unit_circle"],
    "symplectic": TOLERANCES["symplectic"],
    "linear_ratio_low": 0.5,
    "linear_ratio_high": 2.0,
    "orbit_closure": 1e-8,
    "branch_constant": 10.0,
}


@dataclass
class CriterionResult:
    number: int
    name: str
    group: str
    passed: bool
    message: str = ""
    details: Dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self) -> Dict:
        return {"number": self.number, "name": self.name, "group": self.group,
                "passed": self.passed, "message": self.message, "details": self.details,
                "seconds": round(self.seconds, 3)}


@dataclass
class Criterion:
    number: int
    name: str
    group: str
    check: Callable[[Dict[str, float], int], CriterionResult]


# Exact algebra

def check_normal_form_order1(t: Dict[str, float], seed: int) -> CriterionResult:
    got = to_hopf(normal_form_order1(WILBERFORCE_H1))
    expected = R1 * R2 * QQ(1, 16)
    ok = got == to_hopf(average(WILBERFORCE_H1)) and not (got - expected)
    return CriterionResult(1, "normal_form_order1", "symbolic", ok,
                           f"N1 = {format_poly(got)}", {"N1": format_poly(got)})


def check_normal_form_order2(t: Dict[str, float], seed: int) -> CriterionResult:
    got = to_hopf(normal_form_order2(WILBERFORCE_H1, "printed"))
    ok = equal_mod_syzygy(got, N2_PRINTED)
    return CriterionResult(2, "normal_form_order2", "symbolic", ok,
                           f"N2 = {format_poly(got)}",
                           {"N2_canonical": format_poly(got), "N2_printed": format_poly(N2_PRINTED)})


def check_bracket_table(t: Dict[str, float], seed: int) -> CriterionResult:
    rows = bracket_table()
    failures = [f"{{rho{r.pair[0]},rho{r.pair[1]}}}: {format_poly(r.computed)} != {format_poly(r.expected)}"
                for r in rows if not r.matches_expected]
    printed_mismatch = [f"rho{r.pair[0]},rho{r.pair[1]}" for r in rows if not r.matches_printed]
    details = {f"rho{r.pair[0]},rho{r.pair[1]}": format_poly(r.computed) for r in rows}
    details["printed_mismatch"] = printed_mismatch
    message = "; ".join(failures) if failures else (
        f"six relations exact; printed coefficient differs for {', '.join(printed_mismatch)}"
        if printed_mismatch else "six relations exact")
    return CriterionResult(3, "bracket_table", "symbolic", not failures, message, details)


def check_homological(t: Dict[str, float], seed: int) -> CriterionResult:
    rng = np.random.default_rng(derive_seed(seed, "homological"))
    polys = [WILBERFORCE_H1] + [random_phase_poly(rng, 4) for _ in range(10)]
    H0 = h0_poly()
    bad = [format_poly(f) for f in polys if poisson(H0, s_operator(f)) != average(f) - f]
    return CriterionResult(4, "homological_identity", "symbolic", not bad,
                           f"{len(polys) - len(bad)}/{len(polys)} polynomials satisfy {{H0, S(f)}} = <f> - f",
                           {"failures": bad})


# Numerics

def check_syzygy_invariance(t: Dict[str, float], seed: int) -> CriterionResult:
    r1, r2, r3, r4 = hopf_generators()
    exact = (r3 ** 2 + r4 ** 2 - r1 ** 2 * r2) == PHASE_RING.zero
    rng = np.random.default_rng(derive_seed(seed, "hopf-drift"))
    cfg = IntegratorConfig(k=1e-3, method="reference", t_final=100.0, sample_stride=100)
    params = resonant_params(0.0)
    drifts = []
    for _ in range(10):
        s0 = PhaseState.from_sequence(rng.uniform(-1.0, 1.0, 4))
        traj = integrate(params, s0, cfg)
        rho = np.array([hopf_map(PhaseState.from_sequence(row)).as_array() for row in traj.samples])
        drifts.append(float(np.abs(rho - rho[0]).max()))
    worst = max(drifts)
    ok = exact and worst < t["hopf_drift"]
    return CriterionResult(5, "syzygy_and_invariance", "numeric", ok,
                           f"syzygy exact={exact}, worst rho drift {worst:.2e}",
                           {"syzygy_exact": exact, "drifts": drifts})


def check_verlet_quality(t: Dict[str, float], seed: int) -> CriterionResult:
    params = resonant_params(0.5)
    s0 = PhaseState.from_sequence(TRAJECTORY_INITIAL_STATE)
    traj = integrate(params, s0, IntegratorConfig(k=1e-3, t_final=1000.0, sample_stride=10))
    long_drift = energy_drift(traj)
    cut = int(np.searchsorted(traj.times, 100.0, side="right"))
    short = Trajectory(params, traj.times[:cut], traj.samples[:cut])
    short_drift = energy_drift(short)
    ratio = long_drift / short_drift

    coarse = energy_drift(integrate(params, s0, IntegratorConfig(k=1e-3, t_final=10.0)))
    fine = energy_drift(integrate(params, s0, IntegratorConfig(k=5e-4, t_final=10.0)))
    halving = coarse / fine
    ok = (long_drift < t["energy_drift"] and ratio < t["drift_ratio"]
          and t["halving_low"] <= halving <= t["halving_high"])
    return CriterionResult(6, "verlet_quality", "numeric", ok,
                           f"drift {long_drift:.2e} to t=1000, ratio {ratio:.3f}, halving factor {halving:.3f}",
                           {"drift_1000": long_drift, "drift_100": short_drift,
                            "ratio": ratio, "halving_factor": halving})


def check_section_sanity(t: Dict[str, float], seed: int, workers: int = 1,
                         max_crossings: int = 100) -> CriterionResult:
    from parallel.worker_pool import WorkerPool

    pool = WorkerPool(max_workers=workers)
    details: Dict = {}
    ok = True
    for eps in (0.0, 0.5, 1.0):
        cfg = SectionConfig(h=SECTION_ENERGY, epsilon=eps, max_crossings=max_crossings,
                            count=SECTION_COUNT, seed=seed)
        states = sample_initial_conditions(cfg)
        results, failed = pool.process_sections_parallel(states, cfg)
        found = sum(len(r["points"]) for r in results)
        fraction = found / (len(states) * max_crossings)
        entry = {"trajectories": len(states), "failed": failed, "crossing_fraction": fraction}
        if eps == 0.0:
            stds = [float(np.std([math.hypot(p[0], p[1]) for p in r["points"]])) for r in results if r["points"]]
            entry["max_radius_std"] = max(stds) if stds else float("inf")
            ok &= entry["max_radius_std"] < t["circle_std"]
        else:
            ok &= fraction >= t["crossing_fraction"]
        ok &= not failed
        details[f"eps={eps}"] = entry
    return CriterionResult(7, "section_sanity", "numeric", bool(ok),
                           f"radius std {details['eps=0.0'].get('max_radius_std', float('nan')):.2e} at eps=0",
                           details)


def check_reduced_critical_sets(t: Dict[str, float], seed: int) -> CriterionResult:
    details: Dict = {}
    ok = True
    for h in (1.0, 2.0):
        report = critical_points_N1(h)
        pole = report.isolated[0]
        hr = hessian_test(h)
        exact_det = 1.0 / (256.0 * h * h)
        exact_eig = 1.0 / (16.0 * h)
        fd_gap = float(np.abs(hr.fd_matrix - hr.matrix).max())
        entry = {
            "complete": report.complete,
            "pole": [pole.point.x, pole.point.y, pole.point.z],
            "pole_residual": pole.residual,
            "circle_residual": report.circle_max_residual,
            "determinant": hr.determinant,
            "eigenvalues": hr.eigenvalues.tolist(),
            "printed_value": hr.printed_value,
            "printed_reproduced_by": hr.reproduced_by,
            "fd_gap": fd_gap,
            "verdict": hr.verdict,
        }
        ok &= (report.complete
               and abs(pole.point.z - 2.0 * h) < t["critical_residual"] * 10
               and pole.residual < t["critical_residual"]
               and report.circle_max_residual < t["critical_residual"]
               and abs(hr.determinant - exact_det) < t["hessian"]
               and np.all(np.abs(hr.eigenvalues - exact_eig) < t["hessian"])
               and fd_gap < t["fd_hessian"]
               and hr.verdict == "non-degenerate")
        details[f"h={h}"] = entry
    return CriterionResult(8, "reduced_critical_sets", "numeric", bool(ok),
                           "pole and Gamma_h only; restricted Hessian Id/(16h)", details)


def check_keps_degeneracy(t: Dict[str, float], seed: int) -> CriterionResult:
    h = 1.0
    report = critical_points_Keps(h, KEPS_EPSILONS)
    zs = sorted(p.z for p in report.axis_points)
    targets = [2.0 * h / 3.0, 2.0 * h]
    axis_ok = len(zs) == 2 and all(abs(a - b) < t["axis_points"] for a, b in zip(zs, targets))
    ok = (report.no_gradient_zero and axis_ok and report.gamma_certified
          and report.vanishes_only_at_h0 and not report.gamma_critical_for_all)
    return CriterionResult(9, "keps_degeneracy", "numeric", bool(ok),
                           f"axis points z={zs}, Gamma_h bound holds={report.gamma_certified}",
                           report.to_dict())


def check_normal_mode_orbits(t: Dict[str, float], seed: int) -> CriterionResult:
    details: Dict = {}
    ok = True
    for eps in (0.05, 0.1):
        for mode, period in ((2, math.pi), (1, 2.0 * math.pi)):
            orbit = normal_mode_orbit(mode, eps)
            defect = symplectic_defect(orbit.monodromy)
            entry = {"period": orbit.period, "closure": orbit.closure_residual,
                     "stability": orbit.stability, "symplectic_defect": defect,
                     "moduli": np.abs(orbit.floquet_multipliers).tolist()}
            ok &= abs(orbit.period - period) < t["period"] and defect < t["symplectic"]
            if eps == 0.05:
                ok &= bool(np.all(np.abs(np.abs(orbit.floquet_multipliers) - 1.0) < t["unit_circle"]))
            details[f"mode{mode}@eps={eps}"] = entry
    return CriterionResult(10, "normal_mode_orbits", "numeric", bool(ok),
                           "mode-1 and mode-2 orbits closed, multipliers on the unit circle", details)


def check_fixed_point_branch(t: Dict[str, float], seed: int) -> CriterionResult:
    h = 1.0
    eps_values = [e for e in FIXED_POINT_EPSILONS if e <= 0.02]
    details: Dict = {}
    scaled, points = [], []
    ok = True
    for eps in eps_values:
        fp = find_fixed_point(h, eps)
        orbit = fixed_point_orbit(h, eps, fp)
        scaled.append(fp.displacement / eps)
        points.append((fp.p1, fp.q1))
        ok &= orbit.closure_residual < t["orbit_closure"]
        details[f"eps={eps}"] = {"p1": fp.p1, "q1": fp.q1, "T": fp.period, "residual": fp.residual,
                                 "displacement": fp.displacement, "orbit_period": orbit.period,
                                 "orbit_closure": orbit.closure_residual, "stability": orbit.stability,
                                 "moduli": sorted(np.abs(orbit.floquet_multipliers).tolist())}
    ratios = [b / a for a, b in zip(scaled, scaled[1:])]
    details["scaled_ratios"] = ratios
    ok &= all(t["linear_ratio_low"] <= r <= t["linear_ratio_high"] for r in ratios)
    # consecutive fixed points stay within C |d eps|
    steps = [math.dist(a, b) / (e1 - e0)
             for a, b, e0, e1 in zip(points, points[1:], eps_values, eps_values[1:])]
    details["branch_constants"] = steps
    ok &= all(c <= t["branch_constant"] for c in steps)
    labels = sorted({details[f"eps={e}"]["stability"] for e in eps_values})
    return CriterionResult(11, "fixed_point_branch", "numeric", bool(ok),
                           f"displacement/eps ratios {['%.3f' % r for r in ratios]}, orbits {labels}", details)


def check_return_time(t: Dict[str, float], seed: int) -> CriterionResult:
    """Return time minus the averaged first-order term shrinks like eps^2"""
    rows = return_time_table(1.0, (0.5, 1.0), (0.04, 0.02))
    details: Dict = {}
    ok = True
    for q1 in (0.5, 1.0):
        coarse, fine = [r for r in rows if r["q1_0"] == q1]
        # scaled remainder within a factor of two under halving; the floor covers a vanishing eps^2 term
        c, f = coarse["remainder_averaged"], fine["remainder_averaged"]
        ok &= t["linear_ratio_low"] * c - 1e-6 <= f <= t["linear_ratio_high"] * c + 1e-6
        details[f"q1={q1}"] = {
            "remainder_averaged": [coarse["remainder_averaged"], fine["remainder_averaged"]],
            "remainder_printed": [coarse["remainder_printed"], fine["remainder_printed"]],
            "first_order_coefficient": [coarse["first_order_coefficient"], fine["first_order_coefficient"]],
        }
    return CriterionResult(12, "return_time_expansion", "numeric", bool(ok),
                           "O(eps^2) remainder stable under halving", details)


CRITERIA: List[Criterion] = [
    Criterion(1, "normal_form_order1", "symbolic", check_normal_form_order1),
    Criterion(2, "normal_form_order2", "symbolic", check_normal_form_order2),
    Criterion(3, "bracket_table", "symbolic", check_bracket_table),
    Criterion(4, "homological_identity", "symbolic", check_homological),
    Criterion(5, "syzygy_and_invariance", "numeric", check_syzygy_invariance),
    Criterion(6, "verlet_quality", "numeric", check_verlet_quality),
    Criterion(7, "section_sanity", "numeric", check_section_sanity),
    Criterion(8, "reduced_critical_sets", "numeric", check_reduced_critical_sets),
    Criterion(9, "keps_degeneracy", "numeric", check_keps_degeneracy),
    Criterion(10, "normal_mode_orbits", "numeric", check_normal_mode_orbits),
    Criterion(11, "fixed_point_branch", "numeric", check_fixed_point_branch),
    Criterion(12, "return_time_expansion", "numeric", check_return_time),
]


def select(only: Optional[Sequence[str]] = None) -> List[Criterion]:
    """Filter by group name, criterion name or number"""
    if not only:
        return list(CRITERIA)
    keys = {str(k) for k in only}
    return [c for c in CRITERIA if c.group in keys or c.name in keys or str(c.number) in keys]


def run_acceptance(only: Optional[Sequence[str]] = None, overrides: Optional[Dict[str, float]] = None,
                   seed: int = DEFAULT_SEED, workers: int = 1) -> List[CriterionResult]:
    thresholds = dict(THRESHOLDS)
    thresholds.update(overrides or {})
    results = []
    for criterion in select(only):
        start = time.perf_counter()
        try:
            if criterion.number == 7:
                result = check_section_sanity(thresholds, seed, workers=workers)
            else:
                result = criterion.check(thresholds, seed)
        except WilberforceError as e:
            result = CriterionResult(criterion.number, criterion.name, criterion.group, False,
                                     f"{type(e).__name__}: {e}")
        result.seconds = time.perf_counter() - start
        logger.info(f"[{criterion.number:2d}] {criterion.name}: {'PASS' if result.passed else 'FAIL'} "
                    f"({result.seconds:.1f}s) {result.message}")
        results.append(result)
    return results

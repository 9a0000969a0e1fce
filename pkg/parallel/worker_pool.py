"""Manages parallel execution - REPRODUCIBLE & ISOLATED

Section trajectories and orbit sweeps are independent tasks. Sampling seeds
are derived per state before dispatch. Results are re-ordered by task index
and a failing task lands in the failed list without stopping the rest.
"""

import logging
import os
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from config.settings import MAX_WORKERS
from core.dynamics import PhaseState, SystemParams
from core.exceptions import ConfigError, WilberforceError
from core.orbits import find_fixed_point, fixed_point_orbit, normal_mode_orbit
from core.poincare import SectionConfig, circle_residuals, section_points

logger = logging.getLogger(__name__)

ORBIT_KINDS = ("normal1", "normal2", "fixedpoint")


def process_single_section(args: Tuple) -> Optional[Dict[str, Any]]:
    """Crossings of one trajectory - ISOLATED"""
    index, state, cfg, params = args
    pid = os.getpid()
    s0 = PhaseState.from_sequence(state)
    try:
        logger.debug(f"[PID {pid}] section task {index} eps={cfg.epsilon}")
        points = section_points(params, s0, cfg)
        residuals = circle_residuals(points, s0) if points else []
        return {
            "index": index,
            "epsilon": cfg.epsilon,
            "initial_state": list(s0.as_tuple()),
            "points": [(pt.p1, pt.q1, pt.t_cross, pt.branch_at_crossing, pt.q2_residual) for pt in points],
            "circle_residuals": [float(r) for r in residuals],
            "requested": cfg.max_crossings,
        }
    except WilberforceError as e:
        logger.error(f"[PID {pid}] section task {index} failed: {e}")
        return None


def process_single_orbit(args: Tuple) -> Optional[Dict[str, Any]]:
    """One orbit of an epsilon sweep - ISOLATED"""
    index, kind, epsilon, h = args
    try:
        if kind == "normal1":
            orbit = normal_mode_orbit(1, epsilon)
        elif kind == "normal2":
            orbit = normal_mode_orbit(2, epsilon)
        else:
            orbit = fixed_point_orbit(h, epsilon, find_fixed_point(h, epsilon))
        return {"index": index, "kind": kind, "epsilon": epsilon, "h": h,
                "orbit": orbit}
    except WilberforceError as e:
        logger.error(f"[PID {os.getpid()}] orbit task {index} ({kind}, eps={epsilon}) failed: {e}")
        return None


class WorkerPool:
    """Manages parallel execution - REPRODUCIBLE & ISOLATED"""

    def __init__(self, max_workers: int = MAX_WORKERS):
        self.max_workers = max_workers

    def _run(self, worker: Callable, tasks: List[Tuple], labels: List[str]) -> Tuple[List[Dict], List[str]]:
        successful, failed = [], []
        if self.max_workers <= 1:
            for args, label in zip(tasks, labels):
                result = worker(args)
                if result is None:
                    failed.append(label)
                else:
                    successful.append(result)
        else:
            with ProcessPoolExecutor(max_workers=self.max_workers) as executor:
                future_to_label = {executor.submit(worker, args): label for args, label in zip(tasks, labels)}
                for future in as_completed(future_to_label):
                    label = future_to_label[future]
                    try:
                        result = future.result()
                        if result is None:
                            failed.append(label)
                        else:
                            successful.append(result)
                    except Exception as e:
                        logger.error(f"Worker failed for task {label}: {e}")
                        failed.append(label)
        # completion order is not deterministic; task order is
        successful.sort(key=lambda r: r["index"])
        return successful, sorted(failed)

    def process_sections_parallel(self, states: Sequence[PhaseState], cfg: SectionConfig,
                                  params: Optional[SystemParams] = None
                                  ) -> Tuple[List[Dict], List[str]]:
        """Section points for every initial state at one epsilon"""
        params = cfg.params(params)
        tasks, labels = [], []
        for i, s in enumerate(states):
            tasks.append((i, s.as_tuple(), cfg, params))
            labels.append(f"eps={cfg.epsilon}#{i:03d}")
        return self._run(process_single_section, tasks, labels)

    def process_orbits_parallel(self, kinds: Sequence[str], epsilons: Sequence[float], h: float
                                ) -> Tuple[List[Dict], List[str]]:
        """Orbit records over a (kind, epsilon) grid"""
        tasks, labels = [], []
        for kind in kinds:
            if kind not in ORBIT_KINDS:
                raise ConfigError(f"unknown orbit kind '{kind}'")
        index = 0
        for kind in kinds:
            for eps in epsilons:
                tasks.append((index, kind, eps, h))
                labels.append(f"{kind}@eps={eps}")
                index += 1
        return self._run(process_single_orbit, tasks, labels)

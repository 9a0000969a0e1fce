#!/usr/bin/env python3
"""
Wilberforce Resonance Toolkit - simulate, section, normal-form, reduce, orbit, verify
REPRODUCIBLE: identical config + seed give byte-identical CSV/JSON
"""

import argparse
import json
import logging
import math
import platform
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

# Add the parent directory to Python path
current_dir = Path(__file__).parent
sys.path.insert(0, str(current_dir))

import numpy as np  # noqa: E402

from config.settings import (  # noqa: E402
    BASE_OUTPUT_DIR, CRITICAL_GRID, DEFAULT_SEED, DEFAULT_STEP, FIXED_POINT_EPSILONS,
    KEPS_EPSILONS, MAX_WORKERS, ORBIT_EPSILONS, PRESET_INERTIA, PRESET_MASS, PRESET_OMEGA1,
    PRESET_OMEGA2, SECTION_COUNT, SECTION_ENERGY, SECTION_EPSILONS, SECTION_MAX_CROSSINGS,
    TRAJECTORY_INITIAL_STATE, TRAJECTORY_T_FINAL,
)
from core.acceptance import CRITERIA, GROUPS, THRESHOLDS, run_acceptance  # noqa: E402
from core.dynamics import PhaseState, SystemParams  # noqa: E402
from core.exceptions import ConfigError, EmptySample, WilberforceError, ZeroEnergy  # noqa: E402
from core.integrators import IntegratorConfig, energy_drift, integrate  # noqa: E402
from core.orbits import moser_orbits, return_time_table, shoot_periodic  # noqa: E402
from core.poincare import SectionConfig, sample_initial_conditions  # noqa: E402
from core.reduction import (  # noqa: E402
    critical_points_Keps, critical_points_N1, gamma_samples, hessian_test,
)
from core.symmath import (  # noqa: E402
    CONVENTIONS, WILBERFORCE_H1, bracket_table, format_poly, h0_poly, normal_form_order1,
    normal_form_order2, to_hopf,
)
from parallel.worker_pool import ORBIT_KINDS, WorkerPool  # noqa: E402
from utils.file_ops import FileOperations  # noqa: E402
from utils.json_generator import JSONGenerator  # noqa: E402
from utils.plotting import plot_reduced_space, plot_section, plot_trajectory  # noqa: E402

logger = logging.getLogger("wilberforce")

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_EMPTY = 0, 1, 2, 3
FORMATS = ("csv", "json", "svg")
ORBIT_MODES = ORBIT_KINDS + ("shoot", "moser", "return-time")

PRESETS: Dict[str, Dict[str, Any]] = {
    "simulate": {"epsilon": None, "k": DEFAULT_STEP, "t_final": TRAJECTORY_T_FINAL, "stride": 10,
                 "initial_state": list(TRAJECTORY_INITIAL_STATE)},
    "section": {"h": SECTION_ENERGY, "epsilon": SECTION_EPSILONS, "k": DEFAULT_STEP,
                "count": SECTION_COUNT, "crossings": SECTION_MAX_CROSSINGS, "branch": "+",
                "ordering": "section"},
    "normal-form": {"convention": "printed"},
    "reduce": {"h": 1.0, "epsilon": KEPS_EPSILONS, "grid": CRITICAL_GRID},
    "orbit": {"h": 1.0, "epsilon": None, "mode": "normal2", "seed_state": None,
              "period": None, "method": "auto", "q1_values": [0.5, 1.0]},
    "verify": {"only": None, "threshold": {}},
}
COMMON = {"seed": DEFAULT_SEED, "format": list(FORMATS), "workers": 1,
          "params": {"m": PRESET_MASS, "I": PRESET_INERTIA, "omega1": PRESET_OMEGA1, "omega2": PRESET_OMEGA2}}


def _eps_tag(eps: float) -> str:
    return f"{eps:g}".replace(".", "p")


class WilberforceRunner:
    """Main orchestrator - one subcommand per instance"""

    def __init__(self, resolved: Dict[str, Any], out_dir: Path):
        self.cfg = resolved
        self.out_dir = out_dir
        self.formats = set(resolved["format"])
        self.file_ops = FileOperations()
        self.json_generator = JSONGenerator()
        self.worker_pool = WorkerPool(max_workers=resolved["workers"])
        self.outputs: List[str] = []

    # helpers

    def _path(self, name: str) -> Path:
        self.outputs.append(name)
        return self.out_dir / name

    def _params(self, epsilon: float) -> SystemParams:
        p = self.cfg["params"]
        return SystemParams(p["m"], p["I"], p["omega1"], p["omega2"], epsilon)

    def _wants_csv(self) -> bool:
        # figures are rendered from the CSV, so an SVG request needs it too
        return "csv" in self.formats or "svg" in self.formats

    def run(self) -> int:
        handler = {
            "simulate": self.simulate,
            "section": self.section,
            "normal-form": self.normal_form,
            "reduce": self.reduce,
            "orbit": self.orbit,
            "verify": self.verify,
        }[self.cfg["subcommand"]]
        self.file_ops.ensure_directory(self.out_dir)
        try:
            return handler()
        finally:
            # written on failure too, listing whatever was produced
            self.json_generator.create_manifest(self.cfg, self.outputs, self.out_dir / "run-manifest.json")

    # subcommands

    def simulate(self) -> int:
        s0 = PhaseState.from_sequence(self.cfg["initial_state"])
        icfg = IntegratorConfig(k=self.cfg["k"], t_final=self.cfg["t_final"], sample_stride=self.cfg["stride"])
        for eps in self.cfg["epsilon"]:
            traj = integrate(self._params(eps), s0, icfg)
            try:
                drift = f"energy drift {energy_drift(traj):.2e}"
            except ZeroEnergy:
                drift = "zero energy"
            print(f"✓ eps={eps}: {len(traj)} samples to t={traj.times[-1]:g}, {drift}")
            if self._wants_csv():
                csv_path = self._path(f"trajectory_eps{_eps_tag(eps)}.csv")
                self.file_ops.write_csv(csv_path, ["t", "q1", "p1", "q2", "p2"],
                                        (([float(t)] + row.tolist()) for t, row in zip(traj.times, traj.samples)))
                if "svg" in self.formats:
                    plot_trajectory(csv_path, self._path(f"trajectory_eps{_eps_tag(eps)}.svg"), eps)
        return EXIT_OK

    def section(self) -> int:
        total = 0
        for eps in self.cfg["epsilon"]:
            scfg = SectionConfig(h=self.cfg["h"], epsilon=eps, branch=self.cfg["branch"],
                                 max_crossings=self.cfg["crossings"], k=self.cfg["k"],
                                 seed=self.cfg["seed"], count=self.cfg["count"],
                                 ordering=self.cfg["ordering"])
            states = sample_initial_conditions(scfg, self._params(eps))
            results, failed = self.worker_pool.process_sections_parallel(
                states, scfg, self._params(eps))
            rows = []
            for r in results:
                for (p1, q1, t_cross, branch, q2_res), circle in zip(r["points"], r["circle_residuals"]):
                    rows.append((r["index"], t_cross, p1, q1, branch, q2_res, circle))
            total += len(rows)
            found = f"{len(rows)}/{len(states) * scfg.max_crossings}"
            mark = "✓" if not failed else "✗"
            print(f"{mark} eps={eps}: {len(results)} trajectories, {found} crossings, failed: {failed or 'none'}")
            if self._wants_csv() and rows:
                csv_path = self._path(f"section_h{_eps_tag(scfg.h)}_eps{_eps_tag(eps)}.csv")
                self.file_ops.write_csv(
                    csv_path, ["ic_index", "t_cross", "p1", "q1", "p2_sign", "q2_residual", "circle_residual"], rows)
                if "svg" in self.formats:
                    plot_section(csv_path, self._path(f"section_h{_eps_tag(scfg.h)}_eps{_eps_tag(eps)}.svg"),
                                 eps, scfg.h)
        if total == 0:
            raise EmptySample("no section points were produced")
        return EXIT_OK

    def normal_form(self) -> int:
        convention = self.cfg["convention"]
        n1 = to_hopf(normal_form_order1(WILBERFORCE_H1))
        n2 = to_hopf(normal_form_order2(WILBERFORCE_H1, convention))
        h0 = to_hopf(h0_poly())
        print(f"H0 = {format_poly(h0)}")
        print(f"N1 = {format_poly(n1)}")
        print(f"N2 = {format_poly(n2)}   [{convention}]")
        rows = bracket_table()
        for r in rows:
            mark = "✓" if r.matches_expected else "✗"
            note = "" if r.matches_printed else f"   (commonly printed: {format_poly(r.printed)})"
            print(f"{mark} {{rho{r.pair[0]}, rho{r.pair[1]}}} = {format_poly(r.computed)}{note}")
        if "json" in self.formats:
            entries = {
                "H0": self.json_generator.polynomial_entry(h0),
                "N1": self.json_generator.polynomial_entry(n1),
                "N2": self.json_generator.polynomial_entry(n2, convention),
                "brackets": {
                    f"rho{r.pair[0]},rho{r.pair[1]}": {
                        "computed": format_poly(r.computed),
                        "matches_exact": r.matches_expected,
                        "matches_printed": r.matches_printed,
                    } for r in rows
                },
            }
            self.json_generator.create_normal_form_json(entries, self._path("normal_form.json"))
        return EXIT_OK

    def _surface_csv(self, h: float) -> Path:
        """y = 0 cross-section of M_h, written once per level"""
        name = f"surface_h{_eps_tag(h)}.csv"
        if name in self.outputs:
            return self.out_dir / name
        zs = np.linspace(0.0, 2.0 * h, 401)
        xs = np.sqrt(np.clip(zs ** 2 * (2.0 * h - zs), 0.0, None))
        upper = [(float(x), float(z)) for x, z in zip(xs, zs)]
        lower = [(-x, z) for x, z in reversed(upper)]
        path = self._path(name)
        self.file_ops.write_csv(path, ["x", "z"], upper + lower)
        return path

    def _reduced_figures(self, h: float, points: List, circle: List, tag: str,
                         epsilon: Optional[float] = None) -> None:
        if not self._wants_csv():
            return
        surface_csv = self._surface_csv(h)
        critical_csv = self._path(f"critical_{tag}.csv")
        rows = [("point", p.x, p.y, p.z) for p in points] + [("circle", p.x, p.y, p.z) for p in circle]
        self.file_ops.write_csv(critical_csv, ["type", "x", "y", "z"], rows)
        if "svg" in self.formats:
            plot_reduced_space(surface_csv, critical_csv, self._path(f"critical_{tag}.svg"), h, epsilon)

    def reduce(self) -> int:
        h = self.cfg["h"]
        report = critical_points_N1(h, self.cfg["grid"])
        hessian = hessian_test(h)
        mark = "✓" if report.complete else "✗"
        print(f"{mark} K on M_{h}: {len(report.isolated)} isolated point(s), circle z={report.circle_z:g}, "
              f"x^2+y^2={report.circle_radius_sq:g}, residual {report.circle_max_residual:.1e}")
        print(f"✓ Hessian at the pole: eigenvalues {hessian.eigenvalues.tolist()}, det {hessian.determinant:.6e} "
              f"({hessian.verdict}); printed value {hessian.printed_value:.6e} matches the {hessian.reproduced_by}")
        data: Dict[str, Any] = {"N1": report.to_dict(), "hessian": hessian.to_dict()}
        self._reduced_figures(h, [c.point for c in report.isolated], gamma_samples(h), f"N1_h{_eps_tag(h)}")

        epsilons = self.cfg["epsilon"] or []
        if epsilons:
            degeneracy = critical_points_Keps(h, epsilons, self.cfg["grid"])
            data["K_eps"] = degeneracy.to_dict()
            mark = "✓" if degeneracy.no_gradient_zero and degeneracy.gamma_certified else "✗"
            print(f"{mark} K_eps: no gradient zero={degeneracy.no_gradient_zero}, "
                  f"Gamma_h bound={degeneracy.gamma_certified}, axis points z="
                  f"{[round(p.z, 12) for p in degeneracy.axis_points]}")
            for scan in degeneracy.scans:
                self._reduced_figures(h, [c.point for c in scan.critical], [],
                                      f"Keps_h{_eps_tag(h)}_eps{_eps_tag(scan.epsilon)}", scan.epsilon)
        if "json" in self.formats:
            self.json_generator.create_critical_set_json(data, self._path("critical_sets.json"))
        return EXIT_OK if report.complete else EXIT_FAILED

    def orbit(self) -> int:
        mode, h, epsilons = self.cfg["mode"], self.cfg["h"], self.cfg["epsilon"]
        if epsilons is None:
            epsilons = FIXED_POINT_EPSILONS if mode == "fixedpoint" else ORBIT_EPSILONS
        records: List[Dict] = []
        failed: List[str] = []

        if mode in ORBIT_KINDS:
            results, failed = self.worker_pool.process_orbits_parallel([mode], epsilons, h)
            records = [self.json_generator.orbit_record(r["orbit"], kind=r["kind"], epsilon=r["epsilon"], h=h)
                       for r in results]
        elif mode == "shoot":
            if self.cfg["seed_state"] is None or self.cfg["period"] is None:
                raise ConfigError("orbit --mode shoot needs --seed-state and --period")
            seed = PhaseState.from_sequence(self.cfg["seed_state"])
            for eps in epsilons:
                try:
                    orbit = shoot_periodic(self._params(eps), seed, self.cfg["period"], self.cfg["method"])
                    records.append(self.json_generator.orbit_record(orbit, kind="shoot", epsilon=eps))
                except WilberforceError as e:
                    logger.error(f"shoot at eps={eps} failed: {e}")
                    failed.append(f"shoot@eps={eps}")
        elif mode == "moser":
            for eps in epsilons:
                try:
                    for mo in moser_orbits(h, eps):
                        records.append(self.json_generator.orbit_record(
                            mo.orbit, kind="moser", epsilon=eps, h=h,
                            reduced=[mo.reduced.x, mo.reduced.y, mo.reduced.z], hopf_error=mo.hopf_error))
                except WilberforceError as e:
                    logger.error(f"moser orbit at eps={eps} failed: {e}")
                    failed.append(f"moser@eps={eps}")
        else:
            rows = return_time_table(h, self.cfg["q1_values"], epsilons)
            for r in rows:
                print(f"✓ q1={r['q1_0']:g} eps={r['epsilon']:g}: T={r['T']:.12f}, "
                      f"remainder/eps^2 averaged {r['remainder_averaged']:.4f}, printed {r['remainder_printed']:.4f}")
            if self._wants_csv():
                header = ["q1_0", "epsilon", "T", "printed", "averaged", "remainder_printed",
                          "remainder_averaged", "first_order_coefficient"]
                self.file_ops.write_csv(self._path("return_time.csv"), header,
                                        ([r[c] for c in header] for r in rows))
            return EXIT_OK if rows else EXIT_EMPTY

        for rec in records:
            mods = [math.hypot(*m) for m in rec["multipliers"]]
            print(f"✓ {rec['kind']} eps={rec['epsilon']}: T={rec['period']:.12f}, "
                  f"closure {rec['residual']:.1e}, {rec['stability']}, max||mu|-1| {max(abs(m - 1) for m in mods):.1e}")
        for label in failed:
            print(f"✗ {label}")
        if "json" in self.formats and records:
            self.json_generator.create_orbit_json(records, self._path(f"orbits_{mode}.json"))
        if self._wants_csv() and records:
            self.file_ops.write_csv(
                self._path(f"orbits_{mode}.csv"),
                ["kind", "epsilon", "period", "residual", "stability", "max_multiplier_deviation"],
                ([r["kind"], r["epsilon"], r["period"], r["residual"], r["stability"],
                  max(abs(math.hypot(*m) - 1.0) for m in r["multipliers"])] for r in records))
        if not records:
            return EXIT_EMPTY
        return EXIT_FAILED if failed else EXIT_OK

    def verify(self) -> int:
        results = run_acceptance(self.cfg["only"], self.cfg["threshold"], self.cfg["seed"], self.cfg["workers"])
        for r in results:
            print(f"{'✓' if r.passed else '✗'} [{r.number:2d}] {r.name}: {r.message}")
        if "json" in self.formats:
            self.json_generator.create_verify_json([r.to_dict() for r in results], self._path("verify.json"))
        if not results:
            return EXIT_EMPTY
        return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def parse_threshold(text: str) -> tuple:
    name, sep, value = text.partition("=")
    if not sep or name not in THRESHOLDS:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE with NAME in {sorted(THRESHOLDS)}")
    return name, float(value)


def load_config_file(path: Optional[str]) -> Dict[str, Any]:
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config file {path}: {e}")
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return data


def resolve_config(args: argparse.Namespace) -> Dict[str, Any]:
    """Flags over config file over presets"""
    resolved: Dict[str, Any] = {"subcommand": args.command}
    resolved.update(json.loads(json.dumps(COMMON)))
    resolved.update(json.loads(json.dumps(PRESETS[args.command])))

    from_file = load_config_file(args.config)
    params = from_file.pop("params", {})
    unknown = set(params) - set(COMMON["params"])
    if unknown:
        raise ConfigError(f"unknown params in config file: {sorted(unknown)}")
    resolved["params"].update(params)
    for key, value in from_file.items():
        resolved[key.replace("-", "_")] = value

    for key, value in vars(args).items():
        if key in ("command", "config", "verbose") or value is None:
            continue
        if key == "threshold":
            value = dict(value)
        if key in ("m", "I", "omega1", "omega2"):
            resolved["params"][key] = value
        else:
            resolved[key] = value

    if "epsilon" in resolved and isinstance(resolved["epsilon"], (int, float)):
        resolved["epsilon"] = [float(resolved["epsilon"])]
    resolved["out"] = str(Path(resolved.get("out") or BASE_OUTPUT_DIR / args.command))
    return resolved


def validate_arguments(resolved: Dict[str, Any]) -> bool:
    """Validate resolved values; messages go to stderr"""
    problems = []
    if resolved.get("h") is not None and not resolved["h"] > 0:
        problems.append("--h must be positive")
    for eps in resolved.get("epsilon") or []:
        if not (eps >= 0 and math.isfinite(eps)):
            problems.append(f"epsilon {eps} must be finite and >= 0")
    if "k" in resolved and not resolved["k"] > 0:
        problems.append("--k must be positive")
    bad_formats = set(resolved["format"]) - set(FORMATS)
    if bad_formats:
        problems.append(f"unknown formats {sorted(bad_formats)}")
    if resolved["workers"] < 1:
        problems.append("--workers must be >= 1")
    if resolved["subcommand"] == "simulate" and not resolved.get("epsilon"):
        problems.append("simulate needs --epsilon (or 'epsilon' in the config file)")
    if resolved["subcommand"] == "orbit" and resolved["mode"] not in ORBIT_MODES:
        problems.append(f"--mode must be one of {ORBIT_MODES}")
    if resolved["subcommand"] == "normal-form" and resolved["convention"] not in CONVENTIONS:
        problems.append(f"--convention must be one of {CONVENTIONS}")
    if resolved["subcommand"] == "verify" and resolved["only"]:
        known = set(GROUPS) | {c.name for c in CRITERIA} | {str(c.number) for c in CRITERIA}
        if not set(resolved["only"]) <= known:
            problems.append(f"--only takes groups {GROUPS}, criterion numbers or names")
    for p in problems:
        print(f"Error: {p}", file=sys.stderr)
    return not problems


def check_environment():
    """Check if the numerical stack is available"""
    print(f"Platform: {platform.platform()}")
    print(f"Python: {sys.version.split()[0]}")
    missing = []
    for module in ("numpy", "scipy", "sympy", "matplotlib"):
        try:
            __import__(module)
        except ImportError:
            missing.append(module)
    if missing:
        print(f"⚠️ Missing packages: {', '.join(missing)}")
        return False
    return True


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        '--h',
        type=float,
        help='Energy level (section) or reduced level (reduce, orbit)'
    )
    common.add_argument(
        '--epsilon',
        type=float,
        nargs='+',
        help='Coupling value(s)'
    )
    common.add_argument(
        '--k',
        type=float,
        help=f'Integrator step size (default: {DEFAULT_STEP})'
    )
    common.add_argument(
        '--seed',
        type=int,
        help=f'Master random seed (default: {DEFAULT_SEED})'
    )
    common.add_argument(
        '--out',
        type=str,
        help=f'Output directory (default: {BASE_OUTPUT_DIR}/<subcommand>)'
    )
    common.add_argument(
        '--format',
        nargs='+',
        choices=FORMATS,
        help='Artifacts to write (default: all)'
    )
    common.add_argument(
        '--config',
        type=str,
        help='JSON config file; flags override it, it overrides presets'
    )
    common.add_argument(
        '--workers',
        type=int,
        help=f'Worker processes for fan-out (default: 1, max useful: {MAX_WORKERS})'
    )
    common.add_argument('--m', type=float, help='Mass')
    common.add_argument('--I', type=float, help='Moment of inertia')
    common.add_argument('--omega1', type=float, help='Elongation frequency')
    common.add_argument('--omega2', type=float, help='Torsion frequency')
    common.add_argument('-v', '--verbose', action='store_true', help='Debug logging')

    parser = argparse.ArgumentParser(
        description='Wilberforce pendulum: simulation, normal forms, reduction and periodic orbits',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py simulate --epsilon 0 0.4 0.8
  python main.py section --epsilon 0.5 --count 10 --crossings 500
  python main.py normal-form --convention half
  python main.py reduce --h 1 --epsilon 0.01 0.05
  python main.py orbit --mode shoot --seed-state 0 0 1 0 --period 3.14159 --epsilon 0.05
  python main.py verify --only symbolic
        """
    )
    sub = parser.add_subparsers(dest='command', required=True)

    simulate = sub.add_parser('simulate', parents=[common], help='Trajectories over an epsilon grid')
    simulate.add_argument('--t-final', dest='t_final', type=float, help='Integration time')
    simulate.add_argument('--stride', type=int, help='Keep every stride-th step')
    simulate.add_argument('--initial-state', dest='initial_state', type=float, nargs=4,
                          metavar=('Q1', 'P1', 'Q2', 'P2'), help='Initial state')

    section = sub.add_parser('section', parents=[common], help='Poincare sections q2 = 0')
    section.add_argument('--count', type=int, help=f'Initial conditions per epsilon (default: {SECTION_COUNT})')
    section.add_argument('--crossings', type=int, help=f'Crossings per trajectory (default: {SECTION_MAX_CROSSINGS})')
    section.add_argument('--branch', choices=('+', '-', 'both'), help='Sign of p2 at the start')
    section.add_argument('--ordering', choices=('section', 'canonical'), help='Slot reading of the sampling recipe')

    normal_form = sub.add_parser('normal-form', parents=[common], help='N1 and N2 in Hopf variables')
    normal_form.add_argument('--convention', choices=CONVENTIONS, help='Scaling of N2 (default: printed)')

    reduce = sub.add_parser('reduce', parents=[common], help='Critical sets on the reduced space')
    reduce.add_argument('--grid', type=int, help=f'Search grid per axis (default: {CRITICAL_GRID})')

    orbit = sub.add_parser('orbit', parents=[common], help='Periodic orbits and Floquet stability')
    orbit.add_argument('--mode', choices=ORBIT_MODES, help='Orbit family (default: normal2)')
    orbit.add_argument('--seed-state', dest='seed_state', type=float, nargs=4,
                       metavar=('Q1', 'P1', 'Q2', 'P2'), help='Seed for --mode shoot')
    orbit.add_argument('--period', type=float, help='Period guess for --mode shoot')
    orbit.add_argument('--method', choices=('auto', 'reversible', 'section'), help='Shooting formulation')
    orbit.add_argument('--q1-values', dest='q1_values', type=float, nargs='+', help='Seeds for --mode return-time')

    verify = sub.add_parser('verify', parents=[common], help='Run the acceptance checks')
    verify.add_argument('--only', nargs='+', help=f'Groups {GROUPS}, criterion numbers or names')
    verify.add_argument('--threshold', type=parse_threshold, action='append',
                        metavar='NAME=VALUE', help='Override one acceptance threshold')
    return parser


def main():
    parser = build_parser()
    args = parser.parse_args()

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="[%(levelname)s] %(message)s")

    if not check_environment():
        print("Environment check failed. Please fix issues before proceeding.")
        sys.exit(EXIT_USAGE)

    try:
        resolved = resolve_config(args)
    except ConfigError as e:
        parser.error(str(e))
    if not validate_arguments(resolved):
        sys.exit(EXIT_USAGE)

    out_dir = Path(resolved["out"])
    print("=" * 60)
    print("Wilberforce Resonance Toolkit - REPRODUCIBLE")
    print("=" * 60)
    print(f"Subcommand: {args.command}")
    for key in ("h", "epsilon", "k", "mode", "convention"):
        if resolved.get(key) is not None:
            print(f"{key}: {resolved[key]}")
    print(f"Random Seed: {resolved['seed']}")
    print(f"Workers: {resolved['workers']}")
    print(f"Output: {out_dir}")
    print("=" * 60)

    runner = WilberforceRunner(resolved, out_dir)
    try:
        code = runner.run()
    except EmptySample as e:
        print(f"✗ Empty result: {e}")
        code = EXIT_EMPTY
    except ConfigError as e:
        print(f"Error: {e}", file=sys.stderr)
        code = EXIT_USAGE
    except WilberforceError as e:
        print(f"✗ {type(e).__name__}: {e}")
        code = EXIT_FAILED

    print(f"\n{'=' * 60}")
    status = {EXIT_OK: "OK", EXIT_FAILED: "FAILED", EXIT_USAGE: "USAGE ERROR", EXIT_EMPTY: "EMPTY RESULT"}[code]
    print(f"COMPLETED: {args.command} - {status}")
    print(f"Random Seed Used: {resolved['seed']}")
    print(f"Results saved in: {out_dir}")
    print(f"{'=' * 60}")
    sys.exit(code)


if __name__ == "__main__":
    main()

"""Handles JSON file generation for run results

Every writer uses sort_keys and carries no timestamps, so identical inputs
give byte-identical files.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List

import numpy as np

from core.orbits import OrbitResult, symplectic_defect
from core.symmath import format_poly, poly_to_dict

logger = logging.getLogger(__name__)


def _plain(value: Any) -> Any:
    """numpy scalars and arrays to JSON-native values"""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


class JSONGenerator:
    """Generates JSON files for orbits, critical sets, polynomials and verification"""

    @staticmethod
    def write(data: Dict, json_file_path: Path) -> Path:
        json_file_path.parent.mkdir(parents=True, exist_ok=True)
        with open(json_file_path, "w", encoding="utf-8") as f:
            json.dump(_plain(data), f, indent=2, sort_keys=True)
            f.write("\n")
        logger.info(f"Wrote {json_file_path}")
        return json_file_path

    @staticmethod
    def orbit_record(orbit: OrbitResult, **extra) -> Dict:
        record = {
            "initial_state": list(orbit.initial_state.as_tuple()),
            "period": orbit.period,
            "residual": orbit.closure_residual,
            "multipliers": [[complex(m).real, complex(m).imag] for m in orbit.floquet_multipliers],
            "stability": orbit.stability,
            "method": orbit.method,
        }
        if orbit.monodromy is not None:
            record["symplectic_defect"] = symplectic_defect(orbit.monodromy)
        record.update(extra)
        return record

    @staticmethod
    def create_orbit_json(orbits: Iterable[Dict], json_file_path: Path) -> Path:
        return JSONGenerator.write({"orbits": list(orbits)}, json_file_path)

    @staticmethod
    def create_critical_set_json(reports: Dict[str, Any], json_file_path: Path) -> Path:
        return JSONGenerator.write(reports, json_file_path)

    @staticmethod
    def polynomial_entry(poly, convention: str = "") -> Dict:
        entry = {"text": format_poly(poly), "terms": poly_to_dict(poly),
                 "variables": [str(s) for s in poly.ring.symbols]}
        if convention:
            entry["convention"] = convention
        return entry

    @staticmethod
    def create_normal_form_json(entries: Dict[str, Dict], json_file_path: Path) -> Path:
        return JSONGenerator.write({"normal_form": entries}, json_file_path)

    @staticmethod
    def create_verify_json(results: List[Dict], json_file_path: Path) -> Path:
        data = {
            "criteria": results,
            "passed": sum(1 for r in results if r["passed"]),
            "failed": [r["name"] for r in results if not r["passed"]],
            "total": len(results),
        }
        return JSONGenerator.write(data, json_file_path)

    @staticmethod
    def create_manifest(resolved: Dict[str, Any], outputs: List[str], json_file_path: Path) -> Path:
        return JSONGenerator.write({"config": resolved, "outputs": sorted(outputs)}, json_file_path)

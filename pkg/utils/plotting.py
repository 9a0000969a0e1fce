"""SVG figures rendered from the CSV outputs"""

import logging
from pathlib import Path
from typing import Optional

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from utils.file_ops import FileOperations  # noqa: E402

logger = logging.getLogger(__name__)

# fixed element ids and no date stamp keep the SVG text stable between runs
plt.rcParams["svg.hashsalt"] = "wilberforce"
_SVG_META = {"Date": None}


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata=_SVG_META)
    plt.close(fig)
    logger.debug(f"Rendered {path}")
    return path


def plot_trajectory(csv_path: Path, svg_path: Path, epsilon: float) -> Path:
    """q1 against q2 for one coupling"""
    cols = FileOperations().read_csv_columns(csv_path, ["q1", "q2"])
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(cols["q1"], cols["q2"], lw=0.4, color="steelblue")
    ax.set_xlabel("q1")
    ax.set_ylabel("q2")
    ax.set_title(f"Trajectory, ε={epsilon}")
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(True, alpha=0.3)
    return _save(fig, svg_path)


def plot_section(csv_path: Path, svg_path: Path, epsilon: float, h: float) -> Path:
    """Section points (q1, p1), one colour per trajectory"""
    rows = FileOperations().read_csv(csv_path)
    fig, ax = plt.subplots(figsize=(5, 5))
    by_traj = {}
    for r in rows:
        by_traj.setdefault(int(r["ic_index"]), ([], []))
        by_traj[int(r["ic_index"])][0].append(float(r["q1"]))
        by_traj[int(r["ic_index"])][1].append(float(r["p1"]))
    for k in sorted(by_traj):
        q1, p1 = by_traj[k]
        ax.scatter(q1, p1, s=1.5)
    ax.set_xlabel("q1")
    ax.set_ylabel("p1")
    ax.set_title(f"Section q2 = 0, h={h}, ε={epsilon}")
    ax.grid(True, alpha=0.3)
    return _save(fig, svg_path)


def plot_reduced_space(surface_csv: Path, critical_csv: Path, svg_path: Path, h: float,
                       epsilon: Optional[float] = None) -> Path:
    """Cross-section y = 0 of M_h with the critical sets projected onto (x, z)"""
    surface = FileOperations().read_csv_columns(surface_csv, ["x", "z"])
    critical = FileOperations().read_csv(critical_csv)
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(surface["x"], surface["z"], color="gray", lw=1.0, label="M_h, y = 0")
    for kind, marker, color in (("point", "o", "tomato"), ("circle", "s", "seagreen")):
        pts = [r for r in critical if r["type"] == kind]
        if pts:
            ax.scatter([float(r["x"]) for r in pts], [float(r["z"]) for r in pts],
                       marker=marker, color=color, s=18, label=kind, zorder=3)
    ax.set_xlabel("x = ρ3")
    ax.set_ylabel("z = ρ1")
    title = f"Reduced space, h={h}"
    ax.set_title(title if epsilon is None else f"{title}, ε={epsilon}")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=7)
    return _save(fig, svg_path)

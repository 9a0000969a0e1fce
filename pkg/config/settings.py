"""Configuration settings for the Wilberforce resonance toolkit"""
import math
import os
import platform
from pathlib import Path

# Platform detection
SYSTEM = platform.system().lower()

# Path Configuration - Platform independent
if SYSTEM == "windows":
    BASE_OUTPUT_DIR = Path(os.environ.get('TEMP', 'C:/temp')) / "wilberforce_runs"
else:
    # Prefer an explicit env override, else fall back to user home
    env_base = os.environ.get("WILBERFORCE_OUTPUT_DIR")
    BASE_OUTPUT_DIR = Path(env_base) if env_base else (Path.home() / "wilberforce_runs")

# Physical presets (1:2 resonant pendulum)
PRESET_MASS = 1.0
PRESET_INERTIA = 1.0
PRESET_OMEGA1 = 1.0
PRESET_OMEGA2 = 2.0

# Trajectory figure: initial state (q1, p1, q2, p2)
TRAJECTORY_INITIAL_STATE = (1.0, 1.0, 1.0, 1.0)
TRAJECTORY_T_FINAL = 100.0

# Section figure defaults
SECTION_ENERGY = 3.0
SECTION_EPSILONS = [0.0, 0.1, 0.2, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
SECTION_COUNT = 10
SECTION_MAX_CROSSINGS = 500
SECTION_Q1 = 1.5
SECTION_Q2 = 0.01
SECTION_J_RANGE = (-100, 100)
SECTION_ORDERINGS = ("section", "canonical")

# Integration defaults
DEFAULT_STEP = 1e-3
DEFAULT_STRIDE = 1
DEFAULT_SEED = 42

# Restricted return map
RETURN_WRAPS = 2
FIXED_POINT_EPSILONS = [0.005, 0.01, 0.02, 0.04]

# Orbit sweep grid
ORBIT_EPSILONS = [0.01, 0.05, 0.1]

# Reduced-space search
CRITICAL_GRID = 400
GAMMA_SAMPLES = 100
KEPS_EPSILONS = [0.01, 0.05, 0.1]

# Numerical tolerances
TOLERANCES = {
    "surface": 1e-9,
    "gradient": 1e-10,
    "crossing": 1e-10,
    "closure": 1e-9,
    "fixed_point": 1e-10,
    "fd_step": 1e-6,
    "fd_hessian_step": 1e-4,
    "unit_circle": 1e-5,
    "symplectic": 1e-6,
    "ode_rtol": 1e-12,
    "ode_atol": 1e-12,
    "energy": 1e-12,
    "degenerate": 1e-8,
    "singular_z": 1e-8,
    "dedupe": 1e-6,
}

# Newton loop limits
NEWTON_MAX_ITER = 40
BISECTION_MAX_ITER = 200

TWO_PI = 2.0 * math.pi

MAX_WORKERS = min(10, os.cpu_count() or 4)  # Adaptive worker count

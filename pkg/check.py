import sys
import platform
import importlib

REQUIRED = ("numpy", "scipy", "sympy", "matplotlib", "pytest")

def check_environment():
    """Environment check"""
    # 1. Basic System Info
    print(f"Platform: {platform.platform()}")
    print(f"Python: {sys.version.split()[0]}")

    # 2. Check the numerical stack
    ok = True
    for name in REQUIRED:
        try:
            module = importlib.import_module(name)
            print(f"✅ {name} {getattr(module, '__version__', '?')}")
        except ImportError as e:
            print(f"❌ {name} not importable: {e}")
            ok = False

    # 3. Smoke test: the SVG backend must load without a display
    if ok:
        try:
            print("   Verifying matplotlib Agg backend...", end=" ", flush=True)
            import matplotlib
            matplotlib.use("Agg")
            import matplotlib.pyplot as plt
            plt.close(plt.figure())
            print("OK")
        except Exception as e:
            print(f"\n❌ Error loading the Agg backend: {e}")
            ok = False
    return ok

if __name__ == "__main__":
    sys.exit(0 if check_environment() else 1)

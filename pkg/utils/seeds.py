"""Reproducible per-sample seeds"""

import hashlib


def derive_seed(master_seed: int, *parts) -> int:
    """Seed for one task, derived from the master seed and the task's identity

    MD5 of the identifying string; Python's built-in hash() is randomized
    across processes and would break reproducibility.
    """
    seed_source = ":".join(str(p) for p in (master_seed,) + parts)
    return int(hashlib.md5(seed_source.encode()).hexdigest(), 16) % (2**31)

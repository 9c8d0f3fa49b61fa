"""Deterministic seed derivation for parallel subsystems.

Every random stream in the package is derived from a single master seed
through ``numpy.random.SeedSequence`` keyed on (master_seed, domain, index).
Domains keep subsystems on disjoint streams: a simulation replicate never
shares randomness with a node chain even when their indices collide, and
adding or removing workers cannot reorder any stream.
"""

from __future__ import annotations

import numpy as np

DOMAIN_SIMULATE = 1
DOMAIN_HS_NODE = 2
DOMAIN_BASAD_NODE = 3
DOMAIN_IW = 4


def child_seed(master_seed: int, domain: int, index: int) -> int:
    """Return a stable 64-bit seed for stream (master_seed, domain, index)."""
    if master_seed < 0:
        raise ValueError(f"master seed must be nonnegative, got {master_seed}")
    if index < 0:
        raise ValueError(f"stream index must be nonnegative, got {index}")
    ss = np.random.SeedSequence((master_seed, domain, index))
    return int(ss.generate_state(1, np.uint64)[0])

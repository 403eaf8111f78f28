"""Counter-based random number generation.

Every random draw in the Monte Carlo engine is a pure function of
(master seed, stream id, agent index, draw kind).  This gives bitwise
reproducibility regardless of execution order: replications can be run
one at a time or vectorized across streams, and inserting a new draw
kind never perturbs existing ones.

The mixer is the splitmix64 finalizer applied in a small sponge over the
four key components.  It is not cryptographic, but the finalizer has full
avalanche, which is what matters for structured (seed, stream, step, kind)
keys.
"""

from __future__ import annotations

import numpy as np

# Draw kinds.  Fixed constants: adding kinds must not renumber these.
KIND_WORLD = 0  # the state-of-the-world draw, once per replication
KIND_SIGNAL = 1  # the private signal of agent n
KIND_RULE = 2  # the rule-randomization draw of agent n

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_INV_2_53 = 1.0 / (1 << 53)


def _mix64(z):
    """splitmix64 finalizer, valid for scalars and uint64 arrays."""
    z = np.uint64(z) if np.isscalar(z) else z
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def uniform(seed, stream, step, kind):
    """Uniform draw in [0, 1) keyed by (seed, stream, step, kind).

    ``stream`` may be a scalar or an integer ndarray; the other arguments
    are scalars.  Returns a float or a float64 array of the same shape
    as ``stream``.
    """
    with np.errstate(over="ignore"):
        h = _mix64(np.uint64(seed) + _GOLDEN)
        h = _mix64(h ^ (np.asarray(stream, dtype=np.uint64) * _GOLDEN + np.uint64(1)))
        h = _mix64(h ^ (np.uint64(step) * _MIX1 + np.uint64(3)))
        h = _mix64(h ^ (np.uint64(kind) * _MIX2 + np.uint64(5)))
    out = (h >> np.uint64(11)).astype(np.float64) * _INV_2_53
    if np.isscalar(stream):
        return float(out)
    return out

"""Sampled-path simulation with reproducible, counter-based randomness.

Replications are independent streams; every draw is a pure function of
(master seed, stream id, agent index, draw kind), so results are
bitwise identical regardless of batching or execution order.  Paths are
not stored wholesale: only checkpoint decisions and per-path counters
(decision switches, searching-phase initiations, last switch index).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rng


@dataclass(frozen=True)
class SimConfig:
    profile: object
    model: object
    N: int
    reps: int = 1
    seed: int = 0
    theta: int | None = None  # None: draw theta from the 1/2 prior per path
    checkpoints: tuple = ()
    stream_offset: int = 0

    def __post_init__(self):
        if self.reps < 1:
            raise ValueError("need at least one replication")
        if self.N < 1:
            raise ValueError("need at least one agent")
        cps = tuple(sorted(set(int(c) for c in self.checkpoints))) or (self.N,)
        if cps[0] < 1 or cps[-1] > self.N:
            raise ValueError("checkpoints must lie in [1, N]")
        object.__setattr__(self, "checkpoints", cps)


@dataclass
class PathRecord:
    """Checkpoint decisions and counters for a single replication."""

    stream: int
    theta: int
    decisions: dict  # n -> x_n at each checkpoint
    correct: dict  # n -> 1{x_n = theta}
    switches: int
    searching: int
    last_switch: int  # 0 when the path never switched


@dataclass
class PathStats:
    """Aggregated checkpoint estimates and path-counter statistics."""

    ns: np.ndarray
    mean: np.ndarray  # empirical P(x_n = theta)
    se: np.ndarray  # sqrt(p(1-p)/R)
    census_median: np.ndarray  # searching-phase census per checkpoint
    census_mean: np.ndarray
    switches_quantiles: dict  # percentile -> total switches at horizon
    last_switch_median: float
    reps: int
    config: SimConfig = field(repr=False, default=None)


def _run(config: SimConfig, streams: np.ndarray):
    """Vectorized simulation of one path per stream id."""
    profile, model = config.profile, config.model
    mask = (1 << profile.K) - 1
    R = len(streams)
    if config.theta is None:
        theta = (rng.uniform(config.seed, streams, 0, rng.KIND_WORLD) < 0.5).astype(np.int64)
    else:
        theta = np.full(R, int(config.theta), dtype=np.int64)
    p_sig = np.where(theta == 1, model.p1, model.p0)
    win = np.zeros(R, dtype=np.int64)  # zero-padded initial window
    prev_x = np.zeros(R, dtype=np.int64)
    switches = np.zeros(R, dtype=np.int64)
    searching = np.zeros(R, dtype=np.int64)
    last_switch = np.zeros(R, dtype=np.int64)
    cps = set(config.checkpoints)
    decisions = {}
    census = {}
    for n in range(1, config.N + 1):
        table = profile.rule(n).table
        s = (rng.uniform(config.seed, streams, n, rng.KIND_SIGNAL) < p_sig).astype(np.int64)
        prob_one = table[win, s]
        x = (rng.uniform(config.seed, streams, n, rng.KIND_RULE) < prob_one).astype(np.int64)
        searching += profile.searching_mask(n, win, x)
        if n > 1:
            moved = x != prev_x
            switches += moved
            last_switch[moved] = n
        if n in cps:
            decisions[n] = x.copy()
            census[n] = searching.copy()
        win = ((win << 1) | x) & mask
        prev_x = x
    return theta, decisions, census, switches, searching, last_switch


def simulate_path(config: SimConfig, replication: int) -> PathRecord:
    """Single replication; deterministic given (seed, stream id)."""
    stream = config.stream_offset + replication
    theta, decisions, census, switches, searching, last_switch = _run(
        config, np.array([stream])
    )
    return PathRecord(
        stream=stream,
        theta=int(theta[0]),
        decisions={n: int(x[0]) for n, x in decisions.items()},
        correct={n: int(x[0] == theta[0]) for n, x in decisions.items()},
        switches=int(switches[0]),
        searching=int(searching[0]),
        last_switch=int(last_switch[0]),
    )


def estimate_error(config: SimConfig) -> PathStats:
    """Empirical P(x_n = theta) with standard errors over all streams."""
    streams = config.stream_offset + np.arange(config.reps)
    theta, decisions, census, switches, searching, last_switch = _run(config, streams)
    ns = np.asarray(config.checkpoints)
    mean = np.empty(len(ns))
    se = np.empty(len(ns))
    census_median = np.empty(len(ns))
    census_mean = np.empty(len(ns))
    for i, n in enumerate(ns):
        hit = (decisions[n] == theta).mean()
        mean[i] = hit
        se[i] = np.sqrt(hit * (1.0 - hit) / config.reps)
        census_median[i] = np.median(census[n])
        census_mean[i] = census[n].mean()
    quantiles = {q: float(np.percentile(switches, q)) for q in (10, 50, 90)}
    return PathStats(
        ns=ns,
        mean=mean,
        se=se,
        census_median=census_median,
        census_mean=census_mean,
        switches_quantiles=quantiles,
        last_switch_median=float(np.median(last_switch)),
        reps=config.reps,
        config=config,
    )

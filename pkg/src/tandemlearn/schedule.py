"""Segment layout for the designed K>=2 decision profile.

Agents 1 and 2 form a preamble.  From agent 3 on, agents are tiled into
segments m = 1, 2, ...  Segment m consists of an S-block of 2*k_m - 1
agents, one SR transient agent, an R-block of 2*r_m - 1 agents, and one
RS transient agent, for a total of 2*k_m + 2*r_m agents.  Block sizes
grow like log(log(m)) so that consensus-switch probabilities decay at
the rate the learning argument needs.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from enum import IntEnum

import numpy as np


class RoleKind(IntEnum):
    PREAMBLE = 0
    S_FIRST = 1
    S_BODY = 2
    SR_TRANSIENT = 3
    R_FIRST = 4
    R_BODY = 5
    RS_TRANSIENT = 6


@dataclass(frozen=True)
class AgentRole:
    kind: RoleKind
    m: int | None = None  # segment index; None for the preamble
    offset: int | None = None  # 1-based position within the S or R block


@dataclass(frozen=True)
class BlockSizes:
    k: int
    r: int


def _cutoff(model) -> float:
    # Both block formulas are well defined once ln(m) exceeds 1/pbar and
    # 1/qbar; for smaller m both sizes are pinned to 1.
    return max(1.0 / model.pbar, 1.0 / model.qbar)


def block_sizes(m: int, model) -> BlockSizes:
    """Block sizes (k_m, r_m) for segment ``m``."""
    if m < 1:
        raise ValueError("segment index must be >= 1")
    lnm = math.log(m) if m > 1 else 0.0
    if lnm > _cutoff(model):
        k = math.ceil(math.log(lnm) / math.log(1.0 / model.pbar))
        r = math.ceil(math.log(lnm) / math.log(1.0 / model.qbar))
        return BlockSizes(k=max(k, 1), r=max(r, 1))
    return BlockSizes(k=1, r=1)


def block_sizes_arrays(m_max: int, model) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (k_m, r_m) for m = 1..m_max, as int64 arrays."""
    m = np.arange(1, m_max + 1, dtype=np.float64)
    with np.errstate(divide="ignore"):
        lnm = np.log(m)
    big = lnm > _cutoff(model)
    k = np.ones(m_max, dtype=np.int64)
    r = np.ones(m_max, dtype=np.int64)
    loglog = np.log(lnm, where=big, out=np.zeros_like(lnm))
    k[big] = np.maximum(np.ceil(loglog[big] / math.log(1.0 / model.pbar)), 1).astype(np.int64)
    r[big] = np.maximum(np.ceil(loglog[big] / math.log(1.0 / model.qbar)), 1).astype(np.int64)
    return k, r


class SegmentTable:
    """Memoized segment boundaries for one signal model.

    The cumulative-start table is grown geometrically and only appended
    to, so concurrent readers are safe once an entry exists.
    """

    def __init__(self, model):
        self.model = model
        self._lock = threading.Lock()
        self._k = np.empty(0, dtype=np.int64)
        self._r = np.empty(0, dtype=np.int64)
        # _starts[i] = first agent of segment i+1; segment 1 starts at 3.
        self._starts = np.empty(0, dtype=np.int64)
        self._grow(1024)

    def _grow(self, m_max: int):
        with self._lock:
            if len(self._starts) >= m_max:
                return
            k, r = block_sizes_arrays(m_max, self.model)
            lengths = 2 * k + 2 * r
            starts = np.empty(m_max, dtype=np.int64)
            starts[0] = 3
            np.cumsum(lengths[:-1], out=starts[1:])
            starts[1:] += 3
            self._k, self._r, self._starts = k, r, starts

    def _ensure_segment(self, m: int):
        if m > len(self._starts):
            self._grow(max(m, 2 * len(self._starts)))

    def _ensure_agent(self, n: int):
        while self._starts[-1] + 2 * (self._k[-1] + self._r[-1]) <= n:
            self._grow(2 * len(self._starts))

    def sizes(self, m: int) -> BlockSizes:
        self._ensure_segment(m)
        return BlockSizes(k=int(self._k[m - 1]), r=int(self._r[m - 1]))

    def segment_start(self, m: int) -> int:
        self._ensure_segment(m)
        return int(self._starts[m - 1])

    def segment_of(self, n: int) -> int:
        """Segment index containing agent n (n >= 3)."""
        if n < 3:
            raise ValueError("agents 1 and 2 belong to no segment")
        self._ensure_agent(n)
        return int(np.searchsorted(self._starts, n, side="right"))

    def role_of(self, n: int) -> AgentRole:
        if n < 1:
            raise ValueError("agent index must be >= 1")
        if n <= 2:
            return AgentRole(kind=RoleKind.PREAMBLE)
        m = self.segment_of(n)
        start = int(self._starts[m - 1])
        k = int(self._k[m - 1])
        r = int(self._r[m - 1])
        pos = n - start  # 0-based within the segment
        if pos < 2 * k - 1:
            kind = RoleKind.S_FIRST if pos == 0 else RoleKind.S_BODY
            return AgentRole(kind=kind, m=m, offset=pos + 1)
        if pos == 2 * k - 1:
            return AgentRole(kind=RoleKind.SR_TRANSIENT, m=m)
        pos -= 2 * k
        if pos < 2 * r - 1:
            kind = RoleKind.R_FIRST if pos == 0 else RoleKind.R_BODY
            return AgentRole(kind=kind, m=m, offset=pos + 1)
        return AgentRole(kind=RoleKind.RS_TRANSIENT, m=m)

    def block_start_agent(self, i: int) -> int:
        """Agent index of the first agent of the i-th block.

        Odd i is the start of S-block (i+1)/2; even i the start of
        R-block i/2.  These are the agents whose observed window
        realizes the two-state chain value w_i.
        """
        if i < 1:
            raise ValueError("block index must be >= 1")
        if i % 2 == 1:
            m = (i + 1) // 2
            return self.segment_start(m)
        m = i // 2
        return self.segment_start(m) + 2 * int(self._k[m - 1])

    def last_block_start_before(self, n: int) -> tuple[int, int]:
        """(i, agent) of the last block start with agent <= n."""
        i = 1
        best = (1, self.block_start_agent(1))
        while True:
            i += 1
            a = self.block_start_agent(i)
            if a > n:
                return best
            best = (i, a)

    def role_codes(self, n0: int, n1: int) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized (role kind, 1/m) arrays for agents n0..n1 inclusive.

        The 1/m entry is nonzero only at S_FIRST and R_FIRST agents; it
        parameterizes the searching-phase randomization of the designed
        profile and lets callers assemble per-agent rule tables without
        a per-agent Python loop.
        """
        if not (1 <= n0 <= n1):
            raise ValueError("need 1 <= n0 <= n1")
        self._ensure_agent(n1)
        lo = 1 if n0 <= 2 else self.segment_of(n0)
        hi = self.segment_of(max(n1, 3))
        k = self._k[lo - 1 : hi]
        r = self._r[lo - 1 : hi]
        mseg = np.arange(lo, hi + 1, dtype=np.int64)
        nseg = len(mseg)
        pattern = np.array(
            [
                RoleKind.S_FIRST,
                RoleKind.S_BODY,
                RoleKind.SR_TRANSIENT,
                RoleKind.R_FIRST,
                RoleKind.R_BODY,
                RoleKind.RS_TRANSIENT,
            ],
            dtype=np.int8,
        )
        values = np.tile(pattern, nseg)
        counts = np.empty((nseg, 6), dtype=np.int64)
        counts[:, 0] = 1
        counts[:, 1] = 2 * k - 2
        counts[:, 2] = 1
        counts[:, 3] = 1
        counts[:, 4] = 2 * r - 2
        counts[:, 5] = 1
        inv_vals = np.zeros((nseg, 6), dtype=np.float64)
        inv_vals[:, 0] = 1.0 / mseg
        inv_vals[:, 3] = 1.0 / mseg
        kinds = np.repeat(values, counts.ravel())
        inv_m = np.repeat(inv_vals.ravel(), counts.ravel())
        first = self.segment_start(lo)
        if n0 <= 2:
            pre = 3 - n0
            kinds = np.concatenate(
                [np.full(pre, RoleKind.PREAMBLE, dtype=np.int8), kinds]
            )
            inv_m = np.concatenate([np.zeros(pre), inv_m])
            first = n0
        a = n0 - first
        b = a + (n1 - n0) + 1
        return kinds[a:b].copy(), inv_m[a:b].copy()


_tables: dict = {}
_tables_lock = threading.Lock()


def segment_table(model) -> SegmentTable:
    """Shared memoized SegmentTable for a model (keyed by (p0, p1))."""
    key = (model.p0, model.p1)
    tab = _tables.get(key)
    if tab is None:
        with _tables_lock:
            tab = _tables.setdefault(key, SegmentTable(model))
    return tab


def role_of(n: int, model) -> AgentRole:
    """Role of agent ``n`` under the segment layout for ``model``."""
    return segment_table(model).role_of(n)

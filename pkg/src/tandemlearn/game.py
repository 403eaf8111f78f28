"""Forward-looking payoffs and epsilon-equilibrium verification.

An agent's payoff is the discounted sum over itself and all successors
of the indicators of correct decisions.  The conditional expected payoff
of playing y after observing (window u, signal s) is evaluated exactly up
to a truncation horizon T, with tail bounded by delta^(T+1)/(1-delta);
equilibrium checking certifies violations through interval arithmetic on
those tails, so every reported violation is a true violation of the
untruncated payoff.  Deviations are unilateral: only the agent's own
decision changes, successors keep their rules and respond through the
window chain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ZeroProbabilityError, propagate_dist, window_distributions
from .signals import blr_bounds


@dataclass(frozen=True)
class PayoffQuery:
    n: int
    window: tuple
    s: int
    action: int
    delta: float
    horizon: int

    def __post_init__(self):
        if not (0.0 <= self.delta < 1.0):
            raise ValueError("discount factor must lie in [0, 1)")
        if self.horizon < 0:
            raise ValueError("truncation horizon must be >= 0")
        if self.action not in (0, 1) or self.s not in (0, 1):
            raise ValueError("signal and action must be binary")


@dataclass
class PayoffResult:
    value: float  # truncated expected payoff
    tail_bound: float  # delta^(T+1)/(1-delta)
    posterior: float  # P(theta=1 | v_n=u, s_n=s)


@dataclass
class Violation:
    n: int
    window: tuple
    s: int
    gain: float  # certified payoff improvement beyond the tail slack
    sigma_value: float
    best_value: float
    best_action: int


@dataclass
class EquilibriumReport:
    violations: list
    n_range: tuple
    eps: float
    delta: float
    horizon: int
    tail_bound: float
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations


def _tail_bound(delta: float, horizon: int) -> float:
    return 0.0 if delta == 0.0 else delta ** (horizon + 1) / (1.0 - delta)


def _posterior_one(dist, model, u_code: int, s: int) -> float:
    w1 = dist.d1[u_code] * model.signal_probs(1)[s]
    w0 = dist.d0[u_code] * model.signal_probs(0)[s]
    if w0 + w1 == 0.0:
        raise ZeroProbabilityError(
            f"window {u_code:0{dist.K}b} with signal {s} has probability zero at n={dist.n}"
        )
    return w1 / (w0 + w1)


def _continuation_sums(profile, model, n: int, u_code: int, action: int, delta: float, horizon: int):
    """(C0, C1): per-theta discounted sums of P(x_k = theta) for
    k = n+1..n+T, starting from the window that follows decision
    ``action`` in window ``u_code``."""
    if delta == 0.0 or horizon == 0:
        return 0.0, 0.0
    n_states = 1 << profile.K
    mask = n_states - 1
    start = ((u_code << 1) | action) & mask
    sums = [0.0, 0.0]
    for theta in (0, 1):
        d = np.zeros(n_states)
        d[start] = 1.0
        sig = model.signal_probs(theta)
        disc = 1.0
        total = 0.0
        for k in range(n + 1, n + horizon + 1):
            d = propagate_dist(d, profile.rule(k).table, sig)
            disc *= delta
            on_theta = d[theta::2].sum()  # windows whose newest decision is theta
            total += disc * on_theta
        sums[theta] = total
    return sums[0], sums[1]


def payoff(profile, model, query: PayoffQuery, _dist=None) -> PayoffResult:
    """Truncated conditional expected payoff U_n(action; window, signal)."""
    from .profiles import window_code

    u_code = window_code(query.window, profile.K)
    dist = _dist if _dist is not None else window_distributions(profile, model, [query.n])[query.n]
    post1 = _posterior_one(dist, model, u_code, query.s)
    post0 = 1.0 - post1
    immediate = post1 if query.action == 1 else post0
    c0, c1 = _continuation_sums(
        profile, model, query.n, u_code, query.action, query.delta, query.horizon
    )
    value = immediate + post0 * c0 + post1 * c1
    return PayoffResult(
        value=value, tail_bound=_tail_bound(query.delta, query.horizon), posterior=post1
    )


def check_equilibrium(
    profile, model, delta: float, n_range: tuple, eps: float, horizon: int,
    stop_after: int | None = None,
) -> EquilibriumReport:
    """Verify the argmax property over every positive-probability
    (agent, window, signal) triple in ``n_range``.

    A violation is recorded only when the alternative action beats the
    profile's (possibly randomized) action by more than eps plus twice
    the truncation tail, so it survives un-truncation.
    """
    from .profiles import code_window

    n1, n2 = n_range
    if not (1 <= n1 <= n2):
        raise ValueError("need 1 <= n1 <= n2")
    tail = _tail_bound(delta, horizon)
    if 2.0 * tail >= eps:
        raise ValueError(
            f"horizon too short to certify eps={eps}: tail slack is {2.0 * tail}"
        )
    agents = list(range(n1, n2 + 1))
    dists = window_distributions(profile, model, agents)
    n_states = 1 << profile.K
    sig0 = model.signal_probs(0)
    sig1 = model.signal_probs(1)
    violations = []
    checked = 0
    for n in agents:
        dist = dists[n]
        table = profile.rule(n).table
        for u in range(n_states):
            if dist.d0[u] == 0.0 and dist.d1[u] == 0.0:
                continue
            cont = {
                y: _continuation_sums(profile, model, n, u, y, delta, horizon)
                for y in (0, 1)
            }
            for s in (0, 1):
                if dist.d0[u] * sig0[s] + dist.d1[u] * sig1[s] == 0.0:
                    continue
                checked += 1
                post1 = _posterior_one(dist, model, u, s)
                post0 = 1.0 - post1
                value = {}
                for y in (0, 1):
                    c0, c1 = cont[y]
                    value[y] = (post1 if y == 1 else post0) + post0 * c0 + post1 * c1
                sigma_value = table[u, s] * value[1] + (1.0 - table[u, s]) * value[0]
                best_action = 1 if value[1] >= value[0] else 0
                gain = value[best_action] - sigma_value
                if gain > eps + 2.0 * tail:
                    violations.append(
                        Violation(
                            n=n,
                            window=code_window(u, profile.K),
                            s=s,
                            gain=gain - 2.0 * tail,
                            sigma_value=sigma_value,
                            best_value=value[best_action],
                            best_action=best_action,
                        )
                    )
                    if stop_after is not None and len(violations) >= stop_after:
                        return EquilibriumReport(
                            violations, (n1, n2), eps, delta, horizon, tail, checked
                        )
    return EquilibriumReport(violations, (n1, n2), eps, delta, horizon, tail, checked)


@dataclass
class PosteriorSequence:
    """Posterior diagnostics along a fixed observed window.

    ``pi`` is P(theta=1 | v_n = window); ``f`` maps a signal value to the
    exact posterior given the window and that signal; ``f_lower`` is the
    bounded-likelihood-ratio lower bound on min_s f_n(s); ``gamma`` is
    the probability (under theta=1) that the profile deviates from 1 at
    the window.  Entries are NaN where the window has probability zero.
    """

    ns: np.ndarray
    window: tuple
    pi: np.ndarray
    f: dict
    f_lower: np.ndarray
    gamma: np.ndarray


def posterior_sequence(profile, model, n_range: tuple, window=None) -> PosteriorSequence:
    from .profiles import window_code

    n1, n2 = n_range
    if window is None:
        window = (1,) * profile.K
    e = window_code(window, profile.K)
    _, M = blr_bounds(model)
    agents = list(range(n1, n2 + 1))
    dists = window_distributions(profile, model, agents)
    sig1 = model.signal_probs(1)
    count = len(agents)
    pi = np.full(count, np.nan)
    f = {0: np.full(count, np.nan), 1: np.full(count, np.nan)}
    f_lower = np.full(count, np.nan)
    gamma = np.full(count, np.nan)
    for i, n in enumerate(agents):
        dist = dists[n]
        mass0, mass1 = dist.d0[e], dist.d1[e]
        if mass0 == 0.0 and mass1 == 0.0:
            continue
        pi[i] = mass1 / (mass0 + mass1)
        for s in (0, 1):
            f[s][i] = _posterior_one(dist, model, e, s)
        if mass0 > 0.0:
            ratio = (mass1 / mass0) / M
            f_lower[i] = ratio / (1.0 + ratio)
        else:
            f_lower[i] = 1.0
        table = profile.rule(n).table
        gamma[i] = sig1[0] * (1.0 - table[e, 0]) + sig1[1] * (1.0 - table[e, 1])
    return PosteriorSequence(
        ns=np.asarray(agents), window=tuple(window), pi=pi, f=f, f_lower=f_lower, gamma=gamma
    )

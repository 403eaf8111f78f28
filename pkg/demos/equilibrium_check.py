"""Equilibrium verification for two profiles.

With no discounting (delta = 0) every agent only cares about its own
decision, and the myopic profile is an exact best response to itself.
With forward-looking payoffs (delta > 0) the learning profile is *not* an
equilibrium: a block opener holding a contrary signal gains by deviating
from the searching convention.  The checker certifies violations against
a truncated payoff with an explicit geometric tail bound.
"""

from tandemlearn import (
    SignalModel,
    check_equilibrium,
    designed_profile,
    myopic_profile,
)

m46 = SignalModel(0.4, 0.6)
myopic = myopic_profile(m46, K=1, horizon=300)
report = check_equilibrium(myopic, m46, delta=0.0, n_range=(1, 200),
                           eps=1e-9, horizon=200)
print(f"myopic profile, delta=0: passed={report.passed} "
      f"({report.checked} (agent, window, signal) triples checked)")
print()

m37 = SignalModel(0.3, 0.7)
designed = designed_profile(m37)
report = check_equilibrium(designed, m37, delta=0.5, n_range=(1, 100),
                           eps=0.01, horizon=25)
print(f"designed profile, delta=0.5, eps=0.01: passed={report.passed}, "
      f"tail bound {report.tail_bound:.2e}")
for v in report.violations[:5]:
    print(f"  agent {v.n}, window {v.window}, signal {v.s}: playing "
          f"{v.best_action} gains {v.gain:.4f} over the profile")
if len(report.violations) > 5:
    print(f"  ... and {len(report.violations) - 5} more")

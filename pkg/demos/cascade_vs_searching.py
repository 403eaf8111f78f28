"""Informational cascade versus designed searching.

Myopic agents herd: after a finite onset their rules ignore the private
signal, P(x_n = theta) freezes strictly below 1, and no later evidence is
ever incorporated.  The designed profile keeps probing (searching phases
with probability 1/m), so decisions keep switching and accuracy keeps
improving.  A small Monte Carlo run shows the searching census growing
with the horizon.
"""

from tandemlearn import (
    SignalModel,
    SimConfig,
    designed_profile,
    error_trajectory,
    estimate_error,
    myopic_profile,
)

model = SignalModel(0.4, 0.6)
myopic = myopic_profile(model, K=1, horizon=200)

onset = myopic.cascade_onset()
trajectory = error_trajectory(myopic, model, 100, checkpoints=[1, onset, 10, 100])
print(f"myopic K=1 profile, p0={model.p0}/p1={model.p1}")
print(f"cascade onset: agent {onset} (rules ignore the signal from there on)")
for n, p in zip(trajectory.ns, trajectory.p_correct):
    print(f"  P(x_{n} = theta) = {p:.6f}")
print("the plateau never improves, however many agents follow.")
print()

designed = designed_profile(model)
config = SimConfig(profile=designed, model=model, N=100_000, reps=500, seed=42,
                   checkpoints=(1_000, 10_000, 100_000))
stats = estimate_error(config)
print(f"designed profile, same model, R={config.reps} replications:")
print(f"{'horizon':>9} {'mean correct':>13} {'se':>8} {'census median':>14}")
for i, n in enumerate(stats.ns):
    print(f"{n:>9} {stats.mean[i]:>13.4f} {stats.se[i]:>8.4f} "
          f"{stats.census_median[i]:>14.1f}")
print("the searching census keeps growing: decisions never freeze.")

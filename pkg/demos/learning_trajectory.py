"""Exact learning trajectory of the designed profile.

Runs the exact window chain for the block-scheduled profile and prints
P(x_n = theta) at geometrically spaced checkpoints, together with the
consensus probabilities of the two-state block-start chain.  The error
probability keeps shrinking: switches toward the true state stay likely
(divergent searching series) while switches away die out.
"""

import numpy as np

from tandemlearn import (
    SignalModel,
    block_start_trajectory,
    designed_profile,
    error_trajectory,
    segment_table,
)

model = SignalModel(0.3, 0.7)
profile = designed_profile(model)

checkpoints = [int(n) for n in np.geomspace(10, 1_000_000, 11)]
trajectory = error_trajectory(profile, model, checkpoints[-1], checkpoints=checkpoints)

print(f"model: p0={model.p0}, p1={model.p1}  (pbar={model.pbar})")
print()
print(f"{'agent n':>10}  {'P(x_n = theta)':>15}")
for n, p in zip(trajectory.ns, trajectory.p_correct):
    print(f"{n:>10}  {p:>15.6f}")

# The same story at block boundaries, from the closed-form two-state chain.
segments = 500
chain1 = block_start_trajectory(model, 1, segments)
chain0 = block_start_trajectory(model, 0, segments)
tab = segment_table(model)

print()
print("block-start consensus probabilities (closed form):")
print(f"{'block i':>8} {'agent':>8} {'P^1(w_i=1)':>12} {'P^0(w_i=1)':>12}")
for i in (1, 10, 100, 2 * segments - 1):
    print(f"{i:>8} {tab.block_start_agent(i):>8} "
          f"{chain1.pi[i - 1]:>12.6f} {chain0.pi[i - 1]:>12.6f}")

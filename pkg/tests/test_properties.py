"""Randomized invariant suites.

Each invariant runs at least 10^3 generated cases.
"""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from tandemlearn import SignalModel, blr_bounds, designed_profile
from tandemlearn.chain import WindowDistribution, block_start_masses, propagate
from tandemlearn.rng import KIND_RULE, KIND_SIGNAL, KIND_WORLD, uniform
from tandemlearn.schedule import segment_table
from conftest import TableProfile

CASES = settings(max_examples=1000, deadline=None)

models = st.tuples(
    st.floats(0.02, 0.98), st.floats(0.02, 0.98)
).filter(lambda t: abs(t[0] - t[1]) > 1e-3).map(lambda t: SignalModel(*t))

probabilities = st.floats(0.0, 1.0)


def rule_tables(K):
    return st.lists(
        st.lists(st.tuples(probabilities, probabilities).map(list), min_size=1 << K, max_size=1 << K),
        min_size=1,
        max_size=6,
    )


@CASES
@given(model=models, tables=rule_tables(2), steps=st.integers(1, 12))
def test_normalization_invariant(model, tables, steps):
    """Window distributions stay normalized and non-negative under any
    rule sequence and any signal model."""
    prof = TableProfile(tables)
    d = WindowDistribution.initial(2)
    for n in range(1, steps + 1):
        d = propagate(d, prof.rule(n), model)
        for mass in (d.d0, d.d1):
            assert np.all(mass >= 0.0)
            assert abs(mass.sum() - 1.0) < 1e-12


@CASES
@given(model=models, row=st.tuples(probabilities, probabilities))
def test_likelihood_ratio_coupling_invariant(model, row):
    """Transition probabilities under the two states are coupled by the
    likelihood-ratio bounds: m_blr * abar <= a <= M_blr * abar."""
    lo, hi = blr_bounds(model)
    t = np.asarray(row)
    a = float(model.signal_probs(0) @ t)  # P^0(decide 1 | window)
    abar = float(model.signal_probs(1) @ t)  # P^1(decide 1 | window)
    assert lo * abar - 1e-12 <= a <= hi * abar + 1e-12
    # the same holds for the complementary decision
    a0, abar0 = 1.0 - a, 1.0 - abar
    assert lo * abar0 - 1e-12 <= a0 <= hi * abar0 + 1e-12


@CASES
@given(model=models, segments=st.integers(1, 8))
def test_block_start_purity_invariant(model, segments):
    """At every block-start agent the designed profile's window is a pure
    consensus: zero mass on the mixed windows (0,1) and (1,0)."""
    (_, _), (imp0, imp1) = block_start_masses(designed_profile(model), model, segments)
    assert imp0.max() == 0.0
    assert imp1.max() == 0.0


@CASES
@given(model=models, n=st.integers(1, 3000))
def test_schedule_partition_invariant(model, n):
    """Every agent index belongs to exactly one role, consistent between
    the scalar and vectorized role assignments, and segments tile the
    agent axis with lengths 2*k_m + 2*r_m."""
    tab = segment_table(model)
    role = tab.role_of(n)
    kinds, _ = tab.role_codes(n, n)
    assert kinds[0] == role.kind
    if n >= 3:
        m = tab.segment_of(n)
        start = tab.segment_start(m)
        assert start <= n < tab.segment_start(m + 1)
        from tandemlearn import block_sizes

        bs = block_sizes(m, model)
        assert tab.segment_start(m + 1) - start == 2 * bs.k + 2 * bs.r


@CASES
@given(qs=st.lists(st.floats(0.0, 0.999), min_size=1, max_size=30))
def test_product_bound_invariant(qs):
    """1 - sum(q) <= prod(1 - q) <= exp(-sum(q)) for q in [0, 1)."""
    q = np.asarray(qs)
    prod = np.prod(1.0 - q)
    total = q.sum()
    assert 1.0 - total <= prod + 1e-12
    assert prod <= np.exp(-total) + 1e-12


@CASES
@given(
    seed=st.integers(0, 2**63 - 1),
    stream=st.integers(0, 2**31 - 1),
    step=st.integers(0, 2**31 - 1),
    kind=st.sampled_from([KIND_WORLD, KIND_SIGNAL, KIND_RULE]),
)
def test_rng_reproducibility_invariant(seed, stream, step, kind):
    """Draws are pure functions of (seed, stream, step, kind), lie in
    [0, 1), and the vectorized path reproduces scalar draws exactly."""
    u = uniform(seed, stream, step, kind)
    assert 0.0 <= u < 1.0
    assert uniform(seed, stream, step, kind) == u
    vec = uniform(seed, np.array([stream, stream + 1]), step, kind)
    assert vec[0] == u
    assert vec.shape == (2,)

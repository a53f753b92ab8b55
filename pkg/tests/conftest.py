import itertools
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tourney.core import Tournament

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def tournaments(draw, min_n=1, max_n=9):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.text(alphabet="01", min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    return Tournament.from_bits(n, bits)


def random_adj(n, rng):
    upper = np.triu(rng.random((n, n)) < 0.5, 1)
    return upper | np.tril(~upper.T, -1)


def score_class(sub):
    """Independent 3/4-vertex classifier from the sorted score sequence."""
    s = tuple(sorted(int(x) for x in sub.sum(axis=1)))
    if len(s) == 3:
        return "c3" if s == (1, 1, 1) else "tt3"
    return {(0, 1, 2, 3): "tt4", (1, 1, 1, 3): "c3plus", (0, 2, 2, 2): "c3minus", (1, 1, 2, 2): "c4"}[s]


def naive_census(T):
    out = {"tt3": 0, "c3": 0, "tt4": 0, "c3plus": 0, "c3minus": 0, "c4": 0}
    for k in (3, 4):
        for S in itertools.combinations(range(T.n), k):
            out[score_class(T.adj[np.ix_(S, S)])] += 1
    return out


def brute_canonical_bits(T):
    """Smallest tour/1 string over all relabelings."""
    best = None
    for perm in itertools.permutations(range(T.n)):
        b = T.relabel(perm).to_bits()
        if best is None or b < best:
            best = b
    return best


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

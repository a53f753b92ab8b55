import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import brute_canonical_bits, tournaments
from tourney.analysis import CLOSED_ALPHA
from tourney.constructions import (
    BlowupSpec,
    CarouselSpec,
    blowup_levels,
    blowup_levels_sizes,
    build_blowup,
    carousel,
    carousel_class,
    carousel_class_forms,
    carousel_from_spec,
    is_locally_transitive_balanced,
    is_near_regular,
    iterated_blowup,
    random_tournament,
    transitive,
)
from tourney.core import TournamentError, canonical_form, is_isomorphic
from tourney.search import enumerate_tournaments


def _transitive_set(T, S):
    S = list(S)
    return len({int(T.adj[v, S].sum()) for v in S}) == len(S)


def _naive_lt_balanced(T):
    n = T.n
    for v in range(n):
        outs = T.out_neighbors(v).tolist()
        ins = T.in_neighbors(v).tolist()
        if abs(len(outs) - len(ins)) > 1:
            return False
        if not (_transitive_set(T, outs) and _transitive_set(T, ins)):
            return False
    return True


def test_transitive():
    T = transitive(5)
    assert T.out_degrees.tolist() == [4, 3, 2, 1, 0]
    assert T.to_bits() == "1" * 10


@pytest.mark.parametrize("n", [3, 5, 7, 9, 11, 15])
def test_odd_carousel_rule(n):
    T = carousel(n)
    assert (T.out_degrees == (n - 1) // 2).all()
    for i in range(n):
        for d in range(1, (n - 1) // 2 + 1):
            assert T.arc(i, (i + d) % n)
    assert is_locally_transitive_balanced(T)


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_even_carousel_is_locally_transitive_balanced(n):
    assert is_locally_transitive_balanced(carousel(n))


def test_carousel6_is_a_duplication_of_carousel5():
    C5 = carousel(5)
    assert any(
        is_isomorphic(C5.duplicate_vertex(v, d), carousel(6)) for v in range(5) for d in (True, False)
    )


def test_carousel_class_6_matches_brute_force_dedup():
    brute = {brute_canonical_bits(carousel_from_spec(CarouselSpec(6, bits))) for bits in itertools.product((False, True), repeat=3)}
    assert len(carousel_class(6)) == len(brute)


@pytest.mark.parametrize("n", range(3, 9))
def test_carousel_class_is_the_predicate_class(n):
    lt = {canonical_form(T) for T in enumerate_tournaments(n) if is_locally_transitive_balanced(T)}
    assert lt == carousel_class_forms(n)
    assert canonical_form(carousel(n)) in lt


def test_carousel_class_sorted_and_distinct():
    ts = carousel_class(8)
    bits = [canonical_form(T).bits for T in ts]
    assert bits == sorted(set(bits))


def test_carousel_spec_validation():
    with pytest.raises(TournamentError):
        CarouselSpec(5, (True,))
    with pytest.raises(TournamentError):
        CarouselSpec(6, (True,))
    with pytest.raises(TournamentError):
        carousel(2)


@given(tournaments(min_n=3, max_n=7))
def test_predicates_are_exact(T):
    two = 2 * T.out_degrees
    assert is_near_regular(T) == all(T.n - 2 <= x <= T.n for x in two)
    assert is_locally_transitive_balanced(T) == _naive_lt_balanced(T)


def test_random_tournament_is_deterministic():
    assert random_tournament(50, 3) == random_tournament(50, 3)
    assert random_tournament(50, 3) != random_tournament(50, 4)


@given(st.integers(1, 40), st.integers(0, 2**63))
def test_random_tournament_prefix_property(n, seed):
    big = random_tournament(n + 5, seed)
    assert big.induce(range(n)) == random_tournament(n, seed)


def test_random_tournament_is_balanced_on_average():
    T = random_tournament(400, 0)
    frac = T.to_bits().count("1") / (400 * 399 / 2)
    assert abs(frac - 0.5) < 0.01


def test_alpha_zero_blowup_is_random():
    assert iterated_blowup(BlowupSpec(300, 0.0, 9)) == random_tournament(300, 9)


def test_blowup_sizes_regression():
    assert blowup_levels_sizes(BlowupSpec(4000)) == [(575, 3425), (83, 492), (12, 71), (2, 10)]


@pytest.mark.parametrize("spec", [BlowupSpec(500, "auto", 1), BlowupSpec(120, 0.3, 2, base_cutoff=2), BlowupSpec(200, 0.2, 0, max_depth=1)])
def test_blowup_structure(spec):
    b = build_blowup(spec)
    T = b.tournament
    for k, (h, l) in enumerate(b.sizes):
        assert T.adj[:h, h:h + l].all()
        assert (b.levels[h:h + l] == k).all()
    base = b.sizes[-1][0]
    assert T.induce(range(base)) == transitive(base)
    assert (b.levels[:base] == len(b.sizes)).all()
    assert len(b.top_h) == b.sizes[0][0]
    assert (blowup_levels(spec) == b.levels).all()


def test_blowup_top_fraction():
    spec = BlowupSpec(1000)
    assert spec.resolved_alpha == CLOSED_ALPHA
    assert blowup_levels_sizes(spec)[0][0] == math.ceil(CLOSED_ALPHA * 1000)


def test_blowup_small_n_is_transitive():
    assert iterated_blowup(BlowupSpec(3)) == transitive(3)


def test_blowup_spec_validation():
    for kwargs in ({"alpha": 1.0}, {"alpha": -0.1}, {"base_cutoff": 0}, {"max_depth": -1}):
        with pytest.raises(TournamentError):
            BlowupSpec(10, **kwargs)
    assert BlowupSpec(10) == BlowupSpec(10)
    assert np.isclose(BlowupSpec(10, 0.25).resolved_alpha, 0.25)


def test_blowup_c3plus_never_straddles_with_two_top_vertices():
    from conftest import score_class

    b = build_blowup(BlowupSpec(40, 0.3, 5, base_cutoff=2))
    h = b.sizes[0][0]
    T = b.tournament
    for S in itertools.combinations(range(40), 4):
        top = sum(v < h for v in S)
        if 2 <= top < 4:
            assert score_class(T.adj[np.ix_(S, S)]) != "c3plus"

from fractions import Fraction

import numpy as np
import pytest

from tourney.census import census, pair_counts_c3plus, vertex_loads_c3plus
from tourney.constructions import BlowupSpec, build_blowup, carousel, random_tournament, transitive
from tourney.core import Tournament, TournamentError
from tourney.diagnostics import (
    BAND_HIGH,
    BAND_LOW,
    BAND_MID,
    band_of,
    default_tol,
    degree_report,
    detect_cut,
    diagnose,
    qr_score,
    audit_inequalities,
    symmetrization_gaps,
)
from tourney.search import _replace_with_twin


def test_band_edges_are_exact():
    assert band_of(416, 1000) == "low_forbidden"
    assert band_of(417, 1000) == "low_allowed"
    assert band_of(44057, 100000) == "mid_forbidden"
    assert band_of(44056, 100000) == "low_allowed"
    assert band_of(8849, 10000) == "mid_forbidden"
    assert band_of(8850, 10000) == "high_allowed"
    assert BAND_LOW < BAND_MID < BAND_HIGH


def test_degree_report_counts():
    T = random_tournament(300, 2)
    r = degree_report(T)
    assert sum(r.occupancy.values()) == 300
    assert sum(r.histogram.values()) == 300
    flagged = {v for v in range(300) if band_of(int(T.out_degrees[v]), 300).endswith("forbidden")}
    assert set(r.flagged.tolist()) == flagged
    assert r.outside_fraction == pytest.approx(1 - len(flagged) / 300)


def test_transitive_degree_histogram():
    r = degree_report(transitive(100))
    assert r.histogram == {k: 1 for k in range(100)}


def _exact_violations(T, H):
    hs = set(H.tolist())
    return sorted((u, h) for u in range(T.n) if u not in hs for h in hs if T.arc(u, h))


@pytest.mark.parametrize("T", [random_tournament(200, 1), build_blowup(BlowupSpec(400, 0.2, 3)).tournament, transitive(50)])
def test_cut_violations_match_arc_scan(T):
    for thr in (BAND_HIGH, Fraction(1, 2), Fraction(3, 5)):
        p = detect_cut(T, thr)
        assert sorted(p.cut_violations) == _exact_violations(T, p.H)
        assert len(p.H) + len(p.L) == T.n


def test_random_1000_has_empty_top_part():
    # regression value: no vertex of a random 1000-tournament clears 0.8849
    p = detect_cut(random_tournament(1000, 0))
    assert len(p.H) == 0 and p.cut_violations == []
    assert p.L_fraction == 1 and not p.below_l_bound


def test_qr_score_on_transitive_and_random():
    s = qr_score(transitive(40))
    assert s.deviations["c3"] == Fraction(1, 4)
    assert not s.verdict(0.1)
    assert qr_score(random_tournament(600, 3)).verdict(0.03)


def test_qr_reversal_swaps_plus_minus():
    T = random_tournament(80, 6)
    a, b = qr_score(T), qr_score(T.reverse())
    assert a.densities["c3plus"] == b.densities["c3minus"]
    assert a.deviations["c3minus"] == b.deviations["c3plus"]
    assert a.deviations["c4"] == b.deviations["c4"]


def test_audit_margins_are_exact():
    T = carousel(9)
    c = census(T)
    a = audit_inequalities(T)
    lhs = 3 * Fraction(c.c3plus, 126) + 2 * Fraction(c.c3, 84)
    assert a["main_inequality"]["lhs"]["exact"] == f"{lhs.numerator}/{lhs.denominator}"
    m = Fraction(7, 8) - lhs
    assert a["main_inequality"]["margin"]["exact"] == f"{m.numerator}/{m.denominator}"
    assert a["tol"] == default_tol(9)


def test_symmetrization_gaps_branch_and_bound_is_exact():
    T = random_tournament(40, 13)
    load = vertex_loads_c3plus(T).total
    P = pair_counts_c3plus(T)
    best = max(load[w] - load[v] - P[v, w] for v in range(40) for w in range(40) if v != w)
    arg = min((v, w) for v in range(40) for w in range(40) if v != w and load[w] - load[v] - P[v, w] == best)
    assert symmetrization_gaps(T) == (best, arg)


def test_symmetrization_gain_is_realised_by_surgery():
    T = random_tournament(50, 2)
    gain, (v, w) = symmetrization_gaps(T)
    T2 = Tournament(_replace_with_twin(T.adj, v, w, True))
    assert census(T2).c3plus - census(T).c3plus == gain


def test_small_hosts_rejected():
    T = Tournament.from_bits(3, "101")
    for fn in (qr_score, audit_inequalities, symmetrization_gaps):
        with pytest.raises(TournamentError):
            fn(T)


def test_diagnose_report():
    rep = diagnose(build_blowup(BlowupSpec(150, "auto", 1)).tournament)
    assert set(rep) == {"n", "counts", "qr", "degrees", "cut", "inequalities", "symmetrization"}
    assert rep["cut"]["H_size"] + rep["cut"]["L_size"] == 150
    assert "symmetrization" not in diagnose(random_tournament(201, 0))

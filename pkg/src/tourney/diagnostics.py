"""Structure audits: degree bands, H/L cut, quasi-randomness, symmetrization gains, density inequalities."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .census import census_fast, densities, pair_count_c3plus, vertex_loads_c3plus
from .core import Tournament, TournamentError

BAND_LOW = Fraction(416, 1000)
BAND_MID = Fraction(44057, 100000)
BAND_HIGH = Fraction(8849, 10000)
L_BOUND = Fraction(6, 7)
MAIN_IE_BOUND = Fraction(7, 8)
C3PLUS_UPPER = Fraction(157500672, 10**9)
QR_TARGETS = {"c3": Fraction(1, 4), "c3plus": Fraction(1, 8), "c4": Fraction(3, 8), "c3minus": Fraction(1, 8)}

BANDS = ("low_forbidden", "low_allowed", "mid_forbidden", "high_allowed")


def _frac_json(x: Fraction) -> dict:
    return {"exact": f"{x.numerator}/{x.denominator}", "approx": float(x)}


def default_tol(n: int) -> float:
    return 4 / math.sqrt(n)


def band_of(d: int, n: int) -> str:
    """Band of normalized out-degree ``d / n`` in exact arithmetic."""
    x = Fraction(d, n)
    if x <= BAND_LOW:
        return "low_forbidden"
    if x < BAND_MID:
        return "low_allowed"
    if x <= BAND_HIGH:
        return "mid_forbidden"
    return "high_allowed"


@dataclass(frozen=True)
class DegreeHistogram:
    n: int
    degrees: np.ndarray
    bins: int
    histogram: dict[int, int]
    occupancy: dict[str, int]
    flagged: np.ndarray

    @property
    def bin_width(self) -> float:
        return 1 / self.bins

    @property
    def outside_fraction(self) -> float:
        return 1 - len(self.flagged) / self.n

    def as_json(self) -> dict:
        return {
            "n": self.n,
            "bin_width": self.bin_width,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "occupancy": self.occupancy,
            "flagged_count": int(len(self.flagged)),
            "outside_fraction": self.outside_fraction,
        }


def degree_report(T: Tournament, bins: int = 100) -> DegreeHistogram:
    """Normalized out-degrees ``d+(v) / n`` with band occupancy; flags vertices in the forbidden bands."""
    n = T.n
    d = T.out_degrees
    hist = Counter(int(x) * bins // n for x in d)
    bands = [band_of(int(x), n) for x in d]
    occ = {b: 0 for b in BANDS}
    occ.update(Counter(bands))
    flagged = np.array([v for v, b in enumerate(bands) if b.endswith("forbidden")], dtype=np.int64)
    return DegreeHistogram(n, d / n, bins, dict(hist), occ, flagged)


@dataclass(frozen=True)
class Partition:
    H: np.ndarray
    L: np.ndarray
    cut_violations: list[tuple[int, int]]
    threshold: Fraction

    @property
    def L_fraction(self) -> Fraction:
        return Fraction(len(self.L), len(self.H) + len(self.L))

    @property
    def below_l_bound(self) -> bool:
        return self.L_fraction < L_BOUND

    def as_json(self) -> dict:
        return {
            "threshold": _frac_json(self.threshold),
            "H_size": int(len(self.H)),
            "L_size": int(len(self.L)),
            "L_fraction": _frac_json(self.L_fraction),
            "L_bound": _frac_json(L_BOUND),
            "below_L_bound": self.below_l_bound,
            "cut_violation_count": len(self.cut_violations),
            "cut_violations": [list(a) for a in self.cut_violations[:1000]],
        }


def detect_cut(T: Tournament, threshold: Fraction = BAND_HIGH) -> Partition:
    """Split by normalized out-degree above ``threshold``; list every arc from L into H."""
    threshold = Fraction(threshold)
    n = T.n
    high = np.array([Fraction(int(x), n) > threshold for x in T.out_degrees], dtype=bool)
    H = np.flatnonzero(high)
    L = np.flatnonzero(~high)
    sub = T.adj[np.ix_(L, H)]
    xs, ys = np.nonzero(sub)
    violations = [(int(L[a]), int(H[b])) for a, b in zip(xs, ys)]
    return Partition(H, L, violations, threshold)


@dataclass(frozen=True)
class QRScore:
    densities: dict[str, Fraction]
    deviations: dict[str, Fraction]

    def verdict(self, tol: float) -> bool:
        return all(float(v) <= tol for v in self.deviations.values())

    def as_json(self, tol: float | None = None) -> dict:
        d = {
            "targets": {k: _frac_json(v) for k, v in QR_TARGETS.items()},
            "densities": {k: _frac_json(v) for k, v in self.densities.items()},
            "deviations": {k: _frac_json(v) for k, v in self.deviations.items()},
        }
        if tol is not None:
            d["tol"] = tol
            d["quasi_random"] = self.verdict(tol)
        return d


def qr_score(T: Tournament) -> QRScore:
    if T.n < 4:
        raise TournamentError("qr_score needs n >= 4")
    dens = {k: v.exact for k, v in densities(census_fast(T)).items()}
    picked = {k: dens[k] for k in QR_TARGETS}
    dev = {k: abs(dens[k] - t) for k, t in QR_TARGETS.items()}
    return QRScore(picked, dev)


def audit_inequalities(T: Tournament, tol: float | None = None) -> dict:
    """Evaluate the two asymptotic density bounds on a finite host.

    Margins are exact and unclamped; ``holds`` applies ``tol`` (default
    ``4 / sqrt(n)``). Small hosts legitimately exceed asymptotic bounds.
    """
    if T.n < 4:
        raise TournamentError("audit needs n >= 4")
    tol = default_tol(T.n) if tol is None else tol
    ftol = Fraction(tol)
    dens = {k: v.exact for k, v in densities(census_fast(T)).items()}
    lhs = 3 * dens["c3plus"] + 2 * dens["c3"]
    return {
        "tol": tol,
        "main_inequality": {
            "lhs": _frac_json(lhs),
            "bound": _frac_json(MAIN_IE_BOUND),
            "margin": _frac_json(MAIN_IE_BOUND - lhs),
            "holds": lhs <= MAIN_IE_BOUND + ftol,
        },
        "c3plus_upper": {
            "density": _frac_json(dens["c3plus"]),
            "bound": _frac_json(C3PLUS_UPPER),
            "margin": _frac_json(C3PLUS_UPPER - dens["c3plus"]),
            "holds": dens["c3plus"] <= C3PLUS_UPPER + ftol,
        },
    }


def symmetrization_gaps(T: Tournament) -> tuple[int, tuple[int, int]]:
    """Largest gain ``C3+(w) - C3+(v) - C3+(v, w)`` over ordered pairs ``v != w``.

    Pairs are visited in decreasing order of the bound ``C3+(w) - C3+(v)``
    and pair counts are evaluated lazily, stopping once the bound falls
    below the best gain. Ties go to the lexicographically smallest pair.
    """
    if T.n < 4:
        raise TournamentError("symmetrization gaps need n >= 4")
    load = vertex_loads_c3plus(T).total
    n = T.n
    order = sorted(
        ((int(load[w] - load[v]), v, w) for v in range(n) for w in range(n) if v != w),
        key=lambda t: (-t[0], t[1], t[2]),
    )
    best = None
    arg = None
    for bound, v, w in order:
        if best is not None and bound < best:
            break
        g = bound - pair_count_c3plus(T, v, w)
        if best is None or g > best or (g == best and (v, w) < arg):
            best, arg = g, (v, w)
    return best, arg


def diagnose(T: Tournament, tol: float | None = None) -> dict:
    """Every audit in one JSON-ready report."""
    tol = default_tol(T.n) if tol is None else tol
    c = census_fast(T)
    report = {
        "n": T.n,
        "counts": {k: v for k, v in c.as_dict().items()},
        "qr": qr_score(T).as_json(tol),
        "degrees": degree_report(T).as_json(),
        "cut": detect_cut(T).as_json(),
        "inequalities": audit_inequalities(T, tol),
    }
    if T.n <= 200:
        gain, (v, w) = symmetrization_gaps(T)
        report["symmetrization"] = {"max_gain": gain, "pair": [v, w]}
    return report

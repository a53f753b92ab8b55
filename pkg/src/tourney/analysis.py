"""Closed forms and the one-parameter density objective of the iterated construction."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from math import comb
from typing import Callable

# Decimal literals kept for cross-checking the computed constants.
ALPHA_STAR_DECIMAL = 0.143583615159
VALUE_STAR_DECIMAL = 0.157500667049


def _cube_roots(prec: int = 50) -> tuple[Decimal, Decimal]:
    with localcontext() as ctx:
        ctx.prec = prec
        third = Decimal(1) / Decimal(3)
        return Decimal(3) ** third, Decimal(9) ** third


def _closed_constants() -> tuple[float, float, float]:
    with localcontext() as ctx:
        ctx.prec = 50
        r3, r9 = _cube_roots(50)
        alpha = (2 * r9 - 2 - r3) / 5
        value = (8 - 9 * r3 + 3 * r9) / 8
        big_l = (7 + r3 - 2 * r9) / 5
        return float(alpha), float(value), float(big_l)


CLOSED_ALPHA, CLOSED_VALUE, CLOSED_L = _closed_constants()
# lower end of the known bracket for the inducibility of C3+
C3PLUS_LOWER = Fraction(157500667, 10**9)
C3PLUS_UPPER = Fraction(157500672, 10**9)


class UnimodalityError(RuntimeError):
    """The pre-scan found more than one local maximum."""


def c4_max_formula(n: int) -> int:
    """Maximum number of induced C4 over n-vertex tournaments."""
    if n < 4:
        raise ValueError(f"formula needs n >= 4, got {n}")
    num = n * (n * n - 1) * (n - 3) if n % 2 else n * (n * n - 4) * (n - 3)
    if num % 48:
        raise AssertionError(f"numerator {num} not divisible by 48")
    return num // 48


def alpha_objective(alpha: float) -> float:
    """Limit C3+ density of the iterated construction with top fraction ``alpha``."""
    if not 0 <= alpha < 1:
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
    b = 1 - alpha
    return (alpha * b**3 + b**4 / 8) / (1 - alpha**4)


def alpha_objective_exact(alpha: Fraction) -> Fraction:
    if not 0 <= alpha < 1:
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
    b = 1 - alpha
    return (alpha * b**3 + b**4 / 8) / (1 - alpha**4)


INV_PHI = (math.sqrt(5) - 1) / 2


def golden_section_max(
    f: Callable[[float], object], a: float, b: float, tol: float
) -> tuple[float, float, int]:
    """Shrink ``[a, b]`` around the maximum of a unimodal ``f`` until narrower than ``tol``.

    ``f`` may return any ordered type; exact rationals make the comparisons
    immune to rounding near a flat maximum. Returns ``(lo, hi, iterations)``.
    """
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while b - a > tol:
        it += 1
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        if it > 10_000:
            raise RuntimeError("golden-section search failed to converge")
    return a, b, it


@dataclass(frozen=True)
class AlphaResult:
    alpha_star: float
    value: float
    closed_alpha: float
    closed_value: float
    iterations: int
    bracket_width: float
    scan_points: int

    def as_json(self) -> dict:
        return asdict(self)


def unimodality_scan(points: int = 10_000, eps: float = 1e-6) -> int:
    """Index of the scan maximum; raises if the scan is not up-then-down."""
    hi = 1 - eps
    xs = [hi * k / (points - 1) for k in range(points)]
    ys = [alpha_objective(x) for x in xs]
    top = max(range(points), key=ys.__getitem__)
    rising = all(ys[k] < ys[k + 1] for k in range(top))
    falling = all(ys[k] > ys[k + 1] for k in range(top, points - 1))
    if not (rising and falling):
        raise UnimodalityError("alpha objective is not unimodal on the scan grid")
    return top


def optimize_alpha(tol: float = 1e-9, scan_points: int = 10_000) -> AlphaResult:
    """Golden-section maximisation of :func:`alpha_objective` after a unimodality scan."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    eps = 1e-6
    hi = 1 - eps
    top = unimodality_scan(scan_points, eps)
    step = hi / (scan_points - 1)
    a = max(0.0, (top - 1) * step)
    b = min(hi, (top + 1) * step)
    lo, up, it = golden_section_max(lambda x: alpha_objective_exact(Fraction(x)), a, b, tol)
    alpha_star = (lo + up) / 2
    return AlphaResult(
        alpha_star=alpha_star,
        value=alpha_objective(alpha_star),
        closed_alpha=CLOSED_ALPHA,
        closed_value=CLOSED_VALUE,
        iterations=it,
        bracket_width=up - lo,
        scan_points=scan_points,
    )


def construction_count_prediction(spec, depth: int | None = None) -> Fraction:
    """Expected number of C3+ in the iterated construction built from ``spec``.

    Each level with sizes ``(h, l)`` contributes ``h * C(l, 3) / 4`` copies
    with a single top vertex plus ``C(l, 4) / 8`` inside the random part;
    the transitive fill at the bottom contributes nothing. ``depth`` stops
    the recursion early (the top part is then transitive).
    """
    from .constructions import blowup_levels_sizes

    total = Fraction(0)
    for k, (h, l) in enumerate(blowup_levels_sizes(spec)):
        if depth is not None and k >= depth:
            break
        total += Fraction(h * comb(l, 3), 4) + Fraction(comb(l, 4), 8)
    return total


def construction_density_prediction(spec, depth: int | None = None) -> float:
    if spec.n < 4:
        return 0.0
    return float(construction_count_prediction(spec, depth) / comb(spec.n, 4))


def theorem1_verify(n_max: int, threads: int = 1) -> dict:
    """Check max C4 counts and maximiser sets against the carousel class for 4..n_max."""
    from .constructions import carousel_class_forms
    from .search import exhaustive_max

    if not 4 <= n_max <= 9:
        raise ValueError("n_max must lie in 4..9")
    rows = []
    for n in range(4, n_max + 1):
        res = exhaustive_max("C4", n, threads=threads)
        formula = c4_max_formula(n)
        expected = sorted(carousel_class_forms(n))
        found = sorted(res.maximizers)
        rows.append(
            {
                "n": n,
                "best_count": res.best_count,
                "formula": formula,
                "count_ok": res.best_count == formula,
                "maximizers": len(found),
                "carousel_class": len(expected),
                "set_ok": found == expected,
                "pass": res.best_count == formula and found == expected,
            }
        )
    return {"suite": "theorem1", "rows": rows, "pass": all(r["pass"] for r in rows)}

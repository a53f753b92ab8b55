"""Exhaustive enumeration up to isomorphism, exact maximisation and local search."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

from .census import (
    _matcher,
    count_pattern,
    pair_counts_c3plus,
    subset_codes,
    vertex_count,
    vertex_loads_c3plus,
)
from .constructions import random_tournament
from .core import (
    CanonicalForm,
    PatternId,
    Pattern,
    Tournament,
    UnsupportedSizeError,
    as_pattern,
    is_canonical_masks,
    masks_to_bits,
)
from .parallel import pmap

log = logging.getLogger(__name__)

MAX_ENUM_N = 9
MOVES = ("arc_flip", "duplicate_delete")


# -- orderly generation -----------------------------------------------------


def _extend(parent: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Canonical one-vertex extensions of a canonical parent."""
    m = len(parent)
    full = (1 << m) - 1
    out = []
    for ext in range(1 << m):
        # bit i of ext: i -> new vertex
        masks = tuple(parent[i] | (((ext >> i) & 1) << m) for i in range(m)) + (full & ~ext,)
        if is_canonical_masks(masks):
            out.append(masks)
    return out


_CLASSES: dict[int, tuple[tuple[int, ...], ...]] = {1: ((0,),)}


def class_masks(n: int, threads: int | None = 1) -> tuple[tuple[int, ...], ...]:
    """Canonical out-neighbourhood masks, one per isomorphism class, sorted by bitstring.

    Cached per ``n``; the worker count only changes how fast it is computed.
    """
    if not 1 <= n <= MAX_ENUM_N:
        raise UnsupportedSizeError(f"enumeration supports 1 <= n <= {MAX_ENUM_N}, got {n}")
    if n not in _CLASSES:
        parents = class_masks(n - 1, threads)
        kids: list[tuple[int, ...]] = []
        for block in pmap(_extend, parents, threads):
            kids.extend(block)
        _CLASSES[n] = tuple(sorted(kids, key=masks_to_bits))
        log.debug("n=%d: %d classes", n, len(kids))
    return _CLASSES[n]


def enumerate_tournaments(n: int, threads: int | None = 1) -> Iterator[Tournament]:
    for masks in class_masks(n, threads):
        yield Tournament.from_masks(masks)


def _stack(classes: Sequence[tuple[int, ...]], n: int) -> np.ndarray:
    bits = np.array([[(m >> j) & 1 for m in masks for j in range(n)] for masks in classes], dtype=bool)
    return bits.reshape(len(classes), n, n)


def class_counts(pattern: PatternId | Pattern | str, n: int, threads: int | None = 1) -> np.ndarray:
    """Exact pattern count in every class of :func:`class_masks` (same order)."""
    p = as_pattern(pattern)
    classes = class_masks(n, threads)
    k = p.order
    if k > n:
        return np.zeros(len(classes), dtype=np.int64)
    if k > 6:
        return np.array([count_pattern(p, Tournament.from_masks(m)) for m in classes], dtype=np.int64)
    match = _matcher(p.tournament)
    subs = np.array(list(combinations(range(n), k)), dtype=np.int64)
    out = np.zeros(len(classes), dtype=np.int64)
    step = max(1, 2_000_000 // len(subs))
    for lo in range(0, len(classes), step):
        adj = _stack(classes[lo:lo + step], n)
        codes = np.zeros((adj.shape[0], len(subs)), dtype=np.int64)
        for idx, (a, b) in enumerate((a, b) for a in range(k) for b in range(a + 1, k)):
            codes |= adj[:, subs[:, a], subs[:, b]].astype(np.int64) << idx
        out[lo:lo + step] = match[codes].sum(axis=1)
    return out


# -- results ----------------------------------------------------------------


@dataclass
class SearchResult:
    pattern: PatternId
    n: int
    best_count: int
    mode: str
    maximizers: list[CanonicalForm] = field(default_factory=list)
    witness: Tournament | None = None
    stats: dict = field(default_factory=dict)

    @property
    def density(self) -> Fraction:
        return Fraction(self.best_count, comb(self.n, self.pattern.order))

    def as_json(self) -> dict:
        d = {
            "pattern": str(self.pattern),
            "n": self.n,
            "mode": self.mode,
            "best_count": self.best_count,
            "density": {"exact": f"{self.density.numerator}/{self.density.denominator}", "approx": float(self.density)},
        }
        if self.mode == "exhaustive":
            d["maximizers"] = [cf.bits for cf in self.maximizers]
        if self.witness is not None:
            d["witness"] = self.witness.to_bits()
        if self.stats:
            d["stats"] = self.stats
        return d


def exhaustive_max(pattern: PatternId | Pattern | str, n: int, threads: int | None = 1) -> SearchResult:
    p = as_pattern(pattern)
    if not p.order <= n <= MAX_ENUM_N:
        raise UnsupportedSizeError(f"exhaustive search needs {p.order} <= n <= {MAX_ENUM_N}")
    classes = class_masks(n, threads)
    counts = class_counts(p, n, threads)
    best = int(counts.max())
    maxi = sorted(CanonicalForm(n, masks_to_bits(classes[i])) for i in np.flatnonzero(counts == best))
    return SearchResult(
        pattern=p,
        n=n,
        best_count=best,
        mode="exhaustive",
        maximizers=maxi,
        stats={"classes": len(classes)},
    )


def max_table(pattern: PatternId | Pattern | str, n_range: Iterable[int], threads: int | None = 1) -> list[dict]:
    """Exact maxima per n; the density column of an inducibility table never increases."""
    rows = []
    for n in n_range:
        r = exhaustive_max(pattern, n, threads)
        rows.append({"n": n, "best_count": r.best_count, "density": r.density})
    return rows


# -- local search -----------------------------------------------------------


@lru_cache(maxsize=64)
def _flip_layout(n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Pairs and, per pair, all k-subsets containing it (pair in columns 0, 1)."""
    pairs = np.array(list(combinations(range(n), 2)), dtype=np.int64)
    rows = []
    for a, b in pairs:
        rest = [v for v in range(n) if v != a and v != b]
        for c in combinations(rest, k - 2):
            rows.append((a, b) + c)
    subs = np.array(rows, dtype=np.int64).reshape(len(pairs), comb(n - 2, k - 2), k)
    return pairs, subs


def flip_gains(adj: np.ndarray, match: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact change in the pattern count for reversing each arc.

    Only subsets containing the flipped pair change; in their code that pair
    is bit 0, so the flipped code is ``code ^ 1``.
    """
    pairs, subs = _flip_layout(adj.shape[0], k)
    codes = subset_codes(adj, subs.reshape(-1, k)).reshape(subs.shape[:2])
    gain = match[codes ^ 1].sum(axis=1).astype(np.int64) - match[codes].sum(axis=1)
    return pairs, gain


def _replace_with_twin(adj: np.ndarray, v: int, w: int, twin_to_copy: bool) -> np.ndarray:
    """Delete ``v`` and put a copy of ``w`` in its slot."""
    out = adj.copy()
    out[v, :] = adj[w, :]
    out[:, v] = adj[:, w]
    out[v, v] = False
    out[w, v] = twin_to_copy
    out[v, w] = not twin_to_copy
    return out


def sym_gains_c3plus(T: Tournament) -> np.ndarray:
    """``G[v, w] = C3+(w) - C3+(v) - C3+(v, w)``: gain of deleting ``v`` and duplicating ``w``."""
    load = vertex_loads_c3plus(T).total
    P = pair_counts_c3plus(T)
    G = load[None, :] - load[:, None] - P
    np.fill_diagonal(G, np.iinfo(np.int64).min)
    return G


def dup_gains(T: Tournament, p: PatternId) -> tuple[np.ndarray, np.ndarray]:
    """Gain matrix for the duplicate/delete move and the best twin-arc direction per pair."""
    n = T.n
    if p.tag in ("C3PLUS", "C3MINUS"):
        base = T if p.tag == "C3PLUS" else T.reverse()
        # C3+ has no pair of twin vertices, so the twin arc never matters
        return sym_gains_c3plus(base), np.ones((n, n), dtype=bool)
    G = np.full((n, n), np.iinfo(np.int64).min, dtype=np.int64)
    D = np.ones((n, n), dtype=bool)
    own = np.array([vertex_count(p, T, v) for v in range(n)], dtype=np.int64)
    for v in range(n):
        for w in range(n):
            if v == w:
                continue
            for direction in (True, False):
                T2 = Tournament(_replace_with_twin(T.adj, v, w, direction), check=False)
                g = vertex_count(p, T2, v) - own[v]
                if g > G[v, w]:
                    G[v, w], D[v, w] = g, direction
    return G, D


def _start_seed(seed: int, restart: int) -> int:
    return int(np.random.SeedSequence([seed & ((1 << 64) - 1), restart]).generate_state(1, np.uint64)[0])


def _climb(args) -> dict:
    p, n, seed, restart, moves, first_improvement, plateau_budget, max_steps, audit = args
    rng = np.random.default_rng([seed & ((1 << 64) - 1), restart, 1])
    T = random_tournament(n, _start_seed(seed, restart))
    k = p.order
    use_table = k <= 6
    match = _matcher(p.tournament) if use_table else None
    count = count_pattern(p, T)
    start = count
    steps = flips = dups = plateau = 0
    while steps < max_steps:
        candidates = []  # (gain, kind, payload)
        if "arc_flip" in moves and use_table:
            pairs, gain = flip_gains(T.adj, match, k)
            candidates.append(("arc_flip", pairs, gain))
        if "duplicate_delete" in moves:
            G, D = dup_gains(T, p)
            idx = np.argwhere(G > np.iinfo(np.int64).min)
            candidates.append(("duplicate_delete", idx, G[idx[:, 0], idx[:, 1]]))
        best_gain = max((int(g.max()) for _, _, g in candidates if len(g)), default=0)
        if best_gain < 0 or (best_gain == 0 and plateau >= plateau_budget):
            break
        options = [(kind, items[i]) for kind, items, g in candidates for i in np.flatnonzero(g == best_gain)]
        if first_improvement and best_gain > 0:
            positive = [(kind, items[i], int(g[i])) for kind, items, g in candidates for i in np.flatnonzero(g > 0)]
            kind, item, best_gain = positive[int(rng.integers(len(positive)))]
        else:
            kind, item = options[int(rng.integers(len(options)))]
        if kind == "arc_flip":
            T = T.flip(int(item[0]), int(item[1]))
            flips += 1
        else:
            v, w = int(item[0]), int(item[1])
            T = Tournament(_replace_with_twin(T.adj, v, w, bool(D[v, w])), check=False)
            dups += 1
        count += best_gain
        plateau = plateau + 1 if best_gain == 0 else 0
        steps += 1
        if audit:
            fresh = count_pattern(p, T)
            if fresh != count:
                raise AssertionError(f"incremental count {count} != recount {fresh} after {kind}")
    final = count_pattern(p, T)
    if final != count:
        raise AssertionError(f"incremental count {count} != recount {final}")
    return {
        "restart": restart,
        "start_count": start,
        "best_count": count,
        "steps": steps,
        "arc_flips": flips,
        "duplicate_deletes": dups,
        "bits": T.to_bits(),
    }


def local_search(
    pattern: PatternId | Pattern | str,
    n: int,
    seed: int = 0,
    restarts: int = 20,
    moves: Sequence[str] = ("arc_flip",),
    first_improvement: bool = False,
    plateau_budget: int | None = None,
    max_steps: int = 100_000,
    audit: bool = False,
    threads: int | None = 1,
) -> SearchResult:
    """Seeded hill climbing; deterministic given ``(seed, restarts)``.

    Steepest ascent by default. Equal-value moves are accepted for at most
    ``plateau_budget`` consecutive steps (default ``2 n``). With
    ``restarts=0`` the start tournament of restart 0 is scored unchanged.
    """
    p = as_pattern(pattern)
    if n < p.order:
        raise UnsupportedSizeError(f"n must be at least the pattern order {p.order}")
    bad = set(moves) - set(MOVES)
    if bad or not moves:
        raise ValueError(f"moves must be a non-empty subset of {MOVES}, got {sorted(bad)}")
    if "arc_flip" in moves and p.order > 6:
        raise UnsupportedSizeError("arc-flip gains are tabulated for patterns up to 6 vertices")
    budget = 2 * n if plateau_budget is None else plateau_budget
    if restarts == 0:
        T = random_tournament(n, _start_seed(seed, 0))
        c = count_pattern(p, T)
        return SearchResult(p, n, c, "local", witness=T, stats={"restarts": []})
    jobs = [(p, n, seed, r, tuple(moves), first_improvement, budget, max_steps, audit) for r in range(restarts)]
    runs = pmap(_climb, jobs, threads)
    best = max(runs, key=lambda r: (r["best_count"], -r["restart"]))
    witness = Tournament.from_bits(n, best["bits"])
    trajectory = [{k: v for k, v in r.items() if k != "bits"} for r in runs]
    return SearchResult(p, n, best["best_count"], "local", witness=witness, stats={"restarts": trajectory})

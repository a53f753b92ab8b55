"""Transitive tournaments, carousels, seeded random tournaments and the iterated blow-up."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .analysis import CLOSED_ALPHA
from .core import (
    MAX_CANONICAL_N,
    CanonicalForm,
    Tournament,
    TournamentError,
    UnsupportedSizeError,
    canonical_form,
)

_MASK64 = (1 << 64) - 1
_GAMMA = np.uint64(0x9E3779B97F4A7C15)


def transitive(n: int) -> Tournament:
    if n < 1:
        raise TournamentError("n must be >= 1")
    return Tournament(np.triu(np.ones((n, n), dtype=bool), 1), check=False)


def _odd_carousel_adj(n: int) -> np.ndarray:
    i, j = np.indices((n, n))
    return ((j - i) % n >= 1) & ((j - i) % n <= (n - 1) // 2)


def carousel(n: int) -> Tournament:
    """The distinguished carousel: odd ``n`` by the rotation rule, even ``n`` by deleting a vertex of the next odd one."""
    if n < 3:
        raise TournamentError("carousels need n >= 3")
    if n % 2:
        return Tournament(_odd_carousel_adj(n), check=False)
    return Tournament(_odd_carousel_adj(n + 1), check=False).delete_vertex(n)


@dataclass(frozen=True)
class CarouselSpec:
    n: int
    diagonal_bits: tuple[bool, ...] = ()

    def __post_init__(self):
        if self.n < 3:
            raise TournamentError("carousels need n >= 3")
        if self.n % 2 and self.diagonal_bits:
            raise TournamentError("odd carousels have no diagonal choices")
        if self.n % 2 == 0 and len(self.diagonal_bits) != self.n // 2:
            raise TournamentError(f"even n={self.n} needs {self.n // 2} diagonal bits")


def carousel_from_spec(spec: CarouselSpec) -> Tournament:
    """Member of the carousel class for ``spec``.

    Even ``n``: ``v_i -> v_j`` when ``(j - i) mod n`` lies strictly between 0
    and ``n / 2``; the antipodal pair ``(v_i, v_{i + n/2})`` points forward iff
    ``diagonal_bits[i]``.
    """
    n = spec.n
    if n % 2:
        return carousel(n)
    i, j = np.indices((n, n))
    r = (j - i) % n
    adj = (r >= 1) & (r < n // 2)
    for k, forward in enumerate(spec.diagonal_bits):
        a, b = k, k + n // 2
        adj[a, b] = forward
        adj[b, a] = not forward
    return Tournament(adj)


def carousel_class_forms(n: int) -> set[CanonicalForm]:
    if n < 3:
        raise TournamentError("carousels need n >= 3")
    if n > MAX_CANONICAL_N:
        raise UnsupportedSizeError(f"carousel class needs canonical forms, n <= {MAX_CANONICAL_N}")
    if n % 2:
        return {canonical_form(carousel(n))}
    forms = set()
    for code in range(1 << (n // 2)):
        bits = tuple(bool((code >> k) & 1) for k in range(n // 2))
        forms.add(canonical_form(carousel_from_spec(CarouselSpec(n, bits))))
    return forms


def carousel_class(n: int) -> list[Tournament]:
    """All carousels on ``n`` vertices up to isomorphism, sorted by canonical bitstring."""
    return [cf.tournament() for cf in sorted(carousel_class_forms(n))]


def _is_transitive_on(adj: np.ndarray, idx: np.ndarray) -> bool:
    if len(idx) < 3:
        return True
    scores = adj[np.ix_(idx, idx)].sum(axis=1)
    return len(np.unique(scores)) == len(idx)


def is_near_regular(T: Tournament) -> bool:
    """Every out-degree lies in ``{(n-2)/2, (n-1)/2, n/2}``."""
    d2 = 2 * T.out_degrees
    return bool(np.all((d2 >= T.n - 2) & (d2 <= T.n)))


def is_locally_transitive_balanced(T: Tournament) -> bool:
    if not is_near_regular(T):
        return False
    for v in range(T.n):
        if not _is_transitive_on(T.adj, T.out_neighbors(v)):
            return False
        if not _is_transitive_on(T.adj, T.in_neighbors(v)):
            return False
    return True


# -- randomness -------------------------------------------------------------


def _fmix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def pair_bits(seed: int, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    """Fair bit per vertex pair, a pure function of ``(seed, i, j)``.

    SplitMix64 finalizer applied to the seed and then each index, so any
    subset of pairs can be generated in any order with identical results.
    """
    s = np.uint64(seed & _MASK64)
    with np.errstate(over="ignore"):
        h = _fmix(s + _GAMMA * (np.asarray(i, dtype=np.uint64) + np.uint64(1)))
        h = _fmix(h + _GAMMA * (np.asarray(j, dtype=np.uint64) + np.uint64(1)))
    return (h >> np.uint64(63)).astype(bool)


def _random_block(adj: np.ndarray, vertices: np.ndarray, seed: int) -> None:
    """Orient all pairs inside ``vertices`` (global labels) by :func:`pair_bits`."""
    k = len(vertices)
    if k < 2:
        return
    a, b = np.triu_indices(k, 1)
    gi, gj = vertices[a], vertices[b]
    fwd = pair_bits(seed, gi, gj)
    adj[gi, gj] = fwd
    adj[gj, gi] = ~fwd


def random_tournament(n: int, seed: int) -> Tournament:
    """Uniform random tournament; pair ``(i, j)``, ``i < j``, points forward iff its keyed bit is 1."""
    if n < 1:
        raise TournamentError("n must be >= 1")
    adj = np.zeros((n, n), dtype=bool)
    _random_block(adj, np.arange(n), seed)
    return Tournament(adj, check=False)


# -- iterated blow-up -------------------------------------------------------

Alpha = Union[float, str]


@dataclass(frozen=True)
class BlowupSpec:
    """Parameters of the iterated construction.

    ``alpha="auto"`` selects the optimal top fraction. ``max_depth`` caps the
    number of random levels; the remaining top part is filled transitively.
    """

    n: int
    alpha: Alpha = "auto"
    seed: int = 0
    base_cutoff: int = 4
    max_depth: int | None = None
    resolved_alpha: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        a = CLOSED_ALPHA if self.alpha == "auto" else float(self.alpha)
        if not 0 <= a < 1:
            raise TournamentError(f"alpha must lie in [0, 1), got {self.alpha}")
        if self.base_cutoff < 1:
            raise TournamentError("base_cutoff must be >= 1")
        if self.n < 1:
            raise TournamentError("n must be >= 1")
        if self.max_depth is not None and self.max_depth < 0:
            raise TournamentError("max_depth must be >= 0")
        object.__setattr__(self, "resolved_alpha", a)


def blowup_levels_sizes(spec: BlowupSpec) -> list[tuple[int, int]]:
    """``(top, random)`` part sizes level by level; top takes ``ceil(alpha * m)``."""
    sizes = []
    m = spec.n
    while m >= spec.base_cutoff and (spec.max_depth is None or len(sizes) < spec.max_depth):
        h = math.ceil(spec.resolved_alpha * m)
        if h >= m:
            break
        sizes.append((h, m - h))
        m = h
    return sizes


@dataclass(frozen=True)
class Blowup:
    tournament: Tournament
    levels: np.ndarray
    sizes: list[tuple[int, int]]

    @property
    def top_h(self) -> np.ndarray:
        """Vertices of the top-level dominating part."""
        return np.flatnonzero(self.levels > 0)


def build_blowup(spec: BlowupSpec) -> Blowup:
    """The construction plus per-vertex nesting level.

    Level ``k`` marks the random part created at recursion depth ``k``; the
    transitive fill gets level ``len(sizes)``. Vertices ``[0, h)`` form the
    top part at every level, so a vertex of higher level beats every vertex
    of lower level.
    """
    n = spec.n
    adj = np.zeros((n, n), dtype=bool)
    levels = np.zeros(n, dtype=np.int64)
    sizes = blowup_levels_sizes(spec)
    for k, (h, l) in enumerate(sizes):
        m = h + l
        adj[:h, h:m] = True
        _random_block(adj, np.arange(h, m), spec.seed)
        levels[:h] = k + 1
    base = sizes[-1][0] if sizes else n
    adj[:base, :base] = np.triu(np.ones((base, base), dtype=bool), 1)
    return Blowup(Tournament(adj, check=False), levels, sizes)


def iterated_blowup(spec: BlowupSpec) -> Tournament:
    return build_blowup(spec).tournament


def blowup_levels(spec: BlowupSpec) -> np.ndarray:
    return build_blowup(spec).levels

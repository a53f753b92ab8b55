"""Tournament representation, canonical labeling, surgery and the ``tour/1`` format."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

MAX_CANONICAL_N = 16


class TournamentError(ValueError):
    """Malformed input: bad bitstring, vertex out of range, unparsable file."""


class UnsupportedSizeError(ValueError):
    """Requested size is outside what the exact algorithms support."""


class Tournament:
    """Orientation of the complete graph on ``n`` labelled vertices.

    Stored as a read-only boolean matrix ``adj`` with ``adj[i, j]`` true iff
    the arc is ``i -> j``. Python-int out-neighbourhood bitsets are derived
    lazily for the small-n combinatorial code.
    """

    __slots__ = ("adj", "__dict__")

    def __init__(self, adj: np.ndarray, *, check: bool = True):
        adj = np.array(adj, dtype=bool, copy=True)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1] or adj.shape[0] < 1:
            raise TournamentError(f"adjacency must be a non-empty square matrix, got {adj.shape}")
        if check:
            if adj.diagonal().any():
                raise TournamentError("self-arc present")
            off = ~np.eye(adj.shape[0], dtype=bool)
            if not np.array_equal((adj ^ adj.T)[off], np.ones(int(off.sum()), dtype=bool)):
                raise TournamentError("not a tournament: some pair has zero or two arcs")
        adj.setflags(write=False)
        self.adj = adj

    # -- constructors -------------------------------------------------

    @classmethod
    def from_bits(cls, n: int, bits: str) -> Tournament:
        """Decode ``bits`` over pairs (i, j), i < j, in lexicographic order; '1' means i -> j."""
        if n < 1:
            raise TournamentError(f"n must be >= 1, got {n}")
        m = n * (n - 1) // 2
        if len(bits) != m:
            raise TournamentError(f"bitstring for n={n} must have length {m}, got {len(bits)}")
        if set(bits) - {"0", "1"}:
            raise TournamentError("bitstring may only contain '0' and '1'")
        iu, ju = np.triu_indices(n, 1)
        vals = np.frombuffer(bits.encode(), dtype=np.uint8) == ord("1")
        adj = np.zeros((n, n), dtype=bool)
        adj[iu, ju] = vals
        adj[ju, iu] = ~vals
        return cls(adj, check=False)

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> Tournament:
        n = len(masks)
        adj = np.zeros((n, n), dtype=bool)
        for i, m in enumerate(masks):
            for j in range(n):
                if (m >> j) & 1:
                    adj[i, j] = True
        return cls(adj)

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> Tournament:
        adj = np.zeros((n, n), dtype=bool)
        for i, j in arcs:
            adj[i, j] = True
        return cls(adj)

    # -- basic accessors ----------------------------------------------

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    def __len__(self) -> int:
        return self.n

    def arc(self, i: int, j: int) -> bool:
        return bool(self.adj[i, j])

    @cached_property
    def out_degrees(self) -> np.ndarray:
        d = self.adj.sum(axis=1).astype(np.int64)
        d.setflags(write=False)
        return d

    @cached_property
    def out_masks(self) -> tuple[int, ...]:
        """Out-neighbourhood of each vertex as a Python int bitset (bit j set iff i -> j)."""
        packed = np.packbits(self.adj, axis=1, bitorder="little")
        return tuple(int.from_bytes(row.tobytes(), "little") for row in packed)

    def out_neighbors(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.adj[v])

    def in_neighbors(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.adj[:, v])

    def to_bits(self) -> str:
        iu, ju = np.triu_indices(self.n, 1)
        return (self.adj[iu, ju].astype(np.uint8) + ord("0")).tobytes().decode("ascii")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tournament):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.adj, other.adj))

    def __hash__(self) -> int:
        return hash((self.n, self.adj.tobytes()))

    def __repr__(self) -> str:
        if self.n <= 8:
            return f"Tournament(n={self.n}, bits={self.to_bits()!r})"
        return f"Tournament(n={self.n})"

    # -- surgery ------------------------------------------------------

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise TournamentError(f"vertex {v} out of range for n={self.n}")

    def reverse(self) -> Tournament:
        return Tournament(self.adj.T, check=False)

    def induce(self, subset: Iterable[int]) -> Tournament:
        """Subtournament on ``subset``, relabelled in increasing vertex order."""
        s = sorted(set(int(v) for v in subset))
        if not s:
            raise TournamentError("induce needs a non-empty vertex set")
        for v in s:
            self._check_vertex(v)
        idx = np.array(s)
        return Tournament(self.adj[np.ix_(idx, idx)], check=False)

    def delete_vertex(self, v: int) -> Tournament:
        self._check_vertex(v)
        if self.n == 1:
            raise TournamentError("cannot delete the only vertex")
        keep = np.array([u for u in range(self.n) if u != v])
        return Tournament(self.adj[np.ix_(keep, keep)], check=False)

    def duplicate_vertex(self, v: int, twin_arc_to_copy: bool = True) -> Tournament:
        """Append a twin of ``v`` as vertex ``n``; arc ``v -> copy`` iff ``twin_arc_to_copy``."""
        self._check_vertex(v)
        n = self.n
        adj = np.zeros((n + 1, n + 1), dtype=bool)
        adj[:n, :n] = self.adj
        adj[n, :n] = self.adj[v]
        adj[:n, n] = self.adj[:, v]
        adj[v, n] = twin_arc_to_copy
        adj[n, v] = not twin_arc_to_copy
        return Tournament(adj, check=False)

    def relabel(self, perm: Sequence[int]) -> Tournament:
        """Tournament whose vertex ``k`` is old vertex ``perm[k]``."""
        p = np.asarray(perm, dtype=np.int64)
        if sorted(p.tolist()) != list(range(self.n)):
            raise TournamentError("perm is not a permutation of the vertex set")
        return Tournament(self.adj[np.ix_(p, p)], check=False)

    def flip(self, i: int, j: int) -> Tournament:
        self._check_vertex(i)
        self._check_vertex(j)
        if i == j:
            raise TournamentError("cannot flip a self-pair")
        adj = self.adj.copy()
        adj[i, j], adj[j, i] = adj[j, i], adj[i, j]
        return Tournament(adj, check=False)


# -- patterns ---------------------------------------------------------


class Pattern(enum.Enum):
    """The named 3- and 4-vertex tournaments.

    C3PLUS is a cyclic triangle plus a dominating source, C3MINUS the same
    plus a dominated sink, C4 the strongly connected 4-vertex tournament.
    """

    TT3 = "111"
    C3 = "101"
    TT4 = "111111"
    C3PLUS = "111101"
    C3MINUS = "101111"
    C4 = "110111"

    @property
    def order(self) -> int:
        return 3 if len(self.value) == 3 else 4

    def tournament(self) -> Tournament:
        return Tournament.from_bits(self.order, self.value)


@dataclass(frozen=True)
class PatternId:
    """A named pattern or a custom tournament on at most 8 vertices."""

    tag: str
    custom: Tournament | None = None

    def __post_init__(self):
        if self.tag == "CUSTOM":
            if self.custom is None or self.custom.n > 8:
                raise TournamentError("CUSTOM pattern needs a tournament on at most 8 vertices")
        elif self.tag not in Pattern.__members__:
            raise TournamentError(f"unknown pattern tag {self.tag!r}")

    @classmethod
    def parse(cls, text: str) -> PatternId:
        """Accept a tag name (``C4``, ``c3plus``) or ``custom:<n>:<bits>``."""
        t = text.strip()
        if t.lower().startswith("custom:"):
            try:
                _, n, bits = t.split(":")
                return cls("CUSTOM", Tournament.from_bits(int(n), bits))
            except ValueError as exc:
                raise TournamentError(f"bad custom pattern {text!r}: {exc}") from exc
        key = t.upper().replace("+", "PLUS").replace("-", "MINUS")
        return cls(key)

    @property
    def tournament(self) -> Tournament:
        if self.custom is not None:
            return self.custom
        return Pattern[self.tag].tournament()

    @property
    def order(self) -> int:
        return self.tournament.n

    def __str__(self) -> str:
        if self.tag == "CUSTOM":
            return f"custom:{self.custom.n}:{self.custom.to_bits()}"
        return self.tag


def as_pattern(p: PatternId | Pattern | str) -> PatternId:
    if isinstance(p, PatternId):
        return p
    if isinstance(p, Pattern):
        return PatternId(p.name)
    return PatternId.parse(p)


# -- canonical labeling -----------------------------------------------


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """Isomorphism-invariant normal form.

    ``bits`` is the ``tour/1`` bitstring of the canonically relabelled
    tournament, so ``Tournament.from_bits(cf.n, cf.bits)`` is the canonical
    representative.
    """

    n: int
    bits: str

    def tournament(self) -> Tournament:
        return Tournament.from_bits(self.n, self.bits)


def _colex_search(masks: Sequence[int], abort_if_smaller: bool = False):
    """Branch and bound for the ordering with the smallest column-major string.

    Vertex order ``v_0 .. v_{n-1}``; column ``j`` is the bits ``[v_i -> v_j]``
    for ``i < j`` read with ``i = 0`` most significant. The string is the
    concatenation of columns ``1 .. n-1``. Column-major order makes the
    canonical form hereditary: the first ``n - 1`` canonical vertices induce
    the canonical form of that subtournament.

    Returns ``(order, automorphism_count)``. With ``abort_if_smaller`` the
    identity labelling seeds the bound and ``None`` is returned as soon as a
    strictly smaller string exists.
    """
    n = len(masks)
    INF = 1 << 62
    if abort_if_smaller:
        best = [0] * n
        for j in range(1, n):
            col = 0
            for i in range(j):
                col = (col << 1) | ((masks[i] >> j) & 1)
            best[j] = col
        best_order: list[int] | None = list(range(n))
        ties = 0
    else:
        best = [INF] * n
        best_order = None
        ties = 0

    order: list[int] = []

    class _Abort(Exception):
        pass

    def dfs(depth: int, cols: dict[int, int]) -> None:
        nonlocal best_order, ties
        if depth == n:
            if best_order is None or ties == 0:
                best_order = list(order)
            ties += 1
            return
        m = min(cols.values())
        b = best[depth]
        if m > b:
            return
        if m < b:
            if abort_if_smaller:
                raise _Abort
            best[depth] = m
            for k in range(depth + 1, n):
                best[k] = INF
            ties = 0
        for u in [u for u, c in cols.items() if c == m]:
            mu = masks[u]
            nxt = {w: (c << 1) | ((mu >> w) & 1) for w, c in cols.items() if w != u}
            order.append(u)
            dfs(depth + 1, nxt)
            order.pop()

    try:
        dfs(0, {u: 0 for u in range(n)})
    except _Abort:
        return None, 0
    return best_order, ties


def _masks_relabel(masks: Sequence[int], order: Sequence[int]) -> tuple[int, ...]:
    pos = {v: k for k, v in enumerate(order)}
    out = []
    for v in order:
        m = masks[v]
        r = 0
        while m:
            low = m & -m
            r |= 1 << pos[low.bit_length() - 1]
            m ^= low
        out.append(r)
    return tuple(out)


def masks_to_bits(masks: Sequence[int]) -> str:
    n = len(masks)
    return "".join("1" if (masks[i] >> j) & 1 else "0" for i in range(n) for j in range(i + 1, n))


def canonical_labeling(T: Tournament) -> tuple[list[int], int]:
    """Canonical vertex order of ``T`` and the size of its automorphism group."""
    if T.n > MAX_CANONICAL_N:
        raise UnsupportedSizeError(f"canonical labeling supports n <= {MAX_CANONICAL_N}, got {T.n}")
    order, aut = _colex_search(T.out_masks)
    return order, aut


def canonical_masks(masks: Sequence[int]) -> tuple[int, ...]:
    order, _ = _colex_search(masks)
    return _masks_relabel(masks, order)


def is_canonical_masks(masks: Sequence[int]) -> bool:
    """True iff the identity labelling is already canonical."""
    order, _ = _colex_search(masks, abort_if_smaller=True)
    return order is not None


def canonical_form(T: Tournament) -> CanonicalForm:
    if T.n > MAX_CANONICAL_N:
        raise UnsupportedSizeError(f"canonical labeling supports n <= {MAX_CANONICAL_N}, got {T.n}")
    return CanonicalForm(T.n, masks_to_bits(canonical_masks(T.out_masks)))


def automorphism_count(T: Tournament) -> int:
    return canonical_labeling(T)[1]


def is_isomorphic(A: Tournament, B: Tournament) -> bool:
    """Isomorphism test; tournaments of different sizes are simply not isomorphic."""
    if A.n != B.n:
        return False
    if sorted(A.out_degrees.tolist()) != sorted(B.out_degrees.tolist()):
        return False
    return canonical_form(A) == canonical_form(B)


# -- tour/1 files -----------------------------------------------------

FORMAT_TAG = "tour/1"


def dumps(tournaments: Iterable[Tournament], comments: Iterable[str] = ()) -> str:
    lines = [f"# {FORMAT_TAG}"]
    lines += [f"# {c}" for c in comments]
    lines += [f"t {T.n} {T.to_bits()}" for T in tournaments]
    return "\n".join(lines) + "\n"


def loads(text: str) -> list[Tournament]:
    """Parse ``tour/1`` text. Errors carry the 1-based line number."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "t" or len(parts) not in (2, 3):
            raise TournamentError(f"line {lineno}: expected 't <n> <bitstring>', got {raw!r}")
        try:
            n = int(parts[1])
        except ValueError:
            raise TournamentError(f"line {lineno}: vertex count {parts[1]!r} is not an integer") from None
        bits = parts[2] if len(parts) == 3 else ""
        try:
            out.append(Tournament.from_bits(n, bits))
        except TournamentError as exc:
            raise TournamentError(f"line {lineno}: {exc}") from None
    return out


def write_tour(path: str | Path, tournaments: Iterable[Tournament], comments: Iterable[str] = ()) -> None:
    Path(path).write_text(dumps(tournaments, comments))


def read_tour(path: str | Path) -> list[Tournament]:
    return loads(Path(path).read_text())

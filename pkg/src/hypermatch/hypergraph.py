"""k-uniform hypergraphs: representation, degree queries, exact matchings,
and exhaustive enumeration of all labelled hypergraphs on a small vertex set.

Vertices are ``0..n-1``. Edges are stored as sorted tuples, and the edge list
itself is kept in lexicographic order so every traversal is deterministic.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Optional, Sequence

from .errors import FormatError, InvalidQueryError, ResourceLimitError, ValidationError

Edge = tuple[int, ...]

#: default cap on the number of hypergraphs an exhaustive pass may visit (2**30)
DEFAULT_MAX_ENUM = 1 << 30


@dataclass(frozen=True)
class Hypergraph:
    n: int
    k: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.k < 2:
            raise ValidationError(f"uniformity must be >= 2, got {self.k}")
        if self.n < 0:
            raise ValidationError(f"vertex count must be >= 0, got {self.n}")
        canon = set()
        for e in self.edges:
            edge = tuple(sorted(int(v) for v in e))
            if len(edge) != self.k or len(set(edge)) != self.k:
                raise ValidationError(f"edge {tuple(e)} is not a {self.k}-set")
            if edge[0] < 0 or edge[-1] >= self.n:
                raise ValidationError(f"edge {tuple(e)} has a vertex outside 0..{self.n - 1}")
            canon.add(edge)
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @classmethod
    def complete(cls, n: int, k: int) -> "Hypergraph":
        return cls(n, k, tuple(combinations(range(n), k)))

    @classmethod
    def from_masks(cls, n: int, k: int, masks: Iterable[int]) -> "Hypergraph":
        return cls(n, k, tuple(tuple(v for v in range(n) if m >> v & 1) for m in masks))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << v for v in e) for e in self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Edge indices containing each vertex, in edge order."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            for v in e:
                inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    def add_isolated_vertex(self) -> "Hypergraph":
        return Hypergraph(self.n + 1, self.k, self.edges)

    # -- serialisation -------------------------------------------------------

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, data: dict) -> "Hypergraph":
        try:
            n, k, raw = int(data["n"]), int(data["k"]), data["edges"]
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"hypergraph JSON needs integer n, k and an edge list: {exc}") from exc
        if not isinstance(raw, list):
            raise FormatError("edges must be a list")
        seen = set()
        for e in raw:
            if not isinstance(e, list) or not all(isinstance(v, int) for v in e):
                raise FormatError(f"edge {e!r} is not a list of integers")
            key = tuple(sorted(e))
            if key in seen:
                raise FormatError(f"duplicate edge {e!r}")
            seen.add(key)
        try:
            return cls(n, k, tuple(tuple(e) for e in raw))
        except ValidationError as exc:
            raise FormatError(str(exc)) from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Hypergraph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)


@dataclass(frozen=True)
class Matching:
    edges: tuple[Edge, ...]
    n: int
    k: int

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def is_perfect(self) -> bool:
        return self.size * self.k == self.n

    def to_dict(self) -> dict:
        return {"size": self.size, "perfect": self.is_perfect, "edges": [list(e) for e in self.edges]}


def _subset_mask(H: Hypergraph, S: Iterable[int]) -> tuple[int, int]:
    S = tuple(S)
    if len(set(S)) != len(S):
        raise InvalidQueryError(f"query set {S} has repeated vertices")
    if len(S) > H.k:
        raise InvalidQueryError(f"|S| = {len(S)} exceeds uniformity {H.k}")
    if any(v < 0 or v >= H.n for v in S):
        raise InvalidQueryError(f"query set {S} has a vertex outside 0..{H.n - 1}")
    return len(S), sum(1 << v for v in S)


def degree(H: Hypergraph, S: Iterable[int] = ()) -> int:
    """Number of edges of ``H`` containing every vertex of ``S``."""
    _, mask = _subset_mask(H, S)
    return sum(1 for em in H.edge_masks if em & mask == mask)


def min_d_degree(H: Hypergraph, d: int) -> int:
    """Minimum of :func:`degree` over all ``d``-subsets of the vertices."""
    if d < 0 or d >= H.k:
        raise InvalidQueryError(f"d must satisfy 0 <= d <= k-1 = {H.k - 1}, got {d}")
    if d > H.n:
        raise InvalidQueryError(f"no {d}-subsets of a {H.n}-vertex set")
    if d == 0:
        return H.num_edges
    counts = {}
    for e in H.edges:
        for S in combinations(e, d):
            counts[S] = counts.get(S, 0) + 1
    if len(counts) < comb(H.n, d):
        return 0
    return min(counts.values())


def _search_matching(n: int, k: int, masks: Sequence[int], incidence: Sequence[Sequence[int]],
                     target: Optional[int] = None) -> list[int]:
    """Branch and bound over the lowest undecided vertex.

    Each branch either covers that vertex with one of its still-disjoint
    edges, or declares it unmatched. Undecided vertices // k bounds the
    remaining gain. Stops as soon as ``target`` edges are found.
    """
    limit = n // k if target is None else min(target, n // k)
    best: list[int] = []
    chosen: list[int] = []
    full = (1 << n) - 1

    def rec(decided: int) -> bool:
        nonlocal best
        if len(chosen) > len(best):
            best = chosen.copy()
            if len(best) >= limit:
                return True
        free = full & ~decided
        if len(chosen) + free.bit_count() // k <= len(best):
            return False
        if not free:
            return False
        v = (free & -free).bit_length() - 1
        for i in incidence[v]:
            if masks[i] & decided == 0:
                chosen.append(i)
                if rec(decided | masks[i]):
                    return True
                chosen.pop()
        return rec(decided | (1 << v))

    if limit > 0:
        rec(0)
    return best


def max_matching(H: Hypergraph) -> Matching:
    """A maximum matching; among maxima, the first in branch order."""
    idx = _search_matching(H.n, H.k, H.edge_masks, H.incidence)
    return Matching(tuple(H.edges[i] for i in sorted(idx)), H.n, H.k)


def has_matching_of_size(H: Hypergraph, s: int) -> bool:
    if s <= 0:
        return True
    return len(_search_matching(H.n, H.k, H.edge_masks, H.incidence, target=s)) >= s


def has_perfect_matching(H: Hypergraph) -> bool:
    if H.n % H.k:
        return False
    return has_matching_of_size(H, H.n // H.k)


# -- enumeration ---------------------------------------------------------------


def _check_enum_cap(n: int, k: int, max_count: int) -> int:
    slots = comb(n, k)
    required = 1 << slots
    if required > max_count:
        raise ResourceLimitError(
            f"exhaustive enumeration over C({n},{k}) = {slots} edge slots needs "
            f"{required} hypergraphs, cap is {max_count}",
            required=required, cap=max_count,
        )
    return slots


def _containment(n: int, k: int, d: int) -> tuple[list[tuple[int, ...]], list[int]]:
    """For every d-set, the bitmask (over edge slots) of k-sets containing it."""
    slots = list(combinations(range(n), k))
    dsets = list(combinations(range(n), d))
    index = {S: i for i, S in enumerate(dsets)}
    cont = [0] * len(dsets)
    for j, e in enumerate(slots):
        for S in combinations(e, d):
            cont[index[S]] |= 1 << j
    return slots, cont


def enumerate_hypergraphs(n: int, k: int, min_degree: Optional[tuple[int, int]] = None,
                          max_count: int = DEFAULT_MAX_ENUM) -> Iterator[Hypergraph]:
    """Yield every k-graph on ``[n]`` exactly once.

    ``min_degree=(d, m)`` keeps only graphs with ``min_d_degree >= m``; branches
    that can no longer reach degree ``m`` at some d-set are cut early.
    """
    if k < 2:
        raise ValidationError("k must be >= 2")
    _check_enum_cap(n, k, max_count)
    slots = list(combinations(range(n), k))
    if min_degree is None:
        for mask in range(1 << len(slots)):
            yield Hypergraph(n, k, tuple(slots[j] for j in range(len(slots)) if mask >> j & 1))
        return
    d, m = min_degree
    if d < 0 or d >= k:
        raise InvalidQueryError(f"d must satisfy 0 <= d <= k-1, got {d}")
    for mask in _filtered_masks(n, k, d, m):
        yield Hypergraph(n, k, tuple(slots[j] for j in range(len(slots)) if mask >> j & 1))


def _filtered_masks(n: int, k: int, d: int, m: int) -> Iterator[int]:
    slots = list(combinations(range(n), k))
    dsets = list(combinations(range(n), d))
    index = {S: i for i, S in enumerate(dsets)}
    touches = [[index[S] for S in combinations(e, d)] for e in slots]
    have = [0] * len(dsets)
    left = [0] * len(dsets)
    for t in touches:
        for i in t:
            left[i] += 1
    if any(x < m for x in left):
        return

    def rec(j: int, mask: int) -> Iterator[int]:
        if j == len(slots):
            if all(h >= m for h in have):
                yield mask
            return
        t = touches[j]
        for i in t:
            left[i] -= 1
        # exclude slot j
        if all(have[i] + left[i] >= m for i in t):
            yield from rec(j + 1, mask)
        # include slot j
        for i in t:
            have[i] += 1
        yield from rec(j + 1, mask | (1 << j))
        for i in t:
            have[i] -= 1
            left[i] += 1

    yield from rec(0, 0)


@dataclass(frozen=True)
class ThresholdResult:
    """Outcome of an exhaustive threshold computation.

    ``witness`` is a graph at parameter ``value - 1`` lacking the target
    structure (``None`` when ``value == 0``); ``witness_count`` counts all such graphs.
    """

    value: int
    witness: Optional[Hypergraph]
    witness_count: int
    examined: int

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "witness_count": self.witness_count,
            "examined": self.examined,
        }


def _witness_key(delta: int, mask: int, slots_count: int) -> tuple:
    # larger degree first, then sparsest, then lexicographically smallest edge list
    return (-delta, mask.bit_count(), _lex_edges_key(mask, slots_count))


def _lex_edges_key(mask: int, slots_count: int) -> tuple[int, ...]:
    return tuple(j for j in range(slots_count) if mask >> j & 1)


def _md_chunk(args) -> tuple[Optional[tuple], int, int]:
    n, k, d, s, lo, hi = args
    slots, cont = _containment(n, k, d)
    masks = [sum(1 << v for v in e) for e in slots]
    inc: list[list[int]] = [[] for _ in range(n)]
    best_key = None
    best_mask = None
    count = 0
    for hmask in range(lo, hi):
        if d == 0:
            delta = hmask.bit_count()
        else:
            delta = min((hmask & c).bit_count() for c in cont)
        if best_key is not None and -delta > best_key[0]:
            continue
        present = [j for j in range(len(slots)) if hmask >> j & 1]
        em = [masks[j] for j in present]
        for v in range(n):
            inc[v].clear()
        for i, j in enumerate(present):
            for v in slots[j]:
                inc[v].append(i)
        if len(_search_matching(n, k, em, inc, target=s)) >= s:
            continue
        key = _witness_key(delta, hmask, len(slots))
        if best_key is None or key[0] < best_key[0]:
            best_key, best_mask, count = key, hmask, 1
        else:
            # same degree as the current best
            count += 1
            if key < best_key:
                best_key, best_mask = key, hmask
    return best_key, best_mask, count


def exact_m_d_s(k: int, n: int, d: int, s: int, *, workers: int = 1,
                max_count: int = DEFAULT_MAX_ENUM) -> ThresholdResult:
    """Least ``m`` such that every k-graph on ``[n]`` with ``min_d_degree >= m``
    has a matching of ``s`` edges, by exhausting all ``2**C(n,k)`` graphs.

    The witness is a graph with ``min_d_degree == m - 1`` and no such matching;
    among those the sparsest (then lexicographically first) is returned.
    """
    if not 0 <= d <= k - 1:
        raise InvalidQueryError(f"d must satisfy 0 <= d <= k-1, got {d}")
    if not 0 <= s <= n // k:
        raise ValidationError(f"s must satisfy 0 <= s <= n/k, got {s}")
    slots = _check_enum_cap(n, k, max_count)
    total = 1 << slots
    if s == 0:
        return ThresholdResult(0, None, 0, 0)
    workers = max(1, int(workers))
    bounds = [total * i // workers for i in range(workers + 1)]
    tasks = [(n, k, d, s, bounds[i], bounds[i + 1]) for i in range(workers)]
    if workers == 1:
        parts = [_md_chunk(tasks[0])]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_md_chunk, tasks))
    best_key, best_mask, count = None, None, 0
    for key, mask, c in parts:
        if key is None:
            continue
        if best_key is None or key[0] < best_key[0]:
            best_key, best_mask, count = key, mask, c
        elif key[0] == best_key[0]:
            count += c
            if key < best_key:
                best_key, best_mask = key, mask
    # the empty graph always lacks an s-matching for s >= 1
    assert best_key is not None
    all_slots = list(combinations(range(n), k))
    witness = Hypergraph(n, k, tuple(all_slots[j] for j in range(slots) if best_mask >> j & 1))
    return ThresholdResult(-best_key[0] + 1, witness, count, total)

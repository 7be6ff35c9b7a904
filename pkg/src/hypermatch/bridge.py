"""Both directions of the matching/tail equivalence, made finite and exact.

cover -> distribution: an optimal fractional cover ``t`` of an l-graph on
``m`` vertices turns into the law of ``t(v)`` for uniform ``v``; edge counts
are controlled by heavy l-subsets (N), heavy l-sequences (N1) and heavy
injective l-sequences (N2).

distribution -> hypergraph: a rational mean-one law on [0, l+d] is spread
over ``m = r * m'`` vertices in blocks; the heavy l-subsets become the edges
and the block weights form a fractional cover of total ``m / (l+d)``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb, factorial, perm
from typing import Literal, Optional, Sequence

from .errors import ResourceLimitError, ValidationError
from .feige import DEFAULT_MAX_ATOMS, DiscreteDistribution, iid_tail, mean
from .fraclp import FractionalWeights, duality_certificate
from .hypergraph import Hypergraph
from .rational import RationalLike, as_fraction, fmt

#: above this many l-subsets, heavy-subset counting switches to the block DP
DIRECT_SUBSET_LIMIT = 10**6
#: construction refuses to materialise more candidate l-subsets than this
DEFAULT_MAX_SUBSETS = 10**6

ZERO = Fraction(0)


def weight_distribution(m: int, t: Sequence[Fraction]) -> DiscreteDistribution:
    """Law of ``t(v)`` for ``v`` uniform on ``[m]``."""
    if len(t) != m or m < 1:
        raise ValidationError(f"need {m} >= 1 vertex weights, got {len(t)}")
    counts = Counter(as_fraction(x) for x in t)
    if any(not 0 <= v <= 1 for v in counts):
        raise ValidationError("vertex weights must lie in [0, 1]")
    return DiscreteDistribution(tuple((v, Fraction(c, m)) for v, c in counts.items()))


def _groups(t: Sequence[Fraction]) -> list[tuple[Fraction, int]]:
    return sorted(Counter(as_fraction(x) for x in t).items())


def _block_vectors(groups, l: int):
    """Count vectors a with sum l and a_j <= multiplicity of group j."""
    def rec(j: int, left: int):
        if j == len(groups):
            if left == 0:
                yield ()
            return
        for a in range(min(left, groups[j][1]) + 1):
            for rest in rec(j + 1, left - a):
                yield (a,) + rest
    yield from rec(0, l)


def count_heavy_subsets(m: int, t: Sequence[Fraction], l: int, threshold: RationalLike = 1,
                        method: Literal["auto", "direct", "blocks"] = "auto") -> int:
    """N: number of l-subsets S of ``[m]`` with sum of t over S at least ``threshold``."""
    threshold = as_fraction(threshold)
    if len(t) != m:
        raise ValidationError(f"need {m} vertex weights, got {len(t)}")
    if method == "auto":
        method = "direct" if comb(m, l) <= DIRECT_SUBSET_LIMIT else "blocks"
    if method == "direct":
        tt = [as_fraction(x) for x in t]
        return sum(1 for S in combinations(range(m), l) if sum((tt[v] for v in S), ZERO) >= threshold)
    groups = _groups(t)
    total = 0
    for a in _block_vectors(groups, l):
        if sum((w * c for (w, _), c in zip(groups, a)), ZERO) >= threshold:
            ways = 1
            for (_, mult), c in zip(groups, a):
                ways *= comb(mult, c)
            total += ways
    return total


def count_heavy_sequences(m: int, t: Sequence[Fraction], l: int, threshold: RationalLike = 1,
                          max_atoms: int = DEFAULT_MAX_ATOMS) -> tuple[int, int]:
    """(N1, N2): heavy l-sequences with repetition, and injective ones.

    N1 is read off the exact i.i.d. tail of :func:`weight_distribution`.
    N2 is counted twice, by injective enumeration when small and by the
    block formula, and the two must agree.
    """
    threshold = as_fraction(threshold)
    tail = iid_tail(weight_distribution(m, t), l, threshold, max_atoms)
    n1 = tail * m**l
    if n1.denominator != 1:
        raise AssertionError(f"N1 = {fmt(n1)} is not an integer")
    groups = _groups(t)
    n2_blocks = 0
    for a in _block_vectors(groups, l):
        if sum((w * c for (w, _), c in zip(groups, a)), ZERO) >= threshold:
            ways = factorial(l)
            for (_, mult), c in zip(groups, a):
                ways = ways // factorial(c) * perm(mult, c)
            n2_blocks += ways
    if perm(m, l) <= DIRECT_SUBSET_LIMIT:
        tt = [as_fraction(x) for x in t]
        n2_direct = sum(1 for seq in permutations(range(m), l)
                        if sum((tt[v] for v in seq), ZERO) >= threshold)
        if n2_direct != n2_blocks:
            raise AssertionError(f"N2 routes disagree: {n2_direct} vs {n2_blocks}")
    return int(n1), n2_blocks


def brute_force_sequences(m: int, t: Sequence[Fraction], l: int, threshold: RationalLike = 1) -> int:
    """N1 by walking all m**l sequences; oracle for small cases."""
    threshold = as_fraction(threshold)
    tt = [as_fraction(x) for x in t]
    return sum(1 for seq in product(range(m), repeat=l) if sum((tt[v] for v in seq), ZERO) >= threshold)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    lhs: Fraction
    rhs: Fraction

    def to_dict(self) -> dict:
        return {"name": self.name, "pass": self.passed, "lhs": fmt(self.lhs), "rhs": fmt(self.rhs)}


@dataclass(frozen=True)
class BridgeCertificate:
    direction: Literal["cover-to-dist", "dist-to-hypergraph"]
    hypergraph: Hypergraph
    weight: tuple[Fraction, ...]
    distribution: DiscreteDistribution
    m: int
    l: int
    d: Fraction
    N: int
    N1: int
    N2: int
    checks: tuple[Check, ...]
    status: Literal["applicable", "inapplicable", "vacuous"] = "applicable"
    extras: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "direction": self.direction,
            "status": self.status,
            "m": self.m,
            "l": self.l,
            "d": fmt(self.d),
            "hypergraph": self.hypergraph.to_dict(),
            "weight": [fmt(w) for w in self.weight],
            "distribution": self.distribution.to_dict(),
            "counts": {"N": self.N, "N1": self.N1, "N2": self.N2},
            "checks": [c.to_dict() for c in self.checks],
            "extras": {k: fmt(v) if isinstance(v, Fraction) else v for k, v in self.extras.items()},
        }


def _count_checks(m: int, l: int, N: int, N1: int, N2: int, tail: Fraction) -> list[Check]:
    gap = comb(l, 2) * m ** (l - 1)
    return [
        Check("N2 = l! * N", N2 == factorial(l) * N, Fraction(N2), Fraction(factorial(l) * N)),
        Check("N1 - N2 >= 0", N1 >= N2, Fraction(N1 - N2), ZERO),
        Check("N1 - N2 <= C(l,2) m^(l-1)", N1 - N2 <= gap, Fraction(N1 - N2), Fraction(gap)),
        Check("N1 / m^l = tail", Fraction(N1, m**l) == tail, Fraction(N1, m**l), tail),
    ]


def cover_to_distribution(H: Hypergraph, d: RationalLike,
                          cover: Optional[Sequence[RationalLike]] = None) -> BridgeCertificate:
    """Run the cover-to-distribution direction on ``H`` (with l = k, m = n).

    ``cover`` defaults to an LP-optimal fractional vertex cover. The limit
    argument's ``l + d - o(1)`` threshold is replaced by the exact fact that
    ``1/x >= (l+d) m / (m+d)`` under the standing assumption on ``x``.
    """
    d = as_fraction(d)
    l, m = H.k, H.n
    if d <= 0:
        raise ValidationError("d must be positive")
    if m < 1:
        raise ValidationError("need at least one vertex")
    if cover is None:
        cert = duality_certificate(H)
        t = cert.cover.weights
        nu = cert.nu
    else:
        t = tuple(as_fraction(x) for x in cover)
        problems = FractionalWeights("vertices", t).violations(H)
        if problems:
            raise ValidationError("supplied cover is infeasible: " + "; ".join(problems))
        nu = None
    total = sum(t, ZERO)
    x = total / m
    D = weight_distribution(m, t)
    N = count_heavy_subsets(m, t, l, 1)
    N1, N2 = count_heavy_sequences(m, t, l, 1)
    # independent route for the tail when the sequence space is small
    tail = (Fraction(brute_force_sequences(m, t, l, 1), m**l) if m**l <= 10**5
            else iid_tail(D, l, 1))
    checks = [
        Check("edges are heavy: |E| <= N", H.num_edges <= N, Fraction(H.num_edges), Fraction(N)),
        Check("cover feasible", FractionalWeights("vertices", t).is_feasible(H), ZERO, ZERO),
        Check("mean of t(v) = x", mean(D) == x, mean(D), x),
    ] + _count_checks(m, l, N, N1, N2, tail)
    extras: dict = {"x": x, "cover_weight": total, "tail": tail}
    if nu is not None:
        extras["nu_star"] = nu
    if total == 0:
        status = "vacuous"
    else:
        limit = (1 + d / m) / (l + d)
        status = "applicable" if x <= limit else "inapplicable"
        extras["x_limit"] = limit
        inv = 1 / x
        extras["scaled_threshold"] = inv
        extras["effective_d"] = inv - l
        scaled = iid_tail(D.scaled(inv), l, inv)
        checks.append(Check("Pr[sum X/x >= 1/x] = Pr[sum X >= 1]", scaled == tail, scaled, tail))
        checks.append(Check("Markov: Pr[sum X >= 1] <= l x", tail <= l * x, tail, l * x))
        if status == "applicable":
            target = (l + d) * m / (m + d)
            checks.append(Check("1/x >= (l+d) m/(m+d)", inv >= target, inv, target))
    return BridgeCertificate("cover-to-dist", H, tuple(t), D, m, l, d, N, N1, N2, tuple(checks),
                             status, extras)


def block_weights(D: DiscreteDistribution, l: int, d: RationalLike, r: int) -> tuple[int, tuple[Fraction, ...]]:
    """m = r m' and the block weight vector x_i/(l+d), ascending by atom."""
    top = l + as_fraction(d)
    mp = D.common_denominator
    t: list[Fraction] = []
    for v, p in D.atoms:
        t.extend([v / top] * (r * int(p * mp)))
    return r * mp, tuple(t)


def dist_to_hypergraph(D: DiscreteDistribution, l: int, d: RationalLike, r: int, *,
                       solve_lp: Optional[bool] = None,
                       max_subsets: int = DEFAULT_MAX_SUBSETS) -> BridgeCertificate:
    """Build the l-graph whose edges are the heavy l-subsets of a block-weighted vertex set.

    ``solve_lp`` (default: only for small graphs) additionally computes the
    fractional cover number to confirm it is at most ``m/(l+d)``.
    """
    d = as_fraction(d)
    if l < 2:
        raise ValidationError("uniformity l must be >= 2")
    if d <= 0 or r < 1:
        raise ValidationError("need d > 0 and r >= 1")
    top = l + d
    if mean(D) != 1:
        raise ValidationError(f"distribution has mean {fmt(mean(D))}, not 1")
    if D.values[-1] > top:
        raise ValidationError(f"support must lie in [0, l+d] = [0, {fmt(top)}]")
    m, t = block_weights(D, l, d, r)
    if m < l:
        raise ValidationError(f"m = r m' = {m} is smaller than l = {l}; increase r")
    if comb(m, l) > max_subsets:
        raise ResourceLimitError(f"C({m},{l}) = {comb(m, l)} candidate edges exceeds cap {max_subsets}",
                                 required=comb(m, l), cap=max_subsets)
    edges = tuple(S for S in combinations(range(m), l) if sum((t[v] for v in S), ZERO) >= 1)
    H = Hypergraph(m, l, edges)
    N = count_heavy_subsets(m, t, l, 1)
    N1, N2 = count_heavy_sequences(m, t, l, 1)
    tail = iid_tail(D, l, top)
    cover_weight = sum(t, ZERO)
    wd = weight_distribution(m, t)
    checks = [
        Check("t is a fractional vertex cover", FractionalWeights("vertices", t).is_feasible(H), ZERO, ZERO),
        Check("sum t(v) = m/(l+d)", cover_weight == m / top, cover_weight, m / top),
        Check("|E| = N", H.num_edges == N, Fraction(H.num_edges), Fraction(N)),
        Check("law of t(v) = law of X/(l+d)", wd == D.scaled(1 / top), ZERO, ZERO),
        Check("sum t(v) < (m+d)/(l+d)", cover_weight < (m + d) / top, cover_weight, (m + d) / top),
    ] + _count_checks(m, l, N, N1, N2, tail)
    extras: dict = {"density": Fraction(N, comb(m, l)), "tail": tail}
    if solve_lp is None:
        solve_lp = m <= 24 and H.num_edges <= 120
    if solve_lp:
        cert = duality_certificate(H)
        extras["tau_star"] = cert.tau
        checks.append(Check("tau* <= sum t(v)", cert.tau <= cover_weight, cert.tau, cover_weight))
        checks.append(Check("nu* < (m+d)/(l+d)", cert.nu < (m + d) / top, cert.nu, (m + d) / top))
    return BridgeCertificate("dist-to-hypergraph", H, t, D, m, l, d, N, N1, N2, tuple(checks),
                             "applicable", extras)


@dataclass(frozen=True)
class ProbeRow:
    r: int
    m: int
    edges: int
    density: Fraction
    tail: Fraction
    injective_share: Fraction
    gap: Fraction
    observed: Fraction

    @property
    def dominated(self) -> bool:
        return self.observed <= self.gap

    def to_dict(self) -> dict:
        return {"r": self.r, "m": self.m, "edges": self.edges, "density": fmt(self.density),
                "tail": fmt(self.tail), "injective_share": fmt(self.injective_share),
                "gap": fmt(self.gap), "observed": fmt(self.observed), "dominated": self.dominated}


def equivalence_probe(l: int, d: RationalLike, D: DiscreteDistribution,
                      r_values: Sequence[int]) -> list[ProbeRow]:
    """Edge density of the constructed graphs against the tail, one row per ``r``.

    ``injective_share`` is ``N2/m^l = density * l! C(m,l)/m^l``; its distance
    to the tail ``N1/m^l`` must not exceed ``C(l,2)/m``.
    """
    rows = []
    for r in r_values:
        cert = dist_to_hypergraph(D, l, d, r, solve_lp=False)
        m = cert.m
        tail = cert.extras["tail"]
        share = Fraction(cert.N2, m**l)
        rows.append(ProbeRow(r, m, cert.N, cert.extras["density"], tail, share,
                             Fraction(comb(l, 2), m), abs(Fraction(cert.N1, m**l) - share)))
    return rows

"""Fractional matchings and fractional vertex covers in exact arithmetic.

Both optima come out of one primal simplex solve on the matching LP

    maximise  sum_e w(e)   s.t.  sum_{e ∋ v} w(e) <= 1,  w >= 0

whose right-hand side is nonnegative, so the all-slack basis is feasible and
no phase one is needed. The optimal dual prices of the vertex rows form a
minimum fractional vertex cover. Both witnesses are re-checked afterwards
without reference to the tableau.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Literal, Mapping, Optional

from .errors import FormatError, ResourceLimitError, SolverError, ValidationError
from .hypergraph import DEFAULT_MAX_ENUM, Hypergraph
from .rational import RationalLike, as_fraction, fmt

Carrier = Literal["edges", "vertices"]

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class FractionalWeights:
    carrier: Carrier
    weights: tuple[Fraction, ...]

    @property
    def value(self) -> Fraction:
        return sum(self.weights, ZERO)

    def violations(self, H: Hypergraph) -> list[str]:
        """Constraint violations against ``H`` (empty list means feasible)."""
        bad = []
        for i, w in enumerate(self.weights):
            if not ZERO <= w <= ONE:
                bad.append(f"weight {i} = {fmt(w)} outside [0, 1]")
        if self.carrier == "edges":
            if len(self.weights) != H.num_edges:
                return bad + [f"{len(self.weights)} weights for {H.num_edges} edges"]
            load = [ZERO] * H.n
            for w, e in zip(self.weights, H.edges):
                for v in e:
                    load[v] += w
            bad += [f"vertex {v} load {fmt(x)} > 1" for v, x in enumerate(load) if x > 1]
        else:
            if len(self.weights) != H.n:
                return bad + [f"{len(self.weights)} weights for {H.n} vertices"]
            for e in H.edges:
                tot = sum((self.weights[v] for v in e), ZERO)
                if tot < 1:
                    bad.append(f"edge {e} covered only {fmt(tot)}")
        return bad

    def is_feasible(self, H: Hypergraph) -> bool:
        return not self.violations(H)

    def to_dict(self) -> dict:
        return {
            "carrier": self.carrier,
            "weights": {str(i): fmt(w) for i, w in enumerate(self.weights)},
            "value": fmt(self.value),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "FractionalWeights":
        carrier = data.get("carrier")
        if carrier not in ("edges", "vertices"):
            raise FormatError(f"carrier must be 'edges' or 'vertices', got {carrier!r}")
        raw = data.get("weights", {})
        try:
            idx = sorted(int(i) for i in raw)
        except ValueError as exc:
            raise FormatError("weight indices must be integers") from exc
        if idx != list(range(len(idx))):
            raise FormatError("weight indices must be 0..N-1")
        weights = tuple(as_fraction(raw[str(i)]) for i in idx)
        out = cls(carrier, weights)
        if "value" in data and as_fraction(data["value"]) != out.value:
            raise FormatError("stated value does not equal the sum of weights")
        return out


def _simplex_max(A: list[list[int]], num_rows: int, num_cols: int):
    """Maximise 1·x subject to A x <= 1, x >= 0 over the rationals.

    Dense tableau, Bland's rule (smallest eligible entering column, smallest
    basic index on ratio ties). Returns (x, y, value) with y the row duals.
    """
    width = num_cols + num_rows
    T = [[Fraction(a) for a in A[i]] + [ONE if j == i else ZERO for j in range(num_rows)] + [ONE]
         for i in range(num_rows)]
    # reduced-cost row: entries c_j - z_j, objective accumulated in the last slot (negated)
    cost = [ONE] * num_cols + [ZERO] * num_rows + [ZERO]
    basis = list(range(num_cols, width))
    max_iter = 50 * (width + 1) ** 2
    for _ in range(max_iter):
        enter = next((j for j in range(width) if cost[j] > 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(num_rows):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            raise SolverError("matching LP reported unbounded; constraint matrix is malformed")
        row = T[leave]
        piv = row[enter]
        if piv != 1:
            T[leave] = row = [x / piv for x in row]
        for i in range(num_rows):
            if i != leave:
                f = T[i][enter]
                if f:
                    Ti = T[i]
                    T[i] = [a - f * b for a, b in zip(Ti, row)]
        f = cost[enter]
        cost = [a - f * b for a, b in zip(cost, row)]
        basis[leave] = enter
    else:
        raise SolverError("simplex did not terminate within its iteration budget")
    x = [ZERO] * num_cols
    for i, b in enumerate(basis):
        if b < num_cols:
            x[b] = T[i][-1]
    y = [-cost[num_cols + i] for i in range(num_rows)]
    return x, y, -cost[-1]


@dataclass(frozen=True)
class DualityCertificate:
    nu: Fraction
    tau: Fraction
    matching: FractionalWeights
    cover: FractionalWeights

    def to_dict(self) -> dict:
        return {
            "nu": fmt(self.nu),
            "tau": fmt(self.tau),
            "matching": self.matching.to_dict(),
            "cover": self.cover.to_dict(),
        }


def _solve(H: Hypergraph) -> DualityCertificate:
    if H.num_edges == 0:
        return DualityCertificate(ZERO, ZERO, FractionalWeights("edges", ()),
                                  FractionalWeights("vertices", (ZERO,) * H.n))
    A = [[0] * H.num_edges for _ in range(H.n)]
    for j, e in enumerate(H.edges):
        for v in e:
            A[v][j] = 1
    x, y, value = _simplex_max(A, H.n, H.num_edges)
    matching = FractionalWeights("edges", tuple(x))
    cover = FractionalWeights("vertices", tuple(y))
    nu, tau = matching.value, cover.value
    if nu != value or nu != tau:
        raise SolverError(f"duality gap: primal {fmt(nu)} vs dual {fmt(tau)}")
    problems = matching.violations(H) + cover.violations(H)
    if problems:
        raise SolverError("LP witness infeasible: " + "; ".join(problems))
    return DualityCertificate(nu, tau, matching, cover)


def duality_certificate(H: Hypergraph) -> DualityCertificate:
    """Optimal fractional matching and cover with equal values.

    Feasibility of both and equality of values together certify optimality
    of each (weak duality), independently of how they were computed.
    """
    return _solve(H)


def max_fractional_matching(H: Hypergraph) -> FractionalWeights:
    return _solve(H).matching


def min_fractional_cover(H: Hypergraph) -> FractionalWeights:
    return _solve(H).cover


def nu_star(H: Hypergraph) -> Fraction:
    return _solve(H).nu


@dataclass(frozen=True)
class FractionalThreshold:
    value: int
    witness: Optional[Hypergraph]
    witness_nu: Optional[Fraction]

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "witness_nu": None if self.witness_nu is None else fmt(self.witness_nu),
        }


def exact_f_0_s(l: int, m: int, s: RationalLike, *,
                max_count: int = DEFAULT_MAX_ENUM) -> FractionalThreshold:
    """Least edge count forcing a fractional matching of size ``s`` in every
    ``l``-graph on ``[m]``.

    Adding edges never lowers the fractional matching number, so edge counts
    are scanned downward from complete and the first count with a deficient
    graph settles the answer; that graph is returned as the witness.
    """
    s = as_fraction(s)
    if l < 2:
        raise ValidationError("l must be >= 2")
    if s < 0 or s * l > m:
        raise ValidationError(f"s must lie in [0, m/l], got {fmt(s)}")
    slots = comb(m, l)
    if (1 << slots) > max_count:
        raise ResourceLimitError(
            f"exhaustive enumeration over C({m},{l}) = {slots} edge slots needs {1 << slots} "
            f"hypergraphs, cap is {max_count}", required=1 << slots, cap=max_count)
    if s == 0:
        return FractionalThreshold(0, None, None)
    all_edges = list(combinations(range(m), l))
    for count in range(slots, -1, -1):
        for chosen in combinations(all_edges, count):
            H = Hypergraph(m, l, chosen)
            nu = nu_star(H)
            if nu < s:
                return FractionalThreshold(count + 1, H, nu)
    raise AssertionError("unreachable: the empty graph has nu* = 0 < s")

"""Finitely supported nonnegative laws and exact tails of their i.i.d. sums.

Also hosts the seeded search for mean-one laws with a large tail
Pr[X_1 + ... + X_l >= l + d], which certifies lower bounds on the supremum
over all such laws.
"""
from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial, lcm
from typing import Iterable, Mapping, Optional, Sequence

from .errors import BoundViolationError, FormatError, ResourceLimitError, ValidationError
from .rational import RationalLike, as_fraction, fmt
from .thresholds import feige_conjecture_value, proved_tail_bound

log = logging.getLogger(__name__)

DEFAULT_MAX_ATOMS = 10**7

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class DiscreteDistribution:
    """Atoms ``(value, prob)`` sorted by value, values distinct, probs summing to 1."""

    atoms: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        merged: dict[Fraction, Fraction] = {}
        for v, p in self.atoms:
            v, p = as_fraction(v), as_fraction(p)
            if v < 0:
                raise ValidationError(f"negative atom value {fmt(v)}")
            if p < 0 or p > 1:
                raise ValidationError(f"atom probability {fmt(p)} outside [0, 1]")
            if p:
                merged[v] = merged.get(v, ZERO) + p
        if not merged:
            raise ValidationError("distribution has no atoms")
        total = sum(merged.values(), ZERO)
        if total != 1:
            raise ValidationError(f"probabilities sum to {fmt(total)}, not 1")
        object.__setattr__(self, "atoms", tuple(sorted(merged.items())))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[RationalLike, RationalLike]]) -> "DiscreteDistribution":
        return cls(tuple((as_fraction(v), as_fraction(p)) for v, p in pairs))

    @classmethod
    def point(cls, value: RationalLike) -> "DiscreteDistribution":
        return cls(((as_fraction(value), ONE),))

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(v for v, _ in self.atoms)

    @property
    def probs(self) -> tuple[Fraction, ...]:
        return tuple(p for _, p in self.atoms)

    @property
    def common_denominator(self) -> int:
        """Least m' with every probability of the form b_i / m'."""
        return lcm(*(p.denominator for p in self.probs))

    def scaled(self, factor: RationalLike) -> "DiscreteDistribution":
        factor = as_fraction(factor)
        if factor < 0:
            raise ValidationError("scale factor must be nonnegative")
        return DiscreteDistribution(tuple((v * factor, p) for v, p in self.atoms))

    def to_dict(self) -> dict:
        return {"atoms": [{"value": fmt(v), "prob": fmt(p)} for v, p in self.atoms]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: Mapping) -> "DiscreteDistribution":
        try:
            raw = data["atoms"]
            pairs = [(a["value"], a["prob"]) for a in raw]
        except (KeyError, TypeError) as exc:
            raise FormatError(f"distribution JSON needs atoms with value and prob: {exc}") from exc
        values = [as_fraction(v) for v, _ in pairs]
        if len(set(values)) != len(values):
            raise FormatError("duplicate atom values")
        try:
            return cls.from_pairs(pairs)
        except ValidationError as exc:
            raise FormatError(str(exc)) from exc

    @classmethod
    def from_json(cls, text: str) -> "DiscreteDistribution":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from exc


def mean(D: DiscreteDistribution) -> Fraction:
    return sum((v * p for v, p in D.atoms), ZERO)


def convolve_power(D: DiscreteDistribution, l: int,
                   max_atoms: int = DEFAULT_MAX_ATOMS) -> dict[Fraction, Fraction]:
    """Exact law of the sum of ``l`` i.i.d. copies, merging equal sums each step."""
    if l < 1:
        raise ValidationError(f"need at least one summand, got {l}")
    law = dict(D.atoms)
    for _ in range(l - 1):
        work = len(law) * len(D.atoms)
        if work > max_atoms:
            raise ResourceLimitError(
                f"convolution step needs {work} composite atoms, cap is {max_atoms}",
                required=work, cap=max_atoms)
        nxt: dict[Fraction, Fraction] = {}
        for s, ps in law.items():
            for v, pv in D.atoms:
                key = s + v
                nxt[key] = nxt.get(key, ZERO) + ps * pv
        law = nxt
    return law


def iid_tail(D: DiscreteDistribution, l: int, t: RationalLike,
             max_atoms: int = DEFAULT_MAX_ATOMS) -> Fraction:
    """Pr[X_1 + ... + X_l >= t] for i.i.d. X_i ~ D (inclusive threshold)."""
    t = as_fraction(t)
    law = convolve_power(D, l, max_atoms)
    return sum((p for s, p in law.items() if s >= t), ZERO)


def conjectured_extremizer(l: int, d: RationalLike) -> DiscreteDistribution:
    """Value l+d with probability 1/(l+d), else 0."""
    d = as_fraction(d)
    top = l + d
    if l < 1 or top <= 1:
        raise ValidationError(f"need l >= 1 and l + d > 1, got l={l}, d={fmt(d)}")
    return DiscreteDistribution(((ZERO, 1 - 1 / top), (top, 1 / top)))


def damping_transform(D: DiscreteDistribution, delta: RationalLike) -> DiscreteDistribution:
    """Mass ``delta`` at 0, otherwise X/(1 - delta): nonnegative with the same mean."""
    delta = as_fraction(delta)
    if not 0 < delta < 1:
        raise ValidationError(f"delta must lie in (0, 1), got {fmt(delta)}")
    keep = 1 - delta
    return DiscreteDistribution(((ZERO, delta),) + tuple((v / keep, p * keep) for v, p in D.atoms))


# -- search --------------------------------------------------------------------


@dataclass(frozen=True)
class SearchConfig:
    grid_points: int = 64
    refine_rounds: int = 6
    shrink: float = 0.25
    max_denominator: int = 10_000
    keep: int = 8


@dataclass(frozen=True)
class SearchResult:
    best: DiscreteDistribution
    value: Fraction
    l: int
    d: Fraction
    support_size: int
    seed: int
    evaluations: int
    findings: tuple[dict, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "l": self.l,
            "d": fmt(self.d),
            "support_size": self.support_size,
            "seed": self.seed,
            "evaluations": self.evaluations,
            "value": fmt(self.value),
            "best": self.best.to_dict(),
            "findings": list(self.findings),
        }


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class _FloatTail:
    """Float tail of an i.i.d. sum via multinomial counts; search use only."""

    def __init__(self, l: int, s: int, threshold: float):
        self.t = threshold - 1e-9
        self.terms = []
        for c in _compositions(l, s):
            coef = factorial(l)
            for x in c:
                coef //= factorial(x)
            self.terms.append((c, float(coef)))

    def __call__(self, values: Sequence[float], probs: Sequence[float]) -> float:
        total = 0.0
        for c, coef in self.terms:
            if sum(ci * v for ci, v in zip(c, values)) >= self.t:
                term = coef
                for ci, p in zip(c, probs):
                    if ci:
                        term *= p ** ci
                total += term
        return total


def _complete_probs(values: Sequence, free: Sequence):
    """Fill in the last two probabilities from sum = 1 and mean = 1.

    Works for floats and Fractions alike; returns None when infeasible.
    """
    s = len(values)
    rest_mass = 1 - sum(free)
    rest_mean = 1 - sum(p * v for p, v in zip(free, values))
    if s == 1:
        return [1] if values[0] == 1 and not free else None
    a, b = values[s - 2], values[s - 1]
    if a == b:
        return None
    pb = (rest_mean - rest_mass * a) / (b - a)
    pa = rest_mass - pb
    probs = list(free) + [pa, pb]
    if any(p < 0 for p in probs):
        return None
    return probs


def _snap(x: float, top: Fraction, max_den: int) -> Fraction:
    q = Fraction(x).limit_denominator(max_den)
    return min(max(q, ZERO), top)


def theta_lower_search(l: int, d: RationalLike, support_size: int = 2, budget: int = 2000,
                       seed: int = 0, config: SearchConfig = SearchConfig(),
                       max_atoms: int = DEFAULT_MAX_ATOMS) -> SearchResult:
    """Look for a mean-one law on [0, l+d] with a large tail at l + d.

    Candidates are ``support_size`` values plus ``support_size - 2`` free
    probabilities; the last two probabilities follow from the mass and mean
    constraints. Seeding is a full grid for two atoms and seeded random
    draws otherwise (both include the two-point extremizer); the best seeds
    are refined coordinate-wise in floating point, then snapped to small
    denominators and re-scored exactly. Only exact scores are reported.

    Raises :class:`BoundViolationError` if an exact score beats a proved
    upper bound. Beating the conjectured value is only recorded in
    ``findings``.
    """
    d = as_fraction(d)
    if support_size not in (2, 3, 4):
        raise ValidationError(f"support size must be 2, 3 or 4, got {support_size}")
    if l < 1 or d <= 0:
        raise ValidationError(f"need l >= 1 and d > 0, got l={l}, d={fmt(d)}")
    top = l + d
    if top < 1:
        raise ValidationError("support [0, l+d] cannot carry mean 1")
    rng = random.Random(seed)
    s = support_size
    top_f = float(top)
    tail = _FloatTail(l, s, top_f)
    evals = 0

    def score(params: tuple[float, ...]) -> float:
        nonlocal evals
        evals += 1
        values = sorted(min(max(v, 0.0), top_f) for v in params[:s])
        probs = _complete_probs(values, params[s:])
        if probs is None:
            return -1.0
        return tail(values, probs)

    seeds: list[tuple[float, ...]] = []
    g = config.grid_points
    # two-point extremizer, padded with copies of zero for larger supports
    seeds.append(tuple([0.0] * (s - 1) + [top_f]) + tuple([0.0] * (s - 2)))
    if s == 2:
        for i in range(g):
            for j in range(g):
                seeds.append((i / (g - 1), 1 + (top_f - 1) * j / (g - 1)))
    else:
        grid = [top_f * i / (g - 1) for i in range(g)]
        while len(seeds) < budget:
            values = sorted(rng.choice(grid) if rng.random() < 0.5 else rng.uniform(0, top_f)
                            for _ in range(s))
            w = [rng.expovariate(1.0) for _ in range(s)]
            tot = sum(w)
            seeds.append(tuple(values) + tuple(x / tot for x in w[: s - 2]))
    seeds = seeds[: max(budget, 1)] if s != 2 else seeds

    scored = sorted(((score(p), p) for p in seeds), key=lambda t: (-t[0], t[1]))
    pool = [p for val, p in scored[: config.keep] if val >= 0]

    eval_cap = evals + max(budget, 1) * len(pool)
    refined = []
    for p in pool:
        cur = list(p)
        cur_val = score(tuple(cur))
        step = top_f / (g - 1)
        for _ in range(config.refine_rounds):
            improved = True
            while improved and evals < eval_cap:
                improved = False
                for i in range(len(cur)):
                    hi = top_f if i < s else 1.0
                    for sign in (1.0, -1.0):
                        trial = cur.copy()
                        trial[i] = min(max(trial[i] + sign * step, 0.0), hi)
                        val = score(tuple(trial))
                        if val > cur_val + 1e-12:
                            cur, cur_val, improved = trial, val, True
            step *= config.shrink
        refined.append(tuple(cur))

    best: Optional[tuple[Fraction, tuple, DiscreteDistribution]] = None
    for p in list(pool) + refined:
        values = sorted(_snap(v, top, config.max_denominator) for v in p[:s])
        free = [Fraction(x).limit_denominator(config.max_denominator) for x in p[s:]]
        probs = _complete_probs(values, free)
        if probs is None:
            continue
        D = DiscreteDistribution(tuple(zip(values, probs)))
        if mean(D) != 1:
            continue
        val = iid_tail(D, l, top, max_atoms)
        key = (val, tuple(-x for x in D.values))
        if best is None or key > (best[0], tuple(-x for x in best[2].values)):
            best = (val, p, D)
    if best is None:
        raise ValidationError("no feasible mean-one candidate found")
    value, _, D = best

    bound = proved_tail_bound(l, d)
    if value > bound:
        raise BoundViolationError(
            f"search value {fmt(value)} exceeds proved bound {fmt(bound)} at l={l}, d={fmt(d)}: "
            "falsifies proven bound - implementation bug")
    findings = []
    conj = feige_conjecture_value(l, d)
    if value > conj:
        finding = {"kind": "conjecture counterexample candidate", "seed": seed, "l": l,
                   "d": fmt(d), "support_size": s, "value": fmt(value),
                   "conjectured": fmt(conj), "distribution": D.to_dict()}
        log.warning("tail %s exceeds conjectured %s at l=%d d=%s", fmt(value), fmt(conj), l, fmt(d))
        findings.append(finding)
    return SearchResult(D, value, l, d, s, seed, evals, tuple(findings))


def brute_force_tail(D: DiscreteDistribution, l: int, t: RationalLike) -> Fraction:
    """Pr[sum >= t] by walking every outcome tuple; exponential, used as an oracle."""
    t = as_fraction(t)
    total = ZERO
    for outcome in product(D.atoms, repeat=l):
        if sum((v for v, _ in outcome), ZERO) >= t:
            pr = ONE
            for _, p in outcome:
                pr *= p
            total += pr
    return total

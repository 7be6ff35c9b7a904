"""Quick invariant sweep across every module, used by ``hypermatch verify``."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable

from . import bridge, feige, fraclp, hypergraph as hg, thresholds as th
from .errors import BoundViolationError


@dataclass(frozen=True)
class Outcome:
    name: str
    passed: bool
    detail: str = ""


def _random_graph(rng: random.Random, n: int, k: int) -> hg.Hypergraph:
    slots = list(combinations(range(n), k))
    return hg.Hypergraph(n, k, tuple(e for e in slots if rng.random() < 0.5))


def _handshake(seed: int) -> bool:
    rng = random.Random(seed)
    for _ in range(20):
        H = _random_graph(rng, rng.randint(3, 7), rng.choice((2, 3)))
        if sum(hg.degree(H, (v,)) for v in range(H.n)) != H.k * H.num_edges:
            return False
    return True


def _duality(seed: int) -> bool:
    rng = random.Random(seed)
    for _ in range(25):
        H = _random_graph(rng, rng.randint(2, 7), rng.choice((2, 3)))
        cert = fraclp.duality_certificate(H)
        if cert.nu != cert.tau or not cert.matching.is_feasible(H) or not cert.cover.is_feasible(H):
            return False
        if not hg.max_matching(H).size <= cert.nu <= Fraction(H.n, H.k):
            return False
    return True


def _dirac_census(seed: int) -> bool:
    return hg.exact_m_d_s(2, 4, 1, 2).value == 2


def _extremizer(seed: int) -> bool:
    return all(
        feige.iid_tail(feige.conjectured_extremizer(l, d), l, l + d) == th.feige_conjecture_value(l, d)
        for l in range(1, 5) for d in range(1, 4)
    )


def _tail_oracle(seed: int) -> bool:
    D = feige.DiscreteDistribution.from_pairs([(0, "1/2"), ("1/2", "1/4"), (3, "1/4")])
    return all(feige.iid_tail(D, l, t) == feige.brute_force_tail(D, l, t)
               for l in (1, 2, 3, 4) for t in (0, 1, Fraction(5, 2), 4))


def _damping(seed: int) -> bool:
    D = feige.conjectured_extremizer(2, 1)
    for l in (2, 3):
        for delta in (Fraction(1, 10), Fraction(1, 100)):
            Y = feige.damping_transform(D, delta)
            lhs = feige.iid_tail(Y, l, l + 1)
            rhs = (1 - delta) ** l * feige.iid_tail(D, l, (l + 1) * (1 - delta))
            if lhs < rhs or feige.mean(Y) != feige.mean(D):
                return False
    return True


def _constants(seed: int) -> bool:
    return (th.garnett_bound() == th.main_theorem_constant() == Fraction(43, 50)
            and th.kot_bound(3, 1) == th.han_g(3, 1) == th.conjectured_md_threshold(3, 1) == Fraction(5, 9))


def _search(seed: int) -> bool:
    for l, d in ((2, 1), (3, 1), (2, 2)):
        res = feige.theta_lower_search(l, d, 2, seed=seed)
        if res.value > th.proved_tail_bound(l, d):
            raise BoundViolationError(f"search at ({l},{d}) returned {res.value}")
    return True


def _bridge(seed: int) -> bool:
    cert = bridge.dist_to_hypergraph(feige.conjectured_extremizer(2, 1), 2, 1, 2)
    return cert.ok and (cert.N, cert.N1, cert.N2) == (9, 20, 18)


def _probe(seed: int) -> bool:
    rows = bridge.equivalence_probe(2, 1, feige.conjectured_extremizer(2, 1), [1, 2, 4])
    return all(r.dominated and r.tail == Fraction(5, 9) for r in rows)


CHECKS: list[tuple[str, Callable[[int], bool]]] = [
    ("hypergraph: handshake identity", _handshake),
    ("hypergraph: exact m_1(2,4) = 2", _dirac_census),
    ("fraclp: strong duality and sandwich", _duality),
    ("thresholds: constant agreement", _constants),
    ("feige: extremizer identity", _extremizer),
    ("feige: tail oracle agreement", _tail_oracle),
    ("feige: damping inequality", _damping),
    ("feige: search within proved bounds", _search),
    ("bridge: worked certificate", _bridge),
    ("bridge: probe gap domination", _probe),
]


def run_all(seed: int = 0) -> list[Outcome]:
    """Run every check; a proved-bound violation propagates instead of being tallied."""
    out = []
    for name, fn in CHECKS:
        try:
            out.append(Outcome(name, bool(fn(seed))))
        except BoundViolationError:
            raise
        except Exception as exc:  # a crash counts as a failure, not an abort
            out.append(Outcome(name, False, f"{type(exc).__name__}: {exc}"))
    return out

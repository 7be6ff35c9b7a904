from fractions import Fraction
from itertools import combinations
from math import comb, factorial

import pytest
from hypothesis import given, settings, strategies as st

from hypermatch.bridge import (brute_force_sequences, count_heavy_sequences, count_heavy_subsets,
                               cover_to_distribution, dist_to_hypergraph, equivalence_probe,
                               weight_distribution)
from hypermatch.errors import ResourceLimitError, ValidationError
from hypermatch.feige import DiscreteDistribution, conjectured_extremizer, iid_tail
from hypermatch.fraclp import FractionalWeights
from hypermatch.hypergraph import Hypergraph

F = Fraction
THIRD = F(1, 3)
EXT21 = conjectured_extremizer(2, 1)

weights = st.lists(st.sampled_from([F(0), F(1, 4), F(1, 3), F(1, 2), F(2, 3), F(1)]), min_size=2, max_size=7)


def test_weight_distribution():
    assert weight_distribution(4, [F(1, 2)] * 4) == DiscreteDistribution.point(F(1, 2))
    assert weight_distribution(6, [THIRD] * 3 + [F(0)] * 3) == \
        DiscreteDistribution.from_pairs([(0, "1/2"), ("1/3", "1/2")])


def test_counts_examples():
    half = [F(1, 2)] * 4
    assert count_heavy_subsets(4, half, 2) == 6
    assert count_heavy_sequences(4, half, 2) == (16, 12)
    thirds = [THIRD] * 3 + [F(0)] * 3
    assert count_heavy_subsets(6, thirds, 2) == 0
    assert count_heavy_sequences(6, thirds, 2) == (0, 0)


@settings(max_examples=60, deadline=None)
@given(weights, st.integers(1, 3), st.sampled_from([F(1), F(1, 2), F(3, 4)]))
def test_count_identities(t, l, threshold):
    m = len(t)
    if l > m:
        return
    N = count_heavy_subsets(m, t, l, threshold)
    assert N == count_heavy_subsets(m, t, l, threshold, method="blocks")
    N1, N2 = count_heavy_sequences(m, t, l, threshold)
    assert N1 == brute_force_sequences(m, t, l, threshold)
    assert N2 == factorial(l) * N
    assert 0 <= N1 - N2 <= comb(l, 2) * m ** (l - 1)


class TestDistToHypergraph:
    def test_worked_instance(self):
        cert = dist_to_hypergraph(EXT21, 2, 1, 2)
        assert cert.m == 6
        assert cert.weight == (0, 0, 0, 0, 1, 1)
        # every pair touching one of the two weight-one vertices: C(6,2) - C(4,2)
        assert cert.hypergraph.num_edges == 9
        assert cert.extras["tau_star"] == 2
        assert (cert.N, cert.N1, cert.N2) == (9, 20, 18)
        assert cert.N1 - cert.N2 == 2 <= 6
        assert cert.ok

    def test_point_mass_gives_empty_graph(self):
        cert = dist_to_hypergraph(DiscreteDistribution.point(1), 3, 1, 3)
        assert cert.hypergraph.num_edges == 0
        assert (cert.N, cert.N1, cert.N2) == (0, 0, 0)
        assert cert.ok

    @pytest.mark.parametrize("D,l,d,r", [
        (EXT21, 2, 1, 1), (EXT21, 2, 1, 3), (conjectured_extremizer(3, 1), 3, 1, 2),
        (DiscreteDistribution.from_pairs([("1/2", "1/2"), ("3/2", "1/2")]), 2, 1, 3),
        (DiscreteDistribution.from_pairs([(0, "1/2"), (1, "1/4"), (3, "1/4")]), 3, 1, 2),
        (conjectured_extremizer(2, 2), 2, 2, 2),
    ])
    def test_certificate_checks(self, D, l, d, r):
        cert = dist_to_hypergraph(D, l, d, r)
        assert cert.ok, [c for c in cert.checks if not c.passed]
        # cover feasibility re-verified directly
        for e in cert.hypergraph.edges:
            assert sum(cert.weight[v] for v in e) >= 1
        assert weight_distribution(cert.m, cert.weight) == D.scaled(F(1, l + d))
        assert F(cert.N1, cert.m ** l) == iid_tail(D, l, l + d)

    def test_validation(self):
        with pytest.raises(ValidationError):
            dist_to_hypergraph(DiscreteDistribution.point(2), 2, 1, 1)
        with pytest.raises(ValidationError):
            dist_to_hypergraph(conjectured_extremizer(3, 1), 2, 1, 1)  # atom 4 > l + d
        with pytest.raises(ValidationError):
            dist_to_hypergraph(DiscreteDistribution.point(1), 3, 1, 2)  # m = 2 < l

    def test_cap(self):
        with pytest.raises(ResourceLimitError):
            dist_to_hypergraph(EXT21, 2, 1, 100, max_subsets=1000)

    def test_json(self):
        data = dist_to_hypergraph(EXT21, 2, 1, 2).to_dict()
        assert data["counts"] == {"N": 9, "N1": 20, "N2": 18}
        assert {"name", "pass", "lhs", "rhs"} == set(data["checks"][0])
        assert data["hypergraph"]["n"] == 6


class TestCoverToDistribution:
    def test_two_triangles_inapplicable(self):
        H = Hypergraph(6, 2, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        cert = cover_to_distribution(H, 1)
        assert cert.extras["nu_star"] == 3 and cert.extras["x"] == F(1, 2)
        assert cert.status == "inapplicable"
        assert cert.ok

    def test_empty_graph_vacuous(self):
        cert = cover_to_distribution(Hypergraph(5, 2), 1)
        assert cert.status == "vacuous"
        assert (cert.N, cert.N1, cert.N2) == (0, 0, 0)
        assert cert.ok

    def test_round_trip(self):
        built = dist_to_hypergraph(EXT21, 2, 1, 2)
        back = cover_to_distribution(built.hypergraph, 1)
        assert back.status == "applicable" and back.ok
        assert back.distribution == EXT21.scaled(THIRD)
        assert back.extras["scaled_threshold"] >= F(3 * 6, 7)

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_round_trip_with_explicit_cover(self, r):
        D = DiscreteDistribution.from_pairs([(0, "1/2"), (1, "1/4"), (3, "1/4")])
        built = dist_to_hypergraph(D, 3, 1, r)
        back = cover_to_distribution(built.hypergraph, 1, cover=built.weight)
        assert back.distribution == D.scaled(F(1, 4))
        assert back.ok

    def test_rejects_infeasible_cover(self):
        with pytest.raises(ValidationError):
            cover_to_distribution(Hypergraph.complete(3, 2), 1, cover=[0, 0, 1])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(3, 6), st.data())
    def test_checks_hold_on_random_graphs(self, n, data):
        slots = list(combinations(range(n), 2))
        edges = data.draw(st.lists(st.sampled_from(slots), unique=True))
        cert = cover_to_distribution(Hypergraph(n, 2, edges), data.draw(st.sampled_from([F(1, 2), 1, 2])))
        assert cert.ok


class TestProbe:
    def test_extremizer_rows(self):
        rows = equivalence_probe(2, 1, EXT21, [1, 2, 4, 8])
        assert [r.m for r in rows] == [3, 6, 12, 24]
        for r in rows:
            assert r.tail == F(5, 9)
            assert r.observed <= F(1, r.m)
            assert r.dominated

    def test_constant_distribution(self):
        rows = equivalence_probe(2, 1, DiscreteDistribution.point(1), [2, 3, 4])
        assert all(r.density == 0 and r.tail == 0 for r in rows)

    def test_l3(self):
        assert all(r.dominated for r in equivalence_probe(3, 1, conjectured_extremizer(3, 1), [1, 2]))

    def test_doubling_replication(self):
        rows = equivalence_probe(2, 1, EXT21, [1, 2, 4, 8, 16])
        for a, b in zip(rows, rows[1:]):
            assert b.density >= a.density - a.gap

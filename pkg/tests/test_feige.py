import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hypermatch.errors import FormatError, ResourceLimitError, ValidationError
from hypermatch.feige import (DiscreteDistribution, brute_force_tail, conjectured_extremizer,
                              damping_transform, iid_tail, mean, theta_lower_search)
from hypermatch.thresholds import feige_conjecture_value, markov_bound, proved_tail_bound

F = Fraction
EXT21 = DiscreteDistribution.from_pairs([(0, "2/3"), (3, "1/3")])
SYM = DiscreteDistribution.from_pairs([("1/2", "1/2"), ("3/2", "1/2")])
ONE = DiscreteDistribution.point(1)

rationals = st.fractions(min_value=0, max_value=5, max_denominator=6)


@st.composite
def distributions(draw, max_atoms=4):
    values = draw(st.lists(rationals, min_size=1, max_size=max_atoms, unique=True))
    weights = draw(st.lists(st.integers(1, 6), min_size=len(values), max_size=len(values)))
    total = sum(weights)
    return DiscreteDistribution(tuple((v, F(w, total)) for v, w in zip(values, weights)))


@st.composite
def mean_one(draw):
    """Two-point mean-one laws a < 1 < b, plus the point mass at 1."""
    a = draw(st.fractions(min_value=0, max_value=F(4, 5), max_denominator=5))
    b = draw(st.fractions(min_value=F(6, 5), max_value=8, max_denominator=5))
    p = (1 - a) / (b - a)
    return DiscreteDistribution(((a, 1 - p), (b, p)))


class TestDistribution:
    def test_mean(self):
        assert mean(ONE) == 1
        assert mean(EXT21) == 1
        assert mean(SYM) == 1

    def test_merges_and_sorts(self):
        D = DiscreteDistribution.from_pairs([(2, "1/4"), (0, "1/2"), (2, "1/4")])
        assert D.atoms == ((0, F(1, 2)), (2, F(1, 2)))

    @pytest.mark.parametrize("pairs", [[(0, "1/2")], [(-1, 1)], [(0, "3/2"), (1, "-1/2")]])
    def test_invalid(self, pairs):
        with pytest.raises(ValidationError):
            DiscreteDistribution.from_pairs(pairs)

    def test_common_denominator(self):
        D = DiscreteDistribution.from_pairs([(0, "1/2"), (1, "1/3"), (2, "1/6")])
        assert D.common_denominator == 6

    def test_json(self):
        assert json.loads(EXT21.to_json()) == {"atoms": [{"prob": "2/3", "value": "0"},
                                                         {"prob": "1/3", "value": "3"}]}
        assert DiscreteDistribution.from_json(EXT21.to_json()) == EXT21
        with pytest.raises(FormatError):
            DiscreteDistribution.from_json('{"atoms": [{"value": "1", "prob": "1/2"}, {"value": "1", "prob": "1/2"}]}')
        with pytest.raises(FormatError):
            DiscreteDistribution.from_json('{"atoms": [{"value": 0.5, "prob": "1"}]}')


class TestTail:
    def test_examples(self):
        # of the four outcome pairs only (0, 0), probability 4/9, falls short
        assert iid_tail(EXT21, 2, 3) == F(5, 9)
        assert iid_tail(ONE, 5, 6) == 0
        assert iid_tail(ONE, 5, 5) == 1

    @settings(max_examples=60, deadline=None)
    @given(distributions(), st.integers(1, 5), st.fractions(min_value=0, max_value=12, max_denominator=4))
    def test_matches_enumeration(self, D, l, t):
        if len(D.atoms) ** l <= 10**5:
            assert iid_tail(D, l, t) == brute_force_tail(D, l, t)

    @given(distributions(), st.integers(1, 4), rationals, rationals)
    def test_monotone_in_threshold(self, D, l, t1, t2):
        lo, hi = min(t1, t2), max(t1, t2)
        assert iid_tail(D, l, lo) >= iid_tail(D, l, hi)

    @settings(deadline=None)
    @given(mean_one(), st.integers(1, 5), st.fractions(min_value=F(1, 4), max_value=6, max_denominator=4))
    def test_markov(self, D, l, d):
        assert iid_tail(D, l, l + d) <= markov_bound(l, d)

    def test_cap(self):
        D = DiscreteDistribution.from_pairs([(F(1, 2**i), F(1, 2**(i + 1))) for i in range(9)] + [(0, F(1, 512))])
        with pytest.raises(ResourceLimitError):
            iid_tail(D, 6, 1, max_atoms=1000)


class TestExtremizer:
    def test_shape(self):
        assert conjectured_extremizer(2, 1) == EXT21
        assert conjectured_extremizer(1, 1) == DiscreteDistribution.from_pairs([(0, "1/2"), (2, "1/2")])

    @pytest.mark.parametrize("l", range(1, 7))
    @pytest.mark.parametrize("d", [1, 2, 3, F(1, 2), F(5, 3)])
    def test_identity(self, l, d):
        D = conjectured_extremizer(l, d)
        assert mean(D) == 1
        assert iid_tail(D, l, l + d) == feige_conjecture_value(l, d)

    def test_rejects_degenerate(self):
        with pytest.raises(ValidationError):
            conjectured_extremizer(1, 0)


class TestDamping:
    def test_point_mass(self):
        assert damping_transform(ONE, F(1, 2)) == DiscreteDistribution.from_pairs([(0, "1/2"), (2, "1/2")])

    @given(distributions(), st.fractions(min_value=F(1, 100), max_value=F(99, 100), max_denominator=100))
    def test_preserves_mean_and_support(self, D, delta):
        Y = damping_transform(D, delta)
        assert mean(Y) == mean(D)
        assert all(v >= 0 for v in Y.values)
        assert set(Y.values) <= {F(0)} | {v / (1 - delta) for v in D.values}

    @pytest.mark.parametrize("D", [EXT21, SYM, conjectured_extremizer(3, 2)])
    @pytest.mark.parametrize("l", [2, 3])
    @pytest.mark.parametrize("delta", [F(1, 10), F(1, 100)])
    @pytest.mark.parametrize("d", [1, 2])
    def test_damped_tail_inequality(self, D, l, delta, d):
        lhs = iid_tail(damping_transform(D, delta), l, l + d)
        rhs = (1 - delta) ** l * iid_tail(D, l, (l + d) * (1 - delta))
        assert lhs >= rhs

    @pytest.mark.parametrize("delta", [0, 1, F(3, 2)])
    def test_range(self, delta):
        with pytest.raises(ValidationError):
            damping_transform(ONE, delta)


class TestSearch:
    @pytest.mark.parametrize("l,d,expected", [(2, 1, F(5, 9)), (3, 1, F(37, 64)), (2, 2, F(7, 16))])
    def test_two_point_hits_extremizer(self, l, d, expected):
        res = theta_lower_search(l, d, support_size=2, seed=0)
        assert res.value == expected
        assert res.best == conjectured_extremizer(l, d)
        assert iid_tail(res.best, l, l + d) == res.value

    def test_sweep_of_two_point_family(self):
        # independent sweep over a 0..l+d grid of two-point mean-one laws at (2, 1)
        best = F(0)
        for i in range(0, 31):
            a = F(i, 30)
            for j in range(1, 61):
                b = 1 + F(2 * j, 60)
                p = (1 - a) / (b - a)
                best = max(best, iid_tail(DiscreteDistribution(((a, 1 - p), (b, p))), 2, 3))
        assert best == F(5, 9)

    def test_deterministic(self):
        a = theta_lower_search(3, 1, support_size=3, budget=300, seed=5)
        b = theta_lower_search(3, 1, support_size=3, budget=300, seed=5)
        assert a == b

    @pytest.mark.parametrize("s", [3, 4])
    def test_result_is_mean_one_on_support(self, s):
        res = theta_lower_search(2, 1, support_size=s, budget=300, seed=2)
        assert mean(res.best) == 1
        assert res.best.values[-1] <= 3 and len(res.best.atoms) <= s
        assert res.value <= proved_tail_bound(2, 1)

    def test_non_integer_d(self):
        res = theta_lower_search(2, F(1, 2), support_size=2, seed=0)
        assert res.value >= feige_conjecture_value(2, F(1, 2))
        assert res.value <= markov_bound(2, F(1, 2))

    @pytest.mark.parametrize("s", [1, 5])
    def test_support_size_range(self, s):
        with pytest.raises(ValidationError):
            theta_lower_search(2, 1, support_size=s)

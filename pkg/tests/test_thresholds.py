import csv
import io
import json
from decimal import Decimal, localcontext
from fractions import Fraction

import pytest

from hypermatch.errors import ValidationError
from hypermatch.rational import decimal_str
from hypermatch.thresholds import (GARNETT, conjectured_md_threshold, deviation_bound_report,
                                   feige_conjecture_value, garnett_bound, han_g, han_g_in_range,
                                   kot_bound, main_theorem_constant, markov_bound,
                                   matching_bound_report, proved_tail_bound)
from hypermatch.feige import conjectured_extremizer, iid_tail

F = Fraction


def test_conjectured_values():
    assert conjectured_md_threshold(3, 1) == F(5, 9)
    assert conjectured_md_threshold(3, 2) == F(1, 2)
    assert conjectured_md_threshold(2, 1) == F(1, 2)


@pytest.mark.parametrize("k", range(2, 12))
def test_conjectured_is_half_above_k_over_2(k):
    for d in range(1, k):
        if 2 * d >= k:
            assert conjectured_md_threshold(k, d) == F(1, 2)


def test_kot():
    assert kot_bound(3, 1) == F(5, 9)
    assert kot_bound(4, 2) == F(7, 16)
    assert kot_bound(4, 1) == F(23, 32)
    with pytest.raises(ValidationError):
        kot_bound(4, 3)


def test_han_g():
    assert han_g(3, 1) == F(5, 9)
    assert han_g(5, 1) == F(497, 625)
    g = han_g(18, 8)
    assert g < F(1, 2)
    assert abs(float(g) - 0.4549) < 5e-5


def test_han_g_below_half_in_stated_window():
    # g(l+d, d) < 1/2 whenever 0.73 l <= d < l, for small l
    for l in range(2, 60):
        for d in range(1, l):
            if 100 * d >= 73 * l:
                assert han_g(l + d, d) < F(1, 2), (l, d)


def test_garnett_and_main():
    assert garnett_bound() == F(43, 50)
    assert main_theorem_constant() == F(43, 50)
    assert F(43, 50) < F(7, 8) < F(12, 13)


def test_markov_and_feige():
    assert markov_bound(2, 2) == F(1, 2)
    assert markov_bound(3, 1) == F(3, 4)
    assert markov_bound(7, 1) == F(7, 8)
    assert feige_conjecture_value(2, 1) == F(5, 9)
    assert feige_conjecture_value(1, 1) == F(1, 2)
    assert feige_conjecture_value(3, 1) == F(37, 64)


@pytest.mark.parametrize("l", range(2, 30))
def test_feige_strictly_below_markov(l):
    for d in (F(1, 2), 1, 2, F(7, 3), 10):
        assert feige_conjecture_value(l, d) < markov_bound(l, d)


def test_feige_limit():
    with localcontext() as ctx:
        ctx.prec = 50
        target = 1 - Decimal(-1).exp()
        for l in list(range(10, 101)) + [250, 500, 1000]:
            v = feige_conjecture_value(l, 1)
            dec = Decimal(v.numerator) / Decimal(v.denominator)
            assert abs(dec - target) < Decimal(1) / l


def test_conjectured_below_proved_bounds():
    for k in range(2, 40):
        for d in range(1, k):
            rep = matching_bound_report(k, d)
            if rep.best is not None:
                assert conjectured_md_threshold(k, d) <= rep.best_value


class TestMatchingReport:
    def test_k6_d1(self):
        rep = matching_bound_report(6, 1)
        assert rep.best_value == min(kot_bound(6, 1), han_g(6, 1), GARNETT)
        assert rep.best == "kot"

    def test_k100_d1(self):
        rep = matching_bound_report(100, 1)
        assert rep.best == "main" and rep.best_value == F(43, 50)
        assert rep.entry("kot").value > F(98, 100) and rep.entry("han").value > F(98, 100)

    def test_k3_d1_three_way(self):
        rep = matching_bound_report(3, 1)
        assert rep.entry("conjectured").value == rep.entry("kot").value == rep.entry("han").value == F(5, 9)
        assert rep.best_value == F(5, 9)

    def test_no_upper_bounds_for_k2(self):
        rep = matching_bound_report(2, 1)
        assert rep.best is None
        assert [e.name for e in rep.entries] == ["conjectured"]

    def test_han_delta_flag(self):
        rep = matching_bound_report(7, 2)
        assert rep.entry("han_delta").status == "asymptotic-only"
        assert rep.entry("han").value == max(F(1, 2), han_g(7, 2))


class TestDeviationReport:
    def test_l10_d8(self):
        rep = deviation_bound_report(10, 8)
        assert rep.best == "han"
        assert rep.best_value == han_g(18, 8)
        assert rep.best_value < F(10, 18) < GARNETT

    def test_l10_d1(self):
        assert deviation_bound_report(10, 1).best_value == F(43, 50)

    def test_l1_d1(self):
        rep = deviation_bound_report(1, 1)
        assert rep.entry("markov").value == rep.entry("feige").value == F(1, 2)
        assert rep.entry("han").status == "out-of-range"

    def test_g_out_of_range_is_not_a_bound(self):
        # the two-point extremal law beats g(4,2), so g may not be used when d >= l
        assert not han_g_in_range(4, 2)
        assert iid_tail(conjectured_extremizer(2, 2), 2, 4) == F(7, 16) > han_g(4, 2)
        rep = deviation_bound_report(2, 2)
        assert rep.entry("han").status == "out-of-range"
        assert rep.best_value == F(1, 2)
        assert proved_tail_bound(2, 2) == F(1, 2)

    def test_feige_is_conjectural(self):
        assert deviation_bound_report(4, 2).entry("feige").status == "conjectural"

    def test_emitters(self):
        rep = deviation_bound_report(10, 8)
        data = json.loads(rep.to_json())
        assert data["best"] == "han"
        han = next(e for e in data["entries"] if e["name"] == "han")
        assert han["value"] == "180470100065/396718580736"
        assert han["decimal"] == "0.454907102486"
        assert set(han) == {"name", "value", "decimal", "provenance", "status"}
        rows = list(csv.DictReader(io.StringIO(rep.to_csv())))
        assert [r["name"] for r in rows] == ["markov", "garnett", "han", "feige"]
        assert "best: han" in rep.to_table()

    def test_values_in_unit_interval(self):
        for l in range(1, 20):
            for d in range(1, 20):
                for e in deviation_bound_report(l, d).entries:
                    assert 0 <= e.value <= 1


def test_decimal_half_even():
    assert decimal_str(F(1, 8), 2) == "0.12"
    assert decimal_str(F(3, 8), 2) == "0.38"
    assert decimal_str(F(5, 9)) == "0.555555555556"

"""Closed-form threshold constants and side-by-side bound reports.

All evaluators return exact ``Fraction`` values; decimals are only a display
convenience.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Optional

from .errors import ValidationError
from .rational import DEFAULT_PRECISION, RationalLike, as_fraction, decimal_str, fmt

Status = Literal["proved", "conjectural", "lower-bound", "asymptotic-only", "out-of-range"]

GARNETT = Fraction(43, 50)
FEIGE_ORIGINAL = Fraction(12, 13)
HE_ZHANG_ZHANG = Fraction(7, 8)
MAIN_THEOREM_GAP = Fraction(7, 50)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValidationError(msg)


def conjectured_md_threshold(k: int, d: int) -> Fraction:
    """max{1/2, 1 - (1 - 1/k)^(k-d)}: the conjectured minimum d-degree density."""
    _require(k >= 2 and 1 <= d <= k - 1, f"need k >= 2 and 1 <= d <= k-1, got k={k}, d={d}")
    return max(Fraction(1, 2), 1 - (1 - Fraction(1, k)) ** (k - d))


def fractional_conjectured_threshold(k: int, d: int) -> Fraction:
    """1 - (1 - 1/k)^(k-d), the conjectured fractional threshold (no parity term)."""
    _require(k >= 2 and 1 <= d <= k - 1, f"need k >= 2 and 1 <= d <= k-1, got k={k}, d={d}")
    return 1 - (1 - Fraction(1, k)) ** (k - d)


def kot_bound(k: int, d: int) -> Fraction:
    """(k-d)/k - (k-d-1)/k^(k-d), valid for k >= 3 and 1 <= d <= k/2."""
    _require(k >= 3 and 1 <= d and 2 * d <= k, f"need k >= 3 and 1 <= d <= k/2, got k={k}, d={d}")
    return Fraction(k - d, k) - Fraction(k - d - 1, k ** (k - d))


def han_g(k: int, d: int) -> Fraction:
    """g(k, d) = 1 - (1 - (k-d)(k-2d-1)/(k-1)^2) (1 - 1/k)^(k-d).

    Proved as a threshold only for k >= 3 and 1 <= d < k/2; any k >= 2,
    d >= 1 with d < k is evaluated (see :func:`han_g_in_range`).
    """
    _require(k >= 2 and 1 <= d < k, f"need k >= 2 and 1 <= d < k, got k={k}, d={d}")
    return 1 - (1 - Fraction((k - d) * (k - 2 * d - 1), (k - 1) ** 2)) * (1 - Fraction(1, k)) ** (k - d)


def han_g_in_range(k: int, d: int) -> bool:
    return k >= 3 and 1 <= d and 2 * d < k


def garnett_bound() -> Fraction:
    return GARNETT


def main_theorem_constant() -> Fraction:
    return 1 - MAIN_THEOREM_GAP


def markov_bound(l: int, d: RationalLike) -> Fraction:
    """l/(l+d): Markov's inequality for a sum of l mean-one nonnegative variables."""
    d = as_fraction(d)
    _require(l >= 1 and d > 0, f"need l >= 1 and d > 0, got l={l}, d={fmt(d)}")
    return Fraction(l) / (l + d)


def feige_conjecture_value(l: int, d: RationalLike) -> Fraction:
    """1 - (1 - 1/(l+d))^l, the tail of the conjectured extremal law."""
    d = as_fraction(d)
    _require(l >= 1 and d > 0, f"need l >= 1 and d > 0, got l={l}, d={fmt(d)}")
    return 1 - (1 - 1 / (l + d)) ** l


@dataclass(frozen=True)
class BoundEntry:
    name: str
    value: Fraction
    provenance: str
    status: Status


@dataclass(frozen=True)
class BoundReport:
    params: dict
    entries: tuple[BoundEntry, ...]
    best: Optional[str] = field(default=None)

    @classmethod
    def build(cls, params: dict, entries: list[BoundEntry]) -> "BoundReport":
        for e in entries:
            if not 0 <= e.value <= 1:
                raise ValidationError(f"bound {e.name} = {fmt(e.value)} outside [0, 1]")
        proved = [e for e in entries if e.status == "proved"]
        best = min(proved, key=lambda e: e.value).name if proved else None
        return cls(dict(params), tuple(entries), best)

    def entry(self, name: str) -> BoundEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    @property
    def best_value(self) -> Optional[Fraction]:
        return None if self.best is None else self.entry(self.best).value

    def to_dict(self, precision: int = DEFAULT_PRECISION) -> dict:
        return {
            "params": self.params,
            "entries": [
                {"name": e.name, "value": fmt(e.value), "decimal": decimal_str(e.value, precision),
                 "provenance": e.provenance, "status": e.status}
                for e in self.entries
            ],
            "best": self.best,
        }

    def to_json(self, precision: int = DEFAULT_PRECISION) -> str:
        return json.dumps(self.to_dict(precision), sort_keys=True, indent=2)

    def to_csv(self, precision: int = DEFAULT_PRECISION) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "value", "decimal", "provenance", "status", "best"])
        for e in self.entries:
            w.writerow([e.name, fmt(e.value), decimal_str(e.value, precision), e.provenance,
                        e.status, int(e.name == self.best)])
        return buf.getvalue()

    def to_table(self, precision: int = DEFAULT_PRECISION) -> str:
        rows = [(e.name, fmt(e.value), decimal_str(e.value, precision), e.status, e.provenance)
                for e in self.entries]
        head = ("name", "value", "decimal", "status", "provenance")
        widths = [max(len(str(r[i])) for r in rows + [head]) for i in range(len(head))]
        line = lambda r: "  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip()
        params = ", ".join(f"{k}={v}" for k, v in self.params.items())
        out = [f"# {params}", line(head)] + [line(r) for r in rows] + [f"best: {self.best}"]
        return "\n".join(out) + "\n"


def matching_bound_report(k: int, d: int) -> BoundReport:
    """Every known constant for the perfect-matching minimum d-degree threshold."""
    _require(k >= 2 and 1 <= d <= k - 1, f"need k >= 2 and 1 <= d <= k-1, got k={k}, d={d}")
    entries = [BoundEntry("conjectured", conjectured_md_threshold(k, d),
                          "Dirac-type matching conjecture; explicit constructions", "lower-bound")]
    if k >= 3 and 2 * d < k:
        entries.append(BoundEntry("kot", kot_bound(k, d), "Kuhn-Osthus-Townsend", "proved"))
    elif k >= 3 and 2 * d == k:
        # at d = k/2 the constant sits below the parity construction's 1/2
        entries.append(BoundEntry("kot", kot_bound(k, d),
                                  "Kuhn-Osthus-Townsend at d = k/2; below the 1/2 lower bound",
                                  "out-of-range"))
    if han_g_in_range(k, d):
        g = han_g(k, d)
        entries.append(BoundEntry("han", max(Fraction(1, 2), g),
                                  "Han: max{delta(n,k,d)/C(n-d,k-d) -> 1/2, g(k,d)}", "proved"))
        entries.append(BoundEntry("han_delta", Fraction(1, 2),
                                  "Han: delta(n,k,d) leading constant", "asymptotic-only"))
    if k >= 3 and 2 * d <= k:
        entries.append(BoundEntry("main", main_theorem_constant(),
                                  "1 - 7/50 via Feige-type tail bound (Garnett)", "proved"))
    return BoundReport.build({"k": k, "d": d}, entries)


def deviation_bound_report(l: int, d: int) -> BoundReport:
    """Upper bounds on Pr[X_1 + ... + X_l >= l + d] for i.i.d. mean-one X_i >= 0.

    g(l+d, d) is always listed, but only counts as proved inside the range
    of Han's theorem (d < l, hence l + d >= 3 and d < (l+d)/2).
    """
    _require(l >= 1 and d >= 1, f"need l >= 1 and d >= 1, got l={l}, d={d}")
    entries = [
        BoundEntry("markov", markov_bound(l, d), "Markov's inequality", "proved"),
        BoundEntry("garnett", GARNETT, "Garnett", "proved"),
    ]
    k = l + d
    g = han_g(k, d)
    if han_g_in_range(k, d):
        entries.append(BoundEntry("han", g, "g(l+d,d) via Han and the matching/tail equivalence",
                                  "proved"))
    else:
        entries.append(BoundEntry("han", min(max(g, Fraction(0)), Fraction(1)),
                                  f"g(l+d,d) evaluated outside Han's range (needs d < l); raw {fmt(g)}",
                                  "out-of-range"))
    entries.append(BoundEntry("feige", feige_conjecture_value(l, d), "Feige's conjecture",
                              "conjectural"))
    return BoundReport.build({"l": l, "d": d}, entries)


def proved_tail_bound(l: int, d: RationalLike) -> Fraction:
    """Smallest proved upper bound on Pr[sum >= l + d] (Garnett needs d >= 1, Han needs integer d < l)."""
    d = as_fraction(d)
    bound = markov_bound(l, d)
    if d >= 1:
        bound = min(bound, GARNETT)
    if d.denominator == 1 and han_g_in_range(l + int(d), int(d)):
        bound = min(bound, han_g(l + int(d), int(d)))
    return bound

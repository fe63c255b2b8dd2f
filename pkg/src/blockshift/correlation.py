"""Weighted averages along sparse iterates, and the end-to-end
counterexample demo: schedule for the squares, realize the mu-derived
target, average mu(n) * x(n^2).

Averages are accumulated as integer numerator / denominator pairs and
reported as exact fractions; division to floats happens only in the
serializers.  When the realized target is a deterministic function of
the weight, the average collapses to a sieve count over n, and the
report checks that identity with integer arithmetic (no tolerance).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import InvalidParameterError, WindowRangeError
from .mobius import MobiusTable, mobius_sieve
from .realization import TargetSequence, realize, verify_realization
from .schedule import Schedule, build_schedule
from .sparse import SparseSetSpec
from .words import Alphabet, PartialWindow, block_interval


@dataclass(frozen=True)
class WeightTable:
    """rho(n) plus the numeric valuation of each alphabet symbol."""

    description: str
    values: dict[str, int]
    weights: tuple[int, ...] | None = None
    fn: Callable[[int], int] | None = None

    def weight(self, n: int) -> int:
        if self.weights is not None:
            if not 1 <= n <= len(self.weights):
                raise InvalidParameterError(
                    f"weight table {self.description!r} covers 1..{len(self.weights)}"
                )
            return self.weights[n - 1]
        return self.fn(n)

    @classmethod
    def mobius(cls, table: MobiusTable, values: dict[str, int]) -> "WeightTable":
        return cls("mobius", dict(values), fn=table.mu)

    @classmethod
    def constant_zero(cls, values: dict[str, int]) -> "WeightTable":
        return cls("zero", dict(values), fn=lambda n: 0)

    @classmethod
    def from_csv(cls, path, values: dict[str, int]) -> "WeightTable":
        """CSV rows "n,rho(n)" for n = 1..N, in order."""
        weights = []
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            n_str, w_str = line.split(",")
            if int(n_str) != len(weights) + 1:
                raise InvalidParameterError(f"{path}:{lineno}: rows must enumerate n = 1,2,...")
            weights.append(int(w_str))
        return cls(f"csv:{path}", dict(values), weights=tuple(weights))


@dataclass(frozen=True)
class CorrelationReport:
    weight: str
    iterates: str
    count: int
    rows: tuple[tuple[int, Fraction], ...]
    exact_identity: bool | None = None

    def final(self) -> Fraction:
        return self.rows[-1][1]

    def as_dict(self) -> dict:
        return {
            "weight": self.weight,
            "iterates": self.iterates,
            "N": self.count,
            "exact_identity": self.exact_identity,
            "averages": [
                {"N": n, "numerator": f.numerator, "denominator": f.denominator,
                 "value": float(f)}
                for n, f in self.rows
            ],
        }


def _ladder(n: int) -> list[int]:
    out = []
    p = 1
    while p < n:
        out.append(p)
        p *= 2
    out.append(n)
    return out


def correlation_average(x: PartialWindow, rho: WeightTable, p: SparseSetSpec,
                        count: int, alphabet: Alphabet,
                        u: TargetSequence | None = None) -> CorrelationReport:
    """A(N') = (1/N') sum of rho(n) * val(x(p(n))) over a power-of-two ladder.

    When the target u is supplied, also verifies the exact identity
    A(N') = (1/N') sum of rho(n) * val(u(n)) at every ladder point.
    """
    if count < 1:
        raise InvalidParameterError("N must be >= 1")
    if p.first_index > 1:
        raise InvalidParameterError("iterate rule must be defined from n = 1")
    val = np.empty(alphabet.size, dtype=np.int64)
    for i, ch in enumerate(alphabet.symbols):
        if ch not in rho.values:
            raise InvalidParameterError(f"weight table has no value for symbol {ch!r}")
        val[i] = rho.values[ch]

    ladder = set(_ladder(count))
    rows = []
    running = 0
    exact = None if u is None else True
    for n in range(1, count + 1):
        s = p.term(n)
        if not x.start <= s <= x.end:
            raise WindowRangeError(
                f"p({n}) = {s} falls outside the window {x.interval()}"
            )
        cell = x[s]
        if cell >= alphabet.size:
            raise InvalidParameterError(f"x({s}) is undefined ('*')")
        w = rho.weight(n)
        term = w * int(val[cell])
        running += term
        if u is not None and term != w * int(val[u.symbol_index(n)]):
            exact = False
        if n in ladder:
            rows.append((n, Fraction(running, n)))
    return CorrelationReport(rho.description, p.describe(), count, tuple(rows), exact)


@dataclass(frozen=True)
class SarnakDemo:
    report: CorrelationReport
    window: PartialWindow
    schedule: Schedule
    provenance: dict


def sarnak_demo(profile: str = "faithful", depth: int = 2, count: int = 832,
                alphabet: Alphabet | None = None, seed: int = 0) -> SarnakDemo:
    """Full counterexample pipeline along p(n) = n^2 with rho = mu.

    Faithful profile uses the binary indicator target (averages tend to
    the density of mu = 1); the fast profile uses the three-symbol sign
    target, whose averages tend to the squarefree density 6/pi^2.
    """
    if profile not in ("faithful", "fast"):
        raise InvalidParameterError(f"unknown profile {profile!r}")
    if alphabet is None:
        alphabet = Alphabet("01") if profile == "faithful" else Alphabet("0+-")
    squares = SparseSetSpec.squares()
    sched = build_schedule(alphabet, squares, depth, profile=profile, seed=seed)

    need = count * count
    m_top = sched.m(depth)
    central = block_interval(0, m_top)
    window = None if need <= central[1] else (1, need)

    if profile == "faithful":
        if alphabet.size != 2:
            raise InvalidParameterError("faithful demo expects a binary alphabet")
        u = TargetSequence.mu_indicator(alphabet)
        values = {alphabet.symbols[0]: 0, alphabet.symbols[1]: 1}
    else:
        if alphabet.size < 3:
            raise InvalidParameterError("fast demo expects a 3-symbol alphabet")
        u = TargetSequence.mu_sign(alphabet)
        values = {alphabet.symbols[0]: 0, alphabet.symbols[1]: 1,
                  alphabet.symbols[2]: -1}
        values.update({ch: 0 for ch in alphabet.symbols[3:]})

    x = realize(u, sched, depth, window=window)
    table = mobius_sieve(max(count, 1 << 12))
    rho = WeightTable.mobius(table, values)
    report = correlation_average(x, rho, squares, count, alphabet, u=u)

    realization = verify_realization(x, u, squares)
    from .analysis import minimality_witnesses, window_admissibility_report

    admissibility = window_admissibility_report(x, sched, depth)
    minimality = None
    if profile == "faithful" and x.is_fully_defined():
        minimality = [
            f"{name}:{status}" for name, status, _ in
            minimality_witnesses(x, sched, depth).rows()
        ]

    q_count = table.squarefree_count(count)
    mu_one = (q_count + table.mertens(count)) // 2
    provenance = {
        "profile": profile,
        "depth": depth,
        "seed": seed,
        "alphabet": alphabet.symbols,
        "m": [sched.m(k) for k in range(sched.depth + 1)],
        "cards": [sched.level(k).card.describe() for k in range(sched.depth + 1)],
        "verified_range": list(sched.verified_range),
        "window": [x.start, x.end],
        "realization": realization.describe(),
        "admissibility": admissibility.summary(),
        "admissibility_ok": admissibility.ok,
        "minimality": minimality,
        "exact_identity": report.exact_identity,
        "sieve": {"N": count, "squarefree": q_count, "mertens": table.mertens(count),
                  "mu_one_count": mu_one},
        "final_average": [report.final().numerator, report.final().denominator],
    }
    return SarnakDemo(report, x, sched, provenance)

"""Sparse subsets of the positive integers: enumeration, sliding-window
maxima, and the block-length sparsity test that gates the construction.

Rule-backed sets are enumerated bit-exactly: the power kind keeps its
exponent as a rational and takes integer roots, and the n*ln(n) kind
recomputes near-boundary values at high precision before flooring.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import IncompleteDataError, InvalidParameterError

# floor(n*ln n) values closer than this to an integer are recomputed with mpmath
_NLOGN_GUARD = 1e-9


def kth_root_floor(x: int, k: int) -> int:
    if x < 0 or k < 1:
        raise InvalidParameterError("kth_root_floor needs x >= 0, k >= 1")
    if x == 0:
        return 0
    r = max(1, int(round(x ** (1.0 / k))))
    while r > 1 and r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def _nlogn(n: int) -> int:
    v = n * math.log(n)
    f = math.floor(v)
    if min(v - f, f + 1 - v) < _NLOGN_GUARD:
        import mpmath

        with mpmath.workdps(40):
            return int(mpmath.floor(mpmath.mpf(n) * mpmath.log(n)))
    return int(f)


_KINDS = ("explicit", "monomial", "power", "nlogn", "evens")


@dataclass(frozen=True)
class SparseSetSpec:
    """A strictly increasing set S = {s_1 < s_2 < ...} of positive integers.

    kind selects the rule; explicit carries the full list.  An explicit
    list is the complete set unless ``horizon`` marks it as a prefix
    enumerated only through that bound, in which case queries beyond the
    horizon raise IncompleteDataError.
    """

    kind: str
    degree: int | None = None
    gamma: Fraction | None = None
    values: tuple[int, ...] | None = None
    horizon: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidParameterError(f"unknown sparse-set kind {self.kind!r}")
        if self.kind == "monomial" and (self.degree is None or self.degree < 1):
            raise InvalidParameterError("monomial kind needs degree >= 1")
        if self.kind == "power":
            if self.gamma is None or self.gamma <= 1:
                raise InvalidParameterError("power kind needs rational gamma > 1")
        if self.kind == "explicit":
            v = self.values
            if not v:
                raise InvalidParameterError("explicit kind needs a nonempty list")
            if v[0] < 1 or any(a >= b for a, b in zip(v, v[1:])):
                raise InvalidParameterError("explicit list must be strictly increasing and positive")
            if self.horizon is not None and self.horizon < v[-1]:
                raise InvalidParameterError("horizon below the last listed element")

    # --- constructors -------------------------------------------------

    @classmethod
    def monomial(cls, degree: int) -> "SparseSetSpec":
        return cls(kind="monomial", degree=degree)

    @classmethod
    def squares(cls) -> "SparseSetSpec":
        return cls.monomial(2)

    @classmethod
    def power(cls, gamma: Fraction | str | float) -> "SparseSetSpec":
        return cls(kind="power", gamma=Fraction(gamma))

    @classmethod
    def nlogn(cls) -> "SparseSetSpec":
        return cls(kind="nlogn")

    @classmethod
    def evens(cls) -> "SparseSetSpec":
        return cls(kind="evens")

    @classmethod
    def explicit(cls, values, horizon: int | None = None) -> "SparseSetSpec":
        return cls(kind="explicit", values=tuple(int(v) for v in values), horizon=horizon)

    @classmethod
    def from_file(cls, path) -> "SparseSetSpec":
        """One positive integer per line; '#' starts a comment.

        A ``# horizon: N`` comment marks the list as a prefix enumerated
        through N only.
        """
        values, horizon = [], None
        for raw in Path(path).read_text().splitlines():
            line = raw.strip()
            if line.startswith("#"):
                body = line[1:].strip()
                if body.lower().startswith("horizon:"):
                    horizon = int(body.split(":", 1)[1])
                continue
            if line:
                values.append(int(line))
        return cls.explicit(values, horizon=horizon)

    @classmethod
    def parse(cls, text: str) -> "SparseSetSpec":
        """Parse the CLI/header spelling of a sparse set."""
        t = text.strip()
        if t == "squares":
            return cls.squares()
        if t == "evens":
            return cls.evens()
        if t == "nlogn":
            return cls.nlogn()
        if t.startswith("monomial:"):
            return cls.monomial(int(t.split(":", 1)[1]))
        if t.startswith("power:"):
            return cls.power(Fraction(t.split(":", 1)[1]))
        if t.startswith("file:"):
            return cls.from_file(t.split(":", 1)[1])
        if t.startswith("list:"):
            return cls.explicit(int(v) for v in t.split(":", 1)[1].split(","))
        raise InvalidParameterError(f"cannot parse sparse-set spec {text!r}")

    def describe(self) -> str:
        if self.kind == "monomial":
            return "squares" if self.degree == 2 else f"monomial:{self.degree}"
        if self.kind == "power":
            return f"power:{self.gamma}"
        if self.kind == "explicit":
            return "list:" + ",".join(str(v) for v in self.values)
        return self.kind

    # --- enumeration --------------------------------------------------

    @property
    def first_index(self) -> int:
        return 2 if self.kind == "nlogn" else 1

    def term(self, n: int) -> int:
        """s_n; defined for n >= first_index (explicit: n <= len(values))."""
        if n < self.first_index:
            raise InvalidParameterError(f"index {n} below first index {self.first_index}")
        if self.kind == "explicit":
            if n > len(self.values):
                raise IncompleteDataError(
                    f"explicit list has {len(self.values)} elements, index {n} requested"
                )
            return self.values[n - 1]
        if self.kind == "monomial":
            return n**self.degree
        if self.kind == "power":
            return kth_root_floor(n**self.gamma.numerator, self.gamma.denominator)
        if self.kind == "nlogn":
            return _nlogn(n)
        return 2 * n  # evens

    def _first_index_with_term_at_least(self, x: int) -> int:
        lo = self.first_index
        if self.term(lo) >= x:
            return lo
        hi = lo + 1
        while self.term(hi) < x:
            lo = hi
            hi *= 2
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if self.term(mid) >= x:
                hi = mid
            else:
                lo = mid
        return hi

    def count_in(self, interval: tuple[int, int]) -> int:
        """|S ∩ interval| by rule inversion (O(log) for rule kinds)."""
        lo, hi = interval
        lo = max(int(lo), 1)
        hi = int(hi)
        if hi < lo:
            return 0
        if self.kind == "explicit":
            if self.horizon is not None and hi > self.horizon:
                raise IncompleteDataError(
                    f"explicit list only enumerated through {self.horizon}, "
                    f"interval reaches {hi}"
                )
            return bisect.bisect_right(self.values, hi) - bisect.bisect_left(self.values, lo)
        return self._first_index_with_term_at_least(hi + 1) - self._first_index_with_term_at_least(lo)

    def elements_in(self, interval: tuple[int, int]) -> list[tuple[int, int]]:
        """All (n, s_n) with s_n in the inclusive interval; empty below 1."""
        lo, hi = interval
        lo = max(int(lo), 1)
        hi = int(hi)
        if hi < lo:
            return []
        if self.kind == "explicit":
            if self.horizon is not None and hi > self.horizon:
                raise IncompleteDataError(
                    f"explicit list only enumerated through {self.horizon}, "
                    f"interval reaches {hi}"
                )
            i = bisect.bisect_left(self.values, lo)
            j = bisect.bisect_right(self.values, hi)
            return [(n + 1, self.values[n]) for n in range(i, j)]
        n = self._first_index_with_term_at_least(lo)
        out = []
        while True:
            s = self.term(n)
            if s > hi:
                break
            out.append((n, s))
            n += 1
        return out

    # --- window statistics ---------------------------------------------

    def max_window_count(
        self,
        window_len: int,
        rng: tuple[int, int],
        *,
        stop_at: int | None = None,
    ) -> tuple[int, tuple[int, int]]:
        """Largest |S ∩ I| over length-L subintervals I of rng, with a witness.

        Sliding two-pointer scan over the elements inside rng.  When
        stop_at is given, the scan may stop early once the count reaches
        it (the certified answer is then "at least stop_at").
        """
        lo, hi = int(rng[0]), int(rng[1])
        if window_len < 1:
            raise InvalidParameterError("window length must be positive")
        if hi - lo + 1 < window_len:
            raise InvalidParameterError(
                f"range [{lo},{hi}] shorter than window length {window_len}"
            )
        pos = [s for _, s in self.elements_in((lo, hi))]
        best, witness = 0, (lo, lo + window_len - 1)
        i = 0
        for j in range(len(pos)):
            while pos[j] - pos[i] >= window_len:
                i += 1
            if j - i + 1 > best:
                best = j - i + 1
                left = min(pos[i], hi - window_len + 1)
                witness = (left, left + window_len - 1)
                if stop_at is not None and best >= stop_at:
                    return best, witness
        return best, witness

    def sparsity_report(
        self, window_len: int, m_k: int, rng: tuple[int, int]
    ) -> tuple[bool, int, int, tuple[int, int]]:
        """(ok, max count, threshold, witness) for |S ∩ I| < L/(3 m_k)."""
        if m_k < 1:
            raise InvalidParameterError("m_k must be positive")
        if window_len % (3 * m_k) != 0:
            raise InvalidParameterError(
                f"window length {window_len} is not a multiple of 3*{m_k}"
            )
        threshold = window_len // (3 * m_k)
        count, witness = self.max_window_count(window_len, rng, stop_at=threshold)
        return count < threshold, count, threshold, witness

    def sparsity_ok(self, window_len: int, m_k: int, rng: tuple[int, int]) -> bool:
        return self.sparsity_report(window_len, m_k, rng)[0]

    def density_estimate(self, window_len: int, rng: tuple[int, int]) -> Fraction:
        count, _ = self.max_window_count(window_len, rng)
        return Fraction(count, window_len)


# Spec-facing functional aliases.

def elements_in(spec: SparseSetSpec, interval):
    return spec.elements_in(interval)


def max_window_count(spec: SparseSetSpec, window_len: int, rng) -> int:
    return spec.max_window_count(window_len, rng)[0]


def sparsity_ok(spec: SparseSetSpec, window_len: int, m_k: int, rng) -> bool:
    return spec.sparsity_ok(window_len, m_k, rng)


def density_estimate(spec: SparseSetSpec, window_len: int, rng) -> Fraction:
    return spec.density_estimate(window_len, rng)

"""Analyzers: distinct-subword profiles, the entropy bound chain,
minimality witnesses, and the positive-density converse bound.

Everything here is exact.  Subword counting uses integer position codes
(no hashing) with a fixed-width row fallback when codes would overflow;
reported counts are window lower bounds on the language size, since a
finite window can undercount straddling words.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidParameterError
from .schedule import Schedule
from .words import STAR, PartialWindow


# --- subword complexity -------------------------------------------------


@dataclass(frozen=True)
class ComplexityReport:
    window_length: int
    counts: dict[int, int]
    aligned: dict[int, int]
    source: str = "window lower bound on |L_n|"


def complexity_profile(x: PartialWindow, n_max: int,
                       aligned_lengths=()) -> ComplexityReport:
    """Exact distinct-subword counts for every length up to n_max.

    Counts over all positions are window lower bounds on the language
    size (straddling words can be undercounted); for each requested
    block length the grid-aligned distinct count is reported separately.
    """
    if not x.is_fully_defined():
        raise InvalidParameterError("window contains '*' cells")
    if n_max < 1 or n_max > len(x):
        raise InvalidParameterError(f"n_max {n_max} outside [1,{len(x)}]")
    base = int(x.cells.max()) + 1
    counts: dict[int, int] = {}
    codes = None
    for n in range(1, n_max + 1):
        if base**n < 2**62:
            if codes is None:
                codes = x.cells.astype(np.int64)
            else:
                codes = codes[:-1] * base + x.cells[n - 1:]
            counts[n] = int(np.unique(codes).size)
        else:
            view = np.lib.stride_tricks.sliding_window_view(x.cells, n)
            counts[n] = int(np.unique(view, axis=0).shape[0])
    aligned = {
        int(m): len(aligned_block_census(x, int(m))) for m in aligned_lengths
    }
    return ComplexityReport(len(x), counts, aligned)


def aligned_block_census(x: PartialWindow, m: int) -> Counter:
    """Multiset of the aligned length-m blocks of a block-aligned window."""
    h = (m - 1) // 2
    if (x.start + h) % m != 0 or len(x) % m != 0:
        raise InvalidParameterError(f"window {x.interval()} not aligned to {m}-blocks")
    rows = x.cells.reshape(len(x) // m, m)
    return Counter(row.tobytes() for row in rows)


# --- entropy chain ------------------------------------------------------


def corrected_constant(schedule: Schedule) -> float:
    """C = max(1, (4/3) b_1) with b_1 = ln|A_1|/m_1."""
    b1 = schedule.level(1).card.log_upper / schedule.m(1)
    return max(1.0, (4.0 / 3.0) * b1)


def entropy_bound_series(schedule: Schedule, k_max: int) -> list[tuple[int, float]]:
    """bound_k = (ln m_k)/m_k + 2 C (3/4)^k, frozen at the built depth.

    Beyond the built depth the first term keeps the depth-D value, a
    valid majorant because m grows at least threefold per level and
    ln(x)/x decreases from there.
    """
    if k_max < 1:
        raise InvalidParameterError("k_max must be >= 1")
    C = corrected_constant(schedule)
    D = schedule.depth
    out = []
    for k in range(1, k_max + 1):
        m = schedule.m(min(k, D))
        out.append((k, math.log(m) / m + 2.0 * C * (3.0 / 4.0) ** k))
    return out


def decay_report(schedule: Schedule) -> dict:
    """b_k = ln|A_k|/m_k against the corrected constant and the naive one."""
    C = corrected_constant(schedule)
    paper_C = math.log(schedule.alphabet.size)
    rows = []
    for k in range(1, schedule.depth + 1):
        b_k = schedule.level(k).card.log_upper / schedule.m(k)
        rows.append(
            {
                "k": k,
                "b_k": b_k,
                "corrected_bound": C * (3.0 / 4.0) ** k,
                "corrected_holds": b_k <= C * (3.0 / 4.0) ** k,
                "naive_bound": paper_C * (3.0 / 4.0) ** k,
                "naive_holds": b_k <= paper_C * (3.0 / 4.0) ** k,
            }
        )
    return {"C_corrected": C, "C_naive": paper_C, "levels": rows}


# --- window admissibility (vectorized) ----------------------------------


@dataclass(frozen=True)
class LevelCheck:
    level: int
    blocks: int
    defined_blocks: int
    required_share: int
    min_pillar_share: int | None
    pillar_total: int
    membership: str      # ok | fail | waived | unverifiable
    every_word: str      # ok | fail | waived | unverifiable
    covered_words: int | None
    detail: str = ""

    @property
    def ok(self) -> bool:
        if self.membership == "fail" or self.every_word == "fail":
            return False
        if self.defined_blocks and self.min_pillar_share is not None:
            return self.min_pillar_share >= self.required_share
        return True


@dataclass(frozen=True)
class WindowAdmissibilityReport:
    checks: tuple[LevelCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def summary(self) -> str:
        parts = []
        for c in self.checks:
            parts.append(
                f"level {c.level}: {c.defined_blocks}/{c.blocks} defined, "
                f"share>={c.min_pillar_share}/{c.required_share}, "
                f"membership={c.membership}, every-word={c.every_word}"
                + (f" [{c.detail}]" if c.detail else "")
            )
        return "; ".join(parts)


def _row_codes(rows: np.ndarray, base: int):
    """Exact integer codes of fixed-width rows, or None when they overflow."""
    width = rows.shape[1]
    if base ** width >= 2**62:
        return None
    powers = (base ** np.arange(width - 1, -1, -1, dtype=np.int64))
    return rows.astype(np.int64) @ powers


def window_admissibility_report(x: PartialWindow, schedule: Schedule,
                                depth: int) -> WindowAdmissibilityReport:
    """Per-level admissibility of every fully defined block of the window.

    Faithful profile checks block structure, pillar share, sub-block
    membership, and every-word coverage; fast profile checks structure
    and pillar share only.
    """
    if not 1 <= depth <= schedule.depth:
        raise InvalidParameterError(f"depth {depth} outside built depth")
    a = schedule.alphabet.size
    faithful = schedule.profile == "faithful"
    checks = []
    for level in range(1, depth + 1):
        m = schedule.m(level)
        m_prev = schedule.m(level - 1)
        r = m // m_prev
        q = r // 3
        h = (m - 1) // 2
        if (x.start + h) % m != 0 or len(x) % m != 0:
            raise InvalidParameterError(f"window not aligned to level-{level} blocks")
        n_blocks = len(x) // m
        blocks = x.cells.reshape(n_blocks, m)
        starred = blocks == STAR
        star_any = starred.any(axis=1)
        star_all = starred.all(axis=1)
        detail = ""
        if bool((star_any & ~star_all).any()):
            i = int(np.nonzero(star_any & ~star_all)[0][0])
            checks.append(LevelCheck(level, n_blocks, 0, q, None, 0,
                                     "fail", "fail", None,
                                     f"block {i} partially defined"))
            continue
        defined = ~star_any
        n_def = int(defined.sum())

        sub = x.cells.reshape(n_blocks * r, m_prev)
        pillar = np.frombuffer(schedule.pillar(level - 1).cells, dtype=np.uint8)
        eq = (sub == pillar).all(axis=1).reshape(n_blocks, r)
        counts = eq.sum(axis=1)
        min_share = int(counts[defined].min()) if n_def else None
        pillar_total = int(counts[defined].sum()) if n_def else 0

        membership = "waived"
        every_word = "waived"
        covered = None
        if faithful and n_def:
            sub_def = sub[np.repeat(defined, r)]
            if level - 1 == 0:
                membership = "ok" if bool((sub_def[:, 0] < a).all()) else "fail"
                presence = np.stack(
                    [(blocks[defined] == c).any(axis=1) for c in range(a)], axis=1
                )
                every_word = "ok" if bool(presence.all()) else "fail"
                covered = int(presence.all(axis=0).sum())
            elif schedule.words_available(level - 1):
                codes = _row_codes(sub_def, a)
                if codes is None:
                    wordset = schedule.word_set(level - 1)
                    keys = {sub_def[i].tobytes() for i in range(sub_def.shape[0])}
                    membership = "ok" if keys <= wordset else "fail"
                    covered = len(keys & wordset)
                    every_word = "ok" if wordset <= keys else "fail"
                else:
                    ref = np.sort(_row_codes(schedule.word_matrix(level - 1), a))
                    membership = "ok" if bool(np.isin(codes, ref).all()) else "fail"
                    uniq = np.unique(codes)
                    covered = int(np.isin(ref, uniq).sum())
                    # every block must use every word, not just the union
                    every_word = "ok"
                    block_codes = codes.reshape(n_def, r)
                    for row in block_codes:
                        if np.unique(row).size < ref.size or not bool(
                            np.isin(ref, row).all()
                        ):
                            every_word = "fail"
                            break
            else:
                membership = "unverifiable"
                every_word = "unverifiable"
        elif faithful:
            membership = "ok"
            every_word = "ok"

        checks.append(LevelCheck(level, n_blocks, n_def, q, min_share,
                                 pillar_total, membership, every_word,
                                 covered, detail))
    return WindowAdmissibilityReport(tuple(checks))


# --- minimality witnesses ------------------------------------------------


@dataclass(frozen=True)
class MinimalityReport:
    checks: tuple[tuple[str, str, str], ...]  # (name, status, detail)

    @property
    def ok(self) -> bool:
        return all(status != "fail" for _, status, _ in self.checks)

    def rows(self):
        return list(self.checks)


def minimality_witnesses(x: PartialWindow, schedule: Schedule,
                         depth: int) -> MinimalityReport:
    """Syndeticity evidence on a fully defined window.

    (a) every aligned level-(k+1) block contains w_k as a subword;
    (b) consecutive w_k occurrences sit at most 2*m_{k+1} apart;
    (c) w_{k+1} covers every admissible level-k word (checked where the
        level is enumerable; waived in the fast profile).
    """
    if not x.is_fully_defined():
        raise InvalidParameterError("window contains '*' cells")
    m_top = schedule.m(depth)
    if (x.start + (m_top - 1) // 2) % m_top != 0 or len(x) % m_top != 0:
        raise InvalidParameterError(f"window not aligned to level-{depth} blocks")
    hay = x.cells.tobytes()
    checks = []
    for k in range(depth):
        m_next = schedule.m(k + 1)
        m_k = schedule.m(k)
        needle = schedule.pillar(k).cells
        occ = []
        pos = hay.find(needle)
        while pos != -1:
            occ.append(pos)
            pos = hay.find(needle, pos + 1)
        name_a = f"pillar-containment k={k}"
        if not occ:
            checks.append((name_a, "fail", f"w_{k} never occurs"))
            checks.append((f"gap-bound k={k}", "fail", "no occurrences"))
            continue
        starts = np.asarray(occ, dtype=np.int64)
        n_blocks = len(x) // m_next
        lows = np.arange(n_blocks, dtype=np.int64) * m_next
        idx = np.searchsorted(starts, lows, side="left")
        bad = -1
        for i in range(n_blocks):
            j = idx[i]
            if j >= starts.size or starts[j] > lows[i] + m_next - m_k:
                bad = i
                break
        if bad >= 0:
            checks.append((name_a, "fail", f"aligned block {bad} misses w_{k}"))
        else:
            checks.append((name_a, "ok", f"{n_blocks} blocks scanned"))
        gaps = np.diff(starts)
        max_gap = int(gaps.max()) if gaps.size else 0
        bound = 2 * m_next
        status = "ok" if max_gap <= bound else "fail"
        checks.append((f"gap-bound k={k}", status,
                       f"max gap {max_gap} vs bound {bound}"))

    for k in range(depth):
        name_c = f"pillar-coverage k={k}"
        if schedule.profile != "faithful":
            checks.append((name_c, "waived", "fast profile"))
            continue
        if not schedule.words_available(k):
            checks.append((name_c, "unverifiable", f"A_{k} not enumerable"))
            continue
        m_k = schedule.m(k)
        pillar_win = PartialWindow.from_word(schedule.pillar(k + 1),
                                             offset=-(m_k - 1) // 2)
        census = aligned_block_census(pillar_win, m_k)
        missing = schedule.word_set(k) - set(census)
        if missing:
            checks.append((name_c, "fail", f"{len(missing)} words missing from w_{k + 1}"))
        else:
            checks.append((name_c, "ok", f"all {len(schedule.word_set(k))} words aligned in w_{k + 1}"))
    return MinimalityReport(tuple(checks))


# --- converse bound -------------------------------------------------------


def positive_density_bound(alpha, alphabet_size: int) -> float:
    """Entropy forced by realizing all targets along a density-alpha set."""
    alpha = Fraction(alpha)
    if not 0 < alpha <= 1:
        raise InvalidParameterError("alpha must lie in (0, 1]")
    if alphabet_size < 2:
        raise InvalidParameterError("alphabet size must be >= 2")
    return float(alpha) * math.log(alphabet_size) / 2.0


def realization_forced_count(window_len: int, s_count: int,
                             alphabet_size: int = 2) -> int:
    """Minorant on distinct length-L words: free choice on S-cells."""
    if s_count < 0 or s_count > window_len:
        raise InvalidParameterError("s_count must lie in [0, window_len]")
    if alphabet_size < 2:
        raise InvalidParameterError("alphabet size must be >= 2")
    return alphabet_size**s_count

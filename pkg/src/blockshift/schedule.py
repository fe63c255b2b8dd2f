"""Level parameters of the block-concatenation construction.

Each level k has a block length m_k (odd, with m_{k+1} an odd multiple of
3*m_k), an admissible word set A_k (enumerated, counted exactly, or
bounded in log), and a distinguished pillar word w_k whose forced
one-third share drives both minimality and the entropy bound.

Two profiles are supported.  ``faithful`` enforces every constraint,
including m_{k+1} > 3*m_k*|A_k| and the every-word fill, which makes
depth 3 physically impossible (|A_2| is astronomical).  ``fast`` waives
those two constraints, keeping sparsity and the one-third pillar share,
so deeper or wider demos stay desk-sized at the price of the minimality
guarantee.  Every schedule is stamped with its profile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConstructionInvariantError,
    DensityViolation,
    InfeasibleDepth,
    InvalidParameterError,
)
from .sparse import SparseSetSpec
from .words import Alphabet, Word, hull_of_blocks

DEFAULT_ENUM_CAP = 1 << 24
DEFAULT_EXACT_R_CAP = 2048
DEFAULT_SCAN_CAP = 1000
DEFAULT_VALUE_CAP = 1 << 40
DEFAULT_WINDOW_HINT = (0, 1000)
POOL_SIZE = 16

_M64 = (1 << 64) - 1


def splitmix64(z: int) -> int:
    """The splitmix64 finalizer; sole source of fast-profile randomness."""
    z = (z + 0x9E3779B97F4A7C15) & _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def mix64(*parts: int) -> int:
    h = 0x8000000000000001
    for p in parts:
        h = splitmix64(h ^ (p & _M64))
    return h


@dataclass(frozen=True)
class Card:
    """Cardinality of a word set: exact arbitrary-precision count or log bounds."""

    exact: int | None = None
    log_lower: float = 0.0
    log_upper: float = 0.0

    @classmethod
    def exact_count(cls, n: int) -> "Card":
        ln = math.log(n)
        return cls(exact=n, log_lower=ln, log_upper=ln)

    @classmethod
    def bounds(cls, lower: float, upper: float) -> "Card":
        # downward/upward rounding keeps the bracket conservative
        return cls(
            exact=None,
            log_lower=math.nextafter(lower, -math.inf),
            log_upper=math.nextafter(upper, math.inf),
        )

    def describe(self) -> str:
        if self.exact is not None:
            return f"exact:{self.exact}"
        return f"log[{self.log_lower:.4f},{self.log_upper:.4f}]"


@dataclass(frozen=True)
class LevelParams:
    k: int
    m: int
    pillar: Word
    card: Card


@dataclass(frozen=True)
class AdmissibilityResult:
    status: str  # "ok" | "fail" | "undetermined"
    reason: str
    pillar_count: int | None = None

    def __bool__(self) -> bool:
        return self.status == "ok"


class Schedule:
    """Immutable-after-build container for the level parameters."""

    def __init__(self, alphabet: Alphabet, sparse: SparseSetSpec, profile: str,
                 seed: int = 0, enum_cap: int = DEFAULT_ENUM_CAP):
        if profile not in ("faithful", "fast"):
            raise InvalidParameterError(f"unknown profile {profile!r}")
        self.alphabet = alphabet
        self.sparse = sparse
        self.profile = profile
        self.seed = seed
        self.enum_cap = enum_cap
        self.verified_range: tuple[int, int] | None = None
        self.levels: list[LevelParams] = []
        self._words_cache: dict[int, list[bytes]] = {}
        self._set_cache: dict[int, frozenset] = {}
        self._matrix_cache: dict[int, np.ndarray] = {}
        self._pool_cache: dict[int, np.ndarray] = {}

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def level(self, k: int) -> LevelParams:
        if not 0 <= k <= self.depth:
            raise InvalidParameterError(f"level {k} outside built depth {self.depth}")
        return self.levels[k]

    def m(self, k: int) -> int:
        return self.level(k).m

    def pillar(self, k: int) -> Word:
        return self.level(k).pillar

    def ratio(self, k: int) -> int:
        """r = m_k / m_{k-1}, the block count of a level-k word."""
        return self.m(k) // self.m(k - 1)

    def words_available(self, k: int) -> bool:
        card = self.level(k).card
        return card.exact is not None and card.exact <= self.enum_cap

    def words(self, k: int) -> list[bytes]:
        """The enumerated admissible word set of level k, in lexicographic order."""
        if k in self._words_cache:
            return self._words_cache[k]
        if k == 0:
            out = [bytes([i]) for i in range(self.alphabet.size)]
        else:
            if not self.words_available(k):
                raise InfeasibleDepth(
                    f"|A_{k}| = {self.level(k).card.describe()} is not enumerable "
                    f"under cap {self.enum_cap}"
                )
            prev = self.words(k - 1)
            r = self.ratio(k)
            out = [
                b"".join(prev[c] for c in tup)
                for tup in _admissible_tuples(r, len(prev), r // 3,
                                              every_word=self.profile == "faithful")
            ]
            if len(out) != self.level(k).card.exact:
                raise ConstructionInvariantError(
                    f"enumeration of A_{k} produced {len(out)} words, "
                    f"count says {self.level(k).card.exact}"
                )
        self._words_cache[k] = out
        return out

    def word_set(self, k: int) -> frozenset:
        if k not in self._set_cache:
            self._set_cache[k] = frozenset(self.words(k))
        return self._set_cache[k]

    def word_matrix(self, k: int) -> np.ndarray:
        if k not in self._matrix_cache:
            words = self.words(k)
            flat = np.frombuffer(b"".join(words), dtype=np.uint8)
            mat = flat.reshape(len(words), self.m(k)).copy()
            mat.setflags(write=False)
            self._matrix_cache[k] = mat
        return self._matrix_cache[k]

    def pool_matrix(self, k: int) -> np.ndarray:
        """Fast-profile fill pool: row 0 is w_k, the rest seeded samples."""
        if k not in self._pool_cache:
            m_k = self.m(k)
            pool = np.empty((POOL_SIZE, m_k), dtype=np.uint8)
            pool[0] = np.frombuffer(self.pillar(k).cells, dtype=np.uint8)
            if k == 0:
                a = self.alphabet.size
                for i in range(1, POOL_SIZE):
                    pool[i, 0] = mix64(self.seed, 0xA1FA, 0, i) % a
            else:
                prev = self.pool_matrix(k - 1)
                r, q = self.ratio(k), self.ratio(k) // 3
                prev_pillar = np.frombuffer(self.pillar(k - 1).cells, dtype=np.uint8)
                m_prev = self.m(k - 1)
                for i in range(1, POOL_SIZE):
                    rows = pool[i].reshape(r, m_prev)
                    rows[:q] = prev_pillar
                    for j in range(q, r):
                        rows[j] = prev[mix64(self.seed, 0xA1FA, k, i, j) % POOL_SIZE]
            pool.setflags(write=False)
            self._pool_cache[k] = pool
        return self._pool_cache[k]

    def fill_matrix(self, k: int) -> np.ndarray:
        """Cycle source for the non-pillar fill at level k."""
        if self.profile == "faithful":
            return self.word_matrix(k)
        return self.pool_matrix(k)

    def describe_rows(self) -> list[tuple]:
        return [(lv.k, lv.m, lv.card.describe(), _digest_word(lv.pillar, self.alphabet))
                for lv in self.levels]


def _digest_word(word: Word, alphabet: Alphabet) -> str:
    if len(word) <= 32:
        return word.text(alphabet)
    import hashlib

    h = hashlib.sha256(word.cells).hexdigest()[:16]
    return f"len={len(word)},sha256-64={h}"


# --- counting --------------------------------------------------------


def surjection_count(t: int, b: int) -> int:
    """Sequences of length t over b labels that use every label."""
    if b == 0:
        return 1 if t == 0 else 0
    return sum((-1) ** j * math.comb(b, j) * (b - j) ** t for j in range(b + 1))


def exact_next_count(r: int, a: int, every_word: bool) -> int:
    """|A_{k+1}| from r slots over a words with >= r/3 pillar copies."""
    if r % 3 != 0:
        raise InvalidParameterError("slot count must be divisible by 3")
    q = r // 3
    if every_word:
        return sum(
            math.comb(r, z) * surjection_count(r - z, a - 1) for z in range(q, r + 1)
        )
    return sum(math.comb(r, z) * (a - 1) ** (r - z) for z in range(q, r + 1))


def _log_comb(r: int, q: int) -> float:
    return math.lgamma(r + 1) - math.lgamma(q + 1) - math.lgamma(r - q + 1)


def next_card(r: int, prev: Card, every_word: bool, exact_r_cap: int = DEFAULT_EXACT_R_CAP) -> Card:
    """Cardinality of the next level: exact when feasible, else log bounds.

    Upper bound is the choose/power bound relaxed through 2^r; the lower
    bound places exactly r/3 pillars and one fixed arrangement of the
    mandatory words, leaving the remaining slots free.
    """
    q = r // 3
    if prev.exact is not None and r <= exact_r_cap:
        return Card.exact_count(exact_next_count(r, prev.exact, every_word))
    upper = r * math.log(2.0) + (2 * r / 3.0) * prev.log_upper
    if prev.exact is not None:
        a = prev.exact
        free = r - q - (a - 1) if every_word else r - q
        lower = _log_comb(r, q) + max(0, free) * (math.log(a - 1) if a > 1 else 0.0)
    else:
        # ln(a-1) >= ln(a) - ln 2 for a >= 2
        ln_am1 = max(0.0, prev.log_lower - math.log(2.0))
        lower = _log_comb(r, q) + (r - q) * ln_am1
    return Card.bounds(lower, upper)


# --- enumeration ------------------------------------------------------


def _admissible_tuples(r: int, a: int, q: int, every_word: bool):
    """Lexicographic index tuples: >= q copies of index 0, every index used."""
    buf = [0] * r
    used = [0] * a

    def rec(pos, pillars, missing_nonzero):
        if pos == r:
            yield tuple(buf)
            return
        remaining = r - pos
        for c in range(a):
            n_pillars = pillars + (c == 0)
            n_missing = missing_nonzero - (1 if c != 0 and used[c] == 0 else 0)
            need = max(0, q - n_pillars) + (n_missing if every_word else 0)
            if remaining - 1 < need:
                continue
            buf[pos] = c
            used[c] += 1
            yield from rec(pos + 1, n_pillars, n_missing)
            used[c] -= 1

    yield from rec(0, 0, a - 1)


def enumerate_level_words(level: int, schedule: Schedule, cap: int | None = None):
    """Iterator over the admissible words of a level, lexicographically."""
    if not 0 <= level <= schedule.depth:
        raise InvalidParameterError(f"level {level} outside built depth")
    cap = schedule.enum_cap if cap is None else cap
    card = schedule.level(level).card
    if card.exact is None:
        raise InfeasibleDepth(f"|A_{level}| only bounded: {card.describe()}")
    if card.exact > cap:
        raise InfeasibleDepth(f"|A_{level}| = {card.exact} exceeds cap {cap}")
    if level == 0:
        for i in range(schedule.alphabet.size):
            yield Word(bytes([i]))
        return
    for cells in schedule.words(level):
        yield Word(cells)


def level_count(level: int, schedule: Schedule) -> Card:
    return schedule.level(level).card


def canonical_pillar(level: int, schedule: Schedule) -> Word:
    """The distinguished admissible word w_level of a built schedule."""
    return schedule.pillar(level)


# --- admissibility ----------------------------------------------------


def is_admissible_block(word, level: int, schedule: Schedule,
                        semantics: str | None = None) -> AdmissibilityResult:
    """Check one word against the level's admissibility rule.

    Components: every aligned sub-block admissible one level down, at
    least one-third of the sub-blocks equal to the pillar, and (faithful
    semantics) every admissible word of the previous level present.  The
    last component needs the previous level enumerated; when it is not,
    the result is the three-valued "undetermined".
    """
    sem = schedule.profile if semantics is None else semantics
    if sem not in ("faithful", "fast"):
        raise InvalidParameterError(f"unknown semantics {sem!r}")
    if not 1 <= level <= schedule.depth:
        raise InvalidParameterError(f"level {level} outside built depth")
    cells = word.cells if isinstance(word, Word) else bytes(word)
    m = schedule.m(level)
    if len(cells) != m:
        raise InvalidParameterError(f"word length {len(cells)} != m_{level} = {m}")
    m_prev = schedule.m(level - 1)
    r = m // m_prev
    q = r // 3
    subs = [cells[t * m_prev:(t + 1) * m_prev] for t in range(r)]
    pillar = schedule.pillar(level - 1).cells
    pillar_count = sum(1 for s in subs if s == pillar)

    undetermined_reason = None

    # sub-block admissibility
    if level - 1 == 0:
        a = schedule.alphabet.size
        for t, s in enumerate(subs):
            if s[0] >= a:
                return AdmissibilityResult("fail", f"sub-block {t} not a symbol", pillar_count)
    elif sem == "faithful" and schedule.words_available(level - 1):
        member = schedule.word_set(level - 1)
        for t, s in enumerate(subs):
            if s not in member:
                return AdmissibilityResult(
                    "fail", f"sub-block {t} not in A_{level - 1}", pillar_count
                )
    else:
        for t, s in enumerate(subs):
            res = is_admissible_block(Word(s), level - 1, schedule, semantics=sem)
            if res.status == "fail":
                return AdmissibilityResult(
                    "fail", f"sub-block {t}: {res.reason}", pillar_count
                )
            if res.status == "undetermined" and undetermined_reason is None:
                undetermined_reason = f"sub-block {t}: {res.reason}"

    # pillar share
    if pillar_count < q:
        return AdmissibilityResult(
            "fail", f"pillar share {pillar_count} < {q} copies of w_{level - 1}",
            pillar_count,
        )

    # every-word coverage (faithful semantics only)
    if sem == "faithful":
        if schedule.words_available(level - 1):
            missing = schedule.word_set(level - 1) - set(subs)
            if missing:
                return AdmissibilityResult(
                    "fail", f"{len(missing)} level-{level - 1} words never used",
                    pillar_count,
                )
        else:
            undetermined_reason = "every-word unverifiable"

    if undetermined_reason is not None:
        return AdmissibilityResult("undetermined", undetermined_reason, pillar_count)
    return AdmissibilityResult("ok", "", pillar_count)


# --- construction -----------------------------------------------------


def _interval_union(a: tuple[int, int] | None, b: tuple[int, int]) -> tuple[int, int]:
    if a is None:
        return b
    return (min(a[0], b[0]), max(a[1], b[1]))


def _search_level(sparse: SparseSetSpec, k: int, m_k: int, a_exact: int | None,
                  profile: str, hint: tuple[int, int], prev_range,
                  scan_cap: int, value_cap: int) -> int:
    """Smallest odd multiple of 3*m_k passing the size and sparsity gates.

    A candidate c = 3*m_k*j has sparsity threshold exactly j.  The probe
    range always contains [1, c], so a certified count n inside [1, c]
    disqualifies every candidate with threshold <= n (the left-anchored
    window only grows); the scan jumps straight past those.  This keeps
    the scan short both when the set is sparse (counts grow like the
    set, reaching the passing candidate in a few jumps) and when it is
    dense (counts grow linearly, reaching the value cap geometrically).
    """
    step = 3 * m_k
    float_bound = 12.0 * math.log(2.0) * (4.0 / 3.0) ** (k + 1)
    j = 1
    if profile == "faithful":
        j = max(j, a_exact + 1)  # forces c > 3*m_k*|A_k|
    while step * j <= float_bound:
        j += 1
    if j % 2 == 0:
        j += 1
    scanned = 0
    last = None
    while scanned < scan_cap and step * j <= value_cap:
        cand = step * j
        scanned += 1
        left_count = sparse.count_in((1, cand))
        if left_count >= j:
            last = ((1, cand), left_count, j)
            j = left_count + 1 + (left_count % 2)  # next odd index past the kill
            continue
        rng = _interval_union(
            _interval_union(prev_range, hull_of_blocks(hint[0], hint[1], cand)),
            (1, cand),
        )
        ok, count, threshold, witness = sparse.sparsity_report(cand, m_k, rng)
        if ok:
            return cand
        last = (witness, count, threshold)
        j = max(j + 2, count + 1 + (count % 2))
    witness, count, threshold = last if last else ((0, 0), 0, 0)
    raise DensityViolation(k, witness, count, threshold)


def build_schedule(alphabet: Alphabet, sparse: SparseSetSpec, depth: int,
                   window_hint: tuple[int, int] | None = None,
                   profile: str = "faithful", *, seed: int = 0,
                   enum_cap: int = DEFAULT_ENUM_CAP,
                   exact_r_cap: int = DEFAULT_EXACT_R_CAP,
                   scan_cap: int = DEFAULT_SCAN_CAP,
                   value_cap: int = DEFAULT_VALUE_CAP) -> Schedule:
    """Compute (m_k, |A_k|, w_k) up to the requested depth.

    Every m_{k+1} is the smallest odd multiple of 3*m_k that clears the
    size bound and keeps |S ∩ I| < m_{k+1}/(3*m_k) for each length-
    m_{k+1} window inside the verified range.  The verified range is the
    hull of the depth-level blocks meeting the window hint; since it
    depends on m_depth, the search is iterated to a fixed point, and the
    recorded range is the one every level was re-verified against.
    """
    if depth < 1:
        raise InvalidParameterError("depth must be >= 1")
    hint = DEFAULT_WINDOW_HINT if window_hint is None else (int(window_hint[0]), int(window_hint[1]))
    if hint[0] > hint[1]:
        raise InvalidParameterError("empty window hint")

    every_word = profile == "faithful"
    prev_range = None
    prev_plan = None
    for _ in range(8):
        plan: list[tuple[int, Card]] = [(1, Card.exact_count(alphabet.size))]
        for k in range(depth):
            m_k, card_k = plan[k]
            if every_word and card_k.exact is None:
                raise InfeasibleDepth(
                    f"faithful profile needs exact |A_{k}| to bound m_{k + 1}; "
                    f"have {card_k.describe()}"
                )
            m_next = _search_level(sparse, k, m_k, card_k.exact, profile,
                                   hint, prev_range, scan_cap, value_cap)
            plan.append((m_next, next_card(m_next // m_k, card_k, every_word, exact_r_cap)))
        m_depth = plan[depth][0]
        verified = _interval_union(hull_of_blocks(hint[0], hint[1], m_depth),
                                   (1, m_depth))
        ok = all(
            sparse.sparsity_ok(plan[k + 1][0], plan[k][0], verified)
            for k in range(depth)
        )
        if ok and (prev_range is None or [m for m, _ in plan] == prev_plan):
            break
        prev_plan = [m for m, _ in plan]
        prev_range = verified
    else:
        raise ConstructionInvariantError("schedule search did not stabilize in 8 passes")

    sched = Schedule(alphabet, sparse, profile, seed=seed, enum_cap=enum_cap)
    sched.levels.append(LevelParams(0, 1, Word(bytes([0])), plan[0][1]))
    for k in range(1, depth + 1):
        m_k, card_k = plan[k]
        pillar = _build_pillar(sched, k, m_k)
        sched.levels.append(LevelParams(k, m_k, pillar, card_k))
        if profile == "faithful":
            res = is_admissible_block(pillar, k, sched)
            if res.status == "fail":
                raise ConstructionInvariantError(f"pillar w_{k} not admissible: {res.reason}")
        else:
            _check_fast_pillar(sched, k, pillar)
    sched.verified_range = verified
    return sched


def _check_fast_pillar(sched: Schedule, k: int, pillar: Word) -> None:
    """Pillar share plus pool membership, vectorized (the recursive checker
    would walk every cell of a multi-megacell pillar)."""
    m_prev = sched.m(k - 1)
    r = len(pillar.cells) // m_prev
    q = r // 3
    rows = np.frombuffer(pillar.cells, dtype=np.uint8).reshape(r, m_prev)
    prev_pillar = np.frombuffer(sched.pillar(k - 1).cells, dtype=np.uint8)
    share = int((rows == prev_pillar).all(axis=1).sum())
    if share < q:
        raise ConstructionInvariantError(
            f"pillar w_{k} share {share} < {q} copies of w_{k - 1}"
        )
    allowed = {sched.pillar(k - 1).cells}
    allowed.update(row.tobytes() for row in sched.pool_matrix(k - 1))
    stray = {rows[i].tobytes() for i in range(r)} - allowed
    if stray:
        raise ConstructionInvariantError(
            f"pillar w_{k} holds {len(stray)} sub-blocks outside the fill pool"
        )


def _build_pillar(sched: Schedule, k: int, m_k: int) -> Word:
    m_prev = sched.m(k - 1)
    r = m_k // m_prev
    q = r // 3
    prev_pillar = sched.pillar(k - 1).cells
    if sched.profile == "faithful":
        try:
            words = sched.words(k - 1)
        except InfeasibleDepth as exc:
            raise InfeasibleDepth(
                f"cannot build w_{k}: {exc}"
            ) from exc
        a = len(words)
        copies = r - a + 1
        if copies < q:
            raise ConstructionInvariantError(
                f"pillar construction needs r - |A_{k-1}| + 1 >= r/3 at level {k}"
            )
        rest = [w for w in words if w != prev_pillar]
        return Word(prev_pillar * copies + b"".join(rest))
    pool = sched.pool_matrix(k - 1)
    parts = [prev_pillar] * q
    parts.extend(pool[t % POOL_SIZE].tobytes() for t in range(r - q))
    return Word(b"".join(parts))

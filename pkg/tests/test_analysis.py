import math

import pytest
from hypothesis import given, settings, strategies as st

from blockshift import (
    Alphabet,
    InvalidParameterError,
    PartialWindow,
    aligned_block_census,
    complexity_profile,
    corrected_constant,
    decay_report,
    entropy_bound_series,
    minimality_witnesses,
    positive_density_bound,
    realization_forced_count,
)


def naive_distinct(text, n):
    return len({text[i:i + n] for i in range(len(text) - n + 1)})


def test_complexity_examples(binary):
    rep = complexity_profile(PartialWindow.from_text("0101", binary), 2)
    assert rep.counts == {1: 2, 2: 2}
    w1 = PartialWindow.from_text("000000000000001", binary)
    rep2 = complexity_profile(w1, 2)
    assert rep2.counts[2] == 2  # subwords "00" and "01" only


def test_complexity_rejects_stars(binary):
    with pytest.raises(InvalidParameterError):
        complexity_profile(PartialWindow.from_text("0*1", binary), 1)


@settings(max_examples=60)
@given(st.text(alphabet="012", min_size=3, max_size=120))
def test_complexity_matches_naive(text):
    ab = Alphabet("012")
    rep = complexity_profile(PartialWindow.from_text(text, ab), min(8, len(text)))
    for n, c in rep.counts.items():
        assert c == naive_distinct(text, n)


@settings(max_examples=40)
@given(st.text(alphabet="01", min_size=4, max_size=80))
def test_complexity_growth_bound(text):
    ab = Alphabet("01")
    rep = complexity_profile(PartialWindow.from_text(text, ab), min(6, len(text) - 1))
    for n in range(1, max(rep.counts)):
        assert rep.counts[n + 1] <= 2 * rep.counts[n]
        assert rep.counts[n] <= min(2**n, len(text) - n + 1)


def test_complexity_fallback_path(binary):
    # force the fixed-width row fallback with a window long enough to matter
    text = "01" * 40
    rep = complexity_profile(PartialWindow.from_text(text, binary), 70)
    for n in (63, 64, 70):  # beyond the int64 code range for base 2
        assert rep.counts[n] == naive_distinct(text, n)


def test_depth2_complexity_at_block_length(x2, sched2):
    rep = complexity_profile(x2, 15, aligned_lengths=(15,))
    a1 = sched2.word_set(1)
    census = aligned_block_census(x2, 15)
    assert set(census) <= a1
    # aligned blocks realize exactly A_1; straddling positions add more
    assert rep.aligned[15] == 30826
    assert 30826 <= rep.counts[15] <= 30826 + 14 * 92481
    assert rep.counts[1] == 2


def test_census_counts(x2):
    census = aligned_block_census(x2, 15)
    assert sum(census.values()) == 92481
    w1 = bytes(b"\x00" * 14 + b"\x01")
    assert census[w1] >= 30827


def test_entropy_bound_series_values(sched2):
    series = dict(entropy_bound_series(sched2, 20))
    assert series[1] == pytest.approx(math.log(15) / 15 + 1.5, abs=1e-9)
    assert series[1] == pytest.approx(1.68054, abs=1e-5)
    assert series[2] == pytest.approx(
        math.log(1387215) / 1387215 + 2 * 0.5625, abs=1e-9
    )
    assert series[2] == pytest.approx(1.12501, abs=1e-5)
    assert series[20] == pytest.approx(0.006352, abs=1e-5)
    assert series[20] < 0.01
    for k in range(2, 20):
        assert series[k + 1] < series[k]


def test_corrected_constant_binary(sched2):
    b1 = math.log(30826) / 15
    assert corrected_constant(sched2) == pytest.approx(max(1.0, 4 * b1 / 3), rel=1e-12)
    assert corrected_constant(sched2) == 1.0  # (4/3) * 0.6891 < 1


def test_decay_report(sched2):
    rep = decay_report(sched2)
    assert rep["C_corrected"] == 1.0
    rows = {r["k"]: r for r in rep["levels"]}
    assert rows[1]["corrected_holds"] and rows[2]["corrected_holds"]
    # the naive constant ln|A| = ln 2 fails the k=1 step for binary alphabets
    assert not rows[1]["naive_holds"]


def test_minimality_on_depth2(x2, sched2):
    rep = minimality_witnesses(x2, sched2, 2)
    assert rep.ok
    names = {name: (status, detail) for name, status, detail in rep.rows()}
    assert names["pillar-containment k=0"][0] == "ok"
    assert names["pillar-containment k=1"][0] == "ok"
    assert names["gap-bound k=1"][0] == "ok"
    assert names["pillar-coverage k=1"][0] == "ok"


def test_minimality_fails_on_constant_window(binary, sched2):
    allones = PartialWindow.from_text("1" * 15, binary, offset=-7)
    rep = minimality_witnesses(allones, sched2, 1)
    assert not rep.ok
    statuses = dict((n, s) for n, s, _ in rep.rows())
    assert statuses["pillar-containment k=0"] == "fail"


def test_w2_coverage_positional(sched2):
    # blocks 61657..92481 of w_2 enumerate A_1 minus its first word, ascending
    w2 = sched2.pillar(2).cells
    words = sched2.words(1)
    copies = 92481 - 30826 + 1
    for t in (0, 1, copies - 1):
        assert w2[15 * t: 15 * (t + 1)] == words[0]
    for t in (0, 1, 30824):
        chunk = w2[15 * (copies + t): 15 * (copies + t + 1)]
        assert chunk == words[t + 1]


def test_positive_density_bound_values():
    assert positive_density_bound("1/2", 2) == pytest.approx(0.17329, abs=1e-5)
    assert positive_density_bound(1, 2) == pytest.approx(math.log(2) / 2, rel=1e-12)
    assert positive_density_bound("1/1000000", 2) < 1e-6  # continuity at zero
    with pytest.raises(InvalidParameterError):
        positive_density_bound(0, 2)
    with pytest.raises(InvalidParameterError):
        positive_density_bound("1/2", 1)


def test_realization_forced_count():
    assert realization_forced_count(15, 7) == 128
    assert realization_forced_count(15, 7) > 2 ** (15 * 0.5 / 2)
    assert realization_forced_count(10, 3, alphabet_size=3) == 27
    with pytest.raises(InvalidParameterError):
        realization_forced_count(5, 9)

from fractions import Fraction

import pytest

from blockshift import (
    InvalidParameterError,
    WeightTable,
    WindowRangeError,
    correlation_average,
    sarnak_demo,
)
from blockshift.realization import realize
from tests.conftest import mu_by_trial_division


def test_mobius_values(mob):
    assert mob.mu(1) == 1
    assert mob.mu(6) == 1
    assert mob.mu(30) == -1
    assert mob.mu(12) == 0
    with pytest.raises(InvalidParameterError):
        mob.mu(0)


def test_sieve_matches_trial_division(mob):
    for n in range(1, 10**4 + 1):
        assert mob.mu(n) == mu_by_trial_division(n), n


def test_mertens_and_squarefree(mob):
    assert mob.mertens(100) == sum(mu_by_trial_division(n) for n in range(1, 101))
    assert mob.mertens(100) == 1
    assert mob.squarefree_count(10**6) == 607926
    assert mob.squarefree_count(100) == sum(
        1 for n in range(1, 101) if mu_by_trial_division(n) != 0
    )


def test_squarefree_ratio_bracket(mob):
    for n in (10**5, 2 * 10**5, 5 * 10**5, 10**6):
        assert 0.60 <= mob.squarefree_count(n) / n <= 0.62


def test_correlation_identity_depth2(x2, sched2, mu_target, squares, mob, binary):
    rho = WeightTable.mobius(mob, {"0": 0, "1": 1})
    rep = correlation_average(x2, rho, squares, 832, binary, u=mu_target)
    assert rep.exact_identity is True
    want = sum(1 for n in range(1, 833) if mob.mu(n) == 1)
    assert rep.final() == Fraction(want, 832)
    assert want == 253
    # ladder values are exact prefixes
    by_n = dict(rep.rows)
    assert by_n[1] == Fraction(mob.mu(1) * 1, 1)
    assert by_n[832] == rep.final()


def test_correlation_bounded_by_weight(x2, squares, mob, binary):
    rho = WeightTable.mobius(mob, {"0": 0, "1": 1})
    rep = correlation_average(x2, rho, squares, 500, binary)
    for _, f in rep.rows:
        assert abs(f) <= 1


def test_zero_weights(x2, squares, binary):
    rho = WeightTable.constant_zero({"0": 0, "1": 1})
    rep = correlation_average(x2, rho, squares, 100, binary)
    assert all(f == 0 for _, f in rep.rows)


def test_out_of_window(binary, sched2, mu_target, squares, mob):
    x = realize(mu_target, sched2, 1)
    rho = WeightTable.mobius(mob, {"0": 0, "1": 1})
    with pytest.raises(WindowRangeError) as exc:
        correlation_average(x, rho, squares, 3, binary)
    assert "p(3) = 9" in str(exc.value)


def test_weight_csv_roundtrip(tmp_path, x2, squares, binary, mob):
    path = tmp_path / "rho.csv"
    path.write_text("".join(f"{n},{mob.mu(n)}\n" for n in range(1, 101)))
    rho = WeightTable.from_csv(path, {"0": 0, "1": 1})
    got = correlation_average(x2, rho, squares, 100, binary)
    want = correlation_average(
        x2, WeightTable.mobius(mob, {"0": 0, "1": 1}), squares, 100, binary
    )
    assert got.rows == want.rows


def test_demo_depth1(binary):
    demo = sarnak_demo("faithful", 1, 2)
    # A(2) = (mu(1) x(1) + mu(2) x(4)) / 2 = (1 - 0) / 2
    assert demo.report.final() == Fraction(1, 2)
    assert demo.report.exact_identity is True
    assert demo.provenance["admissibility_ok"] is True
    assert demo.provenance["minimality"] is not None


def test_demo_depth2_cached_values():
    demo = sarnak_demo("faithful", 2, 832)
    assert demo.report.final() == Fraction(253, 832)
    assert 0.28 <= float(demo.report.final()) <= 0.33
    assert demo.provenance["m"] == [1, 15, 1387215]


def test_fill_cycle_invariance_of_averages(binary, sched2, mu_target, squares, mob):
    rho = WeightTable.mobius(mob, {"0": 0, "1": 1})
    xa = realize(mu_target, sched2, 2, cycle_start=0)
    xb = realize(mu_target, sched2, 2, cycle_start=11)
    ra = correlation_average(xa, rho, squares, 832, binary)
    rb = correlation_average(xb, rho, squares, 832, binary)
    assert ra.rows == rb.rows

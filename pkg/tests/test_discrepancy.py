import csv
import io
import random
from fractions import Fraction

import numpy as np
import pytest

from rotdisc.discrepancy import (
    backwards_check,
    dqn_residue_check,
    kD_at,
    path_csv,
    path_direct,
    path_recursive,
    running_extrema,
    templates,
)
from rotdisc.orbit import INFINITY, AlphaHandle
from rotdisc.sampling import random_c, random_cf, sample_pairs

SILVER = AlphaHandle.parse("0;(2)")
GOLDEN = AlphaHandle.parse("0;(1)")
HALF = Fraction(1, 2)


def test_direct_path_silver():
    assert path_direct(SILVER, HALF, 7).values.tolist() == [0, 1, 0, 1, 0, 1, 2, 1]
    assert path_direct(SILVER, HALF, 0).values.tolist() == [0]


def test_running_extrema_example():
    track = running_extrema(path_direct(SILVER, HALF, 7))
    assert track.runmax.tolist() == [0, 1, 1, 1, 1, 1, 2, 2]
    assert track.runmin.tolist() == [0] * 8
    assert track.at(6) == (2, 0)


def test_step_and_congruence_invariants():
    rng = random.Random(5)
    for _ in range(20):
        alpha, c = AlphaHandle(random_cf(rng)), random_c(rng)
        h, k = c.numerator, c.denominator
        v = path_direct(alpha, c, 2000).values
        steps = np.diff(v)
        assert set(steps.tolist()) <= {-h, k - h}
        assert np.all((v + h * np.arange(len(v))) % k == 0)


def test_path_is_read_only():
    v = path_direct(SILVER, HALF, 5).values
    with pytest.raises(ValueError):
        v[0] = 3


@pytest.mark.parametrize("alpha", [SILVER, GOLDEN])
def test_recursive_matches_direct_examples(alpha):
    assert path_recursive(alpha, HALF, 1000) == path_direct(alpha, HALF, 1000)


def test_recursive_matches_direct_random():
    for alpha, c in sample_pairs(seed=101, count=40):
        for N in (1, 2, 17, 3000):
            a, b = path_recursive(alpha, c, N), path_direct(alpha, c, N)
            assert a == b, (str(alpha), c, N, a.first_mismatch(b))


def test_divisible_level_copies_prefix():
    # k = 2 divides q_1 = 2, q_3 = 12, ... for the silver rotation
    v = path_direct(SILVER, HALF, 70).values
    for n in (1, 3):
        q, q1 = SILVER.q(n), SILVER.q(n + 1)
        assert v[q] == 0
        for x in range(q + 1, q1 + 1):
            assert v[x] == v[(x - 1) % q + 1]


def test_kD_at_matches_path():
    rng = random.Random(9)
    for _ in range(30):
        alpha, c = AlphaHandle(random_cf(rng)), random_c(rng)
        v = path_direct(alpha, c, 5000).values
        for n in rng.sample(range(5001), 25):
            assert kD_at(alpha, c, n) == v[n]


def test_templates_silver_level_two():
    tp = templates(SILVER, HALF, 2)
    assert (tp.hat[-1], tp.check[-1]) == (1, -1)
    assert tp.hat[-1] - tp.check[-1] == 2


def test_template_endpoints_and_first_period():
    rng = random.Random(13)
    checked = 0
    while checked < 60:
        alpha, c = AlphaHandle(random_cf(rng)), random_c(rng)
        h, k = c.numerator, c.denominator
        for n in range(0, 7):
            q = alpha.q(n)
            if q % k == 0:
                continue
            tp = templates(alpha, c, n)
            rem = (h * q) % k
            assert (tp.hat[-1], tp.check[-1]) == (k - rem, -rem)
            first = path_direct(alpha, c, q).values[1:]
            if n % 2 == 0 and tp.l_n >= 1:
                assert np.array_equal(first, tp.hat)
            assert np.array_equal(first, tp.hat if tp.first_is_hat else tp.check)
            checked += 1


def test_templates_reject_divisible_level():
    with pytest.raises(ValueError):
        templates(SILVER, HALF, 1)


def test_backwards_check_silver():
    rep = backwards_check(SILVER, HALF, 2)
    assert rep.identity1.passed
    assert rep.identity2_derived.passed


def test_backwards_identity2_literal_guard_fails_silver():
    # j = 0, l = 1 at level 2: lhs = 0 but the literal guard gives k
    rep = backwards_check(SILVER, HALF, 2)
    assert not rep.identity2_literal.passed
    assert rep.identity2_literal.counterexample == {"l": 1, "j": 0, "lhs": 0, "rhs": 2}


def test_backwards_sparse_agrees_with_exhaustive():
    rng = random.Random(17)
    for _ in range(25):
        alpha, c = AlphaHandle(random_cf(rng)), random_c(rng)
        for n in range(0, 9, 2):
            if alpha.q(n) % c.denominator == 0:
                continue
            full = backwards_check(alpha, c, n)
            sparse = backwards_check(alpha, c, n, exhaustive_limit=0)
            assert sparse.mode == "sparse"
            assert full.identity1.passed and sparse.identity1.passed
            assert full.identity2_derived.passed and sparse.identity2_derived.passed
            assert full.identity2_literal.passed == sparse.identity2_literal.passed


def test_backwards_infinite_l_n_has_zero_sides():
    found = 0
    for alpha, c in sample_pairs(seed=23, count=200):
        for n in range(0, 7, 2):
            if alpha.q(n) % c.denominator == 0:
                continue
            rep = backwards_check(alpha, c, n)
            if rep.l_n == INFINITY:
                assert rep.identity1.passed and rep.identity2_literal.passed
                found += 1
    assert found > 0


def test_dqn_residue_silver():
    rep = dqn_residue_check(SILVER, HALF, 8)
    assert rep.passed and len(rep.levels) == 9
    assert all(row["kD"] == 0 for row in rep.levels if row["q_n"] % 2 == 0)


def test_dqn_residue_random():
    for alpha, c in sample_pairs(seed=29, count=30):
        assert dqn_residue_check(alpha, c, 12).passed


def test_path_csv_format():
    text = path_csv(path_direct(SILVER, HALF, 7))
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["n", "xi_n", "kDn", "runmax", "runmin"]
    assert [int(r[2]) for r in rows[1:]] == [1, 0, 1, 0, 1, 2, 1]
    assert [int(r[1]) for r in rows[1:]] == [1, 0, 1, 0, 1, 1, 0]


def test_level_path_growth_when_k_divides():
    for alpha, c in sample_pairs(seed=31, count=40):
        k = c.denominator
        track = running_extrema(path_direct(alpha, c, 20000))
        n = 0
        while alpha.q(n + 1) <= 20000:
            if alpha.q(n) % k == 0:
                assert track.at(alpha.q(n + 1)) == track.at(alpha.q(n))
            n += 1

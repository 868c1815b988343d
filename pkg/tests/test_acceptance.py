"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]`` / ``[FAIL]`` line with the measured values
and the pinned limits, then asserts.  Run with ``pytest -v -s`` or read the
lines from the captured output of ``pytest -v``.
"""

import itertools
import time
from fractions import Fraction

import pytest

from rotdisc.classify import check_q_condition, classify, construct_member
from rotdisc.orbit import AlphaHandle
from rotdisc.sampling import route_family, sample_pairs
from rotdisc.suites import (
    constructor_probe,
    dimension_bound,
    extrema_probe,
    level_identities,
    path_equivalence,
    pattern_tables,
    route_agreement,
)

SEED = 0
LIMIT_PATTERNS = 1.0
LIMIT_PATHS = 120.0
LIMIT_ROUTES = 60.0
LIMIT_EXTREMA = 60.0
LIMIT_CONSTRUCT = 60.0
LIMIT_DIMENSION = 10.0


@pytest.fixture
def report(capsys):
    def emit(number, ok, text):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}")
        return ok

    return emit


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


def test_criterion_1_pattern_tables(report):
    res, dt = timed(pattern_tables)
    ok = res.passed and dt < LIMIT_PATTERNS
    assert report(1, ok, f"k=2 elementary/prime/type-k tables and 16 Phi values exact, "
                         f"failures={len(res.failures)}, {dt:.3f}s (limit {LIMIT_PATTERNS}s)")


def test_criterion_2_oracle_equivalence(report):
    res, dt = timed(path_equivalence, SEED, count=100, N=10_000)
    ok = res.passed and res.cases >= 100 and dt < LIMIT_PATHS
    assert report(2, ok, f"recursive == direct on {res.cases} pairs for n <= {res.info['N']}, "
                         f"mismatches={len(res.failures)}, {dt:.1f}s (limit {LIMIT_PATHS:.0f}s)")


def test_criterion_3_level_identities(report):
    res, dt = timed(level_identities, SEED, count=100, max_level=12)
    info = res.info
    # the literal guard form of the second backward identity is reported, not gated
    ok = res.passed and info["identity2_derived_failing_levels"] == 0
    assert report(3, ok, f"three-distance, kD_q residues, first backward identity over {info['backwards_levels']} even levels, "
                         f"failures={len(res.failures)}; second backward identity (literal guard) fails on "
                         f"{info['identity2_literal_failing_levels']}/{info['backwards_levels']} levels "
                         f"(first {info['identity2_literal_first_counterexample']}), corrected form fails on "
                         f"{info['identity2_derived_failing_levels']}; {dt:.1f}s")


def test_criterion_4_route_agreement(report):
    res, dt = timed(route_agreement, SEED, count=500)
    ok = res.passed and res.cases >= 500 and dt < LIMIT_ROUTES
    assert report(4, ok, f"q-residue and pattern routes agree with equal minimal m on {res.cases} expansions, "
                         f"k in 2..5, verdicts={res.info['verdicts']}, {dt:.2f}s (limit {LIMIT_ROUTES:.0f}s)")


def test_criterion_5_extrema(report):
    silver = classify(AlphaHandle.parse("0;(2)").cf, 1, 2)
    golden = classify(AlphaHandle.parse("0;(1)").cf, 1, 2)
    res, dt = timed(extrema_probe)
    ok = (res.passed and dt < 2 * LIMIT_EXTREMA and silver.verdict.value == "below"
          and silver.witness_m == -1 and golden.verdict.value == "unbounded")
    assert report(5, ok, f"silver {silver.verdict.value} m={silver.witness_m} {res.info['silver']}; "
                         f"golden {golden.verdict.value} {res.info['golden']}; "
                         f"{dt:.2f}s for both (limit {LIMIT_EXTREMA:.0f}s each)")


def test_criterion_6_constructor(report):
    res, dt = timed(constructor_probe, max_len=4, max_entry=3, ks=(2, 3))
    ok = res.passed and dt < LIMIT_CONSTRUCT
    assert report(6, ok, f"construct_member + classify on {res.cases} (prefix, k, parity) cases, "
                         f"failures={len(res.failures)}, {dt:.2f}s (limit {LIMIT_CONSTRUCT:.0f}s)")


def test_criterion_7_dimension(report):
    res, dt = timed(dimension_bound, Fraction(1, 10**9))
    info = res.info
    ok = res.passed and dt < LIMIT_DIMENSION
    assert report(7, ok, f"g(1) in {info['g1_enclosure']} (width {info['g1_width']:.2e} < 1e-12), "
                         f"c* in [{info['cstar']['c_star_lo_float']:.10f}, {info['cstar']['c_star_hi_float']:.10f}], "
                         f"g(lo) lower {info['cstar']['g_lo_enclosure'][0]:.12f} > 1 > "
                         f"g(hi) upper {info['cstar']['g_hi_enclosure'][1]:.12f}, {dt:.2f}s (limit {LIMIT_DIMENSION:.0f}s)")


def _classified_instances():
    """(cf, k) for every instance classified in criteria 2 to 6."""
    for alpha, c in sample_pairs(SEED, 100):
        yield alpha.cf, c.denominator
    yield from route_family(SEED, 500)
    yield AlphaHandle.parse("0;(2)").cf, 2
    yield AlphaHandle.parse("0;(1)").cf, 2
    for k in (2, 3):
        for L in range(5):
            for B in itertools.product(range(4), repeat=L):
                if all(b >= 1 for b in B[1:]):
                    for parity in (0, 1):
                        yield construct_member(B, k, parity), k


def test_criterion_8_exclusivity(report):
    total = both = 0
    for cf, k in _classified_instances():
        total += 1
        if check_q_condition(cf, k, 0)[0] and check_q_condition(cf, k, 1)[0]:
            both += 1
        classify(cf, 1, k)  # raises if the two routes disagree or both sides hold
    assert report(8, both == 0, f"{total} classified instances, bounded on both sides: {both}")

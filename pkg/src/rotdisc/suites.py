"""Property suites shared by ``rotdisc verify`` and the test-suite.

Each suite returns a :class:`SuiteResult` whose ``details`` are JSON-ready and
deterministic for a given seed (no timings).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .classify import (
    Verdict,
    check_pattern_condition,
    check_q_condition,
    classify,
    construct_member,
    cstar,
    empirical_extrema,
    g_function,
)
from .discrepancy import backwards_check, dqn_residue_check, path_direct, path_recursive
from .orbit import AlphaHandle, three_distance_check
from .patterns import PHI, character, enumerate_elementary, enumerate_prime, type_k_primes
from .sampling import route_family, sample_pairs

K2_ELEMENTARY = {(0, 0), (1, 1, 1), (0, 1, 0, 1), (1, 0, 1, 0), (0, 1, 1, 0, 1, 1), (1, 1, 0, 1, 1, 0), (1, 0, 1, 1, 0, 1)}
K2_PHI = {
    (): 1, (0,): 2, (1,): 2,
    (1, 1): 0, (1, 0): 1, (0, 1): 0,
    (1, 0, 1): 2, (1, 1, 0): 0, (0, 1, 1): 1, (0, 1, 0): 0,
    (0, 1, 1, 0): 2, (1, 1, 0, 1): 1, (1, 0, 1, 1): 0,
    (0, 1, 1, 0, 1): 0, (1, 1, 0, 1, 1): 2, (1, 0, 1, 1, 0): 0,
}
K2_TYPE_K = {(), (1, 0), (0, 1, 1), (1, 1, 0, 1)}

MAX_LISTED_FAILURES = 5


@dataclass
class SuiteResult:
    name: str
    passed: bool
    cases: int
    failures: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "failures": self.failures[:MAX_LISTED_FAILURES],
            "failure_count": len(self.failures),
            **self.info,
        }


def pattern_tables() -> SuiteResult:
    elem = {p.entries for p in enumerate_elementary(2)}
    prime = {p.entries for p in enumerate_prime(2)}
    tk = {p.entries for p in type_k_primes(2)}
    fails = []
    if elem != K2_ELEMENTARY:
        fails.append({"table": "elementary", "got": sorted(elem)})
    if prime != set(K2_PHI):
        fails.append({"table": "prime", "got": sorted(prime)})
    if tk != K2_TYPE_K:
        fails.append({"table": "type_k_prime", "got": sorted(tk)})
    for t, want in K2_PHI.items():
        got = PHI[character(t, 2)]
        if got != want:
            fails.append({"table": "phi", "pattern": list(t), "got": got, "want": want})
    return SuiteResult("patterns", not fails, 3 + len(K2_PHI), fails)


def path_equivalence(seed: int = 0, count: int = 100, N: int = 10_000) -> SuiteResult:
    fails = []
    for alpha, c in sample_pairs(seed, count):
        a, b = path_recursive(alpha, c, N), path_direct(alpha, c, N)
        if a != b:
            fails.append({"alpha": str(alpha), "c": str(c), "first_mismatch": a.first_mismatch(b)})
    return SuiteResult("paths", not fails, count, fails, {"N": N})


def level_identities(seed: int = 0, count: int = 100, max_level: int = 12) -> SuiteResult:
    """Three-distance placement, ``k D_{q_n}`` residues and the backward identities."""
    fails = []
    cases = 0
    backwards_levels = 0
    id2_literal_fail = 0
    id2_derived_fail = 0
    modes: dict[str, int] = {}
    first_id2 = None
    for alpha, c in sample_pairs(seed, count):
        tag = {"alpha": str(alpha), "c": str(c)}
        for n in range(max_level + 1):
            cases += 1
            rep = three_distance_check(alpha, n)
            modes[rep.mode] = modes.get(rep.mode, 0) + 1
            if not rep.passed:
                fails.append({**tag, "check": "three_distance", **rep.to_dict()})
        res = dqn_residue_check(alpha, c, max_level)
        cases += 1
        if not res.passed:
            bad = next(row for row in res.levels if not row["passed"])
            fails.append({**tag, "check": "dqn_residue", **bad})
        for n in range(0, max_level + 1, 2):
            if alpha.q(n) % c.denominator == 0:
                continue
            backwards_levels += 1
            rep = backwards_check(alpha, c, n)
            if not rep.identity1.passed:
                fails.append({**tag, "check": "backwards_identity1", **rep.to_dict()})
            if not rep.identity2_literal.passed:
                id2_literal_fail += 1
                if first_id2 is None:
                    first_id2 = {**tag, "n": n, **(rep.identity2_literal.counterexample or {})}
            if not rep.identity2_derived.passed:
                id2_derived_fail += 1
    info = {
        "max_level": max_level,
        "three_distance_modes": modes,
        "backwards_levels": backwards_levels,
        "identity2_literal_failing_levels": id2_literal_fail,
        "identity2_literal_first_counterexample": first_id2,
        "identity2_derived_failing_levels": id2_derived_fail,
    }
    return SuiteResult("identities", not fails, cases + backwards_levels, fails, info)


def route_agreement(seed: int = 0, count: int = 500) -> SuiteResult:
    fails = []
    verdicts = {v.value: 0 for v in Verdict}
    for cf, k in route_family(seed, count):
        r3 = [check_pattern_condition(cf, k, parity) for parity in (0, 1)]
        r2 = [check_q_condition(cf, k, parity) for parity in (0, 1)]
        if r3 != r2:
            fails.append({"cf": str(cf), "k": k, "pattern": r3, "q": r2})
        elif r3[0][0] and r3[1][0]:
            fails.append({"cf": str(cf), "k": k, "both_sides_bounded": True})
        else:
            verdicts[classify(cf, 1, k).verdict.value] += 1
    return SuiteResult("routes", not fails, count, fails, {"verdicts": verdicts})


def constructor_probe(max_len: int = 4, max_entry: int = 3, ks=(2, 3)) -> SuiteResult:
    fails = []
    cases = 0
    for k in ks:
        for L in range(max_len + 1):
            for B in itertools.product(range(max_entry + 1), repeat=L):
                if any(b < 1 for b in B[1:]):
                    continue
                for parity in (0, 1):
                    cases += 1
                    want = Verdict.ABOVE if parity == 0 else Verdict.BELOW
                    try:
                        cf = construct_member(B, k, parity)
                        got = classify(cf, 1, k).verdict
                        ok = got is want and cf.terms(L) == B
                    except Exception as exc:  # recorded, not raised: the suite reports every case
                        ok, got = False, type(exc).__name__
                    if not ok:
                        fails.append({"B": list(B), "k": k, "parity": parity, "got": str(got)})
    return SuiteResult("construct", not fails, cases, fails)


def extrema_probe(N_small: int = 1_000, N_mid: int = 10_000, N_large: int = 1_000_000) -> SuiteResult:
    """Finite-range boundedness behaviour for the silver and golden rotations at ``c = 1/2``."""
    c = Fraction(1, 2)
    fails = []
    info = {}
    silver = AlphaHandle.parse("0;(2)")
    lo_L, _, hi_L, _ = empirical_extrema(silver, c, N_large)
    lo_M, _, _, _ = empirical_extrema(silver, c, N_mid)
    _, _, hi_S, _ = empirical_extrema(silver, c, N_small)
    info["silver"] = {"min_large": lo_L, "min_mid": lo_M, "max_large": hi_L, "max_small": hi_S}
    if not (lo_L == lo_M and hi_L > hi_S):
        fails.append({"alpha": "0;(2)"})
    golden = AlphaHandle.parse("0;(1)")
    gl, _, gh, _ = empirical_extrema(golden, c, N_large)
    sl, _, sh, _ = empirical_extrema(golden, c, N_small)
    info["golden"] = {"min_large": gl, "min_small": sl, "max_large": gh, "max_small": sh}
    if not (gl < sl and gh > sh):
        fails.append({"alpha": "0;(1)"})
    return SuiteResult("extrema", not fails, 2, fails, info)


def dimension_bound(tol=Fraction(1, 10**9)) -> SuiteResult:
    import mpmath

    fails = []
    g1 = g_function(1)
    target = mpmath.pi ** 2 / 12
    width = float(g1.delta)
    if not (g1.a <= target <= g1.b and width < 1e-12):
        fails.append({"check": "g(1)", "enclosure": [float(g1.a), float(g1.b)]})
    d = cstar(tol)
    if not (Fraction(1, 2) < d.lo < d.hi < 1 and d.hi - d.lo < Fraction(tol) and d.g_lo[0] > 1 > d.g_hi[1]):
        fails.append({"check": "cstar", **d.to_json()})
    info = {"g1_enclosure": [float(g1.a), float(g1.b)], "g1_width": width, "cstar": d.to_json()}
    return SuiteResult("dimension", not fails, 2, fails, info)


SUITES = {
    "patterns": lambda seed: pattern_tables(),
    "paths": lambda seed: path_equivalence(seed),
    "identities": lambda seed: level_identities(seed),
    "routes": lambda seed: route_agreement(seed),
    "construct": lambda seed: constructor_probe(),
    "extrema": lambda seed: extrema_probe(),
    "dimension": lambda seed: dimension_bound(),
}

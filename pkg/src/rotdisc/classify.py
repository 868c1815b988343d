"""One-sided boundedness of the local discrepancy for eventually periodic expansions.

For ``c = h/k`` the path ``D_n(alpha, c)`` is bounded above (below) exactly when
some even (odd) ``m >= -1`` has ``(a_0 .. a_m)`` of type k and
``k | a_{m+2n}`` for every ``n >= 1``; equivalently ``k | q_{m+2n}`` for all
``n >= 0``.  Both routes are implemented and checked against each other.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from mpmath import iv

from .discrepancy import path_recursive
from .errors import ConsistencyError
from .numkernel import CFExpansion
from .orbit import AlphaHandle
from .patterns import character, elementary_run_length, reachable_space


class Verdict(enum.Enum):
    ABOVE = "above"
    BELOW = "below"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    witness_m: Optional[int]
    condition2_m: Optional[int]

    def to_json(self, cf: CFExpansion, h: int, k: int) -> dict:
        return {
            "alpha": str(cf),
            "h": h,
            "k": k,
            "verdict": self.verdict.value,
            "witness_m": self.witness_m,
            "condition2_m": self.condition2_m,
        }


def _check_args(cf: CFExpansion, h: int, k: int):
    if cf.is_rational:
        raise ValueError("expansion must be infinite (irrational alpha)")
    if k < 2 or not 0 < h < k or math.gcd(h, k) != 1:
        raise ValueError(f"need 0 < h < k with gcd(h, k) = 1, got h={h}, k={k}")


def _parity(m: int) -> int:
    return m % 2  # -1 % 2 == 1


def _tail_divisible(cf: CFExpansion, k: int, m: int) -> bool:
    """``k | a_{m+2n}`` for all ``n >= 1``."""
    L, T = len(cf.prefix), len(cf.period)
    stop = max(m + 2, L) + 2 * T
    return all(cf.term(i) % k == 0 for i in range(m + 2, stop + 1, 2))


def _condition3_witnesses(cf: CFExpansion, k: int) -> dict[int, int]:
    """Minimal m per parity satisfying the pattern route."""
    L, T = len(cf.prefix), len(cf.period)
    sp = reachable_space(k)
    state = (1, 0)
    found: dict[int, int] = {}
    seen = set()
    m = -1
    while len(found) < 2:
        if m >= L:
            key = ((m - L) % (2 * T), state)
            if key in seen:
                break
            seen.add(key)
        par = _parity(m)
        if par not in found and state[1] == 0 and _tail_divisible(cf, k, m):
            found[par] = m
        m += 1
        state = sp.states[sp.gens[cf.term(m) % k][sp.index[state]]]
    return found


def _q_residues(cf: CFExpansion, k: int):
    """q_n mod k for n = -1 .. end, with the index where its eventual cycle starts and its length."""
    L, T = len(cf.prefix), len(cf.period)
    res = [0]  # q_{-1}
    prev, cur = 1, 0
    seen: dict = {}
    n = -1
    while True:
        if n >= L:
            key = ((n - L) % T, prev, cur)
            if key in seen:
                start = seen[key]
                return res, start, n - start
            seen[key] = n
        n += 1
        prev, cur = cur, (cf.term(n) * cur + prev) % k
        res.append(cur)


def check_q_condition(cf: CFExpansion, k: int, parity: int) -> tuple[bool, Optional[int]]:
    """Least ``m >= -1`` of the given parity with ``k | q_{m+2n}`` for all ``n >= 0``."""
    _check_args(cf, 1, k)
    if parity not in (0, 1):
        raise ValueError("parity must be 0 (even) or 1 (odd)")
    res, start, period = _q_residues(cf, k)
    # r(n) for any n >= -1, folding indices past the computed range back into the cycle
    def r(n):
        i = n + 1
        if i >= len(res):
            i = start + 1 + (n - start) % period
        return res[i]
    for m in range(-1, start + 2 * period + 1):
        if _parity(m) != parity:
            continue
        if all(r(m + 2 * j) == 0 for j in range(period + 1 + max(0, start - m))):
            return True, m
    return False, None


def check_pattern_condition(cf: CFExpansion, k: int, parity: int) -> tuple[bool, Optional[int]]:
    """Least ``m >= -1`` of the given parity with ``(a_0 .. a_m)`` of type k and
    ``k | a_{m+2n}`` for all ``n >= 1``."""
    _check_args(cf, 1, k)
    if parity not in (0, 1):
        raise ValueError("parity must be 0 (even) or 1 (odd)")
    m = _condition3_witnesses(cf, k).get(parity)
    return m is not None, m


def classify(cf: CFExpansion, h: int, k: int) -> Classification:
    _check_args(cf, h, k)
    w3 = _condition3_witnesses(cf, k)
    w2 = {}
    for par in (0, 1):
        ok, m = check_q_condition(cf, k, par)
        if ok:
            w2[par] = m
    if w2 != w3:
        raise ConsistencyError(f"route disagreement for {cf}, k={k}: pattern {w3} vs q-residue {w2}")
    if len(w3) == 2:
        raise ConsistencyError(f"{cf} reported bounded on both sides for k={k}")
    if 0 in w3:
        return Classification(Verdict.ABOVE, w3[0], w2[0])
    if 1 in w3:
        return Classification(Verdict.BELOW, w3[1], w2[1])
    return Classification(Verdict.UNBOUNDED, None, None)


# ---------------------------------------------------------------------------
# constructing members of the one-sided set
# ---------------------------------------------------------------------------


def _odd_bridge(k: int) -> tuple[int, ...]:
    """Shortest odd-length word (entries in 1..k) taking state (1, 0) to some (j, 0)."""
    sp = reachable_space(k)
    start = ((1, 0), 0)
    prev = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        state, par = node
        if par == 1 and state[1] == 0:
            word = []
            while prev[node] is not None:
                node, a = prev[node]
                word.append(a)
            return tuple(reversed(word))
        for a in range(1, k + 1):
            nxt = (sp.states[sp.gens[a % k][sp.index[state]]], 1 - par)
            if nxt not in prev:
                prev[nxt] = (node, a)
                queue.append(nxt)
    raise ConsistencyError(f"no odd-length type-{k} word from the identity state")


def construct_member(B: Sequence[int], k: int, parity: int) -> CFExpansion:
    """An expansion extending ``B`` whose path at any ``c = h/k`` is bounded above
    (parity 0) or below (parity 1).

    ``B`` is closed off with elementary runs ``b_m^(j_m - 1) .. b_0^(j_0 - 1)`` so
    the word evaluates to the identity, an odd-length type-k word is added if
    the parity is wrong, and the tail ``(1, k)`` repeats from there on.
    """
    B = tuple(int(b) for b in B)
    if k < 2:
        raise ValueError("k must be >= 2")
    if parity not in (0, 1):
        raise ValueError("parity must be 0 (even) or 1 (odd)")
    if B and (B[0] < 0 or any(b < 1 for b in B[1:])):
        raise ValueError(f"invalid expansion prefix {B}")
    word = list(B)
    for b in reversed(B):
        run = elementary_run_length(b, k) - 1
        word.extend([b if b > 0 else k] * run)
    if character(word, k) != (1, 0):
        raise ConsistencyError(f"closing runs failed for {B} mod {k}")
    if _parity(len(word) - 1) != parity:
        word.extend(_odd_bridge(k))
    m = len(word) - 1
    if character(word, k)[1] != 0 or _parity(m) != parity:
        raise ConsistencyError(f"type-{k} closure failed for {B}")
    cf = CFExpansion(tuple(word), (1, k))
    got = classify(cf, 1, k)
    want = Verdict.ABOVE if parity == 0 else Verdict.BELOW
    if got.verdict is not want or cf.terms(len(B)) != B:
        raise ConsistencyError(f"constructed {cf} classified {got.verdict.value}")
    return cf


# ---------------------------------------------------------------------------
# empirical probe
# ---------------------------------------------------------------------------


def empirical_extrema(alpha: AlphaHandle, c: Fraction, N: int) -> tuple[int, int, int, int]:
    """``(min, argmin, max, argmax)`` of ``k D_n`` over ``1 <= n <= N`` (first occurrences)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    v = path_recursive(alpha, Fraction(c), N).values[1:]
    lo, hi = int(v.argmin()), int(v.argmax())
    return int(v[lo]), lo + 1, int(v[hi]), hi + 1


# ---------------------------------------------------------------------------
# dimension bound
# ---------------------------------------------------------------------------

_PREC = 96


def _iv_rational(x: Fraction):
    return iv.mpf(x.numerator) / x.denominator


def g_function(c, terms: int = 10_000):
    """Certified enclosure of ``g(c) = 2^(-c) * sum_{j>=1} j^(-2c)`` as an mpmath interval.

    The sum runs exactly (outward rounded) up to ``terms - 1``; the rest is
    enclosed using convexity of ``x^(-s)``: the trapezoid rule gives a lower
    bound and the midpoint rule an upper bound.
    """
    c = Fraction(c)
    if c <= Fraction(1, 2):
        raise ValueError("the series defining g diverges for c <= 1/2")
    J = int(terms)
    if J < 2:
        raise ValueError("terms must be >= 2")
    saved = iv.prec
    iv.prec = _PREC
    try:
        cc = _iv_rational(c)
        s = 2 * cc
        total = iv.mpf(0)
        for j in range(1, J):
            total += iv.mpf(j) ** (-s)
        fJ = iv.mpf(J) ** (-s)
        tail_lo = iv.mpf(J) ** (1 - s) / (s - 1) + fJ / 2
        tail_hi = (iv.mpf(J) - iv.mpf(1) / 2) ** (1 - s) / (s - 1)
        tail = iv.mpf([tail_lo.a, tail_hi.b])
        return iv.mpf(2) ** (-cc) * (total + tail)
    finally:
        iv.prec = saved


def _side_of_one(c: Fraction) -> tuple[int, object]:
    """+1 if g(c) > 1, -1 if g(c) < 1, certified; increases the term count until decided."""
    terms = 256
    while True:
        g = g_function(c, terms)
        if g.a > 1:
            return 1, g
        if g.b < 1:
            return -1, g
        if terms > 1 << 22:
            return 0, g
        terms *= 4


@dataclass
class DimBound:
    lo: Fraction
    hi: Fraction
    g_lo: tuple[float, float]
    g_hi: tuple[float, float]
    g_samples: list[tuple[Fraction, float, float]] = field(default_factory=list)

    @property
    def c_star(self) -> Fraction:
        return self.hi

    def to_json(self) -> dict:
        return {
            "c_star_lo": str(self.lo),
            "c_star_hi": str(self.hi),
            "c_star_lo_float": float(self.lo),
            "c_star_hi_float": float(self.hi),
            "g_lo_enclosure": list(self.g_lo),
            "g_hi_enclosure": list(self.g_hi),
            "g_samples": [{"c": str(c), "lower": a, "upper": b} for c, a, b in self.g_samples],
        }


def _bounds(g) -> tuple[float, float]:
    # rounded outward so the floats still enclose the interval
    return float(iv.mpf(g.a).a), float(iv.mpf(g.b).b)


def cstar(tolerance=Fraction(1, 10**9)) -> DimBound:
    """Bracket ``[lo, hi]`` around the root of ``g(c) = 1`` with ``g(lo) > 1 > g(hi)`` certified."""
    tol = Fraction(tolerance)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    lo, hi = Fraction(3, 5), Fraction(1)
    s_lo, g_lo = _side_of_one(lo)
    s_hi, g_hi = _side_of_one(hi)
    if s_lo != 1 or s_hi != -1:
        raise ConsistencyError("initial bracket for the dimension bound is not certified")
    samples = [(lo, *_bounds(g_lo)), (hi, *_bounds(g_hi))]
    while hi - lo >= tol:
        mid = (lo + hi) / 2
        side, g = _side_of_one(mid)
        if side == 0:
            # undecidable at this point; nudge off it
            mid = (lo + 2 * hi) / 3
            side, g = _side_of_one(mid)
            if side == 0:
                break
        samples.append((mid, *_bounds(g)))
        if side == 1:
            lo, g_lo = mid, g
        else:
            hi, g_hi = mid, g
    return DimBound(lo, hi, _bounds(g_lo), _bounds(g_hi), samples)

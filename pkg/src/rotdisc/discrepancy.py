"""Local discrepancy paths ``v_n = k * D_n(alpha, h/k)`` as exact integers.

Three independent routes reach the same numbers:

* :func:`path_direct` sums the orbit indicator step by step;
* :func:`path_recursive` lifts single-period templates level by level,
  touching the orbit only below a base level and for the crossing indices l_n;
* :func:`kD_at` evaluates one index in O(log n) through floor sums.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Optional

import numpy as np

from .errors import ConsistencyError
from .numkernel import floor_sum
from .orbit import (
    INFINITY,
    AlphaHandle,
    convergent_error_ok,
    critical_index,
    l_n,
    lambda_table,
    xi,
    xi_sequence,
)


def _split_c(c) -> tuple[Fraction, int, int]:
    c = Fraction(c)
    if not 0 < c < 1:
        raise ValueError(f"c must lie in (0, 1), got {c}")
    return c, c.numerator, c.denominator


@dataclass(frozen=True)
class DiscrepancyPath:
    """``values[n] = k * D_n`` for ``n = 0 .. N``."""

    c: Fraction
    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def h(self) -> int:
        return self.c.numerator

    @property
    def k(self) -> int:
        return self.c.denominator

    @property
    def N(self) -> int:
        return len(self.values) - 1

    @property
    def xi(self) -> np.ndarray:
        """Indicator sequence ``xi_1 .. xi_N``."""
        return (np.diff(self.values) + self.h) // self.k

    def __eq__(self, other):
        if not isinstance(other, DiscrepancyPath):
            return NotImplemented
        return self.c == other.c and np.array_equal(self.values, other.values)

    def first_mismatch(self, other: DiscrepancyPath) -> Optional[int]:
        n = min(len(self.values), len(other.values))
        bad = np.nonzero(self.values[:n] != other.values[:n])[0]
        if len(bad):
            return int(bad[0])
        return None if len(self.values) == len(other.values) else n


@dataclass(frozen=True)
class ExtremaTrack:
    """Running maximum and minimum of a path (k-scaled)."""

    runmax: np.ndarray
    runmin: np.ndarray

    def at(self, n: int) -> tuple[int, int]:
        return int(self.runmax[n]), int(self.runmin[n])


def path_direct(alpha: AlphaHandle, c, N: int, backend: str = "adaptive") -> DiscrepancyPath:
    c, h, k = _split_c(c)
    if N < 0:
        raise ValueError("N must be >= 0")
    values = np.zeros(N + 1, dtype=np.int64)
    if N:
        bits = np.asarray(xi_sequence(alpha, c, N, backend), dtype=np.int64)
        np.cumsum(k * bits - h, out=values[1:])
    return DiscrepancyPath(c, values)


def running_extrema(path: DiscrepancyPath) -> ExtremaTrack:
    if len(path.values) == 0:
        raise ValueError("empty path")
    return ExtremaTrack(
        np.maximum.accumulate(path.values), np.minimum.accumulate(path.values)
    )


def kD_at(alpha: AlphaHandle, c, n: int) -> int:
    """``k * D_n`` at a single index via floor sums.

    Uses ``1[{x} < c] = floor(x) - floor(x - c)`` with alpha replaced by an
    even-index convergent ``p/q`` whose successor satisfies ``q' >= n k``;
    then ``j*alpha`` and ``j*p/q`` share both floors for every ``j <= n``.
    """
    c, h, k = _split_c(c)
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 0
    N = 0
    while alpha.q(N + 1) < n * k:
        N += 2
    p, q = alpha.p(N), alpha.q(N)
    below = floor_sum(n, q, p, p) - floor_sum(n, q * k, p * k, p * k - h * q)
    return k * below - h * n


# ---------------------------------------------------------------------------
# templates and recursive assembly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TemplatePair:
    """The two single-period shapes at level ``n`` (k-scaled, indices ``j = 1 .. q_n``).

    ``hat`` has the critical orbit point inside the window, ``check`` has it
    outside; they differ from index ``lam`` onwards by exactly ``k``.
    """

    n: int
    q: int
    lam: int
    l_n: float
    hat: np.ndarray
    check: np.ndarray

    @property
    def first_is_hat(self) -> bool:
        """Whether period 0 of the true path follows ``hat``."""
        if self.n % 2 == 0:
            return self.l_n > 0
        return self.l_n == 0

    def critical_on(self, periods: np.ndarray) -> np.ndarray:
        if self.n % 2 == 0:
            return periods < self.l_n
        return periods >= self.l_n


def templates(alpha: AlphaHandle, c, n: int) -> TemplatePair:
    """Hat/check templates at level ``n`` from the lambda table alone (no orbit calls
    except the l_n search).  Odd ``n`` uses the mirrored index ``[c q_n] + 1``."""
    c, h, k = _split_c(c)
    q = alpha.q(n)
    if q % k == 0:
        raise ValueError(f"templates need k not dividing q_n (k={k}, q_{n}={q})")
    tab = lambda_table(alpha, n)
    base = (h * q) // k
    crit = critical_index(c, q, n)
    inside = range(0, base + 1) if n % 2 == 0 else [*range(1, base + 1), crit]
    bits = np.zeros(q + 1, dtype=np.int64)
    for i in inside:
        bits[tab[i]] = 1
    hat = np.cumsum(k * bits[1:] - h)
    lam = tab[crit]
    check = hat.copy()
    check[lam - 1:] -= k
    rem = (h * q) % k
    if hat[-1] != k - rem or check[-1] != -rem:
        raise ConsistencyError(f"template endpoints wrong at level {n}")
    return TemplatePair(n, q, lam, l_n(alpha, c, n), hat, check)


def _base_level(alpha: AlphaHandle, N: int) -> int:
    root = isqrt(N)
    n = 0
    while alpha.q(n + 1) <= root:
        n += 1
    return n


def path_recursive(alpha: AlphaHandle, c, N: int) -> DiscrepancyPath:
    """Assemble the path by period lifting.

    Below the base level (largest n with ``q_n <= sqrt(N)``) the orbit is
    evaluated directly; every later segment ``(q_n, q_{n+1}]`` is copied
    (``k | q_n``) or lifted from the level-n templates.  Each level first
    confirms that its template reproduces the already-built prefix.
    """
    c, h, k = _split_c(c)
    if N < 0:
        raise ValueError("N must be >= 0")
    values = np.zeros(N + 1, dtype=np.int64)
    if N == 0:
        return DiscrepancyPath(c, values)
    n = _base_level(alpha, N)
    Q0 = min(alpha.q(n), N)
    bits = np.asarray(xi_sequence(alpha, c, Q0), dtype=np.int64)
    np.cumsum(k * bits - h, out=values[1:Q0 + 1])

    while alpha.q(n) < N:
        Q = alpha.q(n)
        end = min(alpha.q(n + 1), N)
        if end > Q:
            _lift_level(alpha, c, n, values, Q, end)
        n += 1
    return DiscrepancyPath(c, values)


def _lift_level(alpha, c, n, values, Q, end):
    h, k = c.numerator, c.denominator
    idx = np.arange(Q + 1, end + 1)
    periods = (idx - 1) // Q
    j = idx - periods * Q
    if Q % k == 0:
        if values[Q] != 0:
            raise ConsistencyError(f"k | q_{n} but k*D_(q_{n}) = {values[Q]}")
        values[Q + 1:end + 1] = values[j]
        return
    tp = templates(alpha, c, n)
    first = tp.hat if tp.first_is_hat else tp.check
    if not np.array_equal(values[1:Q + 1], first):
        raise ConsistencyError(f"level {n} template does not match the built prefix")
    count = int(periods[-1]) + 1
    on = tp.critical_on(np.arange(count))
    ends = np.where(on, tp.hat[-1], tp.check[-1])
    offsets = np.concatenate(([0], np.cumsum(ends)[:-1]))
    values[Q + 1:end + 1] = offsets[periods] + np.where(on[periods], tp.hat[j - 1], tp.check[j - 1])


# ---------------------------------------------------------------------------
# verification reports
# ---------------------------------------------------------------------------


@dataclass
class IdentityResult:
    passed: bool
    counterexample: Optional[dict] = None
    failures: int = 0

    def to_dict(self) -> dict:
        return {"passed": self.passed, "failures": self.failures, "counterexample": self.counterexample}


@dataclass
class BackwardsReport:
    n: int
    l_n: float
    lam: int
    mode: str
    identity1: IdentityResult
    identity2_literal: IdentityResult
    identity2_derived: IdentityResult

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "l_n": None if self.l_n == INFINITY else self.l_n,
            "lambda": self.lam,
            "mode": self.mode,
            "identity1": self.identity1.to_dict(),
            "identity2_literal": self.identity2_literal.to_dict(),
            "identity2_derived": self.identity2_derived.to_dict(),
        }


class _Tally:
    def __init__(self):
        self.failures = 0
        self.first = None

    def add(self, ok: bool, where: dict):
        if not ok:
            self.failures += 1
            if self.first is None:
                self.first = where

    def add_array(self, lhs: np.ndarray, rhs: np.ndarray, **where):
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            self.failures += int(bad.size)
            if self.first is None:
                i = int(bad[0])
                self.first = {**where, "j": i, "lhs": int(lhs[i]), "rhs": int(rhs[i])}

    def result(self) -> IdentityResult:
        return IdentityResult(self.failures == 0, self.first, self.failures)


def _near(q: int, centre: int, radius: int = 2) -> set[int]:
    return {(centre + d) % q for d in range(-radius, radius + 1)}


def backwards_check(alpha: AlphaHandle, c, n: int, exhaustive_limit: int = 200_000) -> BackwardsReport:
    """Evaluate both backward-comparison identities at an even level with ``k`` not dividing ``q_n``.

    First identity, for ``j`` in ``[0, q_{n-1}]``::

        (v[a q + j] - v[q_{n+1}]) - (v[j] - v[q_{n-1}]) == k * [1 <= l_n < inf and j < lam <= q_{n-1}]

    Second identity, for ``l`` in ``[1, a]`` and ``j`` in ``[0, q_n]``, is tested
    with the literal guard (same right-hand side as the first identity) and in the
    form that follows from the period-lifting formula,
    ``k * [1 <= l_n < l and j < lam]``.

    Small levels are checked against the full direct path.  Large ones use an
    exact sparse evaluation: both sides are piecewise constant in ``j``, the
    left side jumps only where ``xi`` differs between the two shifted indices,
    and that can only happen for ``j = lam_r`` with ``r`` within 2 of
    ``c q_n`` or of 0 (requires the convergent error bound, checked exactly).
    Values at the breakpoints come from :func:`kD_at`.
    """
    c, h, k = _split_c(c)
    if n < 0 or n % 2:
        raise ValueError("backwards_check needs an even level n >= 0")
    q, qm1, q1 = alpha.q(n), alpha.q(n - 1), alpha.q(n + 1)
    if q % k == 0:
        raise ValueError(f"backwards_check needs k not dividing q_n (k={k}, q_{n}={q})")
    a = alpha.a(n + 1)
    ln = l_n(alpha, c, n)
    tab = lambda_table(alpha, n)
    lam = tab[critical_index(c, q, n)]
    cond = 1 <= ln < INFINITY

    def rhs1(j):
        return k if cond and j < lam <= qm1 else 0

    def rhs2_derived(l, j):
        return k if cond and ln < l and j < lam else 0

    t1, t2p, t2d = _Tally(), _Tally(), _Tally()

    if q1 <= exhaustive_limit:
        mode = "exhaustive"
        v = path_direct(alpha, c, q1).values
        j = np.arange(qm1 + 1)
        t1.add_array((v[a * q + j] - v[q1]) - (v[j] - v[qm1]), np.where(cond & (j < lam) & (lam <= qm1), k, 0))
        j = np.arange(q + 1)
        literal = np.where(cond & (j < lam) & (lam <= qm1), k, 0)
        for l in range(1, a + 1):
            lhs = (v[(l - 1) * q + j] - v[l * q]) - (v[j] - v[q])
            t2p.add_array(lhs, literal, l=l)
            t2d.add_array(lhs, np.where(cond & (ln < l) & (j < lam), k, 0), l=l)
        return BackwardsReport(n, ln, lam, mode, t1.result(), t2p.result(), t2d.result())

    mode = "sparse"
    if not convergent_error_ok(alpha, n):
        raise ConsistencyError(f"convergent error bound fails at level {n}")
    base = (h * q) // k
    candidates = sorted({tab[r] for r in _near(q, base) | _near(q, 0)})
    D: dict[int, int] = {}

    def kd(x):
        if x not in D:
            D[x] = kD_at(alpha, c, x)
        return D[x]

    def profile(shift: int, jmax: int, f0: int, f_end: int):
        """Breakpoints and values of ``f(j)`` on ``[0, jmax]`` given ``f(0)``."""
        pts = {0, jmax}
        if lam <= jmax:
            pts.add(lam)
        jumps = {}
        for b in candidates:
            if 1 <= b <= jmax and shift:
                d = xi(alpha, shift + b, c) - xi(alpha, b, c)
                if d:
                    jumps[b] = k * d
                    pts.add(b)
        out = []
        f = f0
        for s in sorted(pts):
            f += jumps.get(s, 0)
            out.append((s, f))
        if out[-1][1] != f_end:
            raise ConsistencyError(f"sparse profile at level {n} does not close (shift {shift})")
        return out

    f0 = (kd(a * q) - kd(q1)) - (0 - kd(qm1))
    for j, lhs in profile(a * q, qm1, f0, 0):
        t1.add(lhs == rhs1(j), {"j": j, "lhs": lhs, "rhs": rhs1(j)})
    for l in range(1, a + 1):
        f0 = (kd((l - 1) * q) - kd(l * q)) - (0 - kd(q))
        for j, lhs in profile((l - 1) * q, q, f0, 0):
            t2p.add(lhs == rhs1(j), {"l": l, "j": j, "lhs": lhs, "rhs": rhs1(j)})
            t2d.add(lhs == rhs2_derived(l, j), {"l": l, "j": j, "lhs": lhs, "rhs": rhs2_derived(l, j)})
    return BackwardsReport(n, ln, lam, mode, t1.result(), t2p.result(), t2d.result())


@dataclass
class ResidueReport:
    passed: bool
    levels: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "levels": self.levels}


def dqn_residue_check(alpha: AlphaHandle, c, n_max: int) -> ResidueReport:
    """``k D_{q_n}`` at each level: 0 when ``k | q_n``, otherwise the residue of
    ``-h q_n`` in ``(-k, k)`` whose sign is fixed by whether ``l_n = 0``."""
    c, h, k = _split_c(c)
    levels = []
    ok_all = True
    for n in range(n_max + 1):
        q = alpha.q(n)
        v = kD_at(alpha, c, q)
        row = {"n": n, "q_n": q, "kD": v}
        if q % k == 0:
            expected = 0
            row["l_n"] = None
        else:
            rem = (h * q) % k
            ln = l_n(alpha, c, n)
            row["l_n"] = None if ln == INFINITY else ln
            low, high = -rem, k - rem
            if n % 2 == 0:
                expected = low if ln == 0 else high
            else:
                expected = high if ln == 0 else low
        row["expected"] = expected
        row["passed"] = v == expected
        ok_all &= row["passed"]
        levels.append(row)
    return ResidueReport(ok_all, levels)


def path_csv(path: DiscrepancyPath) -> str:
    """CSV text with columns ``n, xi_n, kDn, runmax, runmin`` for ``n = 1 .. N``."""
    track = running_extrema(path)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "xi_n", "kDn", "runmax", "runmin"])
    bits = path.xi
    for n in range(1, path.N + 1):
        w.writerow([n, int(bits[n - 1]), int(path.values[n]), int(track.runmax[n]), int(track.runmin[n])])
    return buf.getvalue()

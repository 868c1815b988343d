"""Exact evaluation of the rotation orbit ``{j*alpha}`` for quadratic irrationals.

Every membership decision reduces to an exact floor ``floor(x * alpha)`` for an
integer ``x``.  Two independent back-ends compute it:

``adaptive``
    bracket ``alpha`` between a convergent ``p_N/q_N`` and
    ``p_N/q_N +- 1/(q_N q_{N+1})`` (the side is fixed by the parity of N) and
    deepen N until the bracket of ``x * alpha`` contains no integer;
``surd``
    closed-form floor of ``(x*a + x*b*sqrt(d)) / e`` with ``math.isqrt``.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import ConsistencyError
from .numkernel import (
    CFExpansion,
    Surd,
    _cache_for,
    cf_from_surd,
    cf_to_surd,
    parse_cf,
    parse_surd,
)

INFINITY = math.inf

BACKENDS = ("adaptive", "surd", "both")


class Order(enum.Enum):
    LESS = -1
    GREATER = 1


class AlphaHandle:
    """An irrational rotation number with its expansion, exact value and convergents."""

    def __init__(self, cf: CFExpansion, surd: Optional[Surd] = None):
        if cf.is_rational:
            raise ValueError("alpha must be irrational (expansion needs a period)")
        self.cf = cf
        self._surd = surd
        self._conv = _cache_for(cf)

    @classmethod
    def from_surd(cls, x: Surd) -> AlphaHandle:
        return cls(cf_from_surd(x), x)

    @classmethod
    def from_cf(cls, cf: CFExpansion | str) -> AlphaHandle:
        if isinstance(cf, str):
            cf = parse_cf(cf)
        return cls(cf)

    @classmethod
    def parse(cls, text: str) -> AlphaHandle:
        """Accept either a surd literal or a CF literal."""
        if "sqrt" in text:
            return cls.from_surd(parse_surd(text))
        return cls.from_cf(text)

    @property
    def surd(self) -> Surd:
        if self._surd is None:
            self._surd = cf_to_surd(self.cf)
        return self._surd

    def a(self, n: int) -> int:
        return self.cf.term(n)

    def p(self, n: int) -> int:
        return self._conv.p(n)

    def q(self, n: int) -> int:
        return self._conv.q(n)

    def level_for(self, bound: int, parity: Optional[int] = None) -> int:
        """Smallest N >= 0 (of the given parity) with ``q_N * q_{N+1} > bound``."""
        n = 0 if parity is None else parity
        step = 1 if parity is None else 2
        while self.q(n) * self.q(n + 1) <= bound:
            n += step
        return n

    def __repr__(self):
        return f"AlphaHandle({self.cf})"

    def __str__(self):
        return str(self.cf)


# ---------------------------------------------------------------------------
# exact floors
# ---------------------------------------------------------------------------


def _floor_at_level(t: int, x: int, q: int, q1: int, even: bool) -> Optional[int]:
    """floor(x*alpha) from ``t = x*p_N`` if the level-N bracket decides it, else None."""
    fl, r = divmod(t, q)
    if even:
        # x*alpha in (t/q, t/q + x/(q q1))
        return fl if r * q1 + x <= q * q1 else None
    # x*alpha in (t/q - x/(q q1), t/q)
    if r:
        return fl if r * q1 >= x else None
    return fl - 1 if x <= q * q1 else None


def floor_multiple(alpha: AlphaHandle, x: int, backend: str = "adaptive") -> int:
    """Exact ``floor(x * alpha)`` for a positive integer ``x``."""
    if x < 1:
        raise ValueError("x must be >= 1")
    if backend == "surd":
        s = alpha.surd
        return (s * x).floor()
    if backend == "both":
        u = floor_multiple(alpha, x, "adaptive")
        v = floor_multiple(alpha, x, "surd")
        if u != v:
            raise ConsistencyError(f"back-ends disagree on floor({x}*alpha): {u} vs {v}")
        return u
    if backend != "adaptive":
        raise ValueError(f"unknown backend {backend!r}")
    N = alpha.level_for(4 * x)
    while True:
        q, q1 = alpha.q(N), alpha.q(N + 1)
        fl = _floor_at_level(x * alpha.p(N), x, q, q1, N % 2 == 0)
        if fl is not None:
            return fl
        N += 2


def floor_multiples(alpha: AlphaHandle, step: int, count: int) -> list[int]:
    """``[floor(step*j*alpha) for j in 1..count]`` using one shared even level.

    Indices the shared level cannot decide fall back to :func:`floor_multiple`.
    """
    if count <= 0:
        return []
    xmax = step * count
    N = alpha.level_for(4 * xmax, parity=0)
    p, q, q1 = alpha.p(N), alpha.q(N), alpha.q(N + 1)
    qq1 = q * q1
    inc_fl, inc_r = divmod(step * p, q)
    fl, r = 0, 0
    out = []
    x = 0
    for _ in range(count):
        x += step
        fl += inc_fl
        r += inc_r
        if r >= q:
            r -= q
            fl += 1
        if r * q1 + x <= qq1:
            out.append(fl)
        else:
            out.append(floor_multiple(alpha, x))
    return out


def frac_floor(alpha: AlphaHandle, j: int, m: int, backend: str = "adaptive") -> int:
    """Index ``r`` with ``{j*alpha}`` in ``(r/m, (r+1)/m)``."""
    return floor_multiple(alpha, m * j, backend) % m


def _check_c(c: Fraction):
    if not 0 < c < 1:
        raise ValueError(f"c must lie in (0, 1), got {c}")


def frac_compare(alpha: AlphaHandle, j: int, c: Fraction, backend: str = "adaptive") -> Order:
    """Exact order of ``{j*alpha}`` against ``c``."""
    c = Fraction(c)
    _check_c(c)
    if j < 1:
        raise ValueError("j must be >= 1")
    h, k = c.numerator, c.denominator
    return Order.LESS if frac_floor(alpha, j, k, backend) < h else Order.GREATER


def xi(alpha: AlphaHandle, j: int, c: Fraction, backend: str = "adaptive") -> int:
    return 1 if frac_compare(alpha, j, c, backend) is Order.LESS else 0


def xi_sequence(alpha: AlphaHandle, c: Fraction, N: int, backend: str = "adaptive") -> list[int]:
    """``[xi_1, ..., xi_N]`` for the window ``[0, c)``."""
    c = Fraction(c)
    _check_c(c)
    h, k = c.numerator, c.denominator
    if backend == "adaptive":
        return [1 if f % k < h else 0 for f in floor_multiples(alpha, k, N)]
    if backend == "surd":
        return [xi(alpha, j, c, "surd") for j in range(1, N + 1)]
    if backend == "both":
        u = xi_sequence(alpha, c, N, "adaptive")
        v = xi_sequence(alpha, c, N, "surd")
        if u != v:
            j = next(i for i, (x, y) in enumerate(zip(u, v), 1) if x != y)
            raise ConsistencyError(f"back-ends disagree at j={j}")
        return u
    raise ValueError(f"unknown backend {backend!r}")


# ---------------------------------------------------------------------------
# lambda tables, l_n
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LambdaTable:
    """``self[i]`` is the unique ``lam`` in ``[1, q_n]`` with ``lam * p_n == i (mod q_n)``.

    Entries are computed on demand from ``p_n^(-1) mod q_n``, so huge levels cost nothing.
    """

    n: int
    q: int
    p: int
    p_inv: int

    def __getitem__(self, i: int) -> int:
        # index q_n wraps to 0
        return (i * self.p_inv) % self.q or self.q

    def __len__(self):
        return self.q

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(self[i] for i in range(self.q))

    def index_of(self, lam: int) -> int:
        """Inverse lookup: the ``i`` in ``[0, q_n)`` with ``self[i] == lam``."""
        if not 1 <= lam <= self.q:
            raise ValueError(f"lambda must lie in [1, {self.q}]")
        return (lam * self.p) % self.q

    def placement_interval(self, i: int) -> tuple[Fraction, Fraction]:
        """Open interval that ``{self[i] * alpha}`` must occupy."""
        q = self.q
        if self.n % 2 == 0:
            return Fraction(i, q), Fraction(i + 1, q)
        if i == 0:
            return Fraction(q - 1, q), Fraction(1)
        return Fraction(i - 1, q), Fraction(i, q)


def lambda_table(alpha: AlphaHandle, n: int) -> LambdaTable:
    if n < 0:
        raise ValueError("n must be >= 0")
    p, q = alpha.p(n), alpha.q(n)
    return LambdaTable(n, q, p, pow(p, -1, q) if q > 1 else 0)


def critical_index(c: Fraction, q: int, n: int) -> int:
    """Residue index whose orbit point straddles ``c`` at level ``n``.

    ``[c q]`` for even n, ``[c q] + 1`` (wrapping ``q`` to 0) for odd n.
    """
    base = (c.numerator * q) // c.denominator
    return base if n % 2 == 0 else (base + 1) % q


def l_n(alpha: AlphaHandle, c: Fraction, n: int, backend: str = "adaptive"):
    """First period index at which the critical orbit point crosses ``c``; INFINITY if none.

    Even n searches for ``{(lam + l q_n) alpha} > c``, odd n for ``< c``.
    """
    c = Fraction(c)
    _check_c(c)
    q, q1 = alpha.q(n), alpha.q(n + 1)
    if q % c.denominator == 0:
        raise ValueError(f"l_n is undefined when k | q_n (k={c.denominator}, q_{n}={q})")
    lam = lambda_table(alpha, n)[critical_index(c, q, n)]
    want = Order.GREATER if n % 2 == 0 else Order.LESS
    for l in range(0, (q1 - lam) // q + 1):
        if frac_compare(alpha, lam + l * q, c, backend) is want:
            return l
    return INFINITY


def critical_lambda(alpha: AlphaHandle, c: Fraction, n: int) -> int:
    return lambda_table(alpha, n)[critical_index(Fraction(c), alpha.q(n), n)]


# ---------------------------------------------------------------------------
# three-distance placement
# ---------------------------------------------------------------------------


@dataclass
class ThreeDistanceReport:
    n: int
    q: int
    passed: bool
    mode: str
    counterexample: Optional[dict] = None
    checked_points: int = 0
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "q_n": self.q,
            "passed": self.passed,
            "mode": self.mode,
            "checked_points": self.checked_points,
            "counterexample": self.counterexample,
        }


def convergent_error_ok(alpha: AlphaHandle, n: int) -> bool:
    """Exact check that ``eps = q_n alpha - p_n`` has sign ``(-1)^n`` and ``|eps| < 1/q_{n+1}``."""
    eps = alpha.surd * alpha.q(n) - alpha.p(n)
    bound = Fraction(1, alpha.q(n + 1))
    if n % 2 == 0:
        return 0 < eps and eps < bound
    return -bound < eps and eps < 0


def three_distance_check(
    alpha: AlphaHandle,
    n: int,
    exhaustive_limit: int = 200_000,
    spot_checks: int = 256,
    seed: int = 0,
) -> ThreeDistanceReport:
    """Check that each ``(r/q_n, (r+1)/q_n)`` holds exactly one ``{j alpha}``, ``1 <= j <= q_n``,
    and that ``{(j + l q_n) alpha}`` stays in that cell while ``j + l q_n <= q_{n+1}``.

    Up to ``exhaustive_limit`` orbit points every cell index is computed
    exactly.  Beyond it the check runs in certificate mode: the convergent
    error ``q_n alpha - p_n`` is bounded exactly (which forces the cell of
    ``j + l q_n`` to be ``j p_n mod q_n``, shifted by one for odd n), plus
    seeded exact spot checks of that prediction.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    q, q1, p = alpha.q(n), alpha.q(n + 1), alpha.p(n)
    shift = 0 if n % 2 == 0 else -1

    if q1 <= exhaustive_limit:
        cells = np.array(floor_multiples(alpha, q, q1), dtype=object) % q
        cells = cells.astype(np.int64)
        first = np.full(q, 0, dtype=np.int64)
        for j in range(1, q + 1):
            r = cells[j - 1]
            if first[r]:
                return ThreeDistanceReport(
                    n, q, False, "exhaustive",
                    {"cell": int(r), "indices": [int(first[r]), j]}, j,
                )
            first[r] = j
        base = cells[(np.arange(q1) % q)]
        bad = np.flatnonzero(cells != base)
        if bad.size:
            x = int(bad[0]) + 1
            j = (x - 1) % q + 1
            return ThreeDistanceReport(
                n, q, False, "exhaustive",
                {"index": x, "base": j, "cell": int(cells[x - 1]), "base_cell": int(cells[j - 1])}, x,
            )
        return ThreeDistanceReport(n, q, True, "exhaustive", None, q1)

    if math.gcd(p, q) != 1 or not convergent_error_ok(alpha, n):
        return ThreeDistanceReport(n, q, False, "certificate", {"convergent_error": "out of bounds"}, 0)
    rng = random.Random(seed)
    for _ in range(spot_checks):
        x = rng.randint(1, q1)
        predicted = ((x * p) + shift) % q
        got = frac_floor(alpha, x, q)
        if got != predicted:
            return ThreeDistanceReport(
                n, q, False, "certificate",
                {"index": x, "cell": got, "predicted": predicted}, spot_checks,
            )
    return ThreeDistanceReport(n, q, True, "certificate", None, spot_checks)

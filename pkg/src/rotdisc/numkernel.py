"""Exact arithmetic: rationals, quadratic surds, continued fractions and convergents.

Rationals are plain :class:`fractions.Fraction` values.  Quadratic irrationals
are :class:`Surd` values ``(a + b*sqrt(d)) / e`` whose order relations are
decided with integer arithmetic only.
"""

from __future__ import annotations

import functools
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import NamedTuple, Sequence, Union

from .errors import ParseError

Ratio = Fraction
Number = Union[int, Fraction, "Surd"]

__all__ = [
    "Ratio",
    "Surd",
    "CFExpansion",
    "ConvergentTable",
    "CFInterval",
    "FundamentalInterval",
    "parse_ratio",
    "parse_surd",
    "parse_cf",
    "cf_from_rational",
    "cf_from_surd",
    "cf_to_surd",
    "convergents",
    "eval_cf",
    "eval_tuple",
    "fundamental_interval",
    "floor_sum",
]


# ---------------------------------------------------------------------------
# Quadratic surds
# ---------------------------------------------------------------------------

_TRIAL_LIMIT = 1 << 20


def _split_square(d: int) -> tuple[int, int]:
    """Return ``(s, r)`` with ``d == s*s*r`` and ``r`` squarefree.

    Trial division runs up to 2**20; a leftover cofactor is then squarefree
    unless it is itself a perfect square, which is checked.  Cofactors beyond
    2**60 may keep a large squared prime, which only affects canonical form.
    """
    s, r = 1, d
    p = 2
    while p * p <= r and p < _TRIAL_LIMIT:
        pp = p * p
        while r % pp == 0:
            r //= pp
            s *= p
        p += 1 if p == 2 else 2
    t = isqrt(r)
    if t > 1 and t * t == r:
        return s * t, 1
    return s, r


@dataclass(frozen=True)
class Surd:
    """The real number ``(a + b*sqrt(d)) / e`` held in canonical form.

    ``e > 0``, ``d`` squarefree (``d == 0`` and ``b == 0`` for rationals) and
    ``gcd(a, b, e) == 1``.
    """

    a: int
    b: int
    d: int
    e: int = 1

    def __post_init__(self):
        a, b, d, e = self.a, self.b, self.d, self.e
        if e == 0:
            raise ZeroDivisionError("surd denominator is zero")
        if d < 0:
            raise ValueError("negative radicand")
        if e < 0:
            a, b, e = -a, -b, -e
        if b == 0 or d == 0:
            b, d = 0, 0
        else:
            s, d = _split_square(d)
            b *= s
            if d == 1:
                a, b, d = a + b, 0, 0
        g = gcd(gcd(a, b), e)
        object.__setattr__(self, "a", a // g)
        object.__setattr__(self, "b", b // g)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "e", e // g)

    @classmethod
    def from_rational(cls, x) -> Surd:
        x = Fraction(x)
        return cls(x.numerator, 0, 0, x.denominator)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return Fraction(self.a, self.e)

    def sign(self) -> int:
        a, b, d = self.a, self.b, self.d
        sa = (a > 0) - (a < 0)
        if b == 0:
            return sa
        sb = 1 if b > 0 else -1
        if sa == 0 or sa == sb:
            return sb
        # opposite signs; a*a == b*b*d is impossible for squarefree d > 1
        return sa if a * a > b * b * d else sb

    def floor(self) -> int:
        if self.b == 0:
            return self.a // self.e
        r = isqrt(self.b * self.b * self.d)
        fb = r if self.b > 0 else -r - 1
        return (self.a + fb) // self.e

    def conjugate(self) -> Surd:
        return Surd(self.a, -self.b, self.d, self.e)

    def norm(self) -> Fraction:
        """Product with the conjugate, ``(a^2 - b^2 d) / e^2``."""
        return Fraction(self.a * self.a - self.b * self.b * self.d, self.e * self.e)

    # arithmetic ------------------------------------------------------------

    @staticmethod
    def _coerce(x) -> Surd:
        if isinstance(x, Surd):
            return x
        if isinstance(x, (int, Fraction)):
            return Surd.from_rational(x)
        return NotImplemented

    def _common_d(self, other: Surd) -> int:
        if self.d and other.d and self.d != other.d:
            raise ValueError(f"incompatible radicands {self.d} and {other.d}")
        return self.d or other.d

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self._common_d(o)
        return Surd(self.a * o.e + o.a * self.e, self.b * o.e + o.b * self.e, d, self.e * o.e)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.d, self.e)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self._common_d(o)
        return Surd(
            self.a * o.a + self.b * o.b * d,
            self.a * o.b + self.b * o.a,
            d,
            self.e * o.e,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero surd")
        num = self * o.conjugate()
        return num * Surd.from_rational(1 / n)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    # order -------------------------------------------------------------------

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare Surd with {type(other).__name__}")
        return (self - o).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self):
        return (self.a + self.b * self.d**0.5) / self.e

    def __str__(self):
        return f"({self.a}{self.b:+d}*sqrt({self.d}))/{self.e}"


# ---------------------------------------------------------------------------
# Literal parsing
# ---------------------------------------------------------------------------


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def accept(self, token: str) -> bool:
        self.skip()
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def expect(self, token: str):
        if not self.accept(token):
            self.fail(f"expected {token!r}")

    def integer(self, signed: bool = True) -> int:
        self.skip()
        start = self.pos
        if signed and self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
            self.skip()
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.fail("expected an integer")
        return int(self.text[start:self.pos].replace(" ", ""))

    def end(self):
        self.skip()
        if self.pos != len(self.text):
            self.fail("unexpected trailing input")

    def fail(self, message: str):
        raise ParseError(message, self.text, self.pos)


def parse_ratio(text: str, *, lowest_terms: bool = False) -> Fraction:
    """Parse ``p/q`` (or a bare integer).

    With ``lowest_terms`` the literal itself must already be reduced.
    """
    s = _Scanner(text)
    p = s.integer()
    q = 1
    if s.accept("/"):
        qpos = s.pos
        q = s.integer()
        if q == 0:
            raise ParseError("zero denominator", text, qpos)
    s.end()
    if lowest_terms and (q < 0 or gcd(p, q) != 1):
        raise ParseError("ratio is not in lowest terms", text, 0)
    return Fraction(p, q)


def parse_surd(text: str) -> Surd:
    """Parse ``(a+b*sqrt(d))/e``; signs are optional, ``b*`` and ``/e`` may be omitted."""
    s = _Scanner(text)
    paren = s.accept("(")
    a = s.integer()
    s.skip()
    sign_pos = s.pos
    if s.accept("+"):
        sign = 1
    elif s.accept("-"):
        sign = -1
    else:
        raise ParseError("expected '+' or '-'", text, sign_pos)
    if s.peek().isdigit():
        b = sign * s.integer(signed=False)
        s.expect("*")
    else:
        b = sign
    s.expect("sqrt")
    s.expect("(")
    d = s.integer(signed=False)
    s.expect(")")
    if paren:
        s.expect(")")
    e = 1
    if s.accept("/"):
        epos = s.pos
        e = s.integer()
        if e == 0:
            raise ParseError("zero denominator", text, epos)
    s.end()
    return Surd(a, b, d, e)


def _int_list(s: _Scanner) -> list[int]:
    out = [s.integer(signed=False)]
    while s.accept(","):
        out.append(s.integer(signed=False))
    return out


def parse_cf(text: str) -> CFExpansion:
    """Parse ``a0;a1,a2,...[;(b1,...,bm)]`` where the parenthesised tail repeats."""
    s = _Scanner(text)
    a0 = s.integer()
    prefix = [a0]
    period: list[int] = []
    if s.accept(";"):
        if s.peek() == "(":
            s.expect("(")
            period = _int_list(s)
            s.expect(")")
        else:
            prefix += _int_list(s)
            if s.accept(";"):
                s.expect("(")
                period = _int_list(s)
                s.expect(")")
    s.end()
    try:
        return CFExpansion(tuple(prefix), tuple(period))
    except ValueError as exc:
        raise ParseError(str(exc), text, 0) from exc


# ---------------------------------------------------------------------------
# Continued fractions
# ---------------------------------------------------------------------------


def _primitive(period: tuple[int, ...]) -> tuple[int, ...]:
    n = len(period)
    for t in range(1, n + 1):
        if n % t == 0 and period == period[:t] * (n // t):
            return period[:t]
    return period


@dataclass(frozen=True)
class CFExpansion:
    """Partial quotients ``[a0; a1, a2, ...]`` as a finite prefix plus an optional period.

    Construction normalises: rational expansions end in a quotient >= 2 (unless
    they are a single term), periods are primitive and absorbed as far left as
    possible while keeping ``a0`` in the prefix.
    """

    prefix: tuple[int, ...]
    period: tuple[int, ...] = ()

    def __post_init__(self):
        prefix = tuple(int(x) for x in self.prefix)
        period = tuple(int(x) for x in self.period)
        if not prefix and not period:
            raise ValueError("empty continued fraction")
        head = prefix or period
        if head[0] < 0:
            raise ValueError("a0 must be non-negative")
        rest = prefix[1:] + period if prefix else period[1:]
        if any(x < 1 for x in rest):
            raise ValueError("partial quotients after a0 must be >= 1")
        if not period:
            if len(prefix) > 1 and prefix[-1] == 1:
                prefix = prefix[:-2] + (prefix[-2] + 1,)
        else:
            period = _primitive(period)
            if not prefix:
                prefix, period = period[:1], period[1:] + period[:1]
            while len(prefix) > 1 and prefix[-1] == period[-1]:
                prefix, period = prefix[:-1], period[-1:] + period[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    @classmethod
    def parse(cls, text: str) -> CFExpansion:
        return parse_cf(text)

    @property
    def is_rational(self) -> bool:
        return not self.period

    @property
    def last_index(self) -> int | None:
        return len(self.prefix) - 1 if self.is_rational else None

    def term(self, n: int) -> int:
        if n < 0:
            raise IndexError(n)
        L = len(self.prefix)
        if n < L:
            return self.prefix[n]
        if not self.period:
            raise IndexError(f"index {n} beyond finite expansion of length {L}")
        return self.period[(n - L) % len(self.period)]

    def terms(self, count: int) -> tuple[int, ...]:
        return tuple(self.term(i) for i in range(count))

    def value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("value() is only exact for finite expansions; use cf_to_surd")
        return eval_tuple(self.prefix)

    def __str__(self):
        head = str(self.prefix[0])
        body = ",".join(map(str, self.prefix[1:]))
        parts = [head]
        if body:
            parts.append(body)
        if self.period:
            parts.append("(" + ",".join(map(str, self.period)) + ")")
        return ";".join(parts)


def cf_from_rational(x) -> CFExpansion:
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative input")
    p, q = x.numerator, x.denominator
    out = []
    while q:
        a, r = divmod(p, q)
        out.append(a)
        p, q = q, r
    return CFExpansion(tuple(out))


def _floor_quadratic(P: int, D: int, Q: int) -> int:
    """floor((P + sqrt(D)) / Q) for non-square D."""
    s = isqrt(D)
    if Q > 0:
        return (P + s) // Q
    return -((P + s) // -Q) - 1


def cf_from_surd(x: Surd) -> CFExpansion:
    """Periodic expansion of a positive quadratic irrational."""
    if x.is_rational:
        raise ValueError("rational surd; use cf_from_rational")
    if x.sign() <= 0:
        raise ValueError("input must be positive")
    D = x.b * x.b * x.d
    if x.b > 0:
        P, Q = x.a, x.e
    else:
        P, Q = -x.a, -x.e
    if (D - P * P) % Q:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    seen: dict[tuple[int, int], int] = {}
    out: list[int] = []
    while (P, Q) not in seen:
        seen[(P, Q)] = len(out)
        a = _floor_quadratic(P, D, Q)
        out.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    start = seen[(P, Q)]
    return CFExpansion(tuple(out[:start]), tuple(out[start:]))


def _moebius(terms: Sequence[int]) -> tuple[int, int, int, int]:
    """(p_{n-1}, p_{n-2}, q_{n-1}, q_{n-2}) after consuming ``terms``."""
    p1, p2, q1, q2 = 1, 0, 0, 1
    for a in terms:
        p1, p2 = a * p1 + p2, p1
        q1, q2 = a * q1 + q2, q1
    return p1, p2, q1, q2


def cf_to_surd(cf: CFExpansion) -> Surd:
    """Exact value of an eventually periodic expansion as a Surd."""
    if cf.is_rational:
        return Surd.from_rational(cf.value())
    # y = [period; y]  =>  Q1 y^2 + (Q2 - P1) y - P2 = 0, positive root
    P1, P2, Q1, Q2 = _moebius(cf.period)
    B = Q2 - P1
    y = Surd(-B, 1, B * B + 4 * Q1 * P2, 2 * Q1)
    p1, p2, q1, q2 = _moebius(cf.prefix)
    return (y * p1 + p2) / (y * q1 + q2)


# ---------------------------------------------------------------------------
# Convergents
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvergentTable:
    """Rows ``(n, p_n, q_n)`` for ``n = -2 .. N``."""

    p: tuple[int, ...]
    q: tuple[int, ...]

    @property
    def N(self) -> int:
        return len(self.q) - 3

    @property
    def rows(self) -> list[tuple[int, int, int]]:
        return [(n - 2, p, q) for n, (p, q) in enumerate(zip(self.p, self.q))]

    def p_at(self, n: int) -> int:
        return self.p[n + 2]

    def q_at(self, n: int) -> int:
        return self.q[n + 2]


class _ConvergentCache:
    """Append-only convergent lists for one expansion, extended on demand."""

    def __init__(self, cf: CFExpansion):
        self.cf = cf
        self._p = [0, 1]
        self._q = [1, 0]
        self._lock = threading.Lock()

    def ensure(self, n: int):
        if n + 2 < len(self._q):
            return
        last = self.cf.last_index
        if last is not None and n > last:
            raise IndexError(f"convergent index {n} beyond finite expansion (last index {last})")
        with self._lock:
            p, q = self._p, self._q
            while len(q) <= n + 2:
                a = self.cf.term(len(q) - 2)
                p.append(a * p[-1] + p[-2])
                q.append(a * q[-1] + q[-2])

    def p(self, n: int) -> int:
        self.ensure(n)
        return self._p[n + 2]

    def q(self, n: int) -> int:
        self.ensure(n)
        return self._q[n + 2]

    def table(self, N: int) -> ConvergentTable:
        self.ensure(N)
        return ConvergentTable(tuple(self._p[: N + 3]), tuple(self._q[: N + 3]))


@functools.lru_cache(maxsize=512)
def _cache_for(cf: CFExpansion) -> _ConvergentCache:
    return _ConvergentCache(cf)


def convergents(cf: CFExpansion, N: int) -> ConvergentTable:
    if N < -2:
        raise ValueError("N must be >= -2")
    return _cache_for(cf).table(N)


class CFInterval(NamedTuple):
    """``center = p_n/q_n`` and ``width = 1/(q_n q_{n+1})``.

    The value lies on the ``side`` of the center fixed by the parity of n, so
    ``(lo, hi)`` is the bracket between consecutive convergents; these brackets
    are nested as the depth grows.  ``side == 0`` marks an exact value.
    """

    center: Fraction
    width: Fraction
    side: int = 0

    @property
    def lo(self) -> Fraction:
        return self.center - self.width if self.side < 0 else self.center

    @property
    def hi(self) -> Fraction:
        return self.center + self.width if self.side > 0 else self.center

    def contains(self, x) -> bool:
        if self.side == 0:
            return x == self.center
        return self.lo < x < self.hi


def eval_cf(cf: CFExpansion, depth: int) -> CFInterval:
    """Convergent ``p_depth/q_depth`` with an error bound ``1/(q_depth q_{depth+1})``.

    For irrational expansions the value lies strictly inside.  For finite
    expansions the bound is attained one step before the end, and ``depth``
    equal to the last index gives the exact value with width 0.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    cache = _cache_for(cf)
    center = Fraction(cache.p(depth), cache.q(depth))
    if cf.last_index == depth:
        return CFInterval(center, Fraction(0), 0)
    side = 1 if depth % 2 == 0 else -1
    return CFInterval(center, Fraction(1, cache.q(depth) * cache.q(depth + 1)), side)


def eval_tuple(terms: Sequence[int]) -> Fraction:
    """Value of the finite expansion ``terms`` (non-canonical forms allowed)."""
    if not terms:
        raise ValueError("empty tuple")
    p1, _, q1, _ = _moebius(terms)
    return Fraction(p1, q1)


@dataclass(frozen=True)
class FundamentalInterval:
    """The irrationals of the open interval ``(lo, hi)``: all alpha with a given CF prefix."""

    lo: Fraction
    hi: Fraction

    def __contains__(self, x) -> bool:
        if isinstance(x, Surd):
            return not x.is_rational and self.lo < x < self.hi
        return False


def fundamental_interval(B: Sequence[int]) -> FundamentalInterval:
    B = tuple(int(x) for x in B)
    if not B:
        raise ValueError("empty prefix")
    if B[0] < 0 or any(x < 1 for x in B[1:]):
        raise ValueError(f"invalid continued fraction prefix {B}")
    u = eval_tuple(B)
    v = eval_tuple(B[:-1] + (B[-1] + 1,))
    return FundamentalInterval(min(u, v), max(u, v))


def floor_sum(n: int, m: int, a: int, b: int) -> int:
    """Sum of ``floor((a*i + b) / m)`` over ``i = 0 .. n-1`` in O(log) steps."""
    if m <= 0:
        raise ValueError("m must be positive")
    if n <= 0:
        return 0
    ans = 0
    if a < 0 or a >= m:
        ans += n * (n - 1) // 2 * (a // m)
        a %= m
    if b < 0 or b >= m:
        ans += n * (b // m)
        b %= m
    while True:
        if a >= m:
            ans += n * (n - 1) // 2 * (a // m)
            a %= m
        if b >= m:
            ans += n * (b // m)
            b %= m
        y_max = a * n + b
        if y_max < m:
            return ans
        n, b = divmod(y_max, m)
        m, a = a, m

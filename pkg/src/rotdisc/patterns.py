"""Pattern algebra over transfer maps on denominator residues.

A tuple ``(a_0, ..., a_m)`` drives the state ``(q_{n-1}, q_n) mod k`` through
the maps ``T_a(u, v) = (v, a v + u)``.  Starting from ``(1, 0)`` the final
state is the tuple's *character*.  A tuple is *null* when its composed map is
the identity on the reachable states ``R_k = {(u, v): gcd(u, v, k) = 1}``;
*elementary* tuples are minimal null ones and *prime* tuples contain no null
contiguous block.

For a word, block ``w[i:j]`` is null exactly when the prefix evaluations
``e_i`` and ``e_j`` coincide, so primes are the words with pairwise distinct
prefix evaluations (length below ``|G_k|``) and elementary words close the
first cycle back to the identity.  Enumeration walks that tree.
"""

from __future__ import annotations

import functools
import math
import sys
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BudgetExceeded, ConsistencyError

DEFAULT_MAX_WORDS = 2_000_000
DEFAULT_MAX_GROUP_ORDER = 100_000

# character values used for k = 2 in the worked example
PHI = {(1, 1): 0, (1, 0): 1, (0, 1): 2}


@dataclass(frozen=True)
class _StateSpace:
    k: int
    states: tuple[tuple[int, int], ...]
    index: dict
    gens: tuple[tuple[int, ...], ...]

    @property
    def identity(self) -> tuple[int, ...]:
        return tuple(range(len(self.states)))


def _build_space(k: int, states) -> _StateSpace:
    states = tuple(states)
    index = {s: i for i, s in enumerate(states)}
    gens = tuple(
        tuple(index[(v, (a * v + u) % k)] for (u, v) in states) for a in range(k)
    )
    return _StateSpace(k, states, index, gens)


def _check_k(k: int):
    if k < 2:
        raise ValueError("k must be >= 2")


@functools.lru_cache(maxsize=None)
def reachable_space(k: int) -> _StateSpace:
    _check_k(k)
    return _build_space(
        k, ((u, v) for u in range(k) for v in range(k) if math.gcd(math.gcd(u, v), k) == 1)
    )


@functools.lru_cache(maxsize=None)
def full_space(k: int) -> _StateSpace:
    """All nonzero residue pairs, the larger state set counted by the pigeonhole bound."""
    _check_k(k)
    return _build_space(k, ((u, v) for u in range(k) for v in range(k) if (u, v) != (0, 0)))


def _then(perm: tuple[int, ...], gen: tuple[int, ...]) -> tuple[int, ...]:
    """Apply ``perm`` first, then ``gen``."""
    return tuple(gen[s] for s in perm)


def reduce(t: Iterable[int], k: int) -> tuple[int, ...]:
    t = tuple(int(x) for x in t)
    if any(x < 0 for x in t):
        raise ValueError("tuple entries must be non-negative")
    return tuple(x % k for x in t)


@dataclass(frozen=True)
class Pattern:
    """A tuple of residues mod ``k``; the empty tuple is the empty pattern."""

    k: int
    entries: tuple[int, ...]

    def __post_init__(self):
        _check_k(self.k)
        object.__setattr__(self, "entries", reduce(self.entries, self.k))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __str__(self):
        return "(" + "".join(map(str, self.entries)) + ")" if self.entries else "E"


@dataclass(frozen=True)
class TransferMap:
    """A permutation of ``R_k`` induced by a word of partial quotients."""

    k: int
    perm: tuple[int, ...]

    def __call__(self, state: tuple[int, int]) -> tuple[int, int]:
        sp = reachable_space(self.k)
        return sp.states[self.perm[sp.index[(state[0] % self.k, state[1] % self.k)]]]

    def then(self, other: TransferMap) -> TransferMap:
        return TransferMap(self.k, _then(self.perm, other.perm))

    @property
    def is_identity(self) -> bool:
        return self.perm == tuple(range(len(self.perm)))

    def order(self) -> int:
        p, n = self.perm, 1
        ident = tuple(range(len(p)))
        while p != ident:
            p = _then(p, self.perm)
            n += 1
        return n

    def as_dict(self) -> dict:
        sp = reachable_space(self.k)
        return {sp.states[i]: sp.states[j] for i, j in enumerate(self.perm)}


def transfer_map(a: int, k: int) -> TransferMap:
    sp = reachable_space(k)
    return TransferMap(k, sp.gens[a % k])


def word_map(t: Iterable[int], k: int, space: _StateSpace | None = None) -> TransferMap:
    sp = space or reachable_space(k)
    perm = sp.identity
    for a in reduce(t, k):
        perm = _then(perm, sp.gens[a])
    return TransferMap(k, perm)


def character(t: Iterable[int], k: int) -> tuple[int, int]:
    """``(q_{m-1}, q_m) mod k`` of the tuple, computed twice and cross-checked."""
    t = reduce(t, k)
    sp = reachable_space(k)
    by_map = sp.states[word_map(t, k).perm[sp.index[(1, 0)]]]
    q2, q1 = 1, 0
    for a in t:
        q2, q1 = q1, a * q1 + q2
    by_recursion = (q2 % k, q1 % k)
    if by_map != by_recursion:
        raise ConsistencyError(f"character mismatch for {t} mod {k}: {by_map} vs {by_recursion}")
    return by_map


def _prefix_evaluations(t: Sequence[int], k: int) -> list[tuple[int, ...]]:
    sp = reachable_space(k)
    perm = sp.identity
    out = [perm]
    for a in t:
        perm = _then(perm, sp.gens[a])
        out.append(perm)
    return out


def is_null(t: Iterable[int], k: int) -> bool:
    t = reduce(t, k)
    if not t:
        raise ValueError("nullity is defined for non-empty tuples")
    return word_map(t, k).is_identity


def is_null_all_states(t: Iterable[int], k: int) -> bool:
    """Nullity as the identity on every nonzero residue pair (diagnostic variant)."""
    t = reduce(t, k)
    if not t:
        raise ValueError("nullity is defined for non-empty tuples")
    return word_map(t, k, full_space(k)).is_identity


def null_disagreement(t: Iterable[int], k: int) -> bool:
    """True when the reachable-state and all-state nullity tests differ."""
    return is_null(t, k) != is_null_all_states(t, k)


def is_elementary(t: Iterable[int], k: int) -> bool:
    t = reduce(t, k)
    if not t:
        raise ValueError("elementary tuples are non-empty")
    ev = _prefix_evaluations(t, k)
    return ev[-1] == ev[0] and len(set(ev[:-1])) == len(t)


def is_prime(t: Iterable[int], k: int) -> bool:
    t = reduce(t, k)
    ev = _prefix_evaluations(t, k)
    return len(set(ev)) == len(ev)


def is_type_k(t: Iterable[int], k: int) -> bool:
    return character(t, k)[1] == 0


@functools.lru_cache(maxsize=None)
def group_order(k: int, max_order: int = DEFAULT_MAX_GROUP_ORDER) -> int:
    """Order of the group generated by ``T_0 .. T_{k-1}`` acting on ``R_k``."""
    sp = reachable_space(k)
    seen = {sp.identity}
    frontier = [sp.identity]
    while frontier:
        nxt = []
        for g in frontier:
            for gen in sp.gens:
                h = _then(g, gen)
                if h not in seen:
                    seen.add(h)
                    if len(seen) > max_order:
                        raise BudgetExceeded(f"group for k={k} exceeds {max_order} elements")
                    nxt.append(h)
        frontier = nxt
    return len(seen)


@functools.lru_cache(maxsize=None)
def _enumerate(k: int, max_words: int) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    sp = reachable_space(k)
    order = group_order(k)
    ident = sp.identity
    primes: list[tuple[int, ...]] = [()]
    elementary: list[tuple[int, ...]] = []
    visited = {ident}
    word: list[int] = []

    def walk(perm):
        for a in range(k):
            nxt = _then(perm, sp.gens[a])
            if nxt == ident:
                elementary.append(tuple(word) + (a,))
            elif nxt not in visited:
                if len(primes) >= max_words:
                    raise BudgetExceeded(
                        f"more than {max_words} prime words for k={k} (group order {order})"
                    )
                word.append(a)
                primes.append(tuple(word))
                visited.add(nxt)
                walk(nxt)
                visited.discard(nxt)
                word.pop()

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, order + 100))
    try:
        walk(ident)
    finally:
        sys.setrecursionlimit(limit)
    key = lambda w: (len(w), w)
    return tuple(sorted(elementary, key=key)), tuple(sorted(primes, key=key))


def enumerate_elementary(k: int, max_words: int = DEFAULT_MAX_WORDS) -> list[Pattern]:
    """All elementary patterns mod ``k``, sorted by (length, lexicographic).

    Raises BudgetExceeded rather than returning a partial list.
    """
    return [Pattern(k, w) for w in _enumerate(k, max_words)[0]]


def enumerate_prime(k: int, max_words: int = DEFAULT_MAX_WORDS) -> list[Pattern]:
    return [Pattern(k, w) for w in _enumerate(k, max_words)[1]]


def type_k_primes(k: int, max_words: int = DEFAULT_MAX_WORDS) -> list[Pattern]:
    return [p for p in enumerate_prime(k, max_words) if is_type_k(p, k)]


def elementary_run_length(l: int, k: int) -> int:
    """Least ``n`` with ``(l, ..., l)`` (n copies) elementary: the order of ``T_l``."""
    if l < 0:
        raise ValueError("l must be non-negative")
    return transfer_map(l, k).order()


# ---------------------------------------------------------------------------
# prime decomposition
# ---------------------------------------------------------------------------


def insert(M: Sequence[int], j: int, N: Sequence[int]) -> tuple[int, ...]:
    """Insert ``N`` after position ``j`` of ``M`` (before ``M[0]`` when ``j == -1``)."""
    if not -1 <= j < len(M):
        raise IndexError(f"insertion position {j} out of range for length {len(M)}")
    return tuple(M[: j + 1]) + tuple(N) + tuple(M[j + 1:])


@dataclass(frozen=True)
class Decomposition:
    """``core`` with elementary blocks inserted in order (each position refers to the
    tuple as it stands when that insertion happens)."""

    k: int
    core: tuple[int, ...]
    insertions: tuple[tuple[int, tuple[int, ...]], ...]

    def replay(self) -> tuple[int, ...]:
        t = self.core
        for j, N in self.insertions:
            t = insert(t, j, N)
        return t

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "core": list(self.core),
            "insertions": [{"position": j, "pattern": list(N)} for j, N in self.insertions],
            "character": list(character(self.core, self.k)),
        }


def _first_null_block(t: Sequence[int], k: int):
    """``(i, j)`` with ``t[i:j]`` null and ``j`` minimal; that block is elementary."""
    seen = {}
    for j, e in enumerate(_prefix_evaluations(t, k)):
        if e in seen:
            return seen[e], j
        seen[e] = j
    return None


def prime_decompose(t: Iterable[int], k: int) -> Decomposition:
    """Strip null blocks until prime, recording the removals as insertions.

    Each step removes the null block that ends earliest; it contains no
    smaller null block, so every recorded insertion is elementary.
    """
    cur = reduce(t, k)
    removed = []
    while True:
        blk = _first_null_block(cur, k)
        if blk is None:
            break
        i, j = blk
        removed.append((i - 1, cur[i:j]))
        cur = cur[:i] + cur[j:]
    return Decomposition(k, cur, tuple(reversed(removed)))


def patterns_json(k: int, kind: str, max_words: int = DEFAULT_MAX_WORDS) -> dict:
    makers = {
        "elementary": enumerate_elementary,
        "prime": enumerate_prime,
        "type_k_prime": type_k_primes,
    }
    if kind not in makers:
        raise ValueError(f"kind must be one of {sorted(makers)}")
    pats = makers[kind](k, max_words)
    return {
        "k": k,
        "kind": kind,
        "patterns": [list(p.entries) for p in pats],
        "group_order": group_order(k),
    }

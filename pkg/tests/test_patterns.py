import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from rotdisc.errors import BudgetExceeded
from rotdisc.numkernel import CFExpansion, convergents
from rotdisc.patterns import (
    PHI,
    Decomposition,
    Pattern,
    character,
    elementary_run_length,
    enumerate_elementary,
    enumerate_prime,
    full_space,
    group_order,
    insert,
    is_elementary,
    is_null,
    is_null_all_states,
    is_prime,
    is_type_k,
    null_disagreement,
    patterns_json,
    prime_decompose,
    reachable_space,
    transfer_map,
    type_k_primes,
    word_map,
)

K2_ELEMENTARY = {(0, 0), (1, 1, 1), (0, 1, 0, 1), (1, 0, 1, 0), (0, 1, 1, 0, 1, 1), (1, 1, 0, 1, 1, 0), (1, 0, 1, 1, 0, 1)}
K2_PRIME = {
    (), (0,), (1,), (1, 1), (1, 0), (0, 1), (1, 0, 1), (1, 1, 0), (0, 1, 1), (0, 1, 0),
    (0, 1, 1, 0), (1, 1, 0, 1), (1, 0, 1, 1), (0, 1, 1, 0, 1), (1, 1, 0, 1, 1), (1, 0, 1, 1, 0),
}

tuples = st.lists(st.integers(0, 15), max_size=12).map(tuple)


def _brute_force(k, max_len):
    """Elementary and prime words by checking every contiguous block directly."""
    elem, prime = set(), set()
    for L in range(max_len + 1):
        for w in itertools.product(range(k), repeat=L):
            blocks = [w[i:j] for i in range(L) for j in range(i + 1, L + 1)]
            nulls = [b for b in blocks if word_map(b, k).is_identity]
            if not nulls:
                prime.add(w)
            elif nulls == [w]:
                elem.add(w)
    return elem, prime


# --- transfer maps ---------------------------------------------------------------

def test_k2_generators_in_phi_coordinates():
    t1, t0 = transfer_map(1, 2), transfer_map(0, 2)
    for state, x in PHI.items():
        assert PHI[t1(state)] == (x + 1) % 3
        assert PHI[t0(state)] == (2 * x) % 3


@pytest.mark.parametrize("k", range(2, 9))
def test_transfer_maps_preserve_reachable_states(k):
    sp = reachable_space(k)
    for a in range(k):
        T = transfer_map(a, k)
        assert sorted(T.perm) == list(range(len(sp.states)))
        assert T((1, 0)) == (0, 1)
        for u, v in sp.states:
            assert math.gcd(math.gcd(*T((u, v))), k) == 1


# --- character -----------------------------------------------------------------

def test_character_examples():
    assert character((), 2) == (1, 0)
    assert PHI[character((1, 1), 2)] == 0
    assert PHI[character((1, 0), 2)] == 1


@given(tuples, st.integers(2, 6))
def test_character_matches_denominators(t, k):
    # rows of an actual expansion with these quotients (0 allowed only in front)
    q2, q1 = 1, 0
    for a in t:
        q2, q1 = q1, a * q1 + q2
    assert character(t, k) == (q2 % k, q1 % k)
    if t and all(a >= 1 for a in t[1:]) and (len(t) == 1 or t[-1] >= 2):
        tab = convergents(CFExpansion(t), len(t) - 1)
        assert character(t, k) == (tab.q_at(len(t) - 2) % k, tab.q_at(len(t) - 1) % k)


@settings(max_examples=80)
@given(tuples, st.integers(0, 12), st.integers(2, 5), st.data())
def test_insertion_law(M, a, k, data):
    N = data.draw(st.sampled_from([p.entries for p in enumerate_elementary(2)])) if k == 2 else (a,) * elementary_run_length(a, k)
    j = data.draw(st.integers(-1, len(M) - 1)) if M else -1
    assert is_null(N, k)
    assert character(insert(M, j, N), k) == character(M, k)


# --- null / elementary / prime -----------------------------------------------------

def test_null_examples():
    assert is_null((0, 0), 2)
    assert is_null((1, 1, 1), 2)
    assert not is_null((1, 1), 2)
    with pytest.raises(ValueError):
        is_null((), 2)


def test_elementary_and_prime_examples():
    assert is_elementary((0, 1, 0, 1), 2)
    assert is_elementary((1, 1, 0, 1, 1, 0), 2)
    assert not is_elementary((1, 1, 0, 1, 1, 1, 0), 2)
    assert is_prime((), 2)
    assert is_prime((1, 0, 1, 1, 0), 2)
    assert not is_prime((0, 0), 2)


def test_entries_reduced_mod_k():
    assert is_null((2, 4), 2)
    assert Pattern(3, (7, 3)).entries == (1, 0)


@pytest.mark.parametrize("k", [2, 3, 5, 7])
def test_null_predicates_coincide_for_prime_k(k):
    rng = random.Random(k)
    for _ in range(300):
        t = tuple(rng.randrange(k) for _ in range(rng.randint(1, 8)))
        assert not null_disagreement(t, k)


def test_null_predicate_variant_on_composite_k():
    # every reachable-state identity word is checked against the larger state set
    rng = random.Random(4)
    for _ in range(300):
        t = tuple(rng.randrange(4) for _ in range(rng.randint(1, 10)))
        if is_null_all_states(t, 4):
            assert is_null(t, 4)
    assert len(full_space(4).states) == 15 and len(reachable_space(4).states) == 12


# --- enumeration -------------------------------------------------------------------

def test_k2_tables():
    assert {p.entries for p in enumerate_elementary(2)} == K2_ELEMENTARY
    assert {p.entries for p in enumerate_prime(2)} == K2_PRIME
    assert {p.entries for p in type_k_primes(2)} == {(), (1, 0), (0, 1, 1), (1, 1, 0, 1)}
    assert max(map(len, K2_PRIME)) == 5 and max(map(len, K2_ELEMENTARY)) == 6


def test_k2_tables_match_brute_force():
    elem, prime = _brute_force(2, 8)
    assert elem == K2_ELEMENTARY and prime == K2_PRIME


def test_k2_phi_values():
    expected = {(): 1, (0,): 2, (1,): 2, (1, 1): 0, (1, 0): 1, (0, 1): 0, (1, 0, 1): 2, (1, 1, 0): 0,
                (0, 1, 1): 1, (0, 1, 0): 0, (0, 1, 1, 0): 2, (1, 1, 0, 1): 1, (1, 0, 1, 1): 0,
                (0, 1, 1, 0, 1): 0, (1, 1, 0, 1, 1): 2, (1, 0, 1, 1, 0): 0}
    assert {t: PHI[character(t, 2)] for t in K2_PRIME} == expected


def test_enumerated_members_satisfy_predicates():
    for p in enumerate_elementary(2):
        assert is_elementary(p, 2)
    for p in enumerate_prime(2):
        assert is_prime(p, 2)
    for p in type_k_primes(2):
        assert is_prime(p, 2) and is_type_k(p, 2)


@pytest.mark.parametrize("k, order", [(2, 6), (3, 48), (4, 96), (5, 240)])
def test_group_orders(k, order):
    assert group_order(k) == order
    assert order <= math.factorial(k * k - 1)


def test_enumeration_budget_is_explicit():
    with pytest.raises(BudgetExceeded):
        enumerate_prime(3, max_words=5000)
    with pytest.raises(BudgetExceeded):
        enumerate_elementary(4, max_words=5000)


def test_k3_short_words_against_brute_force():
    # prime and elementary words of length <= 5 agree with direct block checks
    elem, prime = _brute_force(3, 5)
    assert {w for w in itertools.product(range(3), repeat=5) if is_prime(w, 3)} == {w for w in prime if len(w) == 5}
    assert {w for w in elem if len(w) <= 5} == {
        w for L in range(1, 6) for w in itertools.product(range(3), repeat=L) if is_elementary(w, 3)
    }


def test_elementary_run_length():
    assert [elementary_run_length(l, 2) for l in (0, 1, 2)] == [2, 3, 2]
    for k in range(2, 7):
        for l in range(2 * k):
            n = elementary_run_length(l, k)
            assert is_elementary((l,) * n, k)


def test_type_k():
    assert is_type_k((), 5)
    assert is_type_k((1, 0), 2)
    assert not is_type_k((1,), 2)


# --- decomposition -------------------------------------------------------------------

def test_decompose_examples():
    d = prime_decompose((0, 1, 0, 1, 1, 0), 2)
    assert d.core == (1, 0) and d.insertions == ((-1, (0, 1, 0, 1)),)
    d = prime_decompose((0, 0), 2)
    assert d.core == () and d.insertions == ((-1, (0, 0)),)
    d = prime_decompose((1, 0, 1, 1, 0), 2)
    assert d.core == (1, 0, 1, 1, 0) and d.insertions == ()


def test_decompose_inserts_only_elementary_blocks():
    # the only null block starting at index 0 is the whole word, which contains (0,0)
    d = prime_decompose((1, 0, 0, 1, 1), 2)
    assert all(is_elementary(N, 2) for _, N in d.insertions)
    assert d.replay() == (1, 0, 0, 1, 1)


@settings(max_examples=150)
@given(tuples, st.integers(2, 5))
def test_decomposition_replay(t, k):
    d = prime_decompose(t, k)
    assert isinstance(d, Decomposition)
    assert is_prime(d.core, k)
    assert all(is_elementary(N, k) for _, N in d.insertions)
    cur = d.core
    for j, N in d.insertions:
        assert character(cur, k) == character(t, k)
        cur = insert(cur, j, N)
    assert cur == tuple(x % k for x in t)
    assert character(d.core, k) == character(t, k)


def test_patterns_json():
    out = patterns_json(2, "elementary")
    assert out["k"] == 2 and out["kind"] == "elementary" and out["group_order"] == 6
    assert out["patterns"][0] == [0, 0]
    assert out["patterns"] == sorted(out["patterns"], key=lambda p: (len(p), p))
    assert len(patterns_json(2, "prime")["patterns"]) == 16
    with pytest.raises(ValueError):
        patterns_json(2, "bogus")

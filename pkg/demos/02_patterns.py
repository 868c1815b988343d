"""Transfer maps and pattern tables.

Reduces continued fraction denominators mod k, enumerates the elementary and
prime patterns for k = 2, and decomposes a longer word into a prime core plus
inserted elementary blocks.
"""

from rotdisc import enumerate_elementary, enumerate_prime, group_order, prime_decompose
from rotdisc.patterns import PHI, character

# (q_{n-1}, q_n) mod k is the image of (1, 0) under the word of partial quotients
print(character((2, 2, 2, 2), 2))

# for k = 2 the states are labelled 0, 1, 2
for p in enumerate_prime(2):
    print(f"{str(p):>6}  Phi = {PHI[character(p.entries, 2)]}")

print("elementary:", [str(p) for p in enumerate_elementary(2)])

# group generated by the k transfer maps
for k in (2, 3, 4, 5):
    print(k, group_order(k))

d = prime_decompose((0, 1, 1, 0, 1, 1, 0, 1, 1, 1, 0), 2)
print("core:", d.core)
for j, block in d.insertions:
    print(f"  insert {block} after position {j}")
assert d.replay() == (0, 1, 1, 0, 1, 1, 0, 1, 1, 1, 0)

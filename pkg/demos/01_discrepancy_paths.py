"""Discrepancy paths of two quadratic rotations.

Walks through the silver rotation sqrt(2) - 1 and the golden rotation
(sqrt(5) - 1)/2 at the window [0, 1/2), comparing the running extrema of
k*D_n on growing ranges.
"""

from fractions import Fraction

import numpy as np

from rotdisc import AlphaHandle, classify, path_direct, path_recursive, running_extrema

half = Fraction(1, 2)
silver = AlphaHandle.parse("0;(2)")
golden = AlphaHandle.parse("0;(1)")

# first few values: k*D_n moves by k - h on a hit and by -h on a miss
print(path_direct(silver, half, 12).values.tolist())

# the level recursion reproduces the direct count exactly
for alpha in (silver, golden):
    assert path_recursive(alpha, half, 50_000) == path_direct(alpha, half, 50_000)

# running extrema at powers of ten
for name, alpha in (("silver", silver), ("golden", golden)):
    track = running_extrema(path_recursive(alpha, half, 10**6))
    rows = [(N, *track.at(N)) for N in (10**3, 10**4, 10**5, 10**6)]
    print(name, classify(alpha.cf, 1, 2).verdict.value)
    for N, hi, lo in rows:
        print(f"  N={N:>8}  max={hi:>3}  min={lo:>3}")

# the silver path never dips below zero, while its maximum keeps growing
v = path_recursive(silver, half, 10**6).values
print("silver min:", int(v.min()), " argmax:", int(np.argmax(v)))

"""Building rotations with one-sided bounded discrepancy.

Given any prefix of partial quotients, construct_member extends it to an
eventually periodic expansion that is bounded above or below at c = 1/k.
The last cell brackets the root of g(c) = 1.
"""

from fractions import Fraction

from rotdisc import AlphaHandle, classify, construct_member, cstar, empirical_extrema

for prefix, k, parity in [((0, 1), 2, 1), ((0, 3, 1, 4), 3, 0), ((0, 5), 4, 1)]:
    cf = construct_member(prefix, k, parity)
    res = classify(cf, 1, k)
    lo, _, hi, _ = empirical_extrema(AlphaHandle(cf), Fraction(1, k), 200_000)
    print(f"{str(cf):<22} k={k}  {res.verdict.value:<6} m={res.witness_m:>2}  min={lo:>4}  max={hi:>4}")

d = cstar()
print("c* in", float(d.lo), float(d.hi))
print("g(lo) >=", d.g_lo[0], " g(hi) <=", d.g_hi[1])

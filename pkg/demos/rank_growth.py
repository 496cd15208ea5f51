"""Coefficient ranks of slice functions: bounded versus growing.

Functions of the form f*conj(g) + g*conj(f) have coefficient rank at most 2,
so any finite sum of them has bounded rank at every truncation order.  The
composite slice function psi(p, F) built from a ball-to-projective map is
different: its rank keeps growing with the truncation order, which is the
numerical shadow of a non-existence theorem.
"""

from kform import rank_growth

print("rank of |1 + 0.5 z^2|^2 by truncation order (a two-term product):")
table, verdict = rank_growth("abs_square", {"map": ["1 + 0.5*z1^2"]}, [2, 4, 6, 8])
for n, r in table:
    print(f"  N={n:2d}  rank={r}")
print(f"  verdict: {verdict}")
print()

print("rank of psi(p=1, F=(zeta)) by truncation order:")
table, verdict = rank_growth("psi", {"p": 1, "map": ["z1"]}, [2, 4, 6, 8, 10])
for n, r in table:
    print(f"  N={n:2d}  rank={r}")
print(f"  verdict: {verdict}")
print()

print("the ball slice function alone is already of unbounded rank:")
table, verdict = rank_growth("ball_slice", {"p": 2}, [2, 4, 6, 8])
for n, r in table:
    print(f"  N={n:2d}  rank={r}")
print(f"  verdict: {verdict}")

"""Continued fractions, Brjuno sums, and why non-Brjuno angles are hard to write down."""

import mpmath

from cubicdyn import brjuno

cf = brjuno.cf_expand(brjuno.golden_mean(512), 20)
print("golden mean quotients:", cf.quotients)
print("denominators:", cf.q)

s = brjuno.brjuno_partial_sums(brjuno.cf_expand(brjuno.golden_mean(512), 80))
for n in (10, 20, 40, 79):
    print(f"partial sum to {n + 1:2d} terms: {mpmath.nstr(s.partial_sums[n], 15)}")

with mpmath.workprec(200):
    x = mpmath.sqrt(2) - 1
print("sqrt(2) - 1:", brjuno.cf_expand(x, 10).quotients)

# a double carries about 53 bits, enough for roughly 38 golden quotients
print("from a float:", len(brjuno.cf_expand(float(brjuno.golden_mean()), 80).quotients), "quotients certified")

r = brjuno.make_non_brjuno(N=5)
print("a_{n+1} = ceil(e^q_n / q_n):", r.cf.quotients)
print("certified terms:", r.certified_terms, "sum", mpmath.nstr(brjuno.brjuno_partial_sums(r.cf).total, 6))
print("stopped:", r.reason)

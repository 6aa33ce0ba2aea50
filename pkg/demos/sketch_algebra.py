#!/usr/bin/env python3
"""Tour of the rolling k-mismatch sketch.

A string S maps to 3k+3 field elements: the moment sums phi_j = sum S[i] i^j
(j <= 2k), the squared-moment sums phi2_j (j <= k), and a Karp-Rabin value.
Two sketches of equal-length strings either decode to the exact mismatch
set or answer TOO_MANY.
"""

import random

from hamstream import MismatchInfo, SketchParams, TOO_MANY, default_field
from hamstream import sketches
from hamstream.sketches import RollingSketcher

params = SketchParams(k=3, field=default_field(), rng=random.Random(1))
rng = random.Random(42)

s = [rng.randrange(10) for _ in range(40)]
t = list(s)
for i in (5, 17, 33):
    t[i] = (t[i] + 4) % 10

sk_s = sketches.build(s, params)
sk_t = sketches.build(t, params)
print("sketch of S:", sk_s)
print("decode(S, T):", sketches.decode(sk_s, sk_t, params))
print("ground truth:", MismatchInfo.of(s, t))

u = list(s)
for i in (1, 2, 9, 20):
    u[i] = (u[i] + 1) % 10
print("4 > k mismatches ->", sketches.decode(sk_s, sketches.build(u, params), params) is TOO_MANY and "TOO_MANY")

# concatenation / splitting / powers are exact, no re-reading of the strings
a, b = s[:15], s[15:]
sk_ab = sketches.concat(sketches.build(a, params), sketches.build(b, params), params)
print("concat equals direct build:", sk_ab == sk_s)
print("split recovers the prefix: ",
      sketches.split_left(sk_s, sketches.build(b, params), params) == sketches.build(a, params))
sk_rep = sketches.power(sketches.build([1, 2], params), 5, params)
print("power equals build of (12)^5:", sk_rep == sketches.build([1, 2] * 5, params))
print("root inverts power:         ",
      sketches.root(sk_rep, 5, params) == sketches.build([1, 2], params))

# the rolling form absorbs appends and substitutions in O(1) amortized,
# flushing a batch of pending updates through a transposed Vandermonde pass
roller = RollingSketcher(params)
shadow = []
for step in range(200):
    if shadow and rng.random() < 0.4:
        i = rng.randrange(len(shadow))
        new = rng.randrange(10)
        roller.substitute(i, shadow[i], new)
        shadow[i] = new
    else:
        v = rng.randrange(10)
        roller.append(v)
        shadow.append(v)
print("rolling sketch == rebuild after 200 mixed updates:",
      roller.snapshot() == sketches.build(shadow, params))

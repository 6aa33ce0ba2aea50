#!/usr/bin/env python3
"""The full streaming matcher, level by level.

The pattern is processed in one pass into a prefix family P_0 < P_1 < ...
< P: P_0 is the longest prefix with a small approximate period (handled by
the deterministic small-period matcher), intermediate prefixes are verified
by sketch comparison, and occurrences wait between levels inside exact-delay
buffers that store them succinctly.  The final level compares the trailing
2k symbols directly, so every occurrence is reported the moment its last
symbol arrives.
"""

import random

from hamstream import SketchParams, default_field
from hamstream.matcher import StreamMatcher, process_pattern

rng = random.Random(11)
k, sigma = 4, 16

# a pattern with a long periodic head and a random tail
head = [i % 3 for i in range(200)]
tail = [rng.randrange(sigma) for _ in range(312)]
pattern = head + tail
n = len(pattern)

params = SketchParams(k, default_field(), rng=random.Random(5))
idx = process_pattern(iter(pattern), k, params, sigma)
print(f"pattern of {n} symbols -> mode {idx.mode}")
print(f"prefix family lengths: {idx.lengths}")
print(f"index keeps {len(idx.sketch_of)} sketches, the representation of "
      f"P_0, and the trailing {len(idx.tail)} symbols "
      f"({idx.footprint_words()} words total)")

text = [rng.randrange(sigma) for _ in range(3 * n)]
for s in (100, 650, 1199):
    text[s : s + n] = pattern
    for _ in range(k - 1):
        text[s + rng.randrange(n)] = rng.randrange(sigma)

matcher = StreamMatcher(idx, params)
print(f"\nstreaming {len(text)} text symbols...")
for t, sym in enumerate(text):
    for rec in matcher.push(sym):
        assert t == rec.start + n - 1, "zero reporting delay"
        print(f"  tick {t}: occurrence at {rec.start}, {rec.hd} mismatches: "
              f"{list(rec.mi)[:3]}{'...' if rec.hd > 3 else ''}")
print(f"peak tracked state: {matcher.footprint_words()} words "
      f"(text was {len(text)} symbols; nothing but O(k)-sized rings, "
      f"sketches and block representations is retained)")

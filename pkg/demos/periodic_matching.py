#!/usr/bin/env python3
"""Approximate periods: detection, compressed representations, and the
small-period streaming matcher.

A shift p is a d-period of X when X and X shifted by p disagree in at most
d places.  Strings with a small approximate period compress to their first
p symbols plus the self-overlap mismatch list, and all their Hamming
distances against a similar text follow from sparse convolutions.
"""

import random

from hamstream import (PeriodicRepresentation, longest_periodic_prefix,
                       periodic_hamming_stream, small_period_match,
                       hamming_all_naive)

rng = random.Random(7)

# longest prefix with a d-period <= p, found in one pass
x = [0, 1, 0, 1, 0, 1, 0, 1, 7, 7, 7, 7]
length, shift, rep = longest_periodic_prefix(iter(x), p_bound=2, d_bound=0)
print(f"longest prefix with an exact period <= 2: length {length}, shift {shift}")
print("stored as", rep.head, "+", list(rep.selfmi), f"(n = {rep.n})")

# a dirty periodic string still compresses: head + few mismatches
y = [i % 3 for i in range(60)]
y[20] = 9
y[41] = 9
rep = PeriodicRepresentation.from_string(y, 3)
print(f"\n60 symbols, period 3, 2 defects -> head {rep.head}, "
      f"{len(rep.selfmi)} overlap mismatches; reconstruct ok: {rep.to_list() == y}")

# per-position Hamming distances of a periodic pattern over a streamed text
pat = [0, 1, 2] * 4
txt = [0, 1, 2] * 10
txt[13] = 5
prep = PeriodicRepresentation.from_string(pat, 3)
budget = sum(txt[i] != txt[i + 3] for i in range(len(txt) - 3))
got = dict(periodic_hamming_stream(prep, iter(txt), budget))
want = hamming_all_naive(pat, txt)
print("\nstreamed Hamming distances match the naive scan:",
      [got[e] for e in range(len(pat) - 1, len(txt))] == want)

# the small-period matcher reports occurrences with an exact chosen delay
pat = [0, 1] * 6
prep = PeriodicRepresentation.from_string(pat, 2)
txt = ([0, 1] * 30)
txt[24] = 9
recs = list(small_period_match(prep, k=1, delay=5, text=iter(txt)))
print(f"\n{len(recs)} occurrences with <= 1 mismatch; first three:")
for rec in recs[:3]:
    print(f"  start {rec.start:2d} hd {rec.hd} mi {list(rec.mi)}")

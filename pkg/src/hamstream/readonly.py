"""k-mismatch matching with read-only random access to pattern and text.

The pattern is scanned once: its longest prefix Q with a (2k+1)-period at
most k acts as a filter (the maximality of Q forbids a 2k-period, so
Q-occurrences sit more than k apart), and the head P_H = P minus the last
2k symbols is verified by sketch comparison.  Random access makes the
delayed bookkeeping cheap: the filter simply runs over a lagged view of the
text, and a second rolling sketch trails |P_H| behind the main one, so
sk(T[0..s-1]) and sk(T[0..s+|P_H|-1]) are both on hand when a candidate
start s fires.  The trailing 2k symbols are compared directly.

Patterns whose Q stretches past P_H have a small approximate period overall
and go straight to the small-period matcher.
"""

from __future__ import annotations

from . import sketches
from .base import TOO_MANY, MismatchInfo, OccurrenceRecord, UsageError
from .periodic import (
    PeriodicPrefixTracker,
    PeriodicRepresentation,
    SmallPeriodMatcher,
)
from .sketches import RollingSketcher, SketchParams


def _full_rep(pat, n, q):
    head = [pat[j] for j in range(min(q, n))]
    ents = []
    for i in range(n - q):
        a = pat[i]
        b = pat[i + q]
        if a != b:
            ents.append((i, a, b))
    return PeriodicRepresentation(q, head, MismatchInfo(ents, already_sorted=True), n)


class ReadonlyMatcher:
    """Streaming driver over random-access pattern/text; advance() consumes
    one text position and returns the records decided there."""

    def __init__(self, pat, txt, k, params: SketchParams | None = None,
                 want_sketches=False):
        n = len(pat)
        if n < 1:
            raise UsageError("empty pattern")
        if k < 0:
            raise UsageError("negative k")
        self.pat = pat
        self.txt = txt
        self.k = k
        self.params = params or SketchParams(k)
        if self.params.k != k:
            raise UsageError("params built for a different k")
        self.want_sketches = want_sketches
        self.pos = 0
        self.max_inflight = 0
        self.reads = 0

        tracker = PeriodicPrefixTracker(max(k, 1), 2 * k + 1 if k else 1)
        for j in range(n):
            self.reads += 1
            if not tracker.push(pat[j]):
                break
        qlen, qper, qrep = tracker.result()
        self.tail_len = min(2 * k, n)
        head_len = n - self.tail_len
        if qlen > head_len:
            rep = _full_rep(pat, n, qper)
            self.reads += 2 * n
            self.mode = "small"
            self.matcher = SmallPeriodMatcher(
                rep, k, 0, params=self.params, want_sketches=want_sketches)
        else:
            self.mode = "general"
            self.head_len = head_len
            self.qlen = qlen
            self.lag = head_len - qlen
            self.qmatcher = SmallPeriodMatcher(qrep, k, 0, want_mi=False)
            self.sk_head = sketches.build([pat[j] for j in range(head_len)], self.params)
            self.reads += head_len
            self.main = RollingSketcher(self.params)
            self.lagged = RollingSketcher(self.params)
            self.pat_tail = [pat[head_len + j] for j in range(self.tail_len)]
            self.reads += self.tail_len

    def advance(self):
        t = self.pos
        sym = self.txt[t]
        self.reads += 1
        self.pos = t + 1
        if self.mode == "small":
            return self.matcher.push(sym)
        out = []
        self.main.append(sym)
        if t >= self.head_len:
            self.lagged.append(self.txt[t - self.head_len])
            self.reads += 1
        if t >= self.lag:
            lag_sym = self.txt[t - self.lag] if self.lag else sym
            if self.lag:
                self.reads += 1
            for cand in self.qmatcher.push(lag_sym):
                s = cand.start
                assert s + self.head_len - 1 == t
                rec = self._verify(s)
                if rec is not None:
                    out.append(rec)
        return out

    def _verify(self, s):
        n = len(self.pat)
        if s + n > len(self.txt):
            return None
        self.max_inflight = max(self.max_inflight, 1)
        sk_all = self.main.snapshot()
        sk_before = self.lagged.snapshot()
        assert sk_before.length == s
        window = sketches.split_right(sk_all, sk_before, self.params)
        head_mi = sketches.decode(self.sk_head, window, self.params)
        if head_mi is TOO_MANY:
            return None
        entries = list(head_mi.entries)
        base = self.head_len
        for j in range(self.tail_len):
            a = self.pat_tail[j]
            b = self.txt[s + base + j]
            self.reads += 1
            if a != b:
                entries.append((base + j, a, b))
        if len(entries) > self.k:
            return None
        mi = MismatchInfo(entries, already_sorted=True)
        return OccurrenceRecord(s, mi, sk_before if self.want_sketches else None)

    def run(self):
        while self.pos < len(self.txt):
            yield from self.advance()
        if self.mode == "small":
            yield from self.matcher.finish()

    def footprint_words(self):
        if self.mode == "small":
            return self.matcher.footprint_words() + 4
        return (self.qmatcher.footprint_words() + self.main.footprint_words()
                + self.lagged.footprint_words() + len(self.pat_tail)
                + 2 * len(self.sk_head.phi) + 8)


def readonly_kmismatch(pat, txt, k, params: SketchParams | None = None,
                       want_sketches=False):
    """All start positions where the pattern matches the text window with at
    most k mismatches, in increasing order, with mismatch information."""
    yield from ReadonlyMatcher(pat, txt, k, params, want_sketches).run()

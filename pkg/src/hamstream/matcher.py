"""One-pass streaming k-mismatch matching: pattern processing into a prefix
family, then a level pipeline over the text.

Pattern side: P_0 is the longest prefix with a (2k+1)-period at most k.  If
it reaches into the last 2k symbols the whole pattern is approximately
periodic and a single small-period matcher handles the text.  Otherwise the
index keeps the periodic representation of P_0, sketches of the prefixes
whose lengths are the powers of two strictly between |P_0| and (n-2k)/2,
the sketch of P_{L-1} (length n-2k), and the trailing 2k pattern symbols.

Text side: level 0 finds P_0-occurrences (delayed so candidates for level 1
arrive exactly when their window completes); every sketch level verifies
its candidates by sketch subtraction + decoding and hands survivors to a
delay buffer sized to the next level's window; the top level extends
P_{L-1}-occurrences across the trailing 2k text symbols by direct
comparison and reports with no delay.  Maximality of P_0 rules out a
2k-period <= k for every longer prefix, so each level sees candidates more
than k apart.
"""

from __future__ import annotations

from collections import deque

from . import sketches
from .base import TOO_MANY, MismatchInfo, OccurrenceRecord, SizeError, UsageError
from .buffer import DelayBuffer
from .periodic import (
    PeriodicPrefixTracker,
    PeriodicRepresentation,
    SmallPeriodMatcher,
)
from .sketches import RollingSketcher, SketchParams


class PatternIndex:
    __slots__ = ("mode", "k", "n", "sigma", "rep", "lengths", "sketch_of", "tail")

    def __init__(self, mode, k, n, sigma, rep, lengths=None, sketch_of=None, tail=None):
        self.mode = mode
        self.k = k
        self.n = n
        self.sigma = sigma
        self.rep = rep
        self.lengths = lengths
        self.sketch_of = sketch_of
        self.tail = tail

    def footprint_words(self):
        w = 8 + self.rep.footprint_words()
        if self.sketch_of:
            for sk in self.sketch_of.values():
                w += len(sk.phi) + len(sk.phi2) + 2
        if self.tail:
            w += len(self.tail)
        return w


def process_pattern(stream, k, params: SketchParams, sigma) -> PatternIndex:
    """One-pass pattern scan; retains O(k log n) state and never the
    pattern itself."""
    if params.k != k:
        raise UsageError("params built for a different k")
    tracker = PeriodicPrefixTracker(max(k, 1), 2 * k + 1 if k else 1)
    ringlen = max(3 * k, 1)
    ring = deque(maxlen=ringlen)
    lagring = deque()
    main = RollingSketcher(params)
    lag = RollingSketcher(params)
    snaps = {}
    n = 0
    for sym in stream:
        if sym < 0 or sym >= sigma:
            raise UsageError("symbol outside the declared alphabet")
        tracker.push(sym)
        ring.append(sym)
        main.append(sym)
        n += 1
        if n & (n - 1) == 0:
            snaps[n] = main.snapshot()
        lagring.append(sym)
        if len(lagring) > 2 * k:
            lag.append(lagring.popleft())
        if n > params.field.max_n:
            raise SizeError("pattern longer than max_n")
    if n < max(k, 1):
        raise UsageError("pattern must be at least k symbols long")
    qlen, qper, rep0 = tracker.result()

    if qlen > n - 2 * k or qlen == n:
        if n <= ringlen:
            rep = PeriodicRepresentation.from_string(list(ring), qper)
        else:
            syms = list(ring)
            off = n - len(syms)

            def at(j):
                return syms[j - off] if j >= off else rep0.symbol(j)

            ents = list(rep0.selfmi.entries)
            for i in range(max(0, qlen - qper), n - qper):
                a, b = at(i), at(i + qper)
                if a != b:
                    ents.append((i, a, b))
            rep = PeriodicRepresentation(
                qper, rep0.head, MismatchInfo(ents, already_sorted=True), n)
        return PatternIndex("small", k, n, sigma, rep)

    top = n - 2 * k
    pows = []
    t = 1
    while 2 * t < top:
        if t > qlen:
            pows.append(t)
        t *= 2
    lengths = [qlen] + pows + ([top] if k and top > qlen else []) + [n]
    sketch_of = {lv: snaps[lv] for lv in pows}
    if k:
        if top > qlen:
            sketch_of[top] = lag.snapshot()
    else:
        sketch_of[n] = main.snapshot()
    tail = list(lagring) if k else []
    assert len(tail) == min(2 * k, n)
    return PatternIndex("general", k, n, sigma, rep0, lengths, sketch_of, tail)


class StreamMatcher:
    """Single-session text driver; push() returns the occurrences whose last
    symbol is the pushed one (zero reporting delay)."""

    def __init__(self, idx: PatternIndex, params: SketchParams, debug=False):
        if params.k != idx.k:
            raise UsageError("params built for a different k")
        self.idx = idx
        self.params = params
        self.k = idx.k
        self.n = idx.n
        self.debug = debug
        self.tick = 0
        if idx.mode == "small":
            self.small = SmallPeriodMatcher(
                idx.rep, idx.k, 0, params=params, want_sketches=True, debug=debug)
            return
        self.small = None
        self.gsk = RollingSketcher(params)
        lengths = idx.lengths
        if len(lengths) >= 3 or not idx.k:
            self.sketch_levels = lengths[1:] if not idx.k else lengths[1:-1]
        else:
            self.sketch_levels = []
        delay0 = (lengths[1] - lengths[0]) if self.sketch_levels else idx.k
        self.level0 = SmallPeriodMatcher(
            idx.rep, idx.k, delay0, params=params, prefix_sketcher=self.gsk,
            want_mi=not self.sketch_levels, want_sketches=True, debug=debug)
        self.buffers = []
        for li in range(len(self.sketch_levels) - 1):
            lv = self.sketch_levels[li]
            nxt = self.sketch_levels[li + 1]
            self.buffers.append(DelayBuffer(
                idx.sketch_of[lv], nxt - lv, params, idx.sigma,
                _allow_small_delay=True))
        self.tailring = deque(maxlen=2 * idx.k) if idx.k else None
        self.pending_tail = deque()
        self._last_start = [None] * (len(self.sketch_levels) + 1)

    def push(self, sym):
        t = self.tick
        self.tick = t + 1
        if self.small is not None:
            return self.small.push(sym)
        out = []
        inputs = self.level0.push(sym)
        self.gsk.append(sym)
        if self.tailring is not None:
            self.tailring.append(sym)
        if not self.sketch_levels:
            for rec in inputs:
                self.pending_tail.append((rec.start + self.n - 1, rec))
        for li, lv in enumerate(self.sketch_levels):
            if t < lv - 1:
                assert not inputs, "candidate arrived before its level started"
                break
            verified = None
            if inputs:
                assert len(inputs) == 1, "levels see one candidate at a time"
                rec = inputs[0]
                got = self._verify(rec, lv, t, li)
                if got is not None:
                    verified = got
            last = li == len(self.sketch_levels) - 1
            if last:
                if verified is not None:
                    if self.idx.k:
                        self.pending_tail.append((verified.start + self.n - 1, verified))
                    else:
                        out.append(verified)
                inputs = []
            else:
                emitted = self.buffers[li].tick(verified)
                inputs = [emitted] if emitted is not None else []
        while self.pending_tail and self.pending_tail[0][0] == t:
            _due, rec = self.pending_tail.popleft()
            final = self._extend_tail(rec)
            if final is not None:
                out.append(final)
        return out

    def _verify(self, rec, lv, t, li):
        s = rec.start
        assert s + lv - 1 == t, "candidate arrived off schedule"
        if self.debug:
            prev = self._last_start[li]
            assert prev is None or s - prev > self.k
            self._last_start[li] = s
        sk_now = self.gsk.snapshot()
        window = sketches.split_right(sk_now, rec.prefix_sketch, self.params)
        mi = sketches.decode(self.idx.sketch_of[lv], window, self.params)
        if mi is TOO_MANY:
            return None
        return OccurrenceRecord(s, mi, rec.prefix_sketch)

    def _extend_tail(self, rec):
        k = self.idx.k
        if not k:
            return rec
        base = self.n - 2 * k
        window = list(self.tailring)
        assert len(window) == min(2 * k, self.n)
        entries = list(rec.mi.entries)
        for j, (a, b) in enumerate(zip(self.idx.tail, window)):
            if a != b:
                entries.append((base + j, a, b))
        if len(entries) > k:
            return None
        return OccurrenceRecord(rec.start, MismatchInfo(entries, already_sorted=True),
                                rec.prefix_sketch)

    def finish(self):
        """End of text: any still-buffered candidate lacks a full window, so
        nothing further can be emitted."""
        if self.small is not None:
            return self.small.finish()
        return []

    def footprint_words(self):
        if self.small is not None:
            return self.small.footprint_words() + self.idx.footprint_words()
        w = self.idx.footprint_words() + self.gsk.footprint_words()
        w += self.level0.footprint_words()
        for buf in self.buffers:
            w += buf.footprint_words()
        if self.tailring is not None:
            w += len(self.tailring)
        for (_d, rec) in self.pending_tail:
            w += 3 * len(rec.mi) + 2
            if rec.prefix_sketch is not None:
                w += len(rec.prefix_sketch.phi) + len(rec.prefix_sketch.phi2) + 2
        return w + 8


def process_text(idx: PatternIndex, stream, params: SketchParams, debug=False):
    """Generator of OccurrenceRecords over a one-pass text."""
    m = StreamMatcher(idx, params, debug=debug)
    for sym in stream:
        yield from m.push(sym)
    yield from m.finish()

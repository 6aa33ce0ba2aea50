"""Clocked buffer that re-emits k-mismatch occurrence records exactly delta
ticks after they are fed, in small space.

Ticks follow text positions: the record for an occurrence starting at i is
fed at tick i and exits at tick i+delta.  Occurrences are grouped by blocks
of b = min(delta, n)/4 start positions; each block gets one component that
lives through three phases:

  compression     collect leftmost/rightmost occurrence (with their mismatch
                  lists and text-prefix sketches) and fold every occurrence
                  gap into a period structure of the pattern -- the same
                  message a one-way protocol would send;
  reorganisation  rebuild proxy accessors, pre-consume the first n proxy
                  text symbols through a read-only matcher, and turn the
                  prefix-sketch pair into the sketch of the masked periodic
                  difference string D (T' at sentinel positions, 0
                  elsewhere), whose root has length d;
  decompression   the matcher re-discovers each occurrence in order; prefix
                  sketches come back by rolling D forward into T' and
                  splitting off the remaining power of the root.

Reorganisation work is spread over its window by a fixed step budget.
"""

from __future__ import annotations

from . import sketches
from .base import OccurrenceRecord, UsageError
from .codec import OccMessage, ProxyPattern, ProxyText
from .occindex import PeriodStructure, period_from_overlap
from .readonly import ReadonlyMatcher
from .sketches import RollingSketcher, SketchK, SketchParams


class _Component:
    __slots__ = ("idx", "n", "k", "params", "sigma", "l1", "l2", "mi_l", "mi_r",
                 "sk_l", "sk_r", "ps", "count", "reorg", "matcher", "pending",
                 "hybrid", "hybrid_pos", "sk_droot", "mdist", "txt", "steps_per_tick")

    def __init__(self, idx, n, k, params, sigma):
        self.idx = idx
        self.n = n
        self.k = k
        self.params = params
        self.sigma = sigma
        self.l1 = None
        self.l2 = None
        self.mi_l = None
        self.mi_r = None
        self.sk_l = None
        self.sk_r = None
        self.ps = PeriodStructure(n, 2 * k, sigma)
        self.count = 0
        self.reorg = None
        self.matcher = None
        self.pending = {}
        self.hybrid = None
        self.hybrid_pos = 0
        self.sk_droot = None
        self.mdist = 0
        self.txt = None
        self.steps_per_tick = 1

    def feed(self, rec: OccurrenceRecord):
        if rec.prefix_sketch is None or rec.prefix_sketch.length != rec.start:
            raise UsageError("record must carry the sketch of the text prefix")
        if self.l1 is None:
            self.l1, self.mi_l, self.sk_l = rec.start, rec.mi, rec.prefix_sketch
        else:
            p, pmi = period_from_overlap((self.l1, self.mi_l), (rec.start, rec.mi),
                                         self.n)
            self.ps.add_period(p, pmi)
        self.l2, self.mi_r, self.sk_r = rec.start, rec.mi, rec.prefix_sketch
        self.count += 1

    def start_reorg(self, window):
        msg = OccMessage(self.n, self.k, self.sigma, empty=False,
                         l1=self.l1, l2=self.l2, mi_left=self.mi_l,
                         mi_right=self.mi_r, d=self.ps.d, ps=self.ps)
        pat = ProxyPattern(msg)
        self.txt = ProxyText(msg, pat)
        self.mdist = self.l2 - self.l1
        self.matcher = ReadonlyMatcher(pat, self.txt, self.k, self.params)
        total = self.n + 2 * self.mdist + 8
        self.steps_per_tick = -(-total // max(1, window))
        self.reorg = self._reorg_steps()

    def _reorg_steps(self):
        params = self.params
        m = self.mdist
        if m:
            d = self.ps.d
            assert d and m % d == 0, "occurrence gaps must share the gcd"
            sk_tp = sketches.split_right(self.sk_r, self.sk_l, params)
            roller = RollingSketcher(params, base=sk_tp)
            for i in range(m):
                v = self.txt[i]
                if v < self.sigma:
                    roller.substitute(i, v, 0)
                yield
            sk_d = roller.snapshot()
            self.sk_droot = sketches.root(sk_d, m // d, params)
            self.hybrid = RollingSketcher(params, base=sk_d)
            yield
        while self.matcher.pos < min(self.n, len(self.txt)):
            self._absorb(self.matcher.advance())
            yield

    def _absorb(self, recs):
        for rec in recs:
            self.pending[rec.start] = rec

    def on_tick(self, now, delta, b):
        if self.reorg is None and now >= (self.idx + 1) * b:
            self.start_reorg(self.idx * b + delta - (self.idx + 1) * b)
        if self.reorg is not None and self.reorg is not False:
            for _ in range(self.steps_per_tick):
                try:
                    next(self.reorg)
                except StopIteration:
                    self.reorg = False
                    break
        due_local = now - delta - self.l1
        if due_local >= 0:
            if self.reorg is not None and self.reorg is not False:
                for _ in self.reorg:  # deadline: finish any remaining prework
                    pass
                self.reorg = False
            target = min(len(self.txt), due_local + self.n)
            while self.matcher.pos < target:
                self._absorb(self.matcher.advance())

    def pop_due(self, now, delta):
        if self.l1 is None or self.reorg is None:
            return None
        s = now - delta - self.l1
        rec = self.pending.pop(s, None)
        if rec is None:
            return None
        return OccurrenceRecord(self.l1 + rec.start, rec.mi, self._prefix_sketch(rec.start))

    def _prefix_sketch(self, s):
        params = self.params
        if self.mdist == 0:
            assert s == 0
            return self.sk_l
        d = self.ps.d
        assert s % d == 0, "occurrence offset must be divisible by the gcd"
        while self.hybrid_pos < s:
            i = self.hybrid_pos
            v = self.txt[i]
            if v < self.sigma:
                self.hybrid.substitute(i, 0, v)
            self.hybrid_pos = i + 1
        snap = self.hybrid.snapshot()
        if s < self.mdist:
            sk_suffix = sketches.power(self.sk_droot, (self.mdist - s) // d, params)
            sk_tpref = sketches.split_left(snap, sk_suffix, params)
        else:
            sk_tpref = snap
        return sketches.concat(self.sk_l, sk_tpref, params)

    def done(self, now, delta):
        return self.l2 is not None and now > self.l2 + delta and not self.pending

    def footprint_words(self):
        w = self.ps.footprint_words() + 16
        for mi in (self.mi_l, self.mi_r):
            if mi is not None:
                w += 3 * len(mi)
        for sk in (self.sk_l, self.sk_r, self.sk_droot):
            if sk is not None:
                w += len(sk.phi) + len(sk.phi2) + 2
        if self.matcher is not None:
            w += self.matcher.footprint_words()
        if self.hybrid is not None:
            w += self.hybrid.footprint_words()
        w += sum(3 * len(r.mi) + 2 for r in self.pending.values())
        return w


class DelayBuffer:
    """Feed OccurrenceRecords at their start ticks; each re-emerges, field
    for field, exactly delta ticks later."""

    def __init__(self, sk_pat: SketchK, delta: int, params: SketchParams,
                 sigma: int, _allow_small_delay=False):
        n = sk_pat.length
        if n < 1:
            raise UsageError("empty pattern sketch")
        if params.k != sk_pat.k:
            raise UsageError("params and pattern sketch disagree on k")
        if not _allow_small_delay and not (n // 4 <= delta <= 4 * n):
            raise UsageError("delay must be Theta(|P|): n/4 <= delta <= 4n")
        if delta < 1 or delta > 4 * n:
            raise UsageError("delay out of range")
        self.sk_pat = sk_pat
        self.n = n
        self.delta = delta
        self.params = params
        self.sigma = sigma
        self.b = max(1, min(delta, n) // 4)
        self.components: dict[int, _Component] = {}
        self.now = 0
        self.last_fed = None
        self.max_live = 0

    def tick(self, incoming: OccurrenceRecord | None = None):
        """One clock step; returns the record fed delta ticks ago, if any."""
        now = self.now
        self.now = now + 1
        if incoming is not None:
            if incoming.start != now:
                raise UsageError("record must be fed at its start tick")
            if self.last_fed is not None and incoming.start - self.last_fed <= self.k_guard():
                raise UsageError("record starts must be more than k apart")
            self.last_fed = incoming.start
            idx = now // self.b
            comp = self.components.get(idx)
            if comp is None:
                comp = _Component(idx, self.n, self.params.k, self.params, self.sigma)
                self.components[idx] = comp
            comp.feed(incoming)
        out = None
        for idx in sorted(self.components):
            comp = self.components[idx]
            comp.on_tick(now, self.delta, self.b)
            rec = comp.pop_due(now, self.delta)
            if rec is not None:
                assert out is None, "one emission per tick by construction"
                out = rec
            if comp.done(now, self.delta):
                del self.components[idx]
        self.max_live = max(self.max_live, len(self.components))
        assert len(self.components) <= self.delta // self.b + 3
        return out

    def k_guard(self):
        return self.params.k

    def footprint_words(self):
        w = 8 + len(self.sk_pat.phi) + len(self.sk_pat.phi2)
        for comp in self.components.values():
            w += comp.footprint_words()
        return w

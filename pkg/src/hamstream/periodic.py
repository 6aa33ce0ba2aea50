"""Approximate-period machinery: sparse convolution windows, periodic
representations, d-period prefix tracking, streamed Hamming distances, and
the small-approximate-period k-mismatch matcher.

A shift q is a d-period of X when X[0..n-q-1] and X[q..n-1] differ in at
most d places; such a string compresses to its first q symbols plus the
mismatch information of the self-overlap.  Everything downstream exploits
that the characteristic functions of an approximately periodic string have
sparse forward differences, so cross-correlations move to a sparse
convolution computed window by window.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from collections import deque

import numpy as np

from . import glvec, sketches
from .base import MismatchInfo, OccurrenceRecord, UsageError
from .fields import FieldParams, default_field

DEBUG_CHECKS = False


# ---------------- reference Hamming computations ----------------

def hamming_all_naive(pat, txt):
    """Ham[e] for every end position |P|-1 <= e < |T| by direct comparison."""
    n, m = len(pat), len(txt)
    if n > m:
        raise UsageError("pattern longer than text")
    if n == 0:
        return [0] * m
    if m >= 512:
        tp = np.asarray(txt, dtype=np.int64)
        pp = np.asarray(pat, dtype=np.int64)
        out = np.zeros(m - n + 1, dtype=np.int64)
        for j in range(n):
            out += tp[j : j + m - n + 1] != pp[j]
        return [int(v) for v in out]
    return [sum(a != b for a, b in zip(pat, txt[e - n + 1 : e + 1])) for e in range(n - 1, m)]


def hamming_all_conv(pat, txt, field: FieldParams | None = None):
    """Same values via per-symbol cross-correlation: for each symbol a,
    convolve the characteristic function of a in T with the reversed one in
    P; the summed match counts give |P| - Ham."""
    field = field or default_field()
    n, m = len(pat), len(txt)
    if n > m:
        raise UsageError("pattern longer than text")
    if n == 0:
        return [0] * m
    matches = [0] * (m + n)
    rev = pat[::-1]
    for a in set(pat) & set(txt):
        ta = [1 if v == a else 0 for v in txt]
        pa = [1 if v == a else 0 for v in rev]
        cc = conv_ints(ta, pa, field)
        for i, v in enumerate(cc):
            matches[i] += v
    return [n - matches[e] for e in range(n - 1, m)]


def conv_ints(f, g, field: FieldParams | None = None):
    """Exact integer convolution of two dense sequences.  Values ride through
    the field transform with a centered lift, falling back to schoolbook when
    magnitudes could approach p/2."""
    if not f or not g:
        return []
    field = field or default_field()
    nout = len(f) + len(g) - 1
    maxf = max(1, max(abs(v) for v in f))
    maxg = max(1, max(abs(v) for v in g))
    bound = maxf * maxg * min(len(f), len(g))
    if bound >= 1 << 62 or nout > field.max_transform or nout <= 32:
        out = [0] * nout
        for i, a in enumerate(f):
            if a:
                for j, b in enumerate(g):
                    out[i + j] += a * b
        return out
    p = field.p
    size = 1 << (nout - 1).bit_length()
    if field.is_goldilocks:
        fa = np.zeros(size, dtype=np.uint64)
        fb = np.zeros(size, dtype=np.uint64)
        fa[: len(f)] = [v % p for v in f]
        fb[: len(g)] = [v % p for v in g]
        root = field.omega(size)
        cc = glvec.intt(glvec.mulmod(glvec.ntt(fa, root), glvec.ntt(fb, root)), root)
        half = p // 2
        out = []
        for v in cc[:nout]:
            iv = int(v)
            out.append(iv - p if iv > half else iv)
        return out
    from .fields import poly_mul
    cc = poly_mul([v % p for v in f], [v % p for v in g], field)
    cc = cc + [0] * (nout - len(cc))
    half = p // 2
    return [v - p if v > half else v for v in cc[:nout]]


# ---------------- sparse vectors and windowed convolution ----------------

class SparseVec:
    """Sorted (index, value) pairs over the integers; values nonzero."""

    __slots__ = ("idx", "val")

    def __init__(self, pairs=()):
        pairs = sorted(pairs)
        self.idx = [i for i, v in pairs if v]
        self.val = [v for _, v in pairs if v]
        for a, b in zip(self.idx, self.idx[1:]):
            if a == b:
                raise UsageError("duplicate index in sparse vector")

    def __len__(self):
        return len(self.idx)

    def pairs(self):
        return list(zip(self.idx, self.val))

    @staticmethod
    def from_dense(values, offset=0):
        return SparseVec([(offset + i, v) for i, v in enumerate(values) if v])


def sparse_conv_window(f: SparseVec, g: SparseVec, start: int, delta: int,
                       field: FieldParams | None = None):
    """Values (f*g)(start) .. (f*g)(start+delta-1) of the integer convolution.

    f's support is cut into width-delta blocks; blocks holding at least
    ceil(sqrt(delta*log2(delta))) entries are convolved densely against the
    matching slice of g (ties go to the dense side), the rest pair off
    against g entries directly.
    """
    if delta < 1:
        raise UsageError("window width must be positive")
    field = field or default_field()
    out = [0] * delta
    if not f.idx or not g.idx:
        return out
    threshold = math.ceil(math.sqrt(delta * max(1.0, math.log2(delta))))
    gi, gv = g.idx, g.val
    i = 0
    n = len(f.idx)
    while i < n:
        blk = f.idx[i] // delta
        j = i
        hi_edge = (blk + 1) * delta
        while j < n and f.idx[j] < hi_edge:
            j += 1
        if j - i >= threshold:
            base = blk * delta
            ff = [0] * delta
            for t in range(i, j):
                ff[f.idx[t] - base] = f.val[t]
            glo = start - base - delta + 1
            ghi = start - base + delta - 1  # inclusive
            a = bisect_left(gi, glo)
            b = bisect_right(gi, ghi)
            if a < b:
                gg = [0] * (ghi - glo + 1)
                for t in range(a, b):
                    gg[gi[t] - glo] = gv[t]
                cc = conv_ints(ff, gg, field)
                off = base + glo
                lo = max(0, start - off)
                hi = min(len(cc), start + delta - off)
                for t in range(lo, hi):
                    if cc[t]:
                        out[off + t - start] += cc[t]
        else:
            for t in range(i, j):
                x = f.idx[t]
                vf = f.val[t]
                a = bisect_left(gi, start - x)
                b = bisect_right(gi, start + delta - 1 - x)
                for u in range(a, b):
                    out[x + gi[u] - start] += vf * gv[u]
        i = j
    return out


# ---------------- periodic representations ----------------

class GrowingPeriodic:
    """Append-only string stored as its first `period` symbols plus the
    mismatch list of the self-overlap at that shift; any symbol is
    recoverable in O(log #mismatches)."""

    __slots__ = ("period", "head", "n", "mi_pos", "mi_old", "mi_new",
                 "res_pos", "res_val")

    def __init__(self, period):
        if period < 1:
            raise UsageError("period must be positive")
        self.period = period
        self.head = []
        self.n = 0
        self.mi_pos = []  # i with X[i] != X[i+period], increasing
        self.mi_old = []  # X[i]
        self.mi_new = []  # X[i+period]
        self.res_pos = {}  # residue -> positions i (sorted)
        self.res_val = {}  # residue -> X[i+period]

    def append(self, sym, prev):
        """prev must be X[n-period] (None while n < period)."""
        j = self.n
        if j < self.period:
            self.head.append(sym)
        elif sym != prev:
            i = j - self.period
            self.mi_pos.append(i)
            self.mi_old.append(prev)
            self.mi_new.append(sym)
            res = i % self.period
            self.res_pos.setdefault(res, []).append(i)
            self.res_val.setdefault(res, []).append(sym)
        self.n += 1

    def symbol(self, j):
        if j < self.period:
            return self.head[j]
        res = j % self.period
        pos = self.res_pos.get(res)
        if pos:
            t = bisect_right(pos, j - self.period)
            if t:
                return self.res_val[res][t - 1]
        return self.head[res]

    def mismatches(self):
        return len(self.mi_pos)

    def mi_entries(self):
        return list(zip(self.mi_pos, self.mi_old, self.mi_new))

    def footprint_words(self):
        return len(self.head) + 5 * len(self.mi_pos) + 4


class PeriodicRepresentation:
    """Value form: period, head symbols, self-overlap MI, full length."""

    __slots__ = ("period", "head", "selfmi", "n", "_res")

    def __init__(self, period, head, selfmi: MismatchInfo, n):
        if period < 1:
            raise UsageError("period must be positive")
        if len(head) != min(period, n):
            raise UsageError("head must hold the first min(period, n) symbols")
        if len(selfmi) > 0 and selfmi.entries[-1][0] >= n - period:
            raise UsageError("self-overlap index out of range")
        self.period = period
        self.head = list(head)
        self.selfmi = selfmi
        self.n = n
        self._res = None

    @staticmethod
    def from_string(x, period):
        n = len(x)
        ents = [(i, x[i], x[i + period]) for i in range(n - period) if x[i] != x[i + period]]
        return PeriodicRepresentation(period, list(x[: min(period, n)]),
                                      MismatchInfo(ents, already_sorted=True), n)

    def _index(self):
        if self._res is None:
            res = {}
            for (i, _a, b) in self.selfmi:
                r = i % self.period
                res.setdefault(r, ([], []))
                res[r][0].append(i)
                res[r][1].append(b)
            self._res = res
        return self._res

    def symbol(self, j):
        if j < 0 or j >= self.n:
            raise UsageError("index out of range")
        if j < self.period:
            return self.head[j]
        got = self._index().get(j % self.period)
        if got:
            t = bisect_right(got[0], j - self.period)
            if t:
                return got[1][t - 1]
        return self.head[j % self.period]

    def to_list(self):
        return [self.symbol(j) for j in range(self.n)]

    def is_fixed_point(self):
        """Reconstruct and re-derive: the stored selfmi must come back."""
        x = self.to_list()
        return PeriodicRepresentation.from_string(x, self.period).selfmi == self.selfmi

    def footprint_words(self):
        return len(self.head) + 3 * len(self.selfmi) + 3


# ---------------- longest prefix with a small approximate period ----------------

class PeriodicPrefixTracker:
    """Streaming search for the longest prefix Y of the input with a
    d-period q <= p; push() refuses the first symbol that would leave no
    valid shift, freezing Y."""

    def __init__(self, p_bound, d_bound):
        if p_bound < 1:
            raise UsageError("period bound must be positive")
        if d_bound < 0 or d_bound > 8 * p_bound:
            raise UsageError("need 0 <= d <= 8p")
        self.p = p_bound
        self.d = d_bound
        self.h = [0] * p_bound  # h[q-1] = HD of the shift-q self overlap
        self.ring = [0] * p_bound
        self.length = 0
        self.done = False
        self.rep = GrowingPeriodic(1)
        self.cur = 1

    def push(self, sym) -> bool:
        """Consume one symbol; False once the prefix is frozen (symbol not
        consumed)."""
        if self.done:
            return False
        L = self.length
        qmax = min(self.p, L)
        deltas = []
        ok = L < self.p  # a vacuous shift q > L stays valid
        for q in range(1, qmax + 1):
            dlt = 1 if self.ring[(L - q) % self.p] != sym else 0
            deltas.append(dlt)
            if self.h[q - 1] + dlt <= self.d:
                ok = True
        if not ok:
            self.done = True
            return False
        for q in range(1, qmax + 1):
            self.h[q - 1] += deltas[q - 1]
        prev = self.ring[(L - self.cur) % self.p] if L >= self.cur else None
        self.rep.append(sym, prev)
        self.ring[L % self.p] = sym
        self.length = L + 1
        if self.cur <= L and self.h[self.cur - 1] > self.d:
            self._switch(self._smallest_valid())
        return True

    def _smallest_valid(self):
        for q in range(1, self.p + 1):
            if self.h[q - 1] <= self.d:
                return q
        raise AssertionError("no valid shift after a successful push")

    def _switch(self, q2):
        old = self.rep
        q1 = old.period
        if q1 == q2:
            return
        L = self.length
        fresh = GrowingPeriodic(q2)
        fresh.head = [old.symbol(j) for j in range(min(q2, L))]
        fresh.n = L
        if L > q2:
            # a pair can only mismatch under the new shift if it sits in
            # the first q1 positions or chains through a known mismatch:
            # i < q1, i = e+q1-q2 or e+q1 for old entries e, and i = m+q1
            # for each new mismatch m found on the way
            import heapq
            seen = set()
            heap = []

            def push_cand(i):
                if 0 <= i < L - q2 and i not in seen:
                    seen.add(i)
                    heapq.heappush(heap, i)

            for i in range(min(q1, L - q2)):
                push_cand(i)
            for e in old.mi_pos:
                push_cand(e + q1 - q2)
                push_cand(e + q1)
            while heap:
                i = heapq.heappop(heap)
                a = old.symbol(i)
                b = old.symbol(i + q2)
                if a != b:
                    fresh.mi_pos.append(i)
                    fresh.mi_old.append(a)
                    fresh.mi_new.append(b)
                    res = i % q2
                    fresh.res_pos.setdefault(res, []).append(i)
                    fresh.res_val.setdefault(res, []).append(b)
                    push_cand(i + q1)
        self.rep = fresh
        self.cur = q2

    def result(self):
        """(prefix length, found shift, periodic representation); the shift is
        the smallest valid one."""
        if self.length == 0:
            return 0, 1, PeriodicRepresentation(1, [], MismatchInfo(), 0)
        best = self._smallest_valid()
        self._switch(best)
        rep = PeriodicRepresentation(
            best,
            self.rep.head[: min(best, self.length)],
            MismatchInfo(self.rep.mi_entries(), already_sorted=True),
            self.length,
        )
        return self.length, best, rep

    def footprint_words(self):
        return 2 * self.p + self.rep.footprint_words() + 4


def longest_periodic_prefix(stream, p_bound, d_bound):
    """Consume symbols until the longest prefix with a d-period <= p is
    certified (or the stream ends); returns (length, shift, representation)."""
    tracker = PeriodicPrefixTracker(p_bound, d_bound)
    for sym in stream:
        if not tracker.push(sym):
            break
    return tracker.result()


# ---------------- forward-difference entry builders ----------------

def _shift_diff_entries(symbol_at, length, p, mi_entries, include_right=True):
    """Per-symbol sparse entries of Delta_p applied to the characteristic
    functions of a string X: Delta_p[X_a](x) = X_a(x+p) - X_a(x)."""
    out = {}

    def add(x, sym, val):
        got = out.get(sym)
        if got is None:
            got = ([], [])
            out[sym] = got
        got[0].append(x)
        got[1].append(val)

    for x in range(-p, min(0, length - p)):
        add(x, symbol_at(x + p), 1)
    for (i, a, b) in mi_entries:
        add(i, a, -1)
        add(i, b, 1)
    if include_right:
        for x in range(max(0, length - p), length):
            add(x, symbol_at(x), -1)
    for sym, (xs, vs) in out.items():
        order = sorted(range(len(xs)), key=xs.__getitem__)
        out[sym] = ([xs[t] for t in order], [vs[t] for t in order])
    return out


def _rev_diff_entries(symbol_at, length, p, mi_entries):
    """Same for the REVERSED string X^R, expressed through X's own indices:
    mismatch pairs (i, X[i], X[i+p]) of X map to y = length-1-p-i."""
    out = {}

    def add(y, sym, val):
        got = out.get(sym)
        if got is None:
            got = ([], [])
            out[sym] = got
        got[0].append(y)
        got[1].append(val)

    for y in range(-p, min(0, length - p)):
        add(y, symbol_at(length - 1 - y - p), 1)
    for (i, a, b) in mi_entries:
        y = length - 1 - p - i
        add(y, a, 1)
        add(y, b, -1)
    for y in range(max(0, length - p), length):
        add(y, symbol_at(length - 1 - y), -1)
    for sym, (xs, vs) in out.items():
        order = sorted(range(len(xs)), key=xs.__getitem__)
        out[sym] = ([xs[t] for t in order], [vs[t] for t in order])
    return out


def second_diff_crosscorr(prep: PeriodicRepresentation, trep: PeriodicRepresentation,
                          start: int, delta: int, field: FieldParams | None = None):
    """delta consecutive values of the second forward difference (step = the
    shared period) of the cross-correlation of the two represented strings,
    from the representations alone."""
    if prep.period != trep.period:
        raise UsageError("representations use different periods")
    field = field or default_field()
    p = prep.period
    tent = _shift_diff_entries(trep.symbol, trep.n, p, trep.selfmi.entries)
    gent = _rev_diff_entries(prep.symbol, prep.n, p, prep.selfmi.entries)
    out = [0] * delta
    for sym, (xs, vs) in tent.items():
        g = gent.get(sym)
        if not g:
            continue
        fsv = SparseVec.__new__(SparseVec)
        fsv.idx, fsv.val = xs, vs
        gsv = SparseVec.__new__(SparseVec)
        gsv.idx, gsv.val = g[0], g[1]
        part = sparse_conv_window(fsv, gsv, start, delta, field)
        for t in range(delta):
            out[t] += part[t]
    return out


# ---------------- streamed Hamming distances under a shared period ----------------

class PatternConvProfile:
    """Pattern-side data shared by every text stream matched against the same
    periodic pattern: head/tail split sizes, reversed-head difference
    entries, and the materialized tail."""

    __slots__ = ("prep", "period", "n", "tail_len", "head_len", "pat_tail",
                 "g_entries", "beta", "field")

    def __init__(self, prep: PeriodicRepresentation, text_budget: int,
                 field: FieldParams | None = None):
        self.prep = prep
        self.field = field or default_field()
        p = prep.period
        n = prep.n
        self.period = p
        self.n = n
        c = len(prep.selfmi) + text_budget
        self.beta = c + p
        tail_min = 2 * (c + p)
        if n <= tail_min + p:
            self.tail_len = n
            self.head_len = 0
            self.g_entries = {}
        else:
            self.tail_len = tail_min
            self.head_len = n - tail_min
            head_mi = [(i, a, b) for (i, a, b) in prep.selfmi if i + p < self.head_len]
            self.g_entries = _rev_diff_entries(prep.symbol, self.head_len, p, head_mi)
        self.pat_tail = np.asarray([prep.symbol(j) for j in range(self.head_len, n)],
                                   dtype=np.int64)

    def footprint_words(self):
        g = sum(2 * len(xs) for xs, _ in self.g_entries.values())
        return self.prep.footprint_words() + len(self.pat_tail) + g + 6


class HammingStreamer:
    """Reports Ham[e] for every end position e >= n-1 of a streamed text,
    before the next symbol is consumed.

    The pattern tail (length 2*(budget+p)) is compared directly against a
    ring of recent text symbols; head alignments are generated in blocks
    through the second difference of the cross-correlation, which only needs
    the sparse difference entries of both strings.  The 2p look-back of the
    second-difference recurrence is exactly what keeps every block
    computable from already-seen text.
    """

    __slots__ = ("prof", "pos", "ring", "tail_buf", "t_entries", "om_ring",
                 "next_block", "head_vals", "budget", "field")

    def __init__(self, profile: PatternConvProfile, field: FieldParams | None = None):
        self.prof = profile
        self.field = field or profile.field
        self.pos = 0
        p = profile.period
        self.ring = [0] * p
        self.tail_buf = np.zeros(2 * profile.tail_len, dtype=np.int64)
        self.t_entries = {}
        self.om_ring = [0] * (2 * p)
        self.next_block = 0
        self.head_vals = deque()
        self.budget = 0

    def _add_entry(self, x, sym, val):
        got = self.t_entries.get(sym)
        if got is None:
            got = ([], [])
            self.t_entries[sym] = got
        got[0].append(x)
        got[1].append(val)

    def push(self, sym):
        """Consume one text symbol; returns Ham[pos] when pos >= n-1."""
        prof = self.prof
        p = prof.period
        t = self.pos
        if prof.head_len:
            prev = self.ring[t % p] if t >= p else None
            if t < p:
                self._add_entry(t - p, sym, 1)
            elif sym != prev:
                self._add_entry(t - p, prev, -1)
                self._add_entry(t - p, sym, 1)
            self.ring[t % p] = sym
        tl = prof.tail_len
        self.tail_buf[t % tl] = sym
        self.tail_buf[t % tl + tl] = sym
        self.pos = t + 1
        if prof.head_len:
            while self.next_block + prof.beta - 1 <= t:
                self._compute_block(self.next_block, prof.beta)
                self.next_block += prof.beta
        if t < prof.n - 1:
            return None
        lo = t % tl + 1
        ham = int(np.count_nonzero(self.tail_buf[lo : lo + tl] != prof.pat_tail))
        if prof.head_len:
            j, hv = self.head_vals.popleft()
            assert j == t - tl
            ham += hv
        return ham

    def _compute_block(self, j0, count):
        prof = self.prof
        p = prof.period
        w0 = j0 - 2 * p
        dd = [0] * count
        for sym, (xs, vs) in self.t_entries.items():
            g = prof.g_entries.get(sym)
            if not g:
                continue
            fsv = SparseVec.__new__(SparseVec)
            fsv.idx, fsv.val = xs, vs
            gsv = SparseVec.__new__(SparseVec)
            gsv.idx, gsv.val = g[0], g[1]
            part = sparse_conv_window(fsv, gsv, w0, count, self.field)
            for i in range(count):
                dd[i] += part[i]
        ring = self.om_ring
        two_p = 2 * p
        hl = prof.head_len
        for i in range(count):
            j = j0 + i
            om = dd[i] + 2 * ring[(j - p) % two_p] - ring[j % two_p]
            ring[j % two_p] = om
            if j >= hl - 1:
                self.head_vals.append((j, hl - om))

    def footprint_words(self):
        ent = sum(2 * len(xs) for xs, _ in self.t_entries.values())
        return (len(self.ring) + len(self.tail_buf) + len(self.om_ring)
                + ent + 2 * len(self.head_vals) + 6)


def periodic_hamming_stream(prep: PeriodicRepresentation, text, text_budget: int,
                            field: FieldParams | None = None):
    """Generator of (end, Ham[end]) for a text stream sharing the pattern's
    period with at most text_budget self-overlap mismatches."""
    prof = PatternConvProfile(prep, text_budget, field)
    hs = HammingStreamer(prof)
    for e, sym in enumerate(text):
        ham = hs.push(sym)
        if ham is not None:
            yield e, ham


# ---------------- small-approximate-period k-mismatch matching ----------------

class _Block:
    """One overlapping text block: approximately periodic by construction,
    stored as a growing periodic representation, scanned by a (possibly
    delayed) Hamming streamer."""

    __slots__ = ("start", "rep", "promote", "end", "streamer", "cursor",
                 "sk_before", "sketcher", "sketch_pos")

    def __init__(self, start, period, profile, promote=None):
        self.start = start
        self.rep = GrowingPeriodic(period)
        self.promote = promote
        self.end = None
        self.streamer = HammingStreamer(profile)
        self.cursor = 0
        self.sk_before = None
        self.sketcher = None
        self.sketch_pos = 0

    @property
    def m(self):
        return self.rep.mismatches()

    def footprint_words(self):
        w = self.rep.footprint_words() + self.streamer.footprint_words() + 6
        if self.sk_before is not None:
            w += len(self.sk_before.phi) + len(self.sk_before.phi2) + 2
        if self.sketcher is not None:
            w += self.sketcher.footprint_words()
        return w


class SmallPeriodMatcher:
    """Streaming k-mismatch matcher for a pattern with a small approximate
    period, with a configurable emission delay.

    The text is carved into overlapping blocks so that every position lies
    in exactly two of them and each block keeps at most 4k+2d+p mismatches
    against the period; any window within Hamming distance k of the pattern
    is then fully contained in the older of the two current blocks, which is
    the one that reports it.  Blocks are retained only as periodic
    representations, so a delayed scan re-derives their symbols instead of
    queueing output.
    """

    def __init__(self, prep: PeriodicRepresentation, k: int, delay: int,
                 params=None, prefix_sketcher=None, want_mi=True,
                 want_sketches=False, field: FieldParams | None = None,
                 debug: bool | None = None):
        n = prep.n
        p = prep.period
        d_p = len(prep.selfmi)
        if n < 1:
            raise UsageError("empty pattern")
        if p > max(k + 1, 1):
            raise UsageError("pattern period too large for this matcher")
        if d_p > 8 * k + 8:
            raise UsageError("pattern self-overlap too dirty for this matcher")
        if delay < 0 or delay > 4 * n:
            raise UsageError("delay must be between 0 and 4|P|")
        if want_sketches and params is None:
            raise UsageError("sketch reporting needs sketch params")
        self.prep = prep
        self.k = k
        self.delay = delay
        self.params = params
        self.cap = d_p + 2 * k
        self.budget = 4 * k + 2 * d_p + p
        self.field = field or (params.field if params else default_field())
        self.profile = PatternConvProfile(prep, self.budget, self.field)
        self.want_mi = want_mi
        self.want_sketches = want_sketches
        self.debug = DEBUG_CHECKS if debug is None else debug
        self.sketcher = prefix_sketcher
        self.own_sketcher = False
        if want_sketches and self.sketcher is None:
            self.sketcher = sketches.RollingSketcher(params)
            self.own_sketcher = True
        self.blocks: list[_Block] = []
        self.bold: _Block | None = None
        self.byoung: _Block | None = None
        self.ring = [0] * p
        self.tick = 0
        self.finished = False
        # pattern-side mismatch events per residue, for O(k)-ish MI extraction
        self.pat_events = [[r] for r in range(p)]
        for (i, _a, _b) in prep.selfmi:
            self.pat_events[(i + p) % p].append(i + p)
        for evs in self.pat_events:
            evs.sort()

    def _new_block(self, start, promote):
        blk = _Block(start, self.prep.period, self.profile, promote)
        if self.want_sketches:
            blk.sk_before = (self.sketcher.snapshot() if start
                             else sketches.empty(self.params))
            blk.sketcher = sketches.RollingSketcher(self.params)
        return blk

    def push(self, sym):
        """Consume one text symbol; returns records emitted at this tick."""
        if self.finished:
            raise UsageError("matcher already finished")
        t = self.tick
        p = self.prep.period
        if t == 0:
            self.bold = self._new_block(0, 0)
            self.byoung = self._new_block(0, None)
            self.blocks = [self.bold, self.byoung]
            prev = None
        else:
            prev = self.ring[t % p] if t >= p else None
            if prev is not None and sym != prev and self.byoung.m == self.cap:
                retired = self.bold
                retired.end = t
                if t - retired.start < self.prep.n:
                    self.blocks.remove(retired)  # too short to hold a window
                self.bold = self.byoung
                self.bold.promote = t
                self.byoung = self._new_block(t, None)
                self.blocks.append(self.byoung)
        self.bold.rep.append(sym, prev if t - p >= self.bold.start else None)
        self.byoung.rep.append(sym, prev if t - p >= self.byoung.start else None)
        if self.debug:
            assert self.byoung.m <= self.cap
            assert self.bold.m <= self.byoung.m + min(self.byoung.rep.n, p) + self.cap
        self.ring[t % p] = sym
        if self.own_sketcher:
            self.sketcher.append(sym)
        self.tick = t + 1
        return self._pump(t)

    def _pump(self, t):
        out = []
        n = self.prep.n
        for blk in list(self.blocks):
            blk_len = (blk.end if blk.end is not None else self.tick) - blk.start
            limit = min(blk_len, t - self.delay - blk.start + 1)
            while blk.cursor < limit:
                local = blk.cursor
                ham = blk.streamer.push(blk.rep.symbol(local))
                blk.cursor = local + 1
                if ham is not None and ham <= self.k:
                    e = blk.start + local
                    if blk.promote is not None and e >= blk.promote:
                        out.append(self._record(blk, local - n + 1))
            if blk.end is not None and blk.cursor >= blk.end - blk.start:
                self.blocks.remove(blk)
        return out

    def finish(self):
        """Drain emissions still owed by the configured delay."""
        if not self.finished:
            self.finished = True
            for blk in (self.bold, self.byoung):
                if blk is not None and blk.end is None:
                    blk.end = self.tick
                    if blk.end - blk.start < self.prep.n and blk in self.blocks:
                        self.blocks.remove(blk)
        out = []
        t = self.tick
        while self.blocks:
            out.extend(self._pump(t))
            t += 1
        return out

    def _record(self, blk, local_start):
        mi = self._window_mi(blk, local_start) if self.want_mi else None
        sk = None
        if self.want_sketches:
            while blk.sketch_pos < local_start:
                blk.sketcher.append(blk.rep.symbol(blk.sketch_pos))
                blk.sketch_pos += 1
            sk = sketches.concat(blk.sk_before, blk.sketcher.snapshot(), self.params)
        return OccurrenceRecord(blk.start + local_start, mi, sk)

    def _window_mi(self, blk, o):
        """MI(P, block window starting at o) from the two representations."""
        prep = self.prep
        n = prep.n
        p = prep.period
        rep = blk.rep
        entries = []
        for rho in range(p):
            evs = list(self.pat_events[rho])
            bres = (rho + o) % p
            pos = rep.res_pos.get(bres)
            if pos:
                lo = bisect_left(pos, o + 1 - p)
                hi = bisect_left(pos, o + n - p)
                for idx in range(lo, hi):
                    evs.append(pos[idx] + p - o)
            evs = sorted(set(evs))
            for which, x0 in enumerate(evs):
                a = prep.symbol(x0)
                b = rep.symbol(o + x0)
                if a != b:
                    x1 = evs[which + 1] if which + 1 < len(evs) else n
                    for x in range(x0, min(x1, n), p):
                        entries.append((x, a, b))
        entries.sort()
        return MismatchInfo(entries, already_sorted=True)

    def footprint_words(self):
        w = len(self.ring) + self.profile.footprint_words() + 8
        w += sum(len(e) for e in self.pat_events)
        for blk in self.blocks:
            w += blk.footprint_words()
        if self.own_sketcher and self.sketcher is not None:
            w += self.sketcher.footprint_words()
        return w


def small_period_match(prep: PeriodicRepresentation, k: int, delay: int, text,
                       params=None, want_sketches=False,
                       field: FieldParams | None = None, debug=None):
    """Generator of OccurrenceRecords for a small-approximate-period pattern
    over a one-pass text, each emitted exactly `delay` positions after the
    occurrence's last symbol."""
    m = SmallPeriodMatcher(prep, k, delay, params=params,
                           want_sketches=want_sketches, field=field, debug=debug)
    for sym in text:
        yield from m.push(sym)
    yield from m.finish()

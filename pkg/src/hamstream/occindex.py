"""Succinct encoding of the mismatch structure induced by a set of small
approximate periods of one string.

Adding periods p_1, p_2, ... drives a gcd chain d_1 | d_2 | ...; positions
fall into classes modulo the current gcd, and only non-uniform classes can
ever witness a mismatch.  Per chain level the structure keeps, run-length
encoded, the "majority string" of each non-uniform class (the majorities of
the enclosed finer classes, laid out so that the period acts as a cyclic
shift), plus the symbol multisets of the top-level non-uniform classes.
All stored strings live as non-overlapping factors of one conceptual string
of length 2n, with a membership set marking where stored strings start.

Queries walk up the chain: uniform majority strings certify that the symbol
equals the class majority one level up; the first stored string on the path
answers exactly, and reaching the top means the symbol is the top majority
(or the class is uniform and a sentinel comes back).
"""

from __future__ import annotations

from bisect import bisect_right
from math import gcd

from .base import DecodeError, MismatchInfo, UsageError
from .wire import get_uvarint, put_uvarint


class RleString:
    """Run-length encoded string: run start offsets plus run symbols."""

    __slots__ = ("starts", "symbols", "length")

    def __init__(self, starts, symbols, length):
        if len(starts) != len(symbols):
            raise UsageError("starts/symbols length mismatch")
        if starts and starts[0] != 0:
            raise UsageError("first run must start at 0")
        for a, b in zip(starts, starts[1:]):
            if b <= a:
                raise UsageError("run starts must increase")
        for a, b in zip(symbols, symbols[1:]):
            if a == b:
                raise UsageError("adjacent runs must differ")
        self.starts = list(starts)
        self.symbols = list(symbols)
        self.length = length

    @staticmethod
    def from_sequence(seq):
        starts, symbols = [], []
        for i, v in enumerate(seq):
            if not symbols or symbols[-1] != v:
                starts.append(i)
                symbols.append(v)
        return RleString(starts, symbols, len(seq))

    def symbol_at(self, i):
        if not (0 <= i < self.length):
            raise UsageError("index out of range")
        return self.symbols[bisect_right(self.starts, i) - 1]

    def run_count(self):
        return len(self.starts)

    def to_list(self):
        out = []
        for t, s in enumerate(self.starts):
            end = self.starts[t + 1] if t + 1 < len(self.starts) else self.length
            out.extend([self.symbols[t]] * (end - s))
        return out


class MembershipSet:
    """Subset of [0, universe) with O(1) membership via a bitmap; serialized
    sparsely as delta varints."""

    __slots__ = ("universe", "_bits", "_members")

    def __init__(self, universe, members=()):
        self.universe = universe
        self._bits = bytearray((universe + 7) // 8)
        self._members = sorted(set(members))
        for m in self._members:
            if not (0 <= m < universe):
                raise UsageError("member out of universe")
            self._bits[m >> 3] |= 1 << (m & 7)

    def __contains__(self, i):
        return 0 <= i < self.universe and bool(self._bits[i >> 3] & (1 << (i & 7)))

    def members(self):
        return list(self._members)

    def __len__(self):
        return len(self._members)


def _majority(multiset):
    """Strict majority symbol of a multiset, or None."""
    total = 0
    best_v = None
    best_c = -1
    for v, c in multiset.items():
        total += c
        if c > best_c:
            best_v, best_c = v, c
    return best_v if 2 * best_c > total else None


class PeriodStructure:
    """Mismatch structure of one length-n string under added k-periods."""

    def __init__(self, n, k, sigma):
        if n < 1:
            raise UsageError("n must be positive")
        if sigma < 1:
            raise UsageError("alphabet bound must be positive")
        self.n = n
        self.k = k
        self.sigma = sigma
        self.blank = sigma
        self.sent = sigma + 1
        self.levels = []      # (d, stride, rinv, strings{residue: [(slot, sym), ...]})
        self.top_major = {}   # residue mod d -> majority symbol (sent if none)
        self.multisets = {}   # residue mod d -> {symbol: count}, non-uniform only
        self._rle = None
        self._starts = None
        self._rebuild()

    @property
    def d(self):
        return self.levels[-1][0] if self.levels else 0

    # -------- geometry of the conceptual length-2n layout --------

    def _stride(self, lvl):
        d = self.levels[lvl - 1][0]
        if lvl == 1:
            return -(-self.n // d)
        return self.levels[lvl - 2][0] // d

    def _string_len(self, lvl, r):
        if lvl == 1:
            d = self.levels[0][0]
            return -(-(self.n - r) // d)
        return self._stride(lvl)

    def _string_start(self, lvl, r):
        return 2 * self.levels[lvl - 1][0] + r * self.levels[lvl - 1][1]

    # -------- updates --------

    def add_period(self, p, mi: MismatchInfo):
        """Fold in a k-period p (<= n/4) with the self-overlap mismatch list
        MI(X[0..n-p-1], X[p..n-1]); a no-op when gcd(d, p) == d."""
        if not (1 <= p <= self.n // 4):
            raise UsageError("period must satisfy 1 <= p <= n/4")
        if len(mi) > self.k:
            raise UsageError("self-overlap mismatch list larger than k")
        for (i, _a, _b) in mi:
            if i >= self.n - p:
                raise UsageError("mismatch index beyond the overlap")
        d_old = self.d
        d_new = gcd(d_old, p)
        if d_new == d_old:
            return
        lvl = len(self.levels) + 1
        if lvl == 1:
            ratio = None
            rinv = None
        else:
            ratio = d_old // d_new
            rinv = pow((p // d_new) % ratio, -1, ratio)
        cands = {i % d_new for (i, _a, _b) in mi}
        cands.update(r % d_new for r in self.multisets)

        def slot_of(r_old, r):
            if lvl == 1:
                raise AssertionError("no enclosed classes at level 1")
            return rinv * (r_old // d_new) % ratio

        new_strings = {}
        new_multisets = {}
        new_top = {}
        old_by_res = {}
        for r_old in self.multisets:
            old_by_res.setdefault(r_old % d_new, []).append(r_old)
        mi_by_res = {}
        for ent in mi:
            mi_by_res.setdefault(ent[0] % d_new, []).append(ent)

        for r in sorted(cands):
            length = self._len_for(lvl, r, d_new, ratio)
            slots = [None] * length
            sub = {}
            for r_old in old_by_res.get(r, ()):
                j = slot_of(r_old, r)
                ms = self.multisets[r_old]
                maj = _majority(ms)
                slots[j] = self.sent if maj is None else maj
                sub[j] = ms
            for (i, a, b) in mi_by_res.get(r, ()):
                if lvl == 1:
                    j1 = i // d_new
                    j2 = j1 + 1
                else:
                    j1 = slot_of(i % d_old, r)
                    j2 = slot_of((i + p) % d_old, r)
                    assert j2 == (j1 + 1) % ratio
                if slots[j1] is None:
                    slots[j1] = a
                if slots[j2] is None:
                    slots[j2] = b
            self._fill_unknowns(slots, cyclic=(lvl > 1))
            mult = {}
            if lvl == 1:
                for v in slots:
                    mult[v] = mult.get(v, 0) + 1
            else:
                for j, v in enumerate(slots):
                    if j in sub:
                        for sv, sc in sub[j].items():
                            mult[sv] = mult.get(sv, 0) + sc
                    else:
                        r_old = (r + j * p) % d_old
                        size = -(-(self.n - r_old) // d_old)
                        mult[v] = mult.get(v, 0) + size
            assert len(mult) >= 2, "candidate class must be non-uniform"
            if any(v != slots[0] for v in slots):
                new_strings[r] = self._runs_of(slots)
            new_multisets[r] = mult
            maj = _majority(mult)
            new_top[r] = self.sent if maj is None else maj

        self.levels.append((d_new, None, rinv, new_strings))
        self.levels[-1] = (d_new, self._stride(lvl), rinv, new_strings)
        self.multisets = new_multisets
        self.top_major = new_top
        self._rebuild()

    def _len_for(self, lvl, r, d_new, ratio):
        if lvl == 1:
            return -(-(self.n - r) // d_new)
        return ratio

    @staticmethod
    def _runs_of(slots):
        runs = []
        for j, v in enumerate(slots):
            if not runs or runs[-1][1] != v:
                runs.append((j, v))
        return runs

    def _fill_unknowns(self, slots, cyclic):
        length = len(slots)
        known = [j for j, v in enumerate(slots) if v is not None]
        assert known, "candidate class with no anchor"
        if len(known) == length:
            return
        if cyclic:
            start = known[0]
            last = slots[start]
            for off in range(1, length):
                j = (start + off) % length
                if slots[j] is None:
                    assert last != self.sent, "fill crossing a majority-free class"
                    slots[j] = last
                else:
                    last = slots[j]
        else:
            last = None
            for j in range(length):
                if slots[j] is None:
                    if last is not None:
                        assert last != self.sent
                        slots[j] = last
                else:
                    last = slots[j]
            nxt = None
            for j in range(length - 1, -1, -1):
                if slots[j] is None:
                    assert nxt is not None and nxt != self.sent
                    slots[j] = nxt
                else:
                    nxt = slots[j]

    # -------- materialized layout and queries --------

    def _rebuild(self):
        placements = []
        for lvl in range(1, len(self.levels) + 1):
            d, stride, _rinv, strings = self.levels[lvl - 1]
            for r, runs in strings.items():
                st = 2 * d + r * stride
                placements.append((st, runs, self._string_len(lvl, r)))
        d = self.d
        for r in sorted(self.top_major):
            placements.append((r, [(0, self.top_major[r])], 1))
        placements.sort()
        flat = []
        cursor = 0
        for st, runs, length in placements:
            if st < cursor:
                raise AssertionError("overlapping placements")
            if st > cursor:
                flat.append((cursor, self.blank))
            for off, v in runs:
                flat.append((st + off, v))
            cursor = st + length
        total = 2 * self.n
        if cursor > total:
            raise AssertionError("placement beyond the 2n layout")
        if cursor < total:
            flat.append((cursor, self.blank))
        if not flat:
            flat = [(0, self.blank)]
        starts, symbols = [], []
        for s, v in flat:
            if symbols and symbols[-1] == v:
                continue
            starts.append(s)
            symbols.append(v)
        self._rle = RleString(starts, symbols, total)
        self._starts = MembershipSet(
            total,
            [2 * d_ + r * stride
             for (d_, stride, _ri, strings) in self.levels
             for r in strings],
        )

    def query(self, i):
        """X[i] when the class of i modulo the current gcd is non-uniform,
        the sentinel symbol otherwise."""
        if not (0 <= i < self.n):
            raise UsageError("index out of range")
        if not self.levels:
            return self.sent
        for lvl in range(1, len(self.levels) + 1):
            d, stride, rinv, _strings = self.levels[lvl - 1]
            r = i % d
            st = 2 * d + r * stride
            if st in self._starts:
                if lvl == 1:
                    j = i // d
                else:
                    ratio = self.levels[lvl - 2][0] // d
                    j = rinv * (i // d) % ratio
                return self._rle.symbol_at(st + j)
        v = self._rle.symbol_at(i % self.d)
        return self.sent if v == self.blank else v

    # -------- measured combinatorial bounds --------

    def adjacent_mismatch_count(self):
        """Mismatches between adjacent symbols across all stored majority
        strings (cyclically for levels above the first)."""
        total = 0
        for lvl in range(1, len(self.levels) + 1):
            _d, _stride, _ri, strings = self.levels[lvl - 1]
            for r, runs in strings.items():
                total += len(runs) - 1
                if lvl > 1 and runs[0][1] != runs[-1][1]:
                    total += 1
        return total

    def distinct_sum(self):
        return sum(len(m) for m in self.multisets.values())

    # -------- serialization --------

    def serialize(self) -> bytes:
        out = bytearray()
        put_uvarint(out, self.n)
        put_uvarint(out, len(self.levels))
        put_uvarint(out, self.k)
        prev_d = None
        for lvl, (d, _stride, rinv, _strings) in enumerate(self.levels, start=1):
            put_uvarint(out, d if lvl == 1 else prev_d // d)
            if lvl > 1:
                put_uvarint(out, rinv)
            prev_d = d
        put_uvarint(out, self._rle.run_count())
        prev = 0
        for s in self._rle.starts:
            put_uvarint(out, s - prev)
            prev = s
        for v in self._rle.symbols:
            put_uvarint(out, v)
        mem = self._starts.members()
        put_uvarint(out, len(mem))
        prev = 0
        for s in mem:
            put_uvarint(out, s - prev)
            prev = s
        put_uvarint(out, len(self.multisets))
        prev = 0
        for r in sorted(self.multisets):
            put_uvarint(out, r - prev)
            prev = r
            ms = self.multisets[r]
            put_uvarint(out, len(ms))
            for sym in sorted(ms):
                put_uvarint(out, sym)
                put_uvarint(out, ms[sym])
        return bytes(out)

    @staticmethod
    def deserialize(data: bytes, sigma: int, pos: int = 0):
        n, pos = get_uvarint(data, pos)
        s, pos = get_uvarint(data, pos)
        k, pos = get_uvarint(data, pos)
        ps = PeriodStructure(n, k, sigma)
        dims = []
        prev_d = None
        for lvl in range(1, s + 1):
            v, pos = get_uvarint(data, pos)
            if lvl == 1:
                d = v
                rinv = None
            else:
                if v == 0 or prev_d % v:
                    raise DecodeError("bad chain ratio")
                d = prev_d // v
                rinv, pos = get_uvarint(data, pos)
            dims.append((d, rinv))
            prev_d = d
        nrun, pos = get_uvarint(data, pos)
        starts = []
        prev = 0
        for t in range(nrun):
            dlt, pos = get_uvarint(data, pos)
            prev += dlt
            starts.append(prev)
        symbols = []
        for _ in range(nrun):
            v, pos = get_uvarint(data, pos)
            symbols.append(v)
        try:
            rle = RleString(starts, symbols, 2 * n)
        except UsageError as e:
            raise DecodeError(str(e)) from None
        nmem, pos = get_uvarint(data, pos)
        mem = []
        prev = 0
        for _ in range(nmem):
            dlt, pos = get_uvarint(data, pos)
            prev += dlt
            mem.append(prev)
        nms, pos = get_uvarint(data, pos)
        multisets = {}
        prev = 0
        for _ in range(nms):
            dlt, pos = get_uvarint(data, pos)
            prev += dlt
            cnt, pos = get_uvarint(data, pos)
            ms = {}
            for _ in range(cnt):
                sym, pos = get_uvarint(data, pos)
                mult, pos = get_uvarint(data, pos)
                ms[sym] = mult
            multisets[prev] = ms
        # reassemble the level views from the serialized pieces
        memset = set(mem)
        levels = []
        for lvl, (d, rinv) in enumerate(dims, start=1):
            ps.levels.append((d, None, rinv, {}))
            stride = ps._stride(lvl)
            strings = {}
            base = 2 * d
            upper = 2 * dims[lvl - 2][0] if lvl > 1 else 2 * n
            for st in mem:
                if base <= st < upper and (st - base) % stride == 0:
                    r = (st - base) // stride
                    if r < d:
                        length = ps._string_len(lvl, r)
                        runs = []
                        seq_start = st
                        for j in range(length):
                            v = rle.symbol_at(seq_start + j)
                            if not runs or runs[-1][1] != v:
                                runs.append((j, v))
                        strings[r] = runs
            ps.levels[lvl - 1] = (d, stride, rinv, strings)
            levels.append(d)
        ps.multisets = multisets
        d = ps.d
        top = {}
        if ps.levels:
            for r in range(min(d, 2 * n)):
                v = rle.symbol_at(r)
                if v != ps.blank:
                    top[r] = v
        ps.top_major = top
        ps._rebuild()
        if ps._rle.starts != rle.starts or ps._rle.symbols != rle.symbols:
            raise DecodeError("inconsistent period-structure payload")
        if set(ps._starts.members()) != memset:
            raise DecodeError("inconsistent membership payload")
        return ps, pos

    def size_bits(self):
        return 8 * len(self.serialize())

    def footprint_words(self):
        w = 8 + 2 * len(self.top_major)
        for (_d, _s, _ri, strings) in self.levels:
            w += 3 + sum(2 * len(runs) + 1 for runs in strings.values())
        for ms in self.multisets.values():
            w += 2 * len(ms) + 1
        w += 2 * self._rle.run_count() + len(self._starts) + (2 * self.n) // 64 + 2
        return w


def period_from_overlap(occ1, occ2, n):
    """Turn two overlapping k-mismatch occurrences of the same pattern into
    the induced approximate period of the pattern.

    occ1 = (l, MI(P, T[l..l+n-1])), occ2 = (l', MI(P, T[l'..l'+n-1])) with
    l < l' < l+n; returns (p, MI(P[0..n-p-1], P[p..n-1])) where p = l'-l.
    """
    l1, mi1 = occ1
    l2, mi2 = occ2
    if not (l1 < l2 < l1 + n):
        raise UsageError("occurrences must overlap")
    p = l2 - l1
    d1 = {i: (a, b) for (i, a, b) in mi1}
    d2 = {i: (a, b) for (i, a, b) in mi2}
    cand = set()
    for i in d2:
        if i < n - p:
            cand.add(i)
    for j in d1:
        if j >= p:
            cand.add(j - p)
    entries = []
    for i in sorted(cand):
        e2 = d2.get(i)
        e1 = d1.get(i + p)
        if e2 is not None and e1 is not None:
            left, right = e2[0], e1[0]
        elif e2 is not None:
            left, right = e2[0], e2[1]
        else:
            left, right = e1[1], e1[0]
        if left != right:
            entries.append((i, left, right))
    return p, MismatchInfo(entries, already_sorted=True)

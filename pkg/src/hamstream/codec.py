"""One-way encoding of every k-mismatch occurrence of a pattern in a text.

The sender transmits only: the leftmost and rightmost occurrence (start and
mismatch list each), the gcd d of all occurrence distances, and the period
structure of the pattern under those distances.  The receiver rebuilds
proxy strings in which every position of a uniform combined class is
replaced by a per-residue sentinel; matching the proxy pattern against the
proxy text reproduces exactly the original occurrence set with its
mismatch information.

Message layout (byte-exact):

    magic "HMK1" | flags | uvar n | uvar k | uvar sigma
    [ nonempty: uvar l1 | uvar (l2-l1) | uvar d
      mi_left | mi_right            (count, delta indices, packed symbols)
      period-structure blob
      [ sketches: sk(T[0..l1-1]) | sk(T[0..l2-1]) ] ]

flags: bit0 = nonempty, bit1 = prefix sketches present.
"""

from __future__ import annotations

import random

import numpy as np

from .base import DecodeError, MismatchInfo, UsageError
from .fields import default_field
from .occindex import PeriodStructure, period_from_overlap
from .readonly import ReadonlyMatcher
from .sketches import SketchK, SketchParams
from .wire import bit_width, get_uvarint, pack_bits, put_uvarint, unpack_bits

MAGIC = b"HMK1"


def occurrences_offline(pat, txt, k):
    """Reference occurrence list by direct scanning."""
    n, m = len(pat), len(txt)
    out = []
    if n == 0 or m < n:
        return out
    tp = np.asarray(txt, dtype=np.int64)
    pp = np.asarray(pat, dtype=np.int64)
    counts = np.zeros(m - n + 1, dtype=np.int64)
    for j in range(n):
        counts += tp[j : j + m - n + 1] != pp[j]
    for s in np.nonzero(counts <= k)[0]:
        s = int(s)
        diff = np.nonzero(pp != tp[s : s + n])[0]
        mi = MismatchInfo(
            [(int(i), int(pp[i]), int(tp[s + i])) for i in diff], already_sorted=True)
        out.append((s, mi))
    return out


class OccMessage:
    """Parsed message contents."""

    __slots__ = ("n", "k", "sigma", "empty", "l1", "l2", "mi_left", "mi_right",
                 "d", "ps", "sk_left", "sk_right")

    def __init__(self, n, k, sigma, empty=True, l1=0, l2=0,
                 mi_left=None, mi_right=None, d=0, ps=None,
                 sk_left=None, sk_right=None):
        self.n = n
        self.k = k
        self.sigma = sigma
        self.empty = empty
        self.l1 = l1
        self.l2 = l2
        self.mi_left = mi_left
        self.mi_right = mi_right
        self.d = d
        self.ps = ps
        self.sk_left = sk_left
        self.sk_right = sk_right


def _put_mi(out, mi: MismatchInfo, width):
    put_uvarint(out, len(mi))
    prev = 0
    syms = []
    for (i, a, b) in mi:
        put_uvarint(out, i - prev)
        prev = i
        syms.append(a)
        syms.append(b)
    out.extend(pack_bits(syms, width))


def _get_mi(data, pos, width):
    cnt, pos = get_uvarint(data, pos)
    idx = []
    prev = 0
    for _ in range(cnt):
        dlt, pos = get_uvarint(data, pos)
        prev += dlt
        idx.append(prev)
    nbytes = (2 * cnt * width + 7) // 8
    syms = unpack_bits(data[pos : pos + nbytes], 2 * cnt, width)
    pos += nbytes
    ents = [(idx[t], syms[2 * t], syms[2 * t + 1]) for t in range(cnt)]
    try:
        return MismatchInfo(ents, already_sorted=True), pos
    except UsageError as e:
        raise DecodeError(str(e)) from None


def build_message(pat, txt, k, sigma=None, params: SketchParams | None = None,
                  use_matcher=False, sk_left=None, sk_right=None) -> OccMessage:
    n = len(pat)
    if n < 1:
        raise UsageError("empty pattern")
    if len(txt) > n + n // 4:
        raise UsageError("text longer than 5n/4; use chunk_driver")
    if sigma is None:
        top = max(max(pat, default=0), max(txt, default=0))
        sigma = max(2, top + 1)
    if any(v >= sigma or v < 0 for v in pat) or any(v >= sigma or v < 0 for v in txt):
        raise UsageError("symbol outside the declared alphabet")
    if use_matcher:
        occs = [(r.start, r.mi)
                for r in ReadonlyMatcher(pat, txt, k, params).run()]
    else:
        occs = occurrences_offline(pat, txt, k)
    msg = OccMessage(n, k, sigma)
    if not occs:
        return msg
    msg.empty = False
    msg.l1, msg.mi_left = occs[0]
    msg.l2, msg.mi_right = occs[-1]
    ps = PeriodStructure(n, 2 * k, sigma)
    for (o, mi_o) in occs[1:]:
        p, pmi = period_from_overlap((msg.l1, msg.mi_left), (o, mi_o), n)
        ps.add_period(p, pmi)
    msg.d = ps.d
    msg.ps = ps
    msg.sk_left = sk_left
    msg.sk_right = sk_right
    return msg


def serialize_message(msg: OccMessage) -> bytes:
    out = bytearray(MAGIC)
    flags = (0 if msg.empty else 1) | (2 if msg.sk_left is not None else 0)
    out.append(flags)
    put_uvarint(out, msg.n)
    put_uvarint(out, msg.k)
    put_uvarint(out, msg.sigma)
    if msg.empty:
        return bytes(out)
    put_uvarint(out, msg.l1)
    put_uvarint(out, msg.l2 - msg.l1)
    put_uvarint(out, msg.d)
    width = bit_width(msg.sigma)
    _put_mi(out, msg.mi_left, width)
    _put_mi(out, msg.mi_right, width)
    out.extend(msg.ps.serialize())
    if msg.sk_left is not None:
        out.extend(msg.sk_left.to_bytes())
        out.extend(msg.sk_right.to_bytes())
    return bytes(out)


def parse_message(data: bytes) -> OccMessage:
    if data[:4] != MAGIC:
        raise DecodeError("bad magic")
    if len(data) < 5:
        raise DecodeError("truncated message")
    flags = data[4]
    pos = 5
    n, pos = get_uvarint(data, pos)
    k, pos = get_uvarint(data, pos)
    sigma, pos = get_uvarint(data, pos)
    msg = OccMessage(n, k, sigma)
    if not flags & 1:
        return msg
    msg.empty = False
    msg.l1, pos = get_uvarint(data, pos)
    gap, pos = get_uvarint(data, pos)
    msg.l2 = msg.l1 + gap
    msg.d, pos = get_uvarint(data, pos)
    width = bit_width(sigma)
    msg.mi_left, pos = _get_mi(data, pos, width)
    msg.mi_right, pos = _get_mi(data, pos, width)
    msg.ps, pos = PeriodStructure.deserialize(data, sigma, pos)
    if msg.ps.n != n:
        raise DecodeError("period structure length mismatch")
    if msg.d != msg.ps.d:
        raise DecodeError("gcd mismatch")
    if flags & 2:
        skbytes = 8 * (3 * k + 5)
        if len(data) < pos + 2 * skbytes:
            raise DecodeError("truncated sketches")
        msg.sk_left = SketchK.from_bytes(data[pos : pos + skbytes])
        pos += skbytes
        msg.sk_right = SketchK.from_bytes(data[pos : pos + skbytes])
        pos += skbytes
    return msg


def encode(pat, txt, k, sigma=None, params=None, use_matcher=False) -> bytes:
    """Alice's side: deterministic byte encoding of all k-mismatch
    occurrences of pat in txt (|txt| <= 5|pat|/4)."""
    return serialize_message(build_message(pat, txt, k, sigma, params, use_matcher))


class ProxyPattern:
    """Receiver-side pattern view: real symbols where the combined class is
    non-uniform, per-residue sentinels elsewhere."""

    __slots__ = ("msg", "pat_res")

    def __init__(self, msg: OccMessage):
        self.msg = msg
        self.pat_res = {}
        for mi in (msg.mi_left, msg.mi_right):
            for (i, a, _b) in mi:
                self.pat_res[self._res(i)] = a

    def _res(self, i):
        return i % self.msg.d if self.msg.d else i

    def __len__(self):
        return self.msg.n

    def __getitem__(self, i):
        msg = self.msg
        v = msg.ps.query(i)
        if v != msg.ps.sent:
            return v
        res = self._res(i)
        got = self.pat_res.get(res)
        if got is not None:
            return got
        return msg.sigma + 1 + res


class ProxyText:
    """Receiver-side view of T[l1 .. l2+n-1], same sentinel rule."""

    __slots__ = ("msg", "pat", "left", "right")

    def __init__(self, msg: OccMessage, pat: ProxyPattern):
        self.msg = msg
        self.pat = pat
        self.left = {i: b for (i, _a, b) in msg.mi_left}
        self.right = {i: b for (i, _a, b) in msg.mi_right}

    def __len__(self):
        return self.msg.l2 - self.msg.l1 + self.msg.n

    def __getitem__(self, i):
        msg = self.msg
        if i < msg.n:
            base, table = i, self.left
        else:
            base, table = i - (msg.l2 - msg.l1), self.right
        v = msg.ps.query(base)
        res = self.pat._res(base)
        if v == msg.ps.sent:
            carried = self.pat.pat_res.get(res)
            if carried is None:
                return msg.sigma + 1 + res
            pat_sym = carried
        else:
            pat_sym = v
        got = table.get(base)
        return got if got is not None else pat_sym


def decode(data: bytes, params: SketchParams | None = None, seed: int = 0x484D4B31):
    """Bob's side: the full occurrence list (start, MI) reproduced from the
    message alone."""
    msg = parse_message(data)
    if msg.empty:
        return []
    pat = ProxyPattern(msg)
    txt = ProxyText(msg, pat)
    if params is None:
        params = SketchParams(msg.k, default_field(), random.Random(seed))
    elif params.k != msg.k:
        raise UsageError("params built for a different k")
    out = []
    for rec in ReadonlyMatcher(pat, txt, msg.k, params).run():
        out.append((rec.start + msg.l1, rec.mi))
    return out


def chunk_driver(pat, txt, k, sigma=None, params=None, use_matcher=False):
    """Occurrence list for arbitrary text length: encode/decode on chunks of
    length 5n/4 overlapping by n, de-duplicated on the overlaps."""
    n = len(pat)
    if n < 1:
        raise UsageError("empty pattern")
    found = {}
    if len(txt) >= n:
        step = max(1, n // 4)
        chunk_len = n + n // 4
        for c0 in range(0, len(txt) - n + 1, step):
            chunk = txt[c0 : c0 + chunk_len]
            blob = encode(pat, chunk, k, sigma, params, use_matcher)
            for (s, mi) in decode(blob, params):
                prior = found.get(c0 + s)
                if prior is not None and prior != mi:
                    raise DecodeError("inconsistent duplicate occurrence")
                found[c0 + s] = mi
    return sorted(found.items())


def message_bits(data: bytes) -> int:
    return 8 * len(data)

"""Vectorized arithmetic mod p = 2^64 - 2^32 + 1 on numpy uint64 arrays.

The Goldilocks prime admits a branch-light reduction: 2^64 = 2^32 - 1 and
2^96 = -1 (mod p), so a 128-bit product x_hi*2^64 + x_lo reduces to
x_lo + lo32(x_hi)*(2^32-1) - hi32(x_hi).  All intermediates stay inside
uint64 with one wraparound fix-up.
"""

import numpy as np

GOLDILOCKS = (1 << 64) - (1 << 32) + 1
_P = np.uint64(GOLDILOCKS)
_M32 = np.uint64(0xFFFFFFFF)
_E32 = np.uint64(0xFFFFFFFF)  # 2^64 mod p = 2^32 - 1
_SH = np.uint64(32)


def to_vec(values):
    return np.asarray(values, dtype=np.uint64)


def addmod(a, b):
    s = a + b
    # overflow past 2^64 adds 2^32-1; then one conditional subtract of p
    s = np.where(s < a, s + _E32, s)
    return np.where(s >= _P, s - _P, s)


def submod(a, b):
    d = a - b
    return np.where(a < b, d - _E32, d)


def mulmod(a, b):
    al = a & _M32
    ah = a >> _SH
    bl = b & _M32
    bh = b >> _SH
    ll = al * bl
    lh = al * bh
    hl = ah * bl
    hh = ah * bh
    mid = (ll >> _SH) + (lh & _M32) + (hl & _M32)
    lo = ((mid & _M32) << _SH) | (ll & _M32)
    hi = hh + (lh >> _SH) + (hl >> _SH) + (mid >> _SH)
    # reduce hi*2^64: += lo32(hi)*(2^32-1), -= hi32(hi)
    add = (hi & _M32) * _E32  # < 2^64
    s = lo + add
    s = np.where(s < lo, s + _E32, s)
    s = np.where(s >= _P, s - _P, s)
    hh2 = hi >> _SH
    out = s - hh2
    out = np.where(s < hh2, out - _E32, out)
    return np.where(out >= _P, out - _P, out)


def summod(a):
    """Exact sum of a uint64 array of residues, reduced mod p."""
    if a.size == 0:
        return 0
    hi = int((a >> _SH).sum(dtype=np.uint64))
    lo = int((a & _M32).sum(dtype=np.uint64))
    return ((hi << 32) + lo) % GOLDILOCKS


_stage_cache = {}
_bitrev_cache = {}


def _bitrev(n):
    idx = _bitrev_cache.get(n)
    if idx is None:
        bits = n.bit_length() - 1
        idx = np.zeros(n, dtype=np.int64)
        for i in range(n):
            idx[i] = int(format(i, f"0{bits}b")[::-1], 2) if bits else 0
        _bitrev_cache[n] = idx
    return idx


def _stages(n, root):
    key = (n, root)
    st = _stage_cache.get(key)
    if st is None:
        st = []
        length = 2
        while length <= n:
            w = pow(root, n // length, GOLDILOCKS)
            half = length // 2
            tw = np.empty(half, dtype=np.uint64)
            cur = 1
            for i in range(half):
                tw[i] = cur
                cur = cur * w % GOLDILOCKS
            st.append((length, tw))
            length *= 2
        _stage_cache[key] = st
    return st


def ntt(a, root):
    """In-place radix-2 transform of a uint64 array whose size is a power of 2.

    root must have multiplicative order exactly len(a).
    """
    n = a.size
    a = a[_bitrev(n)]
    for length, tw in _stages(n, root):
        half = length // 2
        v = a.reshape(-1, length)
        u = v[:, :half].copy()
        w = mulmod(v[:, half:], tw)
        v[:, :half] = addmod(u, w)
        v[:, half:] = submod(u, w)
    return a


def intt(a, root):
    n = a.size
    inv_root = pow(root, GOLDILOCKS - 2, GOLDILOCKS)
    out = ntt(a, inv_root)
    n_inv = np.uint64(pow(n, GOLDILOCKS - 2, GOLDILOCKS))
    return mulmod(out, n_inv)

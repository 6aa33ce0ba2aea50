"""Rolling k-mismatch sketches.

A string S over F_p is summarized by 3k+3 field elements:

    phi_j(S)  = sum_i S[i] * i^j          for j = 0..2k   (0^0 = 1)
    phi2_j(S) = sum_i S[i]^2 * i^j        for j = 0..k
    psi(S)    = sum_i S[i] * r^i          (Karp-Rabin value, r random)

Comparing two equal-length sketches either recovers the full mismatch
information (when the strings differ in at most k places) or reports
TOO_MANY.  The sketch supports exact concatenation, prefix/suffix
removal, string powers and mismatch-driven updates, which is what makes
it usable as a sliding/rolling summary.
"""

from __future__ import annotations

import random
import struct

from . import decoding
from .base import (
    EMPTY_MI,
    TOO_MANY,
    DecodeError,
    DomainError,
    MismatchInfo,
    RootFindingFailure,
    SizeError,
    UsageError,
)
from .fields import FieldParams, default_field, fp_inv, poly_inv_series, poly_mul


class SketchParams:
    """Session parameters: threshold k, evaluation point r, field, rng.

    r is drawn once per session; sketches made under different r (or
    different k) are incomparable.
    """

    __slots__ = ("k", "field", "rng", "r", "_binom", "_fact", "_inv_fact")

    def __init__(self, k: int, field: FieldParams | None = None,
                 rng: random.Random | None = None, r: int | None = None):
        if k < 0:
            raise UsageError("k must be non-negative")
        self.k = k
        self.field = field or default_field()
        self.rng = rng or random.Random(0)
        self.r = self.rng.randrange(1, self.field.p) if r is None else r % self.field.p
        self._binom = None
        self._fact = None
        self._inv_fact = None

    def binom(self):
        if self._binom is None:
            p = self.field.p
            rows = [[1]]
            for j in range(1, 2 * self.k + 1):
                prev = rows[-1]
                row = [1] + [(prev[t - 1] + (prev[t] if t < len(prev) else 0)) % p
                             for t in range(1, j)] + [1]
                rows.append(row)
            self._binom = rows
        return self._binom

    def factorials(self):
        if self._fact is None:
            p = self.field.p
            m = 2 * self.k + 2
            fact = [1] * (m + 1)
            for i in range(1, m + 1):
                fact[i] = fact[i - 1] * i % p
            inv = [1] * (m + 1)
            inv[m] = fp_inv(fact[m], p)
            for i in range(m, 0, -1):
                inv[i - 1] = inv[i] * i % p
            self._fact = fact
            self._inv_fact = inv
        return self._fact, self._inv_fact


class SketchK:
    """Immutable sketch value: (phi_0..phi_2k, phi2_0..phi2_k, psi, length)."""

    __slots__ = ("phi", "phi2", "psi", "length")

    def __init__(self, phi, phi2, psi, length):
        self.phi = tuple(phi)
        self.phi2 = tuple(phi2)
        self.psi = psi
        self.length = length

    @property
    def k(self):
        return (len(self.phi) - 1) // 2

    def __eq__(self, other):
        return (
            isinstance(other, SketchK)
            and self.length == other.length
            and self.psi == other.psi
            and self.phi == other.phi
            and self.phi2 == other.phi2
        )

    def __hash__(self):
        return hash((self.phi, self.phi2, self.psi, self.length))

    def __repr__(self):
        return f"SketchK(k={self.k}, len={self.length})"

    def to_bytes(self) -> bytes:
        words = [self.k, self.length, *self.phi, *self.phi2, self.psi]
        return struct.pack(f"<{len(words)}Q", *words)

    @staticmethod
    def from_bytes(data: bytes) -> "SketchK":
        if len(data) < 16 or len(data) % 8:
            raise DecodeError("truncated sketch")
        words = struct.unpack(f"<{len(data) // 8}Q", data)
        k, length = words[0], words[1]
        if len(words) != 3 * k + 5:
            raise DecodeError("sketch word count does not match its k")
        phi = words[2 : 2 * k + 3]
        phi2 = words[2 * k + 3 : 3 * k + 4]
        return SketchK(phi, phi2, words[3 * k + 4], length)


def empty(params: SketchParams) -> SketchK:
    k = params.k
    return SketchK((0,) * (2 * k + 1), (0,) * (k + 1), 0, 0)


def build(s, params: SketchParams) -> SketchK:
    """Sketch of a symbol sequence by direct evaluation of the defining sums."""
    k = params.k
    p = params.field.p
    if len(s) > params.field.max_n:
        raise SizeError("input longer than max_n")
    phi = [0] * (2 * k + 1)
    phi2 = [0] * (k + 1)
    psi = 0
    r = params.r
    if len(s) >= 256:
        import numpy as np

        from . import glvec
        if params.field.is_goldilocks:
            vals = glvec.to_vec([v % p for v in s])
            sq = glvec.mulmod(vals, vals)
            pos = np.arange(len(s), dtype=np.uint64) % np.uint64(p)
            pows = np.ones(len(s), dtype=np.uint64)
            for j in range(2 * k + 1):
                phi[j] = glvec.summod(glvec.mulmod(vals, pows))
                if j <= k:
                    phi2[j] = glvec.summod(glvec.mulmod(sq, pows))
                if j < 2 * k:
                    pows = glvec.mulmod(pows, pos)
            rpows = np.empty(len(s), dtype=np.uint64)
            cur = 1
            for i in range(len(s)):
                rpows[i] = cur
                cur = cur * r % p
            psi = glvec.summod(glvec.mulmod(vals, rpows))
            return SketchK(phi, phi2, psi, len(s))
    rpow = 1
    for i, v in enumerate(s):
        v %= p
        sq = v * v % p
        ip = 1
        for j in range(2 * k + 1):
            phi[j] = (phi[j] + v * ip) % p
            if j <= k:
                phi2[j] = (phi2[j] + sq * ip) % p
            ip = ip * i % p
        psi = (psi + v * rpow) % p
        rpow = rpow * r % p
    return SketchK(phi, phi2, psi, len(s))


def decode(sk_s: SketchK, sk_t: SketchK, params: SketchParams):
    """Mismatch information between the two sketched strings, or TOO_MANY.

    Syndromes s_j = phi_j(S) - phi_j(T) = sum delta_i x_i^j feed the key
    equation; the locator's roots are the inverse mismatch positions.  A
    difference at position 0 only shows in s_0 (its locator factor is the
    constant 1), so the recurrence runs on the tail s_1..s_2k and the
    j = 0 equation recovers the position-0 delta afterwards.  Candidate
    solutions are verified against every syndrome and the Karp-Rabin
    value; any inconsistency reports TOO_MANY.
    """
    if sk_s.length != sk_t.length:
        raise UsageError("sketches of different lengths are incomparable")
    k = params.k
    if sk_s.k != k or sk_t.k != k:
        raise UsageError("sketch k does not match params")
    p = params.field.p
    syn = [(a - b) % p for a, b in zip(sk_s.phi, sk_t.phi)]
    syn2 = [(a - b) % p for a, b in zip(sk_s.phi2, sk_t.phi2)]
    dpsi = (sk_s.psi - sk_t.psi) % p
    if not any(syn) and not any(syn2) and dpsi == 0:
        return EMPTY_MI

    lam = decoding.key_equation(syn[1:], k, params.field) if k else [1]
    kq = len(lam) - 1
    if kq > k:
        return TOO_MANY
    if kq:
        try:
            zs = decoding.find_distinct_roots(lam, params.field, params.rng,
                                              position_bound=sk_s.length)
        except RootFindingFailure:
            return TOO_MANY
        if len(zs) != kq or 0 in zs:
            return TOO_MANY
        xs = sorted(fp_inv(z, p) for z in zs)
        if len(set(xs)) != kq or xs[-1] >= sk_s.length:
            return TOO_MANY
    else:
        xs = []

    try:
        if kq:
            gammas = decoding.vand_solve(syn[1 : kq + 1], xs, params.field)
            deltas = [g * fp_inv(x, p) % p for g, x in zip(gammas, xs)]
            gammas2 = decoding.vand_solve(syn2[1 : kq + 1], xs, params.field)
            deltas2 = [g * fp_inv(x, p) % p for g, x in zip(gammas2, xs)]
        else:
            deltas, deltas2 = [], []
    except DomainError:
        return TOO_MANY
    if any(d == 0 for d in deltas):
        return TOO_MANY
    d0 = (syn[0] - sum(deltas)) % p
    d0sq = (syn2[0] - sum(deltas2)) % p
    positions = list(xs)
    dd = list(deltas)
    dd2 = list(deltas2)
    if d0 or d0sq:
        if d0 == 0:
            return TOO_MANY  # equal symbols cannot have differing squares
        positions = [0] + positions
        dd = [d0] + dd
        dd2 = [d0sq] + dd2
    if len(positions) > k:
        return TOO_MANY
    if positions and positions[-1] >= sk_s.length:
        return TOO_MANY

    if decoding.vand_mul(dd, positions, 2 * k + 1, params.field) != syn:
        return TOO_MANY
    if decoding.vand_mul(dd2, positions, k + 1, params.field) != syn2:
        return TOO_MANY
    if sum(d * pow(params.r, x, p) for d, x in zip(dd, positions)) % p != dpsi:
        return TOO_MANY

    entries = []
    for x, d, d2 in zip(positions, dd, dd2):
        inv2d = fp_inv(2 * d % p, p)
        sval = (d2 + d * d) * inv2d % p
        tval = (d2 - d * d) * inv2d % p
        entries.append((x, sval, tval))
    return MismatchInfo(entries, already_sorted=True)


def apply_mi(sk: SketchK, mi: MismatchInfo, params: SketchParams) -> SketchK:
    """Sketch of the string obtained by applying mi = MI(S, T) to sketched S."""
    k = params.k
    p = params.field.p
    if len(mi) > 4 * k + 2:
        raise UsageError("mismatch set too large for a k-sketch update")
    if len(mi) == 0:
        return sk
    if any(i >= sk.length or i < 0 for i in mi.indices()):
        raise UsageError("mismatch index out of range")
    positions = []
    dphi = []
    dphi2 = []
    dpsi = 0
    for (i, a, b) in mi:
        a %= p
        b %= p
        positions.append(i)
        dphi.append((b - a) % p)
        dphi2.append((b * b - a * a) % p)
        dpsi = (dpsi + (b - a) * pow(params.r, i, p)) % p
    s1 = decoding.vand_mul(dphi, positions, 2 * k + 1, params.field)
    s2 = decoding.vand_mul(dphi2, positions, k + 1, params.field)
    phi = tuple((v + d) % p for v, d in zip(sk.phi, s1))
    phi2 = tuple((v + d) % p for v, d in zip(sk.phi2, s2))
    return SketchK(phi, phi2, (sk.psi + dpsi) % p, sk.length)


def _shift_terms(phi, lu, binom, p, sign):
    """Coefficients of Phi(V) * e^(sign*lu*X) truncated to len(phi) terms."""
    t = len(phi)
    base = (sign * lu) % p
    pows = [1] * t
    for j in range(1, t):
        pows[j] = pows[j - 1] * base % p
    out = []
    for j in range(t):
        row = binom[j]
        acc = 0
        for jp in range(j + 1):
            acc += row[jp] * phi[jp] % p * pows[j - jp]
        out.append(acc % p)
    return out


def concat(sk_u: SketchK, sk_v: SketchK, params: SketchParams) -> SketchK:
    """Sketch of UV from the sketches of U and V."""
    p = params.field.p
    lu = sk_u.length
    if lu + sk_v.length > params.field.max_n:
        raise SizeError("concatenation exceeds max_n")
    binom = params.binom()
    sh = _shift_terms(sk_v.phi, lu, binom, p, +1)
    sh2 = _shift_terms(sk_v.phi2, lu, binom, p, +1)
    phi = tuple((a + b) % p for a, b in zip(sk_u.phi, sh))
    phi2 = tuple((a + b) % p for a, b in zip(sk_u.phi2, sh2))
    psi = (sk_u.psi + pow(params.r, lu, p) * sk_v.psi) % p
    return SketchK(phi, phi2, psi, lu + sk_v.length)


def split_left(sk_uv: SketchK, sk_v: SketchK, params: SketchParams) -> SketchK:
    """Sketch of U given sketches of UV and of the suffix V."""
    p = params.field.p
    lu = sk_uv.length - sk_v.length
    if lu < 0:
        raise UsageError("suffix longer than the whole")
    binom = params.binom()
    sh = _shift_terms(sk_v.phi, lu, binom, p, +1)
    sh2 = _shift_terms(sk_v.phi2, lu, binom, p, +1)
    phi = tuple((a - b) % p for a, b in zip(sk_uv.phi, sh))
    phi2 = tuple((a - b) % p for a, b in zip(sk_uv.phi2, sh2))
    psi = (sk_uv.psi - pow(params.r, lu, p) * sk_v.psi) % p
    return SketchK(phi, phi2, psi, lu)


def split_right(sk_uv: SketchK, sk_u: SketchK, params: SketchParams) -> SketchK:
    """Sketch of V given sketches of UV and of the prefix U."""
    p = params.field.p
    lu = sk_u.length
    lv = sk_uv.length - lu
    if lv < 0:
        raise UsageError("prefix longer than the whole")
    binom = params.binom()
    diff = [(a - b) % p for a, b in zip(sk_uv.phi, sk_u.phi)]
    diff2 = [(a - b) % p for a, b in zip(sk_uv.phi2, sk_u.phi2)]
    phi = tuple(_shift_terms(diff, lu, binom, p, -1))
    phi2 = tuple(_shift_terms(diff2, lu, binom, p, -1))
    psi = (sk_uv.psi - sk_u.psi) * fp_inv(pow(params.r, lu, p), p) % p
    return SketchK(phi, phi2, psi, lv)


def _geom_series_coeffs(lu, m, t, params):
    """Ordinary coefficients of G(X) = sum_{i<m} e^(i*lu*X) truncated to t
    terms, via ((e^(m*lu*X)-1)/X) * inv((e^(lu*X)-1)/X)."""
    p = params.field.p
    fact, inv_fact = params.factorials()
    mlu = (m % p) * (lu % p) % p
    num = []
    den = []
    powm = mlu
    powl = lu % p
    for j in range(t):
        num.append(powm * inv_fact[j + 1] % p)
        den.append(powl * inv_fact[j + 1] % p)
        powm = powm * mlu % p
        powl = powl * (lu % p) % p
    inv_den = poly_inv_series(den, t, params.field)
    g = poly_mul(num, inv_den, params.field)[:t]
    return g + [0] * (t - len(g))


def _egf_mul(phi, g, params):
    """Product of two EGF coefficient vectors, truncated to len(phi)."""
    p = params.field.p
    fact, inv_fact = params.factorials()
    t = len(phi)
    a = [phi[j] * inv_fact[j] % p for j in range(t)]
    prod = poly_mul(a, g, params.field)[:t]
    prod = prod + [0] * (t - len(prod))
    return [prod[j] * fact[j] % p for j in range(t)]


def power(sk_u: SketchK, m: int, params: SketchParams) -> SketchK:
    """Sketch of U^m from the sketch of U."""
    p = params.field.p
    if m < 0:
        raise UsageError("negative power")
    lu = sk_u.length
    if m * lu > params.field.max_n:
        raise SizeError("power exceeds max_n")
    if m == 0 or lu == 0:
        return empty(params)
    if m == 1:
        return sk_u
    g_phi = _geom_series_coeffs(lu, m, len(sk_u.phi), params)
    phi = tuple(_egf_mul(list(sk_u.phi), g_phi, params))
    phi2 = tuple(_egf_mul(list(sk_u.phi2), g_phi[: len(sk_u.phi2)], params))
    q = pow(params.r, lu, p)
    if q == 1:
        geom = m % p
    else:
        geom = (pow(q, m, p) - 1) * fp_inv(q - 1, p) % p
    return SketchK(phi, phi2, sk_u.psi * geom % p, m * lu)


def root(sk_um: SketchK, m: int, params: SketchParams) -> SketchK:
    """Sketch of U from the sketch of U^m."""
    p = params.field.p
    if m <= 0:
        raise UsageError("root order must be positive")
    if sk_um.length % m:
        raise UsageError("length not divisible by the root order")
    lu = sk_um.length // m
    if m == 1:
        return sk_um
    if lu == 0:
        return empty(params)
    t = len(sk_um.phi)
    g_phi = _geom_series_coeffs(lu, m, t, params)
    inv_g = poly_inv_series(g_phi, t, params.field)
    phi = tuple(_egf_mul(list(sk_um.phi), inv_g, params))
    phi2 = tuple(_egf_mul(list(sk_um.phi2), inv_g[: len(sk_um.phi2)], params))
    q = pow(params.r, lu, p)
    if q == 1:
        geom = m % p
    else:
        geom = (pow(q, m, p) - 1) * fp_inv(q - 1, p) % p
    if geom == 0:
        raise DomainError("degenerate evaluation point for this length")
    return SketchK(phi, phi2, sk_um.psi * fp_inv(geom, p) % p, lu)


class RollingSketcher:
    """Sketch of an evolving string under appends and substitutions.

    Keeps the sketch of a past version plus a buffer of at most k pending
    substitutions; when the buffer fills, the rebuild (one transposed
    Vandermonde evaluation) either runs immediately (eager mode) or is
    spread over the subsequent updates as a background task.  Appending a
    symbol extends the length and, by the zero-padding identity, is a
    substitution at the new last position.
    """

    __slots__ = ("params", "_phi", "_phi2", "_psi", "length", "_pend", "_rpow",
                 "_cap", "eager", "_bg")

    def __init__(self, params: SketchParams, base: SketchK | None = None, eager=False):
        self.params = params
        base = base or empty(params)
        self._phi = list(base.phi)
        self._phi2 = list(base.phi2)
        self._psi = base.psi
        self.length = base.length
        self._pend = {}
        self._rpow = pow(params.r, base.length, params.field.p)
        self._cap = max(1, params.k)
        self.eager = eager
        self._bg = None

    def append(self, a):
        p = self.params.field.p
        i = self.length
        if i >= self.params.field.max_n:
            raise SizeError("string longer than max_n")
        self.length = i + 1
        a %= p
        if a:
            self._psi = (self._psi + a * self._rpow) % p
            self._queue(i, 0, a)
        self._rpow = self._rpow * self.params.r % p
        self._advance()

    def substitute(self, i, old, new):
        p = self.params.field.p
        if not (0 <= i < self.length):
            raise UsageError("substitution index out of range")
        old %= p
        new %= p
        if old == new:
            self._advance()
            return
        self._psi = (self._psi + (new - old) * pow(self.params.r, i, p)) % p
        self._queue(i, old, new)
        self._advance()

    def _queue(self, i, old, new):
        got = self._pend.get(i)
        if got is not None:
            first_old = got[0]
            if first_old == new:
                del self._pend[i]
            else:
                self._pend[i] = (first_old, new)
        else:
            self._pend[i] = (old, new)
        if len(self._pend) >= self._cap:
            if self.eager:
                self._flush()
            else:
                if self._bg is not None:
                    self._drain()
                self._bg = self._rebuild_steps(self._pend)
                self._pend = {}

    def _advance(self):
        if self._bg is None:
            return
        steps = (3 * self.params.k + 6) // self._cap + 1
        try:
            for _ in range(steps):
                next(self._bg)
        except StopIteration:
            self._bg = None

    def _drain(self):
        if self._bg is not None:
            for _ in self._bg:
                pass
            self._bg = None

    def _rebuild_steps(self, pend):
        p = self.params.field.p
        k = self.params.k
        positions = list(pend.keys())
        dphi = [(new - old) % p for (old, new) in pend.values()]
        dphi2 = [(new * new - old * old) % p for (old, new) in pend.values()]
        cur = list(dphi)
        cur2 = list(dphi2)
        for j in range(2 * k + 1):
            self._phi[j] = (self._phi[j] + sum(cur)) % p
            cur = [c * x % p for c, x in zip(cur, positions)]
            if j <= k:
                self._phi2[j] = (self._phi2[j] + sum(cur2)) % p
                cur2 = [c * x % p for c, x in zip(cur2, positions)]
            yield

    def _flush(self):
        self._drain()
        if self._pend:
            pend, self._pend = self._pend, {}
            for _ in self._rebuild_steps(pend):
                pass

    def snapshot(self) -> SketchK:
        self._flush()
        return SketchK(tuple(self._phi), tuple(self._phi2), self._psi, self.length)

    def footprint_words(self):
        return len(self._phi) + len(self._phi2) + 3 * len(self._pend) + 4

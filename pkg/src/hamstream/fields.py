"""Prime-field scalar and polynomial arithmetic.

Default modulus p = 2^64 - 2^32 + 1 (prime, p - 1 = 2^32 * (2^32 - 1)),
with 7 as a generator of the multiplicative group.  The large 2-adic
subgroup gives radix-2 number-theoretic transforms up to size 2^32, and
p > n^2 for every supported string length n <= 2^32.

Polynomials are python lists of residues in [0, p); index i holds the
coefficient of X^i and normalized polynomials carry no trailing zeros
(the zero polynomial is the empty list).
"""

from __future__ import annotations

import numpy as np

from . import glvec
from .base import DomainError, SizeError, UsageError

GOLDILOCKS = glvec.GOLDILOCKS
DEFAULT_GENERATOR = 7

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def fp_inv(a: int, p: int = GOLDILOCKS) -> int:
    """Multiplicative inverse by Fermat: a^(p-2) mod p."""
    a %= p
    if a == 0:
        raise DomainError("inverse of zero")
    return pow(a, p - 2, p)


class FieldParams:
    """Working field: modulus, transform generator, supported string length.

    The generator only needs correct 2-power orders for the transform
    roots; a full primitive root (the default 7 for the default prime)
    always qualifies.
    """

    __slots__ = ("p", "generator", "max_n", "two_adicity", "max_transform", "_omegas")

    def __init__(self, p: int = GOLDILOCKS, generator: int = DEFAULT_GENERATOR,
                 max_n: int = 1 << 32):
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
        if p <= max_n:
            raise DomainError("modulus must exceed max_n")
        t = 0
        m = p - 1
        while m % 2 == 0:
            m //= 2
            t += 1
        self.p = p
        self.generator = generator % p
        self.max_n = max_n
        self.two_adicity = t
        self.max_transform = 1 << t
        if self.max_transform < 4:
            raise DomainError("p - 1 needs 2-adicity >= 2 for radix-2 transforms")
        self._omegas = {}
        self.omega(4)  # validates the generator's 2-power order early

    @property
    def is_goldilocks(self) -> bool:
        return self.p == GOLDILOCKS

    def omega(self, size: int) -> int:
        """Root of unity of multiplicative order exactly `size` (a power of 2)."""
        w = self._omegas.get(size)
        if w is None:
            if size & (size - 1) or size > self.max_transform:
                raise SizeError(f"no order-{size} transform root available")
            w = pow(self.generator, (self.p - 1) // size, self.p)
            if pow(w, size // 2, self.p) == 1:
                raise DomainError("generator does not span the 2-adic subgroup")
            self._omegas[size] = w
        return w

    def __repr__(self):
        return f"FieldParams(p={self.p:#x}, generator={self.generator}, max_n={self.max_n})"


_DEFAULT = None


def default_field(max_n: int = 1 << 32) -> FieldParams:
    global _DEFAULT
    if _DEFAULT is None or _DEFAULT.max_n != max_n:
        _DEFAULT = FieldParams(max_n=max_n)
    return _DEFAULT


# ---------------- list-based polynomial helpers ----------------

def poly_norm(a: list[int]) -> list[int]:
    n = len(a)
    while n > 0 and a[n - 1] == 0:
        n -= 1
    return a[:n]


def poly_deg(a: list[int]) -> int:
    return len(a) - 1


def poly_add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return poly_norm(out)


def poly_sub(a, b, p):
    out = list(a) + [0] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return poly_norm(out)


def poly_scale(a, c, p):
    c %= p
    return poly_norm([x * c % p for x in a])


def poly_eval(a, x, p):
    y = 0
    for c in reversed(a):
        y = (y * x + c) % p
    return y


def _schoolbook(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _kron_mul(a, b, p):
    """Product via packing into machine big-ints: coefficients go into
    fixed-width byte blocks wide enough that column sums never collide, so
    one integer multiply performs the whole convolution."""
    blk = 2 * p.bit_length() + (min(len(a), len(b))).bit_length() + 1
    nb = (blk + 7) // 8
    xa = int.from_bytes(b"".join(v.to_bytes(nb, "little") for v in a), "little")
    xb = int.from_bytes(b"".join(v.to_bytes(nb, "little") for v in b), "little")
    nout = len(a) + len(b) - 1
    raw = (xa * xb).to_bytes(nb * (nout + 1), "little")
    fb = int.from_bytes
    return [fb(raw[i * nb : i * nb + nb], "little") % p for i in range(nout)]


def _ntt_list(a, root, p):
    n = len(a)
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            a[i], a[j] = a[j], a[i]
    length = 2
    while length <= n:
        w = pow(root, n // length, p)
        half = length >> 1
        for start in range(0, n, length):
            cur = 1
            for i in range(start, start + half):
                u = a[i]
                v = a[i + half] * cur % p
                a[i] = (u + v) % p
                a[i + half] = (u - v) % p
                cur = cur * w % p
        length <<= 1
    return a


def poly_mul(a: list[int], b: list[int], field: FieldParams | None = None) -> list[int]:
    """Product in F_p[X] via a radix-2 number-theoretic transform (small
    inputs fall back to schoolbook)."""
    field = field or default_field()
    a = poly_norm(a)
    b = poly_norm(b)
    if not a or not b:
        return []
    nout = len(a) + len(b) - 1
    if nout > field.max_transform:
        raise SizeError("product degree exceeds transform capacity")
    p = field.p
    if nout <= 8:
        return poly_norm(_schoolbook(a, b, p))
    if not field.is_goldilocks:
        if nout <= 512:
            return poly_norm(_kron_mul(a, b, p))
        size = 1 << (nout - 1).bit_length()
        root = field.omega(size)
        fa = _ntt_list(list(a) + [0] * (size - len(a)), root, p)
        fb = _ntt_list(list(b) + [0] * (size - len(b)), root, p)
        fa = [x * y % p for x, y in zip(fa, fb)]
        fa = _ntt_list(fa, fp_inv(root, p), p)
        n_inv = fp_inv(size, p)
        return poly_norm([x * n_inv % p for x in fa[:nout]])
    if nout <= 400:
        return poly_norm(_kron_mul(a, b, p))
    size = 1 << (nout - 1).bit_length()
    root = field.omega(size)
    fa = np.zeros(size, dtype=np.uint64)
    fb = np.zeros(size, dtype=np.uint64)
    fa[: len(a)] = a
    fb[: len(b)] = b
    fa = glvec.ntt(fa, root)
    fb = glvec.ntt(fb, root)
    out = glvec.intt(glvec.mulmod(fa, fb), root)
    return poly_norm([int(x) for x in out[:nout]])


def poly_divmod(a, b, p):
    b = poly_norm(b)
    if not b:
        raise DomainError("division by zero polynomial")
    a = list(poly_norm(a))
    db, da = len(b) - 1, len(a) - 1
    if da < db:
        return [], a
    inv_lc = 1 if b[-1] == 1 else fp_inv(b[-1], p)
    q = [0] * (da - db + 1)
    for i in range(da - db, -1, -1):
        c = a[i + db] * inv_lc % p
        if c:
            q[i] = c
            for j, bj in enumerate(b):
                a[i + j] = (a[i + j] - c * bj) % p
    return poly_norm(q), poly_norm(a[:db])


def poly_rem(a, b, p):
    return poly_divmod(a, b, p)[1]


def poly_gcd(a, b, p):
    """Monic gcd via the Euclidean algorithm."""
    a, b = poly_norm(a), poly_norm(b)
    while b:
        a, b = b, poly_rem(a, b, p)
    if a:
        a = poly_scale(a, fp_inv(a[-1], p), p)
    return a


def poly_inv_series(a: list[int], t: int, field: FieldParams | None = None) -> list[int]:
    """First t coefficients of 1/A(X), by Newton iteration
    B <- B (2 - A B) doubling the precision each round.  Needs A[0] != 0."""
    field = field or default_field()
    p = field.p
    a = list(a)
    if not a or a[0] % p == 0:
        raise DomainError("series inverse needs a unit constant term")
    if t <= 0:
        raise UsageError("precision must be positive")
    b = [fp_inv(a[0], p)]
    prec = 1
    while prec < t:
        prec = min(2 * prec, t)
        ab = poly_mul(a[:prec], b, field)[:prec]
        two_minus = poly_sub([2], ab, p)
        b = poly_mul(b, two_minus, field)[:prec]
    out = b[:t] + [0] * (t - len(b))
    return out


# ---------------- fixed-modulus polynomial contexts ----------------

class PolyModCtx:
    """Multiply-and-reduce modulo a fixed polynomial: Kronecker-packed
    products plus Barrett division against a precomputed reciprocal of the
    reversed modulus."""

    __slots__ = ("mod", "m", "rev_inv", "p", "field")

    def __init__(self, mod: list[int], field: FieldParams):
        mod = poly_norm(mod)
        if len(mod) < 2:
            raise DomainError("modulus must have positive degree")
        p = field.p
        inv_lc = fp_inv(mod[-1], p)
        self.mod = [c * inv_lc % p for c in mod]
        self.m = len(mod) - 1
        self.rev_inv = poly_inv_series(self.mod[::-1], self.m, field)
        self.p = p
        self.field = field

    def reduce(self, f: list[int]) -> list[int]:
        f = poly_norm(f)
        n = len(f) - 1
        m = self.m
        if n < m:
            return f
        if n > 2 * m - 2:
            return poly_rem(f, self.mod, self.p)
        l = n - m + 1
        p = self.p
        qrev = _kron_mul(f[::-1][:l], self.rev_inv[:l], p)[:l]
        q = qrev[::-1]
        qb = _kron_mul(q, self.mod, p)
        return poly_norm([(x - y) % p for x, y in zip(f[:m], qb[:m])])

    def mulmod(self, a: list[int], b: list[int]) -> list[int]:
        if not a or not b:
            return []
        if len(a) + len(b) <= 10:
            return self.reduce(_schoolbook(a, b, self.p))
        return self.reduce(_kron_mul(a, b, self.p))

    def powmod(self, base: list[int], e: int) -> list[int]:
        acc = [1]
        cur = self.reduce(base)
        while e:
            if e & 1:
                acc = self.mulmod(acc, cur)
            e >>= 1
            if e:
                cur = self.mulmod(cur, cur)
        return acc


def poly_powmod(base, e, mod, field: FieldParams | None = None):
    """base^e mod `mod` in F_p[X]."""
    field = field or default_field()
    p = field.p
    mod = poly_norm(mod)
    if len(mod) >= 3:
        return PolyModCtx(mod, field).powmod(base, e)
    acc = [1]
    cur = poly_rem(base, mod, p)
    while e:
        if e & 1:
            acc = poly_rem(_schoolbook(acc, cur, p), mod, p) if acc and cur else []
        e >>= 1
        if e:
            cur = poly_rem(_schoolbook(cur, cur, p), mod, p) if cur else []
    return acc

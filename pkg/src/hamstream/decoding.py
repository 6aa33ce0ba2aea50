"""Algebraic subroutines for sketch decoding over F_p.

Three pieces: the key-equation solver producing the error locator
polynomial from syndromes, randomized root finding by equal-degree
splitting, and transposed Vandermonde multiply / solve for the error
values.
"""

from __future__ import annotations

import random

import numpy as np

from . import glvec
from .base import DomainError, RootFindingFailure
from .fields import (
    FieldParams,
    PolyModCtx,
    default_field,
    fp_inv,
    poly_deg,
    poly_divmod,
    poly_gcd,
    poly_mul,
    poly_norm,
    poly_rem,
)


def key_equation(syndromes: list[int], k: int, field: FieldParams | None = None) -> list[int]:
    """Error locator L(z) = prod(1 - x_i z) from syndromes s_j = sum r_i x_i^j.

    Berlekamp-Massey: the minimal linear recurrence of the sequence,
    normalized with L(0) = 1 and deg L <= k.  Exact whenever the sequence
    really has the stated form with <= k distinct nonzero x_i and at least
    2k terms are supplied; garbage in, garbage out otherwise (callers
    verify downstream).  A zero x_i cannot appear in the product form, so
    position-zero terms must be stripped by the caller beforehand.
    """
    field = field or default_field()
    p = field.p
    s = [v % p for v in syndromes]
    c = [1]          # current connection polynomial
    b = [1]          # previous connection polynomial
    l = 0            # current LFSR length
    m = 1            # steps since last length change
    bb = 1           # discrepancy at last length change
    for i, si in enumerate(s):
        # discrepancy of the next term under the current recurrence
        d = si
        for j in range(1, l + 1):
            if j < len(c):
                d = (d + c[j] * s[i - j]) % p
        if d == 0:
            m += 1
        elif 2 * l <= i:
            t = list(c)
            coef = d * fp_inv(bb, p) % p
            c = c + [0] * (len(b) + m - len(c))
            for j, bj in enumerate(b):
                c[j + m] = (c[j + m] - coef * bj) % p
            l = i + 1 - l
            b = t
            bb = d
            m = 1
        else:
            coef = d * fp_inv(bb, p) % p
            c = c + [0] * max(0, len(b) + m - len(c))
            for j, bj in enumerate(b):
                c[j + m] = (c[j + m] - coef * bj) % p
            m += 1
    c = poly_norm(c)
    if len(c) > k + 1:
        c = c[: k + 1]  # out-of-contract input; truncated locator fails verification
    return c if c else [1]


def find_distinct_roots(a: list[int], field: FieldParams | None = None,
                        rng: random.Random | None = None,
                        position_bound: int | None = None) -> list[int]:
    """All roots of a polynomial known to split into distinct linear factors.

    With position_bound given (the caller promises every root is the inverse
    of some integer in [1, position_bound)), the reversed polynomial is
    evaluated over that range directly -- deterministic and fast for the
    sketch-decode setting where roots are inverse string positions.

    Otherwise, randomized equal-degree splitting: per round draw r and take
    gcds of each pending factor against (X+r)^((p-1)/2^t) - 1 for the whole
    tower of 2-power subgroup levels (one exponentiation per round feeds all
    levels).  Round zero uses r = 0, whose top level also certifies
    X^p = X (mod A); when that fails, A does not split into distinct linear
    factors and the failure is reported immediately.  The level budget is
    64*log2(p) before giving up.
    """
    field = field or default_field()
    rng = rng or random.Random(0)
    p = field.p
    a = poly_norm(a)
    if not a:
        raise DomainError("zero polynomial")
    if len(a) == 1:
        return []
    inv_lc = fp_inv(a[-1], p)
    a = [c * inv_lc % p for c in a]
    if len(a) == 2:
        return [(p - a[0]) % p]
    if position_bound is not None:
        return _roots_by_scan(a, field, position_bound)

    roots: list[int] = []
    pending = []
    _push_factor(a, roots, pending, p)
    budget = 64 * p.bit_length()
    two_adic = field.two_adicity
    odd = (p - 1) >> two_adic
    first = True
    while pending:
        if budget <= 0:
            raise RootFindingFailure("split budget exhausted")
        r = 0 if first else rng.randrange(p)
        prod = pending[0]
        for f in pending[1:]:
            prod = poly_mul(prod, f, field)
        ctx = PolyModCtx(prod, field)
        low = _pow_odd_part(ctx, [r % p, 1], odd)
        levels = [low]
        for _ in range(two_adic - 1):
            levels.append(ctx.mulmod(levels[-1], levels[-1]))
        if first:
            top_sq = ctx.mulmod(levels[-1], levels[-1])
            xp = ctx.mulmod(top_sq, [0, 1])
            if poly_norm([(x - y) % p for x, y in
                          zip(xp + [0, 0], ctx.reduce([0, 1]) + [0, 0])]):
                raise RootFindingFailure("not a product of distinct linear factors")
            first = False
        # Per factor, walk the level tower from the finest character down.
        # A trivial gcd proves no root satisfies the stricter divisibility
        # either, and the complement of a proper split cannot split deeper
        # in this round, so each factor follows a single short path.
        nxt = []
        work = list(pending)
        while work:
            f = work.pop()
            cur = f
            for t in range(len(levels) - 1, -1, -1):
                budget -= 1
                g = poly_gcd(cur, _minus_one(poly_rem(levels[t], cur, p), p), p)
                dg = poly_deg(g)
                if dg == 0:
                    break
                if dg == poly_deg(cur):
                    continue
                q, _rem = poly_divmod(cur, g, p)
                _push_factor(q, roots, nxt, p)
                if dg == 1:
                    _push_factor(g, roots, nxt, p)
                    cur = None
                    break
                cur = g
            if cur is not None and poly_deg(cur) >= 1:
                _push_factor(cur, roots, nxt, p)
        pending = nxt
    return sorted(roots)


def _push_factor(f, roots, pending, p):
    d = poly_deg(f)
    if d == 0:
        return
    if d == 1:
        roots.append((p - f[0]) * fp_inv(f[1], p) % p)
    else:
        pending.append(f)


def _minus_one(f, p):
    if not f:
        return [p - 1]
    out = list(f)
    out[0] = (out[0] - 1) % p
    return poly_norm(out)


def _pow_odd_part(ctx, base, odd):
    """base^odd for the odd cofactor of p-1; for the default prime the
    cofactor is 2^32 - 1, handled by a short 2^(2t)-1 ladder."""
    if odd == (1 << 32) - 1:
        cur = ctx.reduce(base)
        e = 1
        while e < 32:
            sq = cur
            for _ in range(e):
                sq = ctx.mulmod(sq, sq)
            cur = ctx.mulmod(sq, cur)
            e *= 2
        return cur
    return ctx.powmod(base, odd)


def _roots_by_scan(a, field, bound):
    # roots of A are inverses of the x with REV(x) = 0, where REV(X) =
    # X^deg * A(1/X); REV's Horner sequence (most significant first) is a
    # itself, since [X^j]REV = a[deg-j]
    p = field.p
    deg = len(a) - 1
    hits = []
    if field.is_goldilocks and bound > 32:
        xs = np.arange(1, bound, dtype=np.uint64) % np.uint64(p)
        acc = np.full(xs.shape, a[0] % p, dtype=np.uint64)
        for c in a[1:]:
            acc = glvec.addmod(glvec.mulmod(acc, xs), np.uint64(c % p))
        hits = [int(x) for x in np.nonzero(acc == 0)[0] + 1]
    else:
        for x in range(1, bound):
            y = 0
            for c in a:
                y = (y * x + c) % p
            if y == 0:
                hits.append(x)
    if len(hits) != deg:
        raise RootFindingFailure("roots are not all inverse positions in range")
    return sorted(fp_inv(x, p) for x in hits)


def vand_mul(alphas: list[int], betas: list[int], m: int,
             field: FieldParams | None = None) -> list[int]:
    """s_j = sum_i alpha_i * beta_i^j for 0 <= j < m (transposed Vandermonde
    times a vector).  Quadratic; sizes here are O(k)."""
    field = field or default_field()
    p = field.p
    if len(set(b % p for b in betas)) != len(betas):
        raise DomainError("betas must be pairwise distinct")
    out = []
    cur = [a % p for a in alphas]
    bs = [b % p for b in betas]
    for _ in range(m):
        out.append(sum(cur) % p)
        cur = [c * b % p for c, b in zip(cur, bs)]
    return out


def vand_solve(s: list[int], betas: list[int], field: FieldParams | None = None) -> list[int]:
    """Unique alphas with s_j = sum_i alpha_i * beta_i^j, 0 <= j < len(betas).

    Classic structured solve: with L(z) = prod(1 - b_i z), the partial
    fraction decomposition of S(z) = sum_j s_j z^j against 1/L gives
    alpha_i = N(1/b_i) / prod_{j != i}(1 - b_j / b_i) ... implemented here
    directly as Lagrange-style elimination in O(n^2).
    """
    field = field or default_field()
    p = field.p
    n = len(betas)
    if len(s) != n:
        raise DomainError("need exactly len(betas) syndrome values")
    bs = [b % p for b in betas]
    if len(set(bs)) != n:
        raise DomainError("betas must be pairwise distinct")
    if n == 0:
        return []
    # Newton-girard style: solve via the dual basis. For each i build the
    # polynomial Q_i(X) = prod_{j != i} (X - b_j); then
    # sum_j s_j * [X^j] Q_i = alpha_i * Q_i(b_i).
    full = [1]
    for b in bs:
        full = _mul_linear(full, b, p)
    out = []
    for i, b in enumerate(bs):
        qi = _div_linear(full, b, p)
        num = 0
        for j, c in enumerate(qi):
            num = (num + s[j] * c) % p
        den = poly_eval_at(qi, b, p)
        out.append(num * fp_inv(den, p) % p)
    return out


def poly_eval_at(a, x, p):
    y = 0
    for c in reversed(a):
        y = (y * x + c) % p
    return y


def _mul_linear(a, root, p):
    # a(X) * (X - root)
    out = [0] * (len(a) + 1)
    for i, c in enumerate(a):
        out[i + 1] = (out[i + 1] + c) % p
        out[i] = (out[i] - c * root) % p
    return out


def _div_linear(a, root, p):
    # exact division a(X) / (X - root)
    n = len(a) - 1
    out = [0] * n
    carry = 0
    for i in range(n - 1, -1, -1):
        carry = (a[i + 1] + carry * root) % p
        out[i] = carry
    return out

import random

import numpy as np
import pytest

from hamstream import glvec
from hamstream.base import DomainError, SizeError
from hamstream.fields import (
    GOLDILOCKS,
    FieldParams,
    default_field,
    fp_inv,
    is_prime,
    poly_divmod,
    poly_gcd,
    poly_inv_series,
    poly_mul,
    poly_norm,
    poly_powmod,
    poly_rem,
    _schoolbook,
)

P = GOLDILOCKS


def test_default_prime_is_prime():
    assert is_prime(P)
    assert not is_prime(P - 1)
    assert is_prime(2) and is_prime(3) and not is_prime(1)


def test_field_params_validation():
    f = default_field()
    assert f.two_adicity == 32
    assert f.max_transform == 1 << 32
    with pytest.raises(DomainError):
        FieldParams(p=2**61 - 2)  # composite
    # 2^61 - 1 is prime but p - 1 = 2 * (2^60 - 1): 2-adicity 1
    with pytest.raises(DomainError):
        FieldParams(p=2**61 - 1, generator=3, max_n=1 << 20)


def test_omega_orders():
    f = default_field()
    for size in (4, 8, 1024):
        w = f.omega(size)
        assert pow(w, size, P) == 1
        assert pow(w, size // 2, P) != 1


def test_fp_inv():
    assert fp_inv(1, P) == 1
    assert fp_inv(P - 1, P) == P - 1
    rng = random.Random(1)
    for _ in range(50):
        a = rng.randrange(1, P)
        assert a * fp_inv(a, P) % P == 1
    with pytest.raises(DomainError):
        fp_inv(0, P)


def test_glvec_mulmod_matches_ints():
    rng = random.Random(2)
    a = [rng.randrange(P) for _ in range(200)]
    b = [rng.randrange(P) for _ in range(200)]
    got = glvec.mulmod(glvec.to_vec(a), glvec.to_vec(b))
    for x, y, g in zip(a, b, got):
        assert x * y % P == int(g)
    s = glvec.addmod(glvec.to_vec(a), glvec.to_vec(b))
    d = glvec.submod(glvec.to_vec(a), glvec.to_vec(b))
    for x, y, gs, gd in zip(a, b, s, d):
        assert (x + y) % P == int(gs)
        assert (x - y) % P == int(gd)
    assert glvec.summod(glvec.to_vec(a)) == sum(a) % P


def test_glvec_ntt_roundtrip():
    f = default_field()
    rng = random.Random(3)
    for size in (8, 64, 256):
        root = f.omega(size)
        a = [rng.randrange(P) for _ in range(size)]
        tr = glvec.ntt(glvec.to_vec(a), root)
        back = glvec.intt(tr, root)
        assert [int(x) for x in back] == a


def test_poly_mul_trivial():
    f = default_field()
    assert poly_mul([1, 1], [1, P - 1], f) == [1, 0, P - 1]
    assert poly_mul([5], [7], f) == [35]
    assert poly_mul([], [1, 2], f) == []


def test_poly_mul_matches_schoolbook():
    f = default_field()
    rng = random.Random(4)
    for _ in range(1000):
        da = rng.randrange(0, 257)
        db = rng.randrange(0, 257)
        a = poly_norm([rng.randrange(P) for _ in range(da + 1)])
        b = poly_norm([rng.randrange(P) for _ in range(db + 1)])
        want = poly_norm(_schoolbook(a, b, P)) if a and b else []
        assert poly_mul(a, b, f) == want


def test_poly_mul_properties():
    f = default_field()
    rng = random.Random(5)
    from hamstream.fields import poly_add
    for _ in range(50):
        a = [rng.randrange(P) for _ in range(rng.randrange(1, 40))]
        b = [rng.randrange(P) for _ in range(rng.randrange(1, 40))]
        c = [rng.randrange(P) for _ in range(rng.randrange(1, 40))]
        assert poly_mul(a, b, f) == poly_mul(b, a, f)
        assert poly_mul(poly_mul(a, b, f), c, f) == poly_mul(a, poly_mul(b, c, f), f)
        lhs = poly_mul(a, poly_add(b, c, P), f)
        rhs = poly_add(poly_mul(a, b, f), poly_mul(a, c, f), P)
        assert lhs == rhs


def test_poly_mul_capacity():
    small = FieldParams(p=97, generator=5, max_n=50)
    # 97 - 1 = 2^5 * 3: capacity 32
    with pytest.raises(SizeError):
        poly_mul([1] * 20, [1] * 20, small)


def test_poly_mul_generic_prime_ntt():
    # p = 2^13 * 17 + 1 = 139265? not prime; use 786433 = 3 * 2^18 + 1 (prime)
    f = FieldParams(p=786433, generator=10, max_n=1000)
    rng = random.Random(6)
    a = [rng.randrange(786433) for _ in range(600)]
    b = [rng.randrange(786433) for _ in range(600)]
    assert poly_mul(a, b, f) == poly_norm(_schoolbook(a, b, 786433))


def test_poly_divmod_gcd():
    rng = random.Random(7)
    for _ in range(100):
        a = poly_norm([rng.randrange(P) for _ in range(rng.randrange(1, 20))])
        b = poly_norm([rng.randrange(P) for _ in range(rng.randrange(1, 10))])
        if not b:
            continue
        q, r = poly_divmod(a, b, P)
        recon = poly_norm([
            (x + y) % P
            for x, y in zip(
                _schoolbook(q, b, P) + [0] * 40 if q and b else [0] * 40,
                list(r) + [0] * 40,
            )
        ])
        assert recon == a
        assert len(r) < len(b)
    g = poly_gcd([P - 2, 1], poly_mul([P - 2, 1], [P - 3, 1]), P)
    assert g == [P - 2, 1]


def test_poly_inv_series():
    f = default_field()
    assert poly_inv_series([1], 5, f) == [1, 0, 0, 0, 0]
    assert poly_inv_series([1, 1], 3, f) == [1, P - 1, 1]
    rng = random.Random(8)
    for _ in range(30):
        a = [rng.randrange(1, P)] + [rng.randrange(P) for _ in range(rng.randrange(0, 70))]
        t = 64
        b = poly_inv_series(a, t, f)
        prod = poly_mul(a, b, f)[:t]
        assert poly_norm(prod) == [1]
    with pytest.raises(DomainError):
        poly_inv_series([0, 1], 4, f)


def test_poly_powmod_both_paths():
    f = default_field()
    rng = random.Random(9)
    for degm in (3, 12, 40):
        mod = [rng.randrange(P) for _ in range(degm)] + [1]
        base = [rng.randrange(P) for _ in range(degm)]
        e = rng.randrange(1, 1 << 40)
        fast = poly_powmod(base, e, mod, f)
        # reference: repeated square-and-multiply with list arithmetic
        acc, cur, ee = [1], poly_rem(base, mod, P), e
        while ee:
            if ee & 1:
                acc = poly_rem(_schoolbook(acc, cur, P), mod, P) if acc and cur else []
            ee >>= 1
            if ee:
                cur = poly_rem(_schoolbook(cur, cur, P), mod, P) if cur else []
        assert fast == acc

import random

import pytest

from hamstream.base import DomainError
from hamstream.decoding import find_distinct_roots, key_equation, vand_mul, vand_solve
from hamstream.fields import GOLDILOCKS, default_field, poly_mul, poly_norm

P = GOLDILOCKS
F = default_field()


def distinct_draw(rng, n, lo, hi):
    out = set()
    while len(out) < n:
        out.add(rng.randrange(lo, hi))
    return list(out)


def locator_of(xs):
    out = [1]
    for x in xs:
        out = poly_mul(out, [1, (P - x) % P], F)
    return out


def syndromes_of(xs, rs, m):
    return [sum(r * pow(x, j, P) for x, r in zip(xs, rs)) % P for j in range(m)]


def test_key_equation_zero():
    assert key_equation([0] * 7, 3, F) == [1]


def test_key_equation_single():
    rng = random.Random(10)
    for _ in range(20):
        beta = rng.randrange(1, P)
        alpha = rng.randrange(1, P)
        s = [alpha * pow(beta, j, P) % P for j in range(5)]
        assert key_equation(s, 2, F) == [1, (P - beta) % P]


def test_key_equation_three_errors():
    rng = random.Random(11)
    for _ in range(50):
        xs = rng.sample(range(1, 5000), 3)
        rs = [rng.randrange(1, P) for _ in range(3)]
        s = syndromes_of(xs, rs, 7)
        assert key_equation(s, 3, F) == locator_of(xs)


def test_key_equation_random_counts():
    rng = random.Random(12)
    for _ in range(100):
        k = rng.randrange(1, 12)
        kp = rng.randrange(0, k + 1)
        xs = rng.sample(range(1, 100000), kp)
        rs = [rng.randrange(1, P) for _ in range(kp)]
        s = syndromes_of(xs, rs, 2 * k + 1)
        assert key_equation(s, k, F) == locator_of(xs)


def test_find_roots_trivial():
    assert find_distinct_roots([(P - 5) % P, 1], F, random.Random(0)) == [5]
    # (X-1)(X-2) = X^2 - 3X + 2
    assert find_distinct_roots([2, P - 3, 1], F, random.Random(0)) == [1, 2]


def test_find_roots_planted():
    rng = random.Random(13)
    for trial in range(30):
        nroots = rng.randrange(1, 11)
        roots = distinct_draw(rng, nroots, 1, P - 1)
        a = [1]
        for x in roots:
            a = poly_mul(a, [(P - x) % P, 1], F)
        got = find_distinct_roots(a, F, random.Random(trial))
        assert got == sorted(roots)


def test_find_roots_scaled_leading_coeff():
    rng = random.Random(14)
    roots = [3, 7, 11]
    a = [5]
    for x in roots:
        a = poly_mul(a, [(P - x) % P, 1], F)
    assert find_distinct_roots(a, F, rng) == roots


def test_vand_mul_trivial():
    a, b = 123, 456
    assert vand_mul([a], [b], 3, F) == [a, a * b % P, a * b % P * b % P]
    assert vand_mul([1, 1], [1, 2], 2, F) == [2, 3]
    with pytest.raises(DomainError):
        vand_mul([1, 1], [5, 5], 2, F)


def test_vand_mul_matches_naive():
    rng = random.Random(15)
    for _ in range(50):
        n = 16
        betas = distinct_draw(rng, n, 0, P)
        alphas = [rng.randrange(P) for _ in range(n)]
        m = rng.randrange(1, 40)
        want = [sum(a * pow(b, j, P) for a, b in zip(alphas, betas)) % P for j in range(m)]
        assert vand_mul(alphas, betas, m, F) == want


def gauss_solve(matrix, rhs, p):
    n = len(rhs)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] % p)
        a[col], a[piv] = a[piv], a[col]
        inv = pow(a[col][col], p - 2, p)
        a[col] = [v * inv % p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [(v - f * w) % p for v, w in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def test_vand_solve_roundtrip_and_gauss():
    rng = random.Random(16)
    assert vand_solve([42], [9], F) == [42]
    for _ in range(30):
        n = rng.randrange(1, 17)
        betas = distinct_draw(rng, n, 0, P)
        alphas = [rng.randrange(P) for _ in range(n)]
        s = vand_mul(alphas, betas, n, F)
        assert vand_solve(s, betas, F) == alphas
    # independent dense solve on a size-16 instance
    n = 16
    betas = distinct_draw(rng, n, 0, P)
    alphas = [rng.randrange(P) for _ in range(n)]
    s = vand_mul(alphas, betas, n, F)
    mat = [[pow(b, j, P) for b in betas] for j in range(n)]
    assert gauss_solve(mat, s, P) == alphas
    assert vand_solve(s, betas, F) == alphas


def test_vand_roundtrip_large():
    rng = random.Random(17)
    for _ in range(20):
        n = rng.randrange(1, 65)
        betas = distinct_draw(rng, n, 1, P)
        alphas = [rng.randrange(P) for _ in range(n)]
        assert vand_solve(vand_mul(alphas, betas, n, F), betas, F) == alphas


def test_pipeline_recovers_planted_instances():
    rng = random.Random(18)
    for trial in range(1000):
        k = rng.randrange(1, 65)
        kp = rng.randrange(1, k + 1)
        xs = sorted(rng.sample(range(1, 1 << 20), kp))
        rs = [rng.randrange(1, P) for _ in range(kp)]
        s = syndromes_of(xs, rs, 2 * k + 1)
        loc = key_equation(s, k, F)
        roots = find_distinct_roots(loc, F, random.Random(trial ^ 0x5EED))
        got_xs = sorted(pow(z, P - 2, P) for z in roots)
        assert got_xs == xs
        gammas = vand_solve(s[1 : kp + 1], got_xs, F)
        got_rs = {x: g * pow(x, P - 2, P) % P for x, g in zip(got_xs, gammas)}
        assert got_rs == dict(zip(xs, rs))

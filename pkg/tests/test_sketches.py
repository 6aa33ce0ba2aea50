import random

import pytest

from hamstream import sketches
from hamstream.base import TOO_MANY, MismatchInfo, UsageError
from hamstream.fields import GOLDILOCKS, default_field
from hamstream.sketches import RollingSketcher, SketchK, SketchParams

P = GOLDILOCKS


def params_for(k, seed=0):
    return SketchParams(k, default_field(), random.Random(seed))


def test_build_empty_and_singleton():
    pr = params_for(3)
    sk = sketches.build([], pr)
    assert sk.length == 0 and sk.psi == 0
    assert set(sk.phi) == {0} and set(sk.phi2) == {0}
    sk5 = sketches.build([5], pr)
    assert sk5.phi[0] == 5
    assert all(v == 0 for v in sk5.phi[1:])
    assert sk5.phi2[0] == 25
    assert all(v == 0 for v in sk5.phi2[1:])
    assert sk5.psi == 5
    assert sk5.length == 1


def test_build_matches_independent_sums():
    pr = params_for(8, seed=5)
    rng = random.Random(42)
    s = [rng.randrange(256) for _ in range(100)]
    sk = sketches.build(s, pr)
    for j in range(17):
        want = sum(v * pow(i, j, P) if i or j == 0 else 0 for i, v in enumerate(s)) % P
        # 0^0 = 1 convention: i = 0 contributes only at j = 0
        assert sk.phi[j] == want
    for j in range(9):
        want = sum(v * v % P * pow(i, j, P) if i or j == 0 else 0 for i, v in enumerate(s)) % P
        assert sk.phi2[j] == want
    assert sk.psi == sum(v * pow(pr.r, i, P) for i, v in enumerate(s)) % P


def test_build_vectorized_matches_scalar():
    pr = params_for(4, seed=6)
    rng = random.Random(7)
    s = [rng.randrange(1 << 32) for _ in range(600)]
    a = sketches.build(s, pr)
    b = sketches.build(s[:255], pr)
    c = sketches.build(s[255:], pr)
    assert sketches.concat(b, c, pr) == a


def test_decode_equal():
    pr = params_for(4)
    s = [1, 2, 3, 4, 5]
    assert sketches.decode(sketches.build(s, pr), sketches.build(s, pr), pr) == MismatchInfo()


def test_decode_single_difference():
    pr = params_for(2, seed=9)
    s = [7] * 16
    t = list(s)
    t[7] = 9
    s[7] = 3
    mi = sketches.decode(sketches.build(s, pr), sketches.build(t, pr), pr)
    assert mi == MismatchInfo([(7, 3, 9)])


def test_decode_position_zero():
    pr = params_for(3, seed=11)
    s = [5, 1, 2, 3]
    t = [9, 1, 2, 3]
    mi = sketches.decode(sketches.build(s, pr), sketches.build(t, pr), pr)
    assert mi == MismatchInfo([(0, 5, 9)])
    # zero plus more positions
    t2 = [9, 1, 6, 3]
    mi2 = sketches.decode(sketches.build(s, pr), sketches.build(t2, pr), pr)
    assert mi2 == MismatchInfo([(0, 5, 9), (2, 2, 6)])


def test_decode_random_within_k():
    rng = random.Random(12)
    for trial in range(200):
        k = rng.choice([1, 2, 4, 8, 16])
        pr = params_for(k, seed=trial)
        n = rng.randrange(max(2, k), 300)
        s = [rng.randrange(4) for _ in range(n)]
        t = list(s)
        hd = rng.randrange(0, k + 1)
        for i in rng.sample(range(n), hd):
            t[i] = (t[i] + rng.randrange(1, 4)) % 4 if True else t[i]
        want = MismatchInfo.of(s, t)
        got = sketches.decode(sketches.build(s, pr), sketches.build(t, pr), pr)
        assert got == want


def test_decode_k_plus_one_rejected():
    rng = random.Random(13)
    for trial in range(100):
        k = rng.choice([0, 1, 3, 8])
        pr = params_for(k, seed=1000 + trial)
        n = rng.randrange(k + 2, k + 200)
        s = [rng.randrange(256) for _ in range(n)]
        t = list(s)
        for i in rng.sample(range(n), k + 1):
            t[i] = (t[i] + 1 + rng.randrange(255)) % 256
        assert MismatchInfo.of(s, t) and len(MismatchInfo.of(s, t)) == k + 1
        assert sketches.decode(sketches.build(s, pr), sketches.build(t, pr), pr) is TOO_MANY


def test_decode_length_mismatch():
    pr = params_for(1)
    with pytest.raises(UsageError):
        sketches.decode(sketches.build([1], pr), sketches.build([1, 2], pr), pr)


def test_apply_mi():
    rng = random.Random(14)
    pr = params_for(5, seed=21)
    s = [rng.randrange(100) for _ in range(64)]
    sk = sketches.build(s, pr)
    assert sketches.apply_mi(sk, MismatchInfo(), pr) == sk
    for count in (1, 5, 10):  # up to 2k
        t = list(s)
        for i in rng.sample(range(64), count):
            t[i] = (t[i] + rng.randrange(1, 99)) % 100
        mi = MismatchInfo.of(s, t)
        assert sketches.apply_mi(sk, mi, pr) == sketches.build(t, pr)
    with pytest.raises(UsageError):
        sketches.apply_mi(sk, MismatchInfo([(64, 0, 1)]), pr)


def test_concat_split_power_roundtrips():
    rng = random.Random(15)
    for trial in range(60):
        k = rng.choice([0, 1, 2, 6])
        pr = params_for(k, seed=trial + 5000)
        u = [rng.randrange(9) for _ in range(rng.randrange(0, 40))]
        v = [rng.randrange(9) for _ in range(rng.randrange(0, 40))]
        sku, skv = sketches.build(u, pr), sketches.build(v, pr)
        skuv = sketches.concat(sku, skv, pr)
        assert skuv == sketches.build(u + v, pr)
        assert sketches.split_left(skuv, skv, pr) == sku
        assert sketches.split_right(skuv, sku, pr) == skv
        m = rng.randrange(1, 6)
        if u:
            skum = sketches.power(sku, m, pr)
            assert skum == sketches.build(u * m, pr)
            assert sketches.root(skum, m, pr) == sku
    pr = params_for(2, seed=77)
    sk = sketches.build([3, 1, 4], pr)
    assert sketches.concat(sk, sketches.empty(pr), pr) == sk
    assert sketches.power(sk, 1, pr) == sk
    assert sketches.power(sketches.build([int(c) for c in "01"], pr), 3, pr) == \
        sketches.build([0, 1, 0, 1, 0, 1], pr)


def test_concat_associative():
    rng = random.Random(16)
    pr = params_for(3, seed=88)
    a, b, c = ([rng.randrange(5) for _ in range(n)] for n in (7, 11, 13))
    ska, skb, skc = (sketches.build(x, pr) for x in (a, b, c))
    left = sketches.concat(sketches.concat(ska, skb, pr), skc, pr)
    right = sketches.concat(ska, sketches.concat(skb, skc, pr), pr)
    assert left == right


def test_serialization_roundtrip():
    rng = random.Random(17)
    for k in (0, 1, 4, 16):
        pr = params_for(k, seed=k)
        s = [rng.randrange(256) for _ in range(50)]
        sk = sketches.build(s, pr)
        blob = sk.to_bytes()
        assert len(blob) == 8 * (3 * k + 5)  # 3k+3 elements plus 2 header words
        assert SketchK.from_bytes(blob) == sk


def test_rolling_append_matches_build():
    rng = random.Random(18)
    for eager in (False, True):
        pr = params_for(4, seed=31)
        rs = RollingSketcher(pr, eager=eager)
        s = [rng.randrange(300) for _ in range(150)]
        for i, a in enumerate(s):
            rs.append(a)
            if i % 37 == 0:
                assert rs.snapshot() == sketches.build(s[: i + 1], pr)
        assert rs.snapshot() == sketches.build(s, pr)


def test_rolling_interleaved_matches_shadow():
    rng = random.Random(19)
    pr = params_for(3, seed=41)
    rs = RollingSketcher(pr)
    shadow = []
    for step in range(600):
        if shadow and rng.random() < 0.45:
            i = rng.randrange(len(shadow))
            new = rng.randrange(50)
            rs.substitute(i, shadow[i], new)
            shadow[i] = new
        else:
            a = rng.randrange(50)
            rs.append(a)
            shadow.append(a)
        if step % 83 == 0:
            assert rs.snapshot() == sketches.build(shadow, pr)
    assert rs.snapshot() == sketches.build(shadow, pr)


def test_rolling_substitute_same_value_noop():
    pr = params_for(2, seed=51)
    rs = RollingSketcher(pr)
    for a in [4, 5, 6]:
        rs.append(a)
    before = rs.snapshot()
    rs.substitute(1, 5, 5)
    assert rs.snapshot() == before


def test_append_is_substitute_after_zero_extend():
    pr = params_for(2, seed=61)
    a = RollingSketcher(pr)
    b = RollingSketcher(pr)
    for v in [9, 0, 7]:
        a.append(v)
    b.append(9)
    b.append(0)
    b.append(0)
    b.substitute(2, 0, 7)
    assert a.snapshot() == b.snapshot()


def test_rolling_from_base():
    rng = random.Random(20)
    pr = params_for(4, seed=71)
    s = [rng.randrange(10) for _ in range(40)]
    rs = RollingSketcher(pr, base=sketches.build(s, pr))
    s2 = list(s)
    for _ in range(20):
        v = rng.randrange(10)
        rs.append(v)
        s2.append(v)
    assert rs.snapshot() == sketches.build(s2, pr)

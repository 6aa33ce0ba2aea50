import math
import random

import pytest

from hamstream import codec, sketches
from hamstream.base import DecodeError, MismatchInfo, UsageError
from hamstream.codec import (
    ProxyPattern,
    ProxyText,
    build_message,
    chunk_driver,
    decode,
    encode,
    occurrences_offline,
    parse_message,
)
from hamstream.fields import default_field
from hamstream.readonly import ReadonlyMatcher, readonly_kmismatch
from hamstream.sketches import SketchParams

F = default_field()


def brute(pat, txt, k):
    n = len(pat)
    out = []
    for s in range(len(txt) - n + 1):
        ents = [(i, pat[i], txt[s + i]) for i in range(n) if pat[i] != txt[s + i]]
        if len(ents) <= k:
            out.append((s, MismatchInfo(ents, already_sorted=True)))
    return out


def rand_instance(rng, kind="random"):
    k = rng.choice([0, 1, 2, 4, 8])
    sigma = rng.choice([2, 4, 16])
    n = rng.randrange(max(1, k), 80)
    if n == 0:
        n = 1
    m = rng.randrange(0, 220)
    if kind == "periodicish":
        q = rng.randrange(1, 6)
        base = [rng.randrange(sigma) for _ in range(q)]
        pat = [base[i % q] for i in range(n)]
        txt = [base[i % q] if rng.random() < 0.9 else rng.randrange(sigma)
               for i in range(m)]
        for _ in range(rng.randrange(0, k + 1)):
            pat[rng.randrange(n)] = rng.randrange(sigma)
    else:
        pat = [rng.randrange(sigma) for _ in range(n)]
        txt = [rng.randrange(sigma) for _ in range(m)]
        # plant a few mutated copies
        for _ in range(rng.randrange(0, 4)):
            if m >= n:
                s = rng.randrange(m - n + 1)
                txt[s : s + n] = pat
                for _ in range(rng.randrange(0, k + 1)):
                    txt[s + rng.randrange(n)] = rng.randrange(sigma)
    return pat, txt, k, sigma


def test_readonly_exact_match_modes():
    params = SketchParams(0, F, random.Random(1))
    recs = list(readonly_kmismatch([1, 2, 3], [1, 2, 3, 1, 2, 3], 0, params))
    assert [(r.start, len(r.mi)) for r in recs] == [(0, 0), (3, 0)]


def test_readonly_self_match():
    rng = random.Random(2)
    pat = [rng.randrange(4) for _ in range(50)]
    params = SketchParams(3, F, random.Random(3))
    recs = list(readonly_kmismatch(pat, pat, 3, params))
    assert [(r.start, r.mi) for r in recs] == [(0, MismatchInfo())]


def test_readonly_random_vs_brute():
    rng = random.Random(4)
    for trial in range(300):
        kind = "periodicish" if trial % 3 == 0 else "random"
        pat, txt, k, sigma = rand_instance(rng, kind)
        params = SketchParams(k, F, random.Random(trial + 100))
        got = [(r.start, r.mi) for r in
               readonly_kmismatch(pat, txt, k, params)]
        want = brute(pat, txt, k)
        assert got == want, (trial, kind, k, len(pat), len(txt))


def test_readonly_increasing_no_dupes_and_sketches():
    rng = random.Random(5)
    pat = [0, 1] * 10
    txt = ([0, 1] * 40)
    for _ in range(6):
        txt[rng.randrange(len(txt))] = rng.randrange(2)
    params = SketchParams(2, F, random.Random(6))
    starts = []
    for rec in readonly_kmismatch(pat, txt, 2, params, want_sketches=True):
        starts.append(rec.start)
        assert rec.prefix_sketch == sketches.build(txt[: rec.start], params)
    assert starts == sorted(set(starts))


# ---------------- codec ----------------

def test_encode_empty_message():
    pat = [1, 2, 3, 4]
    txt = [5, 5, 5, 5, 5]
    blob = encode(pat, txt, 0)
    assert len(blob) <= 16
    assert decode(blob) == []


def test_encode_self():
    pat = [7, 8, 9]
    blob = encode(pat, pat, 0)
    got = decode(blob)
    assert got == [(0, MismatchInfo())]


def test_codec_roundtrip_random():
    rng = random.Random(7)
    for trial in range(250):
        kind = "periodicish" if trial % 2 else "random"
        pat, txt, k, sigma = rand_instance(rng, kind)
        txt = txt[: max(0, min(len(txt), (5 * len(pat)) // 4))]
        blob = encode(pat, txt, k, sigma)
        want = brute(pat, txt, k)
        got = decode(blob)
        assert got == want, (trial, kind, k, len(pat), len(txt))


def test_codec_deterministic_bytes():
    rng = random.Random(8)
    pat, txt, k, sigma = rand_instance(rng, "periodicish")
    txt = txt[: (5 * len(pat)) // 4]
    assert encode(pat, txt, k, sigma) == encode(pat, txt, k, sigma)


def test_codec_proxy_matches_definition():
    rng = random.Random(9)
    for trial in range(40):
        pat, txt, k, sigma = rand_instance(rng, "periodicish")
        txt = txt[: (5 * len(pat)) // 4]
        msg = build_message(pat, txt, k, sigma)
        if msg.empty:
            continue
        n = msg.n
        d = msg.d
        occs = brute(pat, txt, k)
        tprime = txt[msg.l1 : msg.l2 + n]
        # definitional combined classes
        def cls(res):
            vals = {pat[j] for j in range(res, n, d)} if d else {pat[res]} if res < n else set()
            vals |= {tprime[j] for j in range(res, len(tprime), d)} if d else (
                {tprime[res]} if res < len(tprime) else set())
            return vals
        px = ProxyPattern(msg)
        pt = ProxyText(msg, px)
        for i in range(n):
            res = i % d if d else i
            if len(cls(res)) <= 1:
                assert px[i] == msg.sigma + 1 + res
            else:
                assert px[i] == pat[i]
        for i in range(len(tprime)):
            res = i % d if d else i
            if len(cls(res)) <= 1:
                assert pt[i] == msg.sigma + 1 + res
            else:
                assert pt[i] == tprime[i]


def test_codec_size_bound():
    rng = random.Random(10)
    for (n, k, sigma) in [(32, 1, 2), (256, 4, 4), (1024, 16, 256), (512, 8, 16)]:
        q = rng.randrange(1, max(2, k + 1))
        base = [rng.randrange(sigma) for _ in range(q)]
        pat = [base[i % q] for i in range(n)]
        txt = [base[i % q] for i in range(5 * n // 4)]
        for _ in range(k // 2):
            txt[rng.randrange(len(txt))] = rng.randrange(sigma)
        blob = encode(pat, txt, k, sigma)
        bits = 8 * len(blob)
        bound = 64 * max(1, k) * (math.log2(n / max(1, k)) + math.log2(sigma))
        assert bits <= bound, (n, k, sigma, bits, bound)


def test_chunk_driver():
    rng = random.Random(11)
    for trial in range(60):
        pat, txt, k, sigma = rand_instance(rng)
        txt = txt * rng.randrange(1, 3)
        got = chunk_driver(pat, txt, k, sigma)
        assert got == brute(pat, txt, k), trial
    pat = [1, 2, 3, 4]
    assert chunk_driver(pat, [1, 2], 1) == []
    # occurrence straddling chunk boundaries reported once
    pat2 = [0, 1, 2, 3, 4, 5, 6, 7]
    txt2 = [9] * 30 + pat2 + [9] * 30
    got = chunk_driver(pat2, txt2, 0)
    assert got == [(30, MismatchInfo())]


def test_encode_rejects_long_text():
    with pytest.raises(UsageError):
        encode([1, 2, 3, 4], [0] * 6, 1)


def test_decode_malformed():
    pat = [0, 1, 0, 1]
    blob = encode(pat, pat, 1)
    with pytest.raises(DecodeError):
        decode(b"XXXX" + blob[4:])
    with pytest.raises(DecodeError):
        decode(blob[: len(blob) - 1] if len(blob) > 10 else blob[:5])


def test_encode_with_matcher_flag():
    rng = random.Random(12)
    pat, txt, k, sigma = rand_instance(rng, "periodicish")
    txt = txt[: (5 * len(pat)) // 4]
    params = SketchParams(k, F, random.Random(13))
    a = encode(pat, txt, k, sigma)
    b = encode(pat, txt, k, sigma, params=params, use_matcher=True)
    assert a == b


def test_readonly_inflight_and_reads():
    rng = random.Random(60)
    pat = [rng.randrange(4) for _ in range(64)]
    txt = [rng.randrange(4) for _ in range(600)]
    for s in (50, 200, 450):
        txt[s : s + 64] = pat
    params = SketchParams(3, F, random.Random(61))
    m = ReadonlyMatcher(pat, txt, 3, params)
    got = list(m.run())
    assert m.max_inflight <= 2
    assert [r.start for r in got] == [50, 200, 450]
    # O(1) accessor reads per text symbol beyond the pattern scan
    assert m.reads <= 4 * len(txt) + 4 * len(pat)

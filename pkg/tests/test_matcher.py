import random

import pytest

from hamstream.base import MismatchInfo, UsageError
from hamstream.cli import gen_hard
from hamstream.fields import default_field
from hamstream.matcher import StreamMatcher, process_pattern, process_text
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


def run(pat, txt, k, sigma, seed=0, debug=True):
    params = SketchParams(k, F, random.Random(seed))
    idx = process_pattern(iter(pat), k, params, sigma)
    return idx, [(r.start, r.mi) for r in process_text(idx, iter(txt), params, debug=debug)]


def test_unary_pattern_small_mode():
    idx, got = run([1] * 8, [1] * 20, 2, 4)
    assert idx.mode == "small"
    assert got == brute([1] * 8, [1] * 20, 2)


def test_text_equals_pattern():
    rng = random.Random(1)
    pat = [rng.randrange(7) for _ in range(50)]
    idx, got = run(pat, pat, 3, 7)
    assert got == [(0, MismatchInfo())]


def test_exact_matching_k0():
    rng = random.Random(2)
    pat = [rng.randrange(3) for _ in range(20)]
    txt = [rng.randrange(3) for _ in range(300)]
    for s in (11, 100, 250):
        txt[s : s + 20] = pat
    idx, got = run(pat, txt, 0, 3)
    assert got == brute(pat, txt, 0)


def test_pattern_too_short_rejected():
    params = SketchParams(4, F, random.Random(0))
    with pytest.raises(UsageError):
        process_pattern(iter([1, 2]), 4, params, 4)


def test_general_mode_prefix_lengths():
    rng = random.Random(3)
    k = 4
    n = 700
    pat = [rng.randrange(256) for _ in range(n)]
    params = SketchParams(k, F, random.Random(5))
    idx = process_pattern(iter(pat), k, params, 256)
    assert idx.mode == "general"
    lengths = idx.lengths
    assert lengths[-1] == n and lengths[-2] == n - 2 * k
    q = lengths[0]
    # brute-force re-derivation of the longest prefix with a (2k+1)-period <= k
    best = 0
    for L in range(n + 1):
        ok = False
        for p in range(1, k + 1):
            if sum(pat[i] != pat[i + p] for i in range(L - p)) <= 2 * k + 1:
                ok = True
                break
        if not ok:
            break
        best = L
    assert q == best
    for a, b in zip(lengths, lengths[1:]):
        assert a < b
    for lv in lengths[1:-1]:
        assert lv & (lv - 1) == 0 or lv == n - 2 * k
        assert q < lv < n
    # indexed sketches equal fresh builds of the actual prefixes
    from hamstream import sketches
    for lv, sk in idx.sketch_of.items():
        assert sk == sketches.build(pat[:lv], params)


def test_stream_random_grid():
    rng = random.Random(4)
    for trial in range(120):
        k = rng.choice([0, 1, 2, 4, 8])
        sigma = rng.choice([2, 4, 256])
        n = rng.randrange(max(k, 1), 150)
        m = rng.randrange(0, 400)
        pat = [rng.randrange(sigma) for _ in range(n)]
        txt = [rng.randrange(sigma) for _ in range(m)]
        for _ in range(rng.randrange(0, 4)):
            if m >= n:
                s = rng.randrange(m - n + 1)
                txt[s : s + n] = pat
                for _ in range(rng.randrange(0, k + 1)):
                    txt[s + rng.randrange(n)] = rng.randrange(sigma)
        idx, got = run(pat, txt, k, sigma, seed=trial)
        assert got == brute(pat, txt, k), (trial, k, n, m, idx.mode)


def test_stream_periodic_patterns():
    rng = random.Random(5)
    for trial in range(60):
        k = rng.choice([1, 2, 4])
        sigma = rng.choice([2, 4])
        q = rng.randrange(1, k + 2)
        base = [rng.randrange(sigma) for _ in range(q)]
        n = rng.randrange(3 * k + 2, 120)
        frac = rng.choice([0.3, 0.8, 1.0])
        cut = int(n * frac)
        pat = [base[i % q] for i in range(cut)] + [rng.randrange(sigma) for _ in range(n - cut)]
        m = rng.randrange(n, 400)
        txt = [base[i % q] if rng.random() < 0.85 else rng.randrange(sigma)
               for i in range(m)]
        idx, got = run(pat, txt, k, sigma, seed=trial + 700)
        assert got == brute(pat, txt, k), (trial, k, n, m, idx.mode)


def test_stream_zero_delay_emission():
    rng = random.Random(6)
    k, sigma, n = 2, 4, 40
    pat = [rng.randrange(sigma) for _ in range(n)]
    txt = [rng.randrange(sigma) for _ in range(200)]
    for s in (20, 77, 150):
        txt[s : s + n] = pat
    params = SketchParams(k, F, random.Random(7))
    idx = process_pattern(iter(pat), k, params, sigma)
    matcher = StreamMatcher(idx, params, debug=True)
    for t, sym in enumerate(txt):
        for rec in matcher.push(sym):
            assert t == rec.start + n - 1  # reported exactly at the last symbol
    assert matcher.finish() == []


def test_stream_prefix_sketches_present():
    from hamstream import sketches
    rng = random.Random(8)
    k, sigma, n = 2, 4, 30
    pat = [rng.randrange(sigma) for _ in range(n)]
    txt = [rng.randrange(sigma) for _ in range(150)]
    for s in (10, 60, 100):
        txt[s : s + n] = pat
    params = SketchParams(k, F, random.Random(9))
    idx = process_pattern(iter(pat), k, params, sigma)
    recs = list(process_text(idx, iter(txt), params))
    assert recs
    for rec in recs:
        assert rec.prefix_sketch == sketches.build(txt[: rec.start], params)


def test_gen_hard_properties():
    for k, levels in ((4, 1), (8, 3), (5, 2)):
        s = gen_hard(k, levels, seed=123)
        assert len(s) == k * 3 ** levels
        # each level: prefix copy+middle vs middle+suffix differ in 2*floor(k/2)
        third = len(s) // 3
        if levels >= 1:
            left = s[: 2 * third]
            right = s[third:]
            hd = sum(a != b for a, b in zip(left, right))
            assert hd == 2 * (k // 2)
    assert gen_hard(4, 0, seed=5) == [0, 0, 0, 0]


def test_stream_on_hard_instances():
    for k, levels, seed in ((4, 3, 1), (8, 2, 2), (16, 2, 3)):
        s = gen_hard(k, levels, seed, sigma=8)
        pat = s[: max(k * 3, 16)]
        idx, got = run(pat, s, k, 8, seed=seed)
        assert got == brute(pat, s, k), (k, levels, idx.mode)

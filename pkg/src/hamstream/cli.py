"""Command-line surface.

    hamstream match  -p PATFILE [-t TEXTFILE] -k K [--seed S] [--prime P]
    hamstream oracle -p PATFILE [-t TEXTFILE] -k K
    hamstream encode -p PATFILE -t TEXTFILE -k K -o MSG
    hamstream decode -m MSG
    hamstream gen-hard -k K -l LEVELS [--seed S]
    hamstream bench [--grid | options]

Occurrence lines are `start<TAB>hd<TAB>i:a>b,i:a>b,...` (0-based start of
the window, mismatch entries sorted by index; the third field is empty for
exact matches).  Text arrives on standard input unless -t is given and is
consumed one symbol at a time; I/O buffers in 64 KiB chunks.  Exit codes:
0 ok, 1 usage, 2 I/O, 3 decode/corruption.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import struct
import sys
import time

from . import codec
from .base import DecodeError, UsageError
from .fields import FieldParams, default_field
from .matcher import StreamMatcher, process_pattern
from .sketches import SketchParams

CHUNK = 64 * 1024


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def format_occurrence(start, mi) -> str:
    body = ",".join(f"{i}:{a}>{b}" for (i, a, b) in mi)
    return f"{start}\t{len(mi)}\t{body}"


def parse_occurrence_line(line: str):
    """Inverse of format_occurrence: (start, hd, [(i, a, b), ...])."""
    parts = line.rstrip("\n").split("\t")
    if len(parts) != 3:
        raise ValueError("expected three tab-separated fields")
    start, hd = int(parts[0]), int(parts[1])
    ents = []
    if parts[2]:
        for piece in parts[2].split(","):
            idx, rest = piece.split(":")
            a, b = rest.split(">")
            ents.append((int(idx), int(a), int(b)))
    if len(ents) != hd:
        raise ValueError("mismatch count disagrees with the entry list")
    return start, hd, ents


def _read_symbols(path, tokens):
    """Whole-file symbol list (pattern / offline inputs)."""
    with open(path, "rb") as f:
        data = f.read()
    return _bytes_to_symbols(data, tokens)


def _bytes_to_symbols(data, tokens):
    if not tokens:
        return list(data)
    if len(data) % 4:
        raise UsageError("token input length not a multiple of 4 bytes")
    return list(struct.unpack(f"<{len(data) // 4}I", data))


def _stream_symbols(f, tokens):
    """One-pass symbol stream off a binary file object, 64 KiB reads."""
    pending = b""
    while True:
        chunk = f.read(CHUNK)
        if not chunk:
            break
        if tokens:
            chunk = pending + chunk
            usable = len(chunk) - (len(chunk) % 4)
            pending = chunk[usable:]
            for v in struct.unpack(f"<{usable // 4}I", chunk[:usable]):
                yield v
        else:
            yield from chunk
    if pending:
        raise UsageError("token input length not a multiple of 4 bytes")


def _session(args):
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("HAMSTREAM_SEED", "0"))
    if args.prime is not None:
        field = FieldParams(p=args.prime, generator=args.generator,
                            max_n=1 << 32 if args.prime > 1 << 32 else args.prime - 1)
    else:
        field = default_field()
    rng = random.Random(seed)
    return SketchParams(args.k, field, rng), (1 << 32) if args.tokens else 256


def _open_text(args):
    if args.text is not None:
        return open(args.text, "rb")
    return sys.stdin.buffer


def cmd_match(args) -> int:
    params, sigma = _session(args)
    pat = _read_symbols(args.pattern, args.tokens)
    idx = process_pattern(iter(pat), args.k, params, sigma)
    matcher = StreamMatcher(idx, params)
    out = sys.stdout
    f = _open_text(args)
    try:
        for sym in _stream_symbols(f, args.tokens):
            for rec in matcher.push(sym):
                _emit(out, args, rec.start, rec.mi)
        for rec in matcher.finish():
            _emit(out, args, rec.start, rec.mi)
    finally:
        if f is not sys.stdin.buffer:
            f.close()
    out.flush()
    return 0


def _emit(out, args, start, mi):
    if args.format == "binary":
        blob = bytearray()
        blob += struct.pack("<QI", start, len(mi))
        for (i, a, b) in mi:
            blob += struct.pack("<QQQ", i, a, b)
        sys.stdout.buffer.write(bytes(blob))
    else:
        out.write(format_occurrence(start, mi) + "\n")


def cmd_oracle(args) -> int:
    _params, _sigma = _session(args)
    pat = _read_symbols(args.pattern, args.tokens)
    if len(pat) < max(args.k, 1):
        raise UsageError("pattern must be at least k symbols long")
    f = _open_text(args)
    try:
        txt = _bytes_to_symbols(f.read(), args.tokens)
    finally:
        if f is not sys.stdin.buffer:
            f.close()
    out = sys.stdout
    for (s, mi) in codec.occurrences_offline(pat, txt, args.k):
        _emit(out, args, s, mi)
    out.flush()
    return 0


def cmd_encode(args) -> int:
    params, sigma = _session(args)
    pat = _read_symbols(args.pattern, args.tokens)
    txt = _read_symbols(args.text, args.tokens)
    blob = codec.encode(pat, txt, args.k, sigma)
    with open(args.output, "wb") as f:
        f.write(blob)
    print(8 * len(blob))
    return 0


def cmd_decode(args) -> int:
    with open(args.message, "rb") as f:
        blob = f.read()
    out = sys.stdout
    for (s, mi) in codec.decode(blob):
        out.write(format_occurrence(s, mi) + "\n")
    out.flush()
    return 0


def gen_hard(k, levels, seed, sigma=256):
    """Recursive near-periodic stress string: start from k zeros; each level
    concatenates copy + perturbed copy + copy, flipping floor(k/2) distinct
    positions of the middle copy to different symbols."""
    rng = random.Random(seed)
    s = [0] * k
    for _ in range(levels):
        mid = list(s)
        for i in rng.sample(range(len(mid)), k // 2):
            mid[i] = (mid[i] + rng.randrange(1, sigma)) % sigma
        s = s + mid + s
    return s


def cmd_gen_hard(args) -> int:
    if args.levels < 0:
        raise UsageError("levels must be non-negative")
    total = args.k * 3 ** args.levels
    if total > 1 << 28:
        raise UsageError("generated string would exceed 2^28 symbols")
    seed = args.seed if args.seed is not None else int(os.environ.get("HAMSTREAM_SEED", "0"))
    sigma = (1 << 32) if args.tokens else 256
    s = gen_hard(args.k, args.levels, seed, sigma)
    if args.tokens:
        sys.stdout.buffer.write(struct.pack(f"<{len(s)}I", *s))
    else:
        sys.stdout.buffer.write(bytes(s))
    sys.stdout.buffer.flush()
    return 0


def cmd_bench(args) -> int:
    seed = args.seed if args.seed is not None else 0
    if args.grid:
        ks = [1, 4, 16, 64]
        n = args.n or 4096
    else:
        ks = [args.k or 16]
        n = args.n or 4096
    report = {"n": n, "runs": []}
    for k in ks:
        rng = random.Random(seed ^ k)
        sigma = 256
        pat = [rng.randrange(sigma) for _ in range(n)]
        txt = [rng.randrange(sigma) for _ in range(args.text_mult * n)]
        s0 = rng.randrange(len(txt) - n + 1)
        txt[s0 : s0 + n] = pat
        params = SketchParams(k, default_field(), random.Random(seed))
        t0 = time.perf_counter()
        idx = process_pattern(iter(pat), k, params, sigma)
        t1 = time.perf_counter()
        matcher = StreamMatcher(idx, params)
        times = []
        peak = 0
        occ = 0
        for i, sym in enumerate(txt):
            a = time.perf_counter()
            occ += len(matcher.push(sym))
            times.append(time.perf_counter() - a)
            if i % 256 == 0:
                peak = max(peak, matcher.footprint_words())
        times.sort()
        mid = times[len(times) // 2]
        p90 = times[(len(times) * 9) // 10]
        from .readonly import ReadonlyMatcher
        ro = ReadonlyMatcher(pat, txt, k, SketchParams(k, default_field(),
                                                       random.Random(seed)))
        ro_occ = sum(1 for _ in ro.run())
        report["runs"].append({
            "k": k,
            "mode": idx.mode,
            "pattern_seconds": t1 - t0,
            "per_symbol_median_us": mid * 1e6,
            "per_symbol_p90_us": p90 * 1e6,
            "per_symbol_mean_us": sum(times) / len(times) * 1e6,
            "peak_tracked_words": peak,
            "occurrences": occ,
            "readonly_accessor_reads": ro.reads,
            "readonly_reads_per_symbol": ro.reads / max(1, len(txt)),
            "readonly_occurrences": ro_occ,
        })
    json.dump(report, sys.stdout, indent=2)
    print()
    return 0


def _add_common(sp, need_pattern=True):
    if need_pattern:
        sp.add_argument("-p", "--pattern", required=True, help="pattern file")
    sp.add_argument("-t", "--text", help="text file (default: standard input)")
    sp.add_argument("-k", type=int, required=True, help="mismatch threshold")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--prime", type=int, default=None)
    sp.add_argument("--generator", type=int, default=7)
    sp.add_argument("--tokens", action="store_true",
                    help="32-bit little-endian token alphabet instead of bytes")
    sp.add_argument("--format", choices=["text", "binary"], default="text")


def build_parser():
    ap = _Parser(prog="hamstream")
    sub = ap.add_subparsers(dest="cmd", required=True)
    sp = sub.add_parser("match", help="streaming k-mismatch matcher")
    _add_common(sp)
    sp.set_defaults(fn=cmd_match)
    sp = sub.add_parser("oracle", help="offline reference scan")
    _add_common(sp)
    sp.set_defaults(fn=cmd_oracle)
    sp = sub.add_parser("encode", help="one-way occurrence encoding")
    _add_common(sp)
    sp.add_argument("-o", "--output", required=True, help="message file")
    sp.set_defaults(fn=cmd_encode)
    sp = sub.add_parser("decode", help="decode an occurrence message")
    sp.add_argument("-m", "--message", required=True)
    sp.set_defaults(fn=cmd_decode)
    sp = sub.add_parser("gen-hard", help="recursive hard-instance generator")
    sp.add_argument("-k", type=int, required=True)
    sp.add_argument("-l", "--levels", type=int, required=True)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--tokens", action="store_true")
    sp.set_defaults(fn=cmd_gen_hard)
    sp = sub.add_parser("bench", help="benchmark / memory harness")
    sp.add_argument("--grid", action="store_true")
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--text-mult", type=int, default=4)
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(fn=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as e:
        print(f"hamstream: {e}", file=sys.stderr)
        return 1
    except DecodeError as e:
        print(f"hamstream: corrupt message: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"hamstream: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

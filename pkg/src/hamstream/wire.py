"""Byte-level helpers: LEB128-style varints and fixed-width bit packing."""

from __future__ import annotations

from .base import DecodeError


def put_uvarint(out: bytearray, v: int):
    if v < 0:
        raise ValueError("varint must be non-negative")
    while True:
        b = v & 0x7F
        v >>= 7
        if v:
            out.append(b | 0x80)
        else:
            out.append(b)
            return


def get_uvarint(data: bytes, pos: int):
    v = 0
    shift = 0
    while True:
        if pos >= len(data):
            raise DecodeError("truncated varint")
        b = data[pos]
        pos += 1
        v |= (b & 0x7F) << shift
        if not b & 0x80:
            return v, pos
        shift += 7
        if shift > 70:
            raise DecodeError("varint too long")


def pack_bits(values, width: int) -> bytes:
    """Pack non-negative ints into consecutive width-bit fields (LSB first)."""
    acc = 0
    nbits = 0
    out = bytearray()
    for v in values:
        if v >> width:
            raise ValueError("value does not fit the field width")
        acc |= v << nbits
        nbits += width
        while nbits >= 8:
            out.append(acc & 0xFF)
            acc >>= 8
            nbits -= 8
    if nbits:
        out.append(acc & 0xFF)
    return bytes(out)


def unpack_bits(data: bytes, count: int, width: int):
    if len(data) * 8 < count * width:
        raise DecodeError("truncated bit-packed block")
    out = []
    acc = 0
    nbits = 0
    it = iter(data)
    for _ in range(count):
        while nbits < width:
            acc |= next(it) << nbits
            nbits += 8
        out.append(acc & ((1 << width) - 1))
        acc >>= width
        nbits -= width
    return out


def bit_width(sigma: int) -> int:
    return max(1, (max(sigma, 2) - 1).bit_length())

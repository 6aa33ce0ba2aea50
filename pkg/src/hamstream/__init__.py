"""Streaming k-mismatch matching and its reusable parts: rolling prime-field
sketches with full mismatch recovery, small-approximate-period machinery,
a succinct all-occurrences encoding, a one-way communication codec, a
read-only-model matcher, and an exact-delay occurrence buffer."""

from .base import (
    TOO_MANY,
    DecodeError,
    DomainError,
    MismatchInfo,
    OccurrenceRecord,
    RootFindingFailure,
    SizeError,
    UsageError,
)
from .buffer import DelayBuffer
from .codec import chunk_driver, decode, encode
from .fields import FieldParams, default_field
from .matcher import PatternIndex, StreamMatcher, process_pattern, process_text
from .occindex import MembershipSet, PeriodStructure, RleString, period_from_overlap
from .periodic import (
    PeriodicPrefixTracker,
    PeriodicRepresentation,
    SmallPeriodMatcher,
    SparseVec,
    hamming_all_conv,
    hamming_all_naive,
    longest_periodic_prefix,
    periodic_hamming_stream,
    second_diff_crosscorr,
    small_period_match,
    sparse_conv_window,
)
from .readonly import ReadonlyMatcher, readonly_kmismatch
from .sketches import RollingSketcher, SketchK, SketchParams

__all__ = [
    "TOO_MANY", "DecodeError", "DomainError", "MismatchInfo", "OccurrenceRecord",
    "RootFindingFailure", "SizeError", "UsageError", "DelayBuffer",
    "chunk_driver", "decode", "encode", "FieldParams", "default_field",
    "PatternIndex", "StreamMatcher", "process_pattern", "process_text",
    "MembershipSet", "PeriodStructure", "RleString", "period_from_overlap",
    "PeriodicPrefixTracker", "PeriodicRepresentation", "SmallPeriodMatcher",
    "SparseVec", "hamming_all_conv", "hamming_all_naive",
    "longest_periodic_prefix", "periodic_hamming_stream",
    "second_diff_crosscorr", "small_period_match", "sparse_conv_window",
    "ReadonlyMatcher", "readonly_kmismatch",
    "RollingSketcher", "SketchK", "SketchParams",
]

__version__ = "0.1.0"

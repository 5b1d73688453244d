"""Retina-to-tuple mappings and address arithmetic.

A mapping partitions the retina's bit positions into ordered tuples; each
tuple feeds one RAM node's address lines.  Addresses are read little-endian
within a tuple: the first index contributes the least significant digit.
That convention is load-bearing for persistence, so it is fixed here and
nowhere else.
"""

import numpy as np

from ._rng import Xoshiro256StarStar
from .errors import EncodingError, MappingError

__all__ = ["TupleMapping", "make_mapping", "encode_address"]


class TupleMapping:
    """An ordered assignment of retina positions to RAM address lines.

    Parameters
    ----------
    entry_size : int
        Retina size, in digits.
    tuple_size : int
        Number of address lines per RAM node.
    tuples : sequence of index sequences
        One index vector per RAM node, each of length ``tuple_size``, with
        every index in ``[0, entry_size)``.
    seed : int or None
        Seed that generated the mapping, if any; kept for bookkeeping only.

    Immutable after construction and freely shareable across threads.
    """

    def __init__(self, entry_size, tuple_size, tuples, seed=None):
        entry_size = int(entry_size)
        tuple_size = int(tuple_size)
        if tuple_size < 1:
            raise MappingError("tuple size must be >= 1")
        if entry_size < tuple_size:
            raise MappingError(
                f"retina size {entry_size} is smaller than tuple size {tuple_size}")
        clean = []
        for t in tuples:
            t = [int(i) for i in t]
            if len(t) != tuple_size:
                raise MappingError(
                    f"tuple {t} has length {len(t)}, expected {tuple_size}")
            for i in t:
                if not 0 <= i < entry_size:
                    raise MappingError(
                        f"index {i} out of range for retina size {entry_size}")
            clean.append(t)
        if not clean:
            raise MappingError("mapping needs at least one tuple")
        self.entry_size = entry_size
        self.tuple_size = tuple_size
        self.tuples = clean
        self.seed = seed
        self._index_matrix = np.array(clean, dtype=np.int64)

    @property
    def num_tuples(self):
        return len(self.tuples)

    def digit_matrix(self, pattern):
        """Pattern digits rearranged to shape (num_tuples, tuple_size)."""
        return pattern[self._index_matrix]

    def addresses(self, pattern, base=2):
        """Per-RAM addresses for a validated pattern, as a list of ints.

        Little-endian positional encoding in ``base`` over each tuple's
        digits.  ``pattern`` must be a 1-D integer array of length
        ``entry_size`` whose digits are already known to lie in
        ``[0, base)``; models validate before calling.
        """
        digits = pattern[self._index_matrix]
        if base ** self.tuple_size <= 2**62:
            powers = base ** np.arange(self.tuple_size, dtype=np.int64)
            return (digits * powers).sum(axis=1).tolist()
        # Address space exceeds int64: fall back to exact Python ints.
        out = []
        for row in digits.tolist():
            addr = 0
            for digit in reversed(row):
                addr = addr * base + digit
            out.append(addr)
        return out

    def __eq__(self, other):
        return (isinstance(other, TupleMapping)
                and self.entry_size == other.entry_size
                and self.tuple_size == other.tuple_size
                and self.tuples == other.tuples)

    def __repr__(self):
        return (f"TupleMapping(entry_size={self.entry_size}, "
                f"tuple_size={self.tuple_size}, num_tuples={self.num_tuples})")


def make_mapping(entry_size, tuple_size, seed, complete_address_size=False):
    """Build the seeded pseudo-random mapping for a retina.

    The retina's indices are shuffled once (Fisher-Yates, pinned
    generator, stream 0 of ``seed``) and chunked into tuples of
    ``tuple_size``.  When ``entry_size`` is not divisible by
    ``tuple_size``, ``complete_address_size`` pads the final partial tuple
    by continuing cyclically through the shuffled sequence; with the flag
    off that situation is an error.  Deterministic for fixed arguments.
    """
    entry_size = int(entry_size)
    tuple_size = int(tuple_size)
    if tuple_size < 1:
        raise MappingError("tuple size must be >= 1")
    if entry_size < tuple_size:
        raise MappingError(
            f"retina size {entry_size} is smaller than tuple size {tuple_size}")
    remainder = entry_size % tuple_size
    if remainder and not complete_address_size:
        raise MappingError(
            f"retina size {entry_size} is not divisible by tuple size "
            f"{tuple_size}; enable complete_address_size to pad the final tuple")

    order = list(range(entry_size))
    Xoshiro256StarStar(seed, stream=0).shuffle(order)
    tuples = [order[i:i + tuple_size]
              for i in range(0, entry_size - remainder, tuple_size)]
    if remainder:
        tail = [order[i % entry_size]
                for i in range(entry_size - remainder,
                               entry_size - remainder + tuple_size)]
        tuples.append(tail)
    return TupleMapping(entry_size, tuple_size, tuples, seed=int(seed))


def encode_address(pattern, tuple_indices, base=2):
    """Little-endian address of a pattern's digits at the given tuple.

    ``address = sum(pattern[tuple_indices[j]] * base**j)``.  Digits must
    lie in ``[0, base)``.
    """
    base = int(base)
    if base < 2:
        raise EncodingError("base must be >= 2")
    addr = 0
    power = 1
    for i in tuple_indices:
        digit = int(pattern[i])
        if not 0 <= digit < base:
            raise EncodingError(f"digit {digit} out of range for base {base}")
        addr += digit * power
        power *= base
    return addr

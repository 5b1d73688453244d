"""The minimal learning unit: a sparse counter memory.

A RAM node owns one tuple of retina positions and a sparse map from
addresses to access counters.  Absent keys mean counter zero, and entries
are removed the moment a counter returns to zero, so the stored size never
exceeds the number of distinct trained addresses.  Dense ``base**n``
storage is deliberately avoided; it explodes for the tuple sizes this
library targets while a dict preserves the semantics exactly.
"""

import numpy as np

from .errors import InputError
from .mapping import encode_address

__all__ = ["RamNode"]


class RamNode:
    """One RAM node: ``tuple_size`` address lines over a sparse counter map.

    Parameters
    ----------
    tuple_indices : sequence of int
        The retina positions feeding this node's address lines, in order.
    base : int
        Digit base; 2 for classic binary patterns.
    ignore_zero : bool
        When set, address 0 (the all-zeros tuple value) never votes.

    Training is single-writer; voting and mental images are read-only.
    """

    def __init__(self, tuple_indices, base=2, ignore_zero=False):
        self.tuple = [int(i) for i in tuple_indices]
        self.base = int(base)
        self.ignore_zero = bool(ignore_zero)
        self.cells = {}

    def address_of(self, pattern):
        """The address this node reads from ``pattern``."""
        return encode_address(pattern, self.tuple, self.base)

    def train(self, pattern):
        """Increment the access counter at the pattern's address."""
        addr = self.address_of(pattern)
        self.cells[addr] = self.cells.get(addr, 0) + 1

    def untrain(self, pattern):
        """Decrement the counter at the pattern's address, floored at zero.

        Untraining a never-trained pattern is a silent no-op; entries are
        removed when their counter reaches zero.
        """
        addr = self.address_of(pattern)
        count = self.cells.get(addr, 0)
        if count > 1:
            self.cells[addr] = count - 1
        elif count == 1:
            del self.cells[addr]

    def vote(self, pattern, bleach=0):
        """1 iff the accessed counter exceeds ``bleach`` (strict), else 0.

        With ``ignore_zero`` set, address 0 never votes regardless of its
        counter.
        """
        if bleach < 0:
            raise InputError("bleach must be >= 0")
        addr = self.address_of(pattern)
        if self.ignore_zero and addr == 0:
            return 0
        return 1 if self.cells.get(addr, 0) > bleach else 0

    def mental_image(self, entry_size):
        """Retina-shaped summary of this node's learned content.

        For each retina position in the node's tuple, sums the counters of
        every stored cell whose digit at that position is nonzero.
        Positions outside the tuple stay zero.
        """
        image = np.zeros(int(entry_size), dtype=np.int64)
        for addr, count in self.cells.items():
            rest = addr
            for pos in self.tuple:
                if rest % self.base >= 1:
                    image[pos] += count
                rest //= self.base
        return image

    def max_counter(self):
        """Largest stored access counter, 0 when empty."""
        return max(self.cells.values(), default=0)

    def __repr__(self):
        return (f"RamNode(tuple={self.tuple}, base={self.base}, "
                f"cells={len(self.cells)})")

"""The n-tuple classifier: per-class discriminators with bleaching.

Every class owns a discriminator, a bank of RAM nodes sharing one retina
mapping.  Classification reads each discriminator's score (the number of
its nodes whose accessed counter beats the bleaching threshold) and raises
that threshold until the tie between top scorers breaks; if it never does,
a seeded draw resolves it.  All tie draws come from the model's pinned
generator, so runs reproduce exactly, including through JSON round-trips.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._rng import Xoshiro256StarStar
from .errors import EncodingError, InputError, MappingError, ModelError
from .mapping import TupleMapping, make_mapping
from .ram import RamNode

__all__ = ["ScoreTable", "Discriminator", "Wisard"]


def _as_pattern(pattern, entry_size, base):
    """Validate and convert a model input to a 1-D int64 digit array."""
    arr = np.asarray(pattern, dtype=np.int64)
    if arr.ndim != 1:
        raise InputError(f"pattern must be one-dimensional, got shape {arr.shape}")
    if entry_size is not None and arr.size != entry_size:
        raise InputError(
            f"pattern has {arr.size} digits, model retina expects {entry_size}")
    if arr.size and (arr.min() < 0 or arr.max() >= base):
        raise EncodingError(f"pattern digits must lie in [0, {base})")
    return arr


@dataclass
class ScoreTable:
    """Per-label scores from one read-out pass.

    ``raw`` counts voting RAM nodes (0..N); ``normalized`` is ``raw / N``;
    ``bleach`` is the threshold the scores were read at.
    """
    raw: dict
    normalized: dict
    bleach: int


class Discriminator:
    """One class's bank of RAM nodes over a shared retina mapping."""

    def __init__(self, mapping, base=2, ignore_zero=False):
        self.mapping = mapping
        self.base = int(base)
        self.ignore_zero = bool(ignore_zero)
        self.rams = [RamNode(t, base=base, ignore_zero=ignore_zero)
                     for t in mapping.tuples]
        self.trained_count = 0

    def train(self, pattern):
        arr = _as_pattern(pattern, self.mapping.entry_size, self.base)
        self._train_addresses(self.mapping.addresses(arr, self.base))

    def _train_addresses(self, addrs):
        for ram, addr in zip(self.rams, addrs):
            ram.cells[addr] = ram.cells.get(addr, 0) + 1
        self.trained_count += 1

    def _untrain_addresses(self, addrs):
        for ram, addr in zip(self.rams, addrs):
            count = ram.cells.get(addr, 0)
            if count > 1:
                ram.cells[addr] = count - 1
            elif count == 1:
                del ram.cells[addr]
        self.trained_count = max(0, self.trained_count - 1)

    def _access_counts(self, addrs):
        """Counter at each node's accessed address, shape (num_tuples,)."""
        return np.fromiter((ram.cells.get(addr, 0)
                            for ram, addr in zip(self.rams, addrs)),
                           dtype=np.int64, count=len(self.rams))

    def max_counter(self):
        return max((ram.max_counter() for ram in self.rams), default=0)

    def cell_count(self):
        return sum(len(ram.cells) for ram in self.rams)

    def mental_image(self):
        image = np.zeros(self.mapping.entry_size, dtype=np.int64)
        for ram in self.rams:
            image += ram.mental_image(self.mapping.entry_size)
        return image

    def __repr__(self):
        return (f"Discriminator(num_tuples={len(self.rams)}, "
                f"trained_count={self.trained_count})")


class Wisard:
    """WiSARD classifier with access counters and bleaching.

    Parameters
    ----------
    address_size : int
        Address lines per RAM node (the tuple size n).
    base : int
        Digit base of input patterns; RAM nodes then hold ``base**n``
        addressable locations.
    ignore_zero : bool
        Never count votes from address 0 of any node.
    balanced : bool
        Damp each discriminator's score by ``ln(e + trained_count)`` when
        comparing, so heavily trained classes do not dominate.
    complete_address_size : bool
        Pad the final tuple when the retina size is not divisible by
        ``address_size`` (otherwise that is an error at first train).
    seed : int
        Drives both the retina mapping and classification tie draws.

    The retina size is fixed by the first trained pattern.  Labels are
    strings; anything else is stringified at the boundary.
    """

    def __init__(self, address_size, *, base=2, ignore_zero=False,
                 balanced=False, complete_address_size=False, seed=0):
        address_size = int(address_size)
        if address_size < 1:
            raise InputError("address_size must be >= 1")
        base = int(base)
        if base < 2:
            raise InputError("base must be >= 2")
        self.address_size = address_size
        self.base = base
        self.ignore_zero = bool(ignore_zero)
        self.balanced = bool(balanced)
        self.complete_address_size = bool(complete_address_size)
        self.seed = int(seed)
        self.entry_size = None
        self.mapping = None
        self.discriminators = {}
        self._tie_rng = Xoshiro256StarStar(self.seed, stream=1)

    # -- setup -----------------------------------------------------------

    def set_mapping(self, tuples, entry_size=None):
        """Use an explicit mapping instead of the seeded shuffle.

        Only allowed before any training.  ``entry_size`` defaults to one
        past the largest index mentioned.
        """
        if self.discriminators:
            raise MappingError("mapping is fixed once training has started")
        if entry_size is None:
            entry_size = max((int(i) for t in tuples for i in t), default=-1) + 1
        self.mapping = TupleMapping(entry_size, self.address_size, tuples)
        self.entry_size = self.mapping.entry_size

    def _prepare(self, pattern):
        arr = _as_pattern(pattern, self.entry_size, self.base)
        if self.entry_size is None:
            if self.mapping is None:
                self.mapping = make_mapping(
                    arr.size, self.address_size, self.seed,
                    self.complete_address_size)
            self.entry_size = self.mapping.entry_size
        return arr, self.mapping.addresses(arr, self.base)

    # -- learning --------------------------------------------------------

    def train(self, pattern, label):
        """Learn one pattern under ``label``, creating its discriminator
        on first sight."""
        label = str(label)
        _, addrs = self._prepare(pattern)
        disc = self.discriminators.get(label)
        if disc is None:
            disc = Discriminator(self.mapping, base=self.base,
                                 ignore_zero=self.ignore_zero)
            self.discriminators[label] = disc
        disc._train_addresses(addrs)

    def untrain(self, pattern, label):
        """Reverse one training of ``pattern`` under ``label``.

        Counters floor at zero; untraining something never trained is a
        no-op at the RAM level.  The label must exist.  A discriminator
        untrained back to fully empty is dropped, so a train followed by
        its untrain restores the previous model state exactly.
        """
        label = str(label)
        disc = self.discriminators.get(label)
        if disc is None:
            raise InputError(f"unknown label {label!r}")
        _, addrs = self._prepare(pattern)
        disc._untrain_addresses(addrs)
        if disc.trained_count == 0 and disc.cell_count() == 0:
            del self.discriminators[label]

    # -- read-out --------------------------------------------------------

    def _comparison_keys(self, raw):
        if not self.balanced:
            return raw
        return {label: raw[label]
                / math.log(math.e + self.discriminators[label].trained_count)
                for label in raw}

    def _raw_scores(self, counts, vote_mask, bleach):
        if vote_mask is None:
            return {label: int((c > bleach).sum()) for label, c in counts.items()}
        return {label: int(((c > bleach) & vote_mask).sum())
                for label, c in counts.items()}

    def _read_state(self, pattern):
        if not self.discriminators:
            raise ModelError("model has no discriminators yet")
        _, addrs = self._prepare(pattern)
        counts = {label: disc._access_counts(addrs)
                  for label, disc in self.discriminators.items()}
        vote_mask = None
        if self.ignore_zero:
            vote_mask = np.fromiter((a != 0 for a in addrs), dtype=bool,
                                    count=len(addrs))
        return counts, vote_mask

    def _table(self, raw, bleach):
        n = self.mapping.num_tuples
        return ScoreTable(raw=dict(raw),
                          normalized={l: raw[l] / n for l in raw},
                          bleach=bleach)

    def score(self, pattern, bleach=0):
        """Score every label at a fixed bleaching threshold.

        A model with no discriminators yields an empty table and leaves
        the retina size unfixed.
        """
        if bleach < 0:
            raise InputError("bleach must be >= 0")
        if not self.discriminators:
            return ScoreTable(raw={}, normalized={}, bleach=bleach)
        counts, vote_mask = self._read_state(pattern)
        return self._table(self._raw_scores(counts, vote_mask, bleach), bleach)

    def classify(self, pattern, bleach=0):
        """Classify a pattern; returns ``(label, score_table)``.

        Runs the bleaching loop from ``bleach`` upward: whenever the top
        comparison keys tie, the threshold is raised and scores re-read.
        Once it exceeds the largest counter stored by the tied
        discriminators (or every tied score hits zero), a uniform draw
        from the model's seeded generator picks among the last tied
        labels.
        """
        if bleach < 0:
            raise InputError("bleach must be >= 0")
        counts, vote_mask = self._read_state(pattern)
        b = bleach
        last_tied = None
        while True:
            raw = self._raw_scores(counts, vote_mask, b)
            keys = self._comparison_keys(raw)
            top = max(keys.values())
            tied = sorted(label for label, k in keys.items() if k == top)
            if top > 0 and len(tied) == 1:
                return tied[0], self._table(raw, b)
            if top <= 0:
                pool = last_tied if last_tied is not None else sorted(keys)
                return self._tie_rng.choice(pool), self._table(raw, b)
            last_tied = tied
            limit = max(self.discriminators[label].max_counter()
                        for label in tied)
            b += 1
            if b > limit:
                return self._tie_rng.choice(tied), self._table(raw, b - 1)

    def rank(self, pattern):
        """Labels ordered by bleach-0 comparison key, best first; score
        ties break lexicographically."""
        if not self.discriminators:
            return []
        counts, vote_mask = self._read_state(pattern)
        keys = self._comparison_keys(self._raw_scores(counts, vote_mask, 0))
        return sorted(keys, key=lambda label: (-keys[label], label))

    # -- introspection ---------------------------------------------------

    def mental_images(self):
        """Per-label retina-shaped summaries of learned content."""
        return {label: disc.mental_image()
                for label, disc in self.discriminators.items()}

    def stats(self):
        """Size report: discriminator count, stored cells, trained counts."""
        return {
            "discriminators": len(self.discriminators),
            "cells": sum(d.cell_count() for d in self.discriminators.values()),
            "trainedCounts": {label: d.trained_count
                              for label, d in self.discriminators.items()},
        }

    def labels(self):
        return sorted(self.discriminators)

    # -- persistence -----------------------------------------------------

    def to_json(self):
        from . import persistence
        return persistence.save_model(self)

    @classmethod
    def from_json(cls, text):
        from . import persistence
        model = persistence.load_model(text)
        if not isinstance(model, cls):
            raise InputError(f"document is not a {cls.__name__} model")
        return model

    def __repr__(self):
        return (f"Wisard(address_size={self.address_size}, base={self.base}, "
                f"labels={len(self.discriminators)})")

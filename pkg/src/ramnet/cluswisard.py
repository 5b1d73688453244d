"""Cluster-based multi-discriminator classification.

One class may grow several discriminators so that dissimilar sub-profiles
of the same class are learned in different places instead of saturating a
single memory bank.  An example is accepted by every sufficiently similar
discriminator of its class; when none qualifies, a new one is created up
to a per-class limit.  Unlabeled examples reinforce whichever
discriminator in the whole model matches best.
"""

import numpy as np

from ._rng import Xoshiro256StarStar
from .errors import InputError, MappingError, ModelError
from .mapping import TupleMapping, make_mapping
from .wisard import Discriminator, ScoreTable, _as_pattern

__all__ = ["ClusWisard"]


class ClusWisard:
    """WiSARD variant with a growth policy and semi-supervised learning.

    Parameters
    ----------
    address_size : int
        Address lines per RAM node.
    min_score : float
        Similarity floor in [0, 1]: a discriminator accepts an example
        when its normalized score reaches the acceptance threshold, which
        climbs from ``min_score`` toward 1 as the discriminator trains.
    threshold : int
        Trained-example scale of that climb: the acceptance threshold is
        ``min(1, min_score + (trained_count / threshold) * (1 - min_score))``.
    discriminators_limit : int
        Maximum discriminators per class.
    complete_address_size : bool
        Pad the final tuple when the retina is not divisible by
        ``address_size``.
    seed : int
        Drives the shared retina mapping and classification tie draws.
    """

    def __init__(self, address_size, min_score, threshold,
                 discriminators_limit, *, complete_address_size=False, seed=0):
        address_size = int(address_size)
        if address_size < 1:
            raise InputError("address_size must be >= 1")
        min_score = float(min_score)
        if not 0.0 <= min_score <= 1.0:
            raise InputError("min_score must lie in [0, 1]")
        threshold = int(threshold)
        if threshold < 1:
            raise InputError("threshold must be >= 1")
        discriminators_limit = int(discriminators_limit)
        if discriminators_limit < 1:
            raise InputError("discriminators_limit must be >= 1")
        self.address_size = address_size
        self.min_score = min_score
        self.threshold = threshold
        self.discriminators_limit = discriminators_limit
        self.complete_address_size = bool(complete_address_size)
        self.seed = int(seed)
        self.base = 2
        self.ignore_zero = False
        self.entry_size = None
        self.mapping = None
        self.clusters = {}
        self._tie_rng = Xoshiro256StarStar(self.seed, stream=1)

    # -- setup -----------------------------------------------------------

    def set_mapping(self, tuples, entry_size=None):
        """Use an explicit mapping; only allowed before any training."""
        if self.clusters:
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

    def _new_discriminator(self):
        return Discriminator(self.mapping, base=self.base,
                             ignore_zero=self.ignore_zero)

    def acceptance_threshold(self, trained_count):
        """Similarity a discriminator with ``trained_count`` examples
        demands before accepting another one."""
        grown = self.min_score + (trained_count / self.threshold) * (1.0 - self.min_score)
        return min(1.0, grown)

    @staticmethod
    def _raw_score(disc, addrs):
        return sum(1 for ram, addr in zip(disc.rams, addrs)
                   if ram.cells.get(addr, 0) > 0)

    # -- learning --------------------------------------------------------

    def train(self, pattern, label):
        """Learn a labeled example under the growth policy.

        Every discriminator of the label whose normalized score reaches
        its acceptance threshold learns the example.  If none does, a new
        discriminator is created while under the limit; at the limit the
        best-scoring one learns it anyway.
        """
        label = str(label)
        _, addrs = self._prepare(pattern)
        discs = self.clusters.get(label)
        if discs is None:
            disc = self._new_discriminator()
            disc._train_addresses(addrs)
            self.clusters[label] = [disc]
            return
        n = self.mapping.num_tuples
        scores = [self._raw_score(d, addrs) / n for d in discs]
        accepted = [d for d, s in zip(discs, scores)
                    if s >= self.acceptance_threshold(d.trained_count)]
        if accepted:
            for d in accepted:
                d._train_addresses(addrs)
        elif len(discs) < self.discriminators_limit:
            disc = self._new_discriminator()
            disc._train_addresses(addrs)
            discs.append(disc)
        else:
            best = int(np.argmax(scores))
            discs[best]._train_addresses(addrs)

    def train_unsupervised(self, pattern):
        """Learn an unlabeled example into the best-matching discriminator
        across all labels (ties break by label, then index)."""
        if not self.clusters:
            raise ModelError("cannot train unsupervised on an empty model")
        _, addrs = self._prepare(pattern)
        best = None
        best_score = -1
        for label in sorted(self.clusters):
            for disc in self.clusters[label]:
                score = self._raw_score(disc, addrs)
                if score > best_score:
                    best, best_score = disc, score
        best._train_addresses(addrs)

    def untrain(self, pattern, label):
        """Reverse one training from the label's best-scoring
        discriminator (the most likely learner)."""
        label = str(label)
        discs = self.clusters.get(label)
        if discs is None:
            raise InputError(f"unknown label {label!r}")
        _, addrs = self._prepare(pattern)
        scores = [self._raw_score(d, addrs) for d in discs]
        discs[int(np.argmax(scores))]._untrain_addresses(addrs)

    # -- read-out --------------------------------------------------------

    def _counts_by_label(self, addrs):
        return {label: [d._access_counts(addrs) for d in discs]
                for label, discs in self.clusters.items()}

    def _raw_scores(self, counts, bleach):
        return {label: max(int((c > bleach).sum()) for c in per_disc)
                for label, per_disc in counts.items()}

    def _table(self, raw, bleach):
        n = self.mapping.num_tuples
        return ScoreTable(raw=dict(raw),
                          normalized={l: raw[l] / n for l in raw},
                          bleach=bleach)

    def score(self, pattern, bleach=0):
        """Score every label (max over its discriminators) at a fixed
        bleaching threshold."""
        if bleach < 0:
            raise InputError("bleach must be >= 0")
        if not self.clusters:
            return ScoreTable(raw={}, normalized={}, bleach=bleach)
        _, addrs = self._prepare(pattern)
        return self._table(self._raw_scores(self._counts_by_label(addrs), bleach),
                           bleach)

    def classify(self, pattern, bleach=0):
        """Classify a pattern; returns ``(label, score_table)``.

        Identical bleaching loop to the single-discriminator classifier,
        with each label scored by its best discriminator.
        """
        if bleach < 0:
            raise InputError("bleach must be >= 0")
        if not self.clusters:
            raise ModelError("model has no discriminators yet")
        _, addrs = self._prepare(pattern)
        counts = self._counts_by_label(addrs)
        b = bleach
        last_tied = None
        while True:
            raw = self._raw_scores(counts, b)
            top = max(raw.values())
            tied = sorted(label for label, r in raw.items() if r == top)
            if top > 0 and len(tied) == 1:
                return tied[0], self._table(raw, b)
            if top <= 0:
                pool = last_tied if last_tied is not None else sorted(raw)
                return self._tie_rng.choice(pool), self._table(raw, b)
            last_tied = tied
            limit = max(d.max_counter() for label in tied
                        for d in self.clusters[label])
            b += 1
            if b > limit:
                return self._tie_rng.choice(tied), self._table(raw, b - 1)

    def rank(self, pattern):
        """Labels ordered by bleach-0 raw score, best first; ties break
        lexicographically."""
        if not self.clusters:
            return []
        _, addrs = self._prepare(pattern)
        raw = self._raw_scores(self._counts_by_label(addrs), 0)
        return sorted(raw, key=lambda label: (-raw[label], label))

    def classify_unsupervised(self, pattern):
        """Identify the single most similar discriminator across classes;
        returns ``(label, index)``."""
        if not self.clusters:
            raise ModelError("model has no discriminators yet")
        _, addrs = self._prepare(pattern)
        best = None
        best_score = -1
        for label in sorted(self.clusters):
            for index, disc in enumerate(self.clusters[label]):
                score = self._raw_score(disc, addrs)
                if score > best_score:
                    best, best_score = (label, index), score
        return best

    # -- introspection ---------------------------------------------------

    def mental_images(self):
        """Per-discriminator summaries keyed by ``(label, index)``."""
        return {(label, index): disc.mental_image()
                for label, discs in self.clusters.items()
                for index, disc in enumerate(discs)}

    def stats(self):
        return {
            "discriminators": sum(len(d) for d in self.clusters.values()),
            "cells": sum(d.cell_count()
                         for discs in self.clusters.values() for d in discs),
            "trainedCounts": {label: [d.trained_count for d in discs]
                              for label, discs in self.clusters.items()},
        }

    def labels(self):
        return sorted(self.clusters)

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
        return (f"ClusWisard(address_size={self.address_size}, "
                f"labels={len(self.clusters)})")

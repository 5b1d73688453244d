"""RAM-based regression.

Memory cells carry two contents: an access counter and a partial sum of
the targets that reached them.  Prediction gathers the accessed cells
and reduces their per-cell averages with a configurable mean.  A
clustered variant grows several predictors under the same acceptance
rule the clustered classifier uses.
"""

import math

import numpy as np
from scipy.special import expit, logit, logsumexp

from .errors import (InputError, MappingError, MeanDomainError, ModelError,
                     NoInformationError)
from .mapping import TupleMapping, make_mapping
from .wisard import _as_pattern

__all__ = [
    "MEAN_KINDS",
    "apply_mean",
    "RegressionRamNode",
    "RegressionWisard",
    "ClusRegressionWisard",
]

MEAN_KINDS = ("simple", "power", "median", "harmonic", "harmonicPower",
              "geometric", "exponential", "logistic")

_POSITIVE_DOMAIN = ("power", "harmonic", "harmonicPower", "geometric")


def _check_mean(kind, power):
    if kind not in MEAN_KINDS:
        raise InputError(f"unknown mean {kind!r}; expected one of {MEAN_KINDS}")
    power = float(power)
    if not math.isfinite(power) or power <= 0.0:
        raise InputError("power must be finite and > 0")
    return kind, power


def apply_mean(kind, cells, power=2.0):
    """Reduce ``cells`` (pairs of counter and partial sum) to one value.

    Every kind except ``simple`` operates on the per-cell averages
    ``q_i = partialSum_i / counter_i``; ``simple`` pools the raw sums
    and counters instead.  The positive-domain kinds (power, harmonic,
    harmonicPower, geometric) require every ``q_i > 0``.
    """
    kind, power = _check_mean(kind, power)
    counters = np.asarray([c for c, _ in cells], dtype=np.int64)
    sums = np.asarray([s for _, s in cells], dtype=np.float64)
    if counters.size == 0:
        raise NoInformationError("no cells to average")
    if (counters < 1).any():
        raise InputError("cell counters must be >= 1")
    if not np.isfinite(sums).all():
        raise InputError("cell partial sums must be finite")
    if kind == "simple":
        return float(sums.sum() / counters.sum())
    q = sums / counters
    k = q.size
    if kind == "median":
        return float(np.median(q))
    if kind == "exponential":
        return float(logsumexp(q) - math.log(k))
    if kind == "logistic":
        # expit saturates; keep its outputs strictly inside (0, 1) so the
        # inverse stays finite.
        eps = np.finfo(np.float64).eps
        squashed = np.clip(expit(q), eps, 1.0 - eps)
        return float(logit(squashed.mean()))
    if (q <= 0.0).any():
        raise MeanDomainError(f"{kind} mean requires positive cell averages")
    if kind == "power":
        return float(np.mean(q ** power) ** (1.0 / power))
    if kind == "harmonic":
        return float(k / np.sum(1.0 / q))
    if kind == "harmonicPower":
        return float((k / np.sum(q ** -power)) ** (1.0 / power))
    return float(np.exp(np.mean(np.log(q))))


class RegressionRamNode:
    """One two-content memory bank over a fixed tuple of retina positions.

    ``min_zero`` and ``min_one`` are read-side filters on the digit
    composition of the accessed address: a cell only contributes to a
    prediction when the addressed tuple holds at least that many 0s and
    1s.  Writing is unconditional.
    """

    def __init__(self, tuple_indices, min_zero=0, min_one=0):
        self.tuple_indices = [int(i) for i in tuple_indices]
        if not self.tuple_indices:
            raise InputError("tuple_indices must be non-empty")
        min_zero = int(min_zero)
        min_one = int(min_one)
        if min_zero < 0 or min_one < 0:
            raise InputError("min_zero and min_one must be >= 0")
        self.min_zero = min_zero
        self.min_one = min_one
        self.cells = {}

    def _digits(self, pattern):
        arr = np.asarray(pattern)
        return [int(arr[i]) for i in self.tuple_indices]

    def address_of(self, pattern):
        digits = self._digits(pattern)
        addr = 0
        for j, digit in enumerate(digits):
            if digit not in (0, 1):
                raise InputError("regression nodes take binary patterns")
            addr += digit << j
        return addr

    def admits(self, pattern):
        """Whether the addressed tuple passes the digit-composition filter."""
        digits = self._digits(pattern)
        ones = sum(1 for d in digits if d == 1)
        zeros = sum(1 for d in digits if d == 0)
        return zeros >= self.min_zero and ones >= self.min_one

    def train(self, pattern, y):
        addr = self.address_of(pattern)
        cell = self.cells.get(addr)
        if cell is None:
            self.cells[addr] = [1, float(y)]
        else:
            cell[0] += 1
            cell[1] += float(y)

    def untrain(self, pattern, y):
        """Reverse one training; a counter at zero removes the cell so
        absence stays equivalent to (0, 0)."""
        addr = self.address_of(pattern)
        cell = self.cells.get(addr)
        if cell is None:
            return
        cell[0] -= 1
        if cell[0] <= 0:
            del self.cells[addr]
        else:
            cell[1] -= float(y)

    def read(self, pattern):
        """The addressed cell as ``(counter, partialSum)``, or None when
        it is empty or filtered out."""
        if not self.admits(pattern):
            return None
        cell = self.cells.get(self.address_of(pattern))
        if cell is None or cell[0] < 1:
            return None
        return cell[0], cell[1]


class RegressionWisard:
    """Single-predictor n-tuple regression.

    Parameters
    ----------
    address_size : int
        Address lines per memory node.
    mean : str
        One of ``MEAN_KINDS``; how accessed cells reduce to a prediction.
    power : float
        Exponent for the power and harmonicPower means.
    min_zero, min_one : int
        Digit-composition filters applied when reading cells.
    complete_address_size : bool
        Pad the final tuple when the retina is not divisible by
        ``address_size``.
    seed : int
        Drives the pseudo-random retina mapping.
    """

    def __init__(self, address_size, *, mean="simple", power=2.0,
                 min_zero=0, min_one=0, complete_address_size=False, seed=0):
        address_size = int(address_size)
        if address_size < 1:
            raise InputError("address_size must be >= 1")
        self.mean, self.power = _check_mean(mean, power)
        min_zero = int(min_zero)
        min_one = int(min_one)
        if min_zero < 0 or min_one < 0:
            raise InputError("min_zero and min_one must be >= 0")
        self.address_size = address_size
        self.min_zero = min_zero
        self.min_one = min_one
        self.complete_address_size = bool(complete_address_size)
        self.seed = int(seed)
        self.base = 2
        self.entry_size = None
        self.mapping = None
        self.rams = None
        self.trained_count = 0

    def set_mapping(self, tuples, entry_size=None):
        """Use an explicit mapping; only allowed before any training."""
        if self.trained_count:
            raise MappingError("mapping is fixed once training has started")
        if entry_size is None:
            entry_size = max((int(i) for t in tuples for i in t), default=-1) + 1
        self._adopt_mapping(TupleMapping(entry_size, self.address_size, tuples))

    def _adopt_mapping(self, mapping):
        self.mapping = mapping
        self.entry_size = mapping.entry_size
        self.rams = [RegressionRamNode(t, self.min_zero, self.min_one)
                     for t in mapping.tuples]

    def _prepare(self, pattern):
        arr = _as_pattern(pattern, self.entry_size, self.base)
        if self.rams is None:
            if self.mapping is None:
                self.mapping = make_mapping(
                    arr.size, self.address_size, self.seed,
                    self.complete_address_size)
            self._adopt_mapping(self.mapping)
        return arr, self.mapping.addresses(arr, self.base)

    def train(self, pattern, y):
        y = float(y)
        if not math.isfinite(y):
            raise InputError("target must be finite")
        _, addrs = self._prepare(pattern)
        for ram, addr in zip(self.rams, addrs):
            cell = ram.cells.get(addr)
            if cell is None:
                ram.cells[addr] = [1, y]
            else:
                cell[0] += 1
                cell[1] += y
        self.trained_count += 1

    def _admit_mask(self, arr):
        digits = self.mapping.digit_matrix(arr)
        ones = digits.sum(axis=1)
        zeros = digits.shape[1] - ones
        return (zeros >= self.min_zero) & (ones >= self.min_one)

    def _accessed_cells(self, arr, addrs):
        mask = self._admit_mask(arr)
        cells = []
        for ram, addr, ok in zip(self.rams, addrs, mask):
            if not ok:
                continue
            cell = ram.cells.get(addr)
            if cell is not None and cell[0] >= 1:
                cells.append((cell[0], cell[1]))
        return cells

    def predict(self, pattern):
        """Predict a target; raises NoInformationError when no accessed
        cell passes the counter and digit filters."""
        if self.trained_count == 0:
            raise NoInformationError("model has not been trained")
        arr, addrs = self._prepare(pattern)
        cells = self._accessed_cells(arr, addrs)
        if not cells:
            raise NoInformationError("no trained cell matches this pattern")
        return apply_mean(self.mean, cells, self.power)

    def stats(self):
        cells = 0 if self.rams is None else sum(len(r.cells) for r in self.rams)
        return {"rams": 0 if self.rams is None else len(self.rams),
                "cells": cells,
                "trainedCount": self.trained_count}

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
        return (f"RegressionWisard(address_size={self.address_size}, "
                f"mean={self.mean!r})")


class ClusRegressionWisard:
    """Clustered regression: several predictors behind one retina.

    Training routes each example to the predictors similar enough to
    accept it, growing a new one (up to ``limit``) when none does;
    prediction routes to the single most similar predictor.  Similarity
    is the fraction of memory nodes whose addressed cell has been
    written at least once.
    """

    def __init__(self, address_size, min_score, threshold, limit, *,
                 mean="simple", power=2.0, min_zero=0, min_one=0,
                 complete_address_size=False, seed=0):
        address_size = int(address_size)
        if address_size < 1:
            raise InputError("address_size must be >= 1")
        min_score = float(min_score)
        if not 0.0 <= min_score <= 1.0:
            raise InputError("min_score must lie in [0, 1]")
        threshold = int(threshold)
        if threshold < 1:
            raise InputError("threshold must be >= 1")
        limit = int(limit)
        if limit < 1:
            raise InputError("limit must be >= 1")
        self.mean, self.power = _check_mean(mean, power)
        min_zero = int(min_zero)
        min_one = int(min_one)
        if min_zero < 0 or min_one < 0:
            raise InputError("min_zero and min_one must be >= 0")
        self.address_size = address_size
        self.min_score = min_score
        self.threshold = threshold
        self.limit = limit
        self.min_zero = min_zero
        self.min_one = min_one
        self.complete_address_size = bool(complete_address_size)
        self.seed = int(seed)
        self.base = 2
        self.entry_size = None
        self.mapping = None
        self.predictors = []

    def _prepare(self, pattern):
        arr = _as_pattern(pattern, self.entry_size, self.base)
        if self.entry_size is None:
            if self.mapping is None:
                self.mapping = make_mapping(
                    arr.size, self.address_size, self.seed,
                    self.complete_address_size)
            self.entry_size = self.mapping.entry_size
        return arr, self.mapping.addresses(arr, self.base)

    def _new_predictor(self):
        predictor = RegressionWisard(
            self.address_size, mean=self.mean, power=self.power,
            min_zero=self.min_zero, min_one=self.min_one,
            complete_address_size=self.complete_address_size, seed=self.seed)
        predictor._adopt_mapping(self.mapping)
        return predictor

    def acceptance_threshold(self, trained_count):
        grown = self.min_score + (trained_count / self.threshold) * (1.0 - self.min_score)
        return min(1.0, grown)

    @staticmethod
    def _similarity(predictor, addrs):
        hits = sum(1 for ram, addr in zip(predictor.rams, addrs)
                   if ram.cells.get(addr, (0,))[0] >= 1)
        return hits / len(predictor.rams)

    def train(self, pattern, y):
        """Learn an example under the growth policy."""
        y = float(y)
        if not math.isfinite(y):
            raise InputError("target must be finite")
        arr, addrs = self._prepare(pattern)
        if not self.predictors:
            predictor = self._new_predictor()
            self.predictors.append(predictor)
            predictor.train(arr, y)
            return
        sims = [self._similarity(p, addrs) for p in self.predictors]
        accepted = [p for p, s in zip(self.predictors, sims)
                    if s >= self.acceptance_threshold(p.trained_count)]
        if accepted:
            for p in accepted:
                p.train(arr, y)
        elif len(self.predictors) < self.limit:
            predictor = self._new_predictor()
            self.predictors.append(predictor)
            predictor.train(arr, y)
        else:
            self.predictors[int(np.argmax(sims))].train(arr, y)

    def predict(self, pattern):
        """Predict with the most similar predictor (lowest index on ties)."""
        if not self.predictors:
            raise ModelError("model has no predictors yet")
        arr, addrs = self._prepare(pattern)
        sims = [self._similarity(p, addrs) for p in self.predictors]
        return self.predictors[int(np.argmax(sims))].predict(arr)

    def stats(self):
        return {"predictors": len(self.predictors),
                "cells": sum(p.stats()["cells"] for p in self.predictors),
                "trainedCounts": [p.trained_count for p in self.predictors]}

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
        return (f"ClusRegressionWisard(address_size={self.address_size}, "
                f"predictors={len(self.predictors)})")

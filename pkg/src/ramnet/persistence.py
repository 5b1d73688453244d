"""Model documents: JSON save and load for every model and binarizer.

A document is one JSON object with five fields: ``formatVersion``,
``modelType``, ``params``, ``mapping`` and ``content``.  Serialization is
canonical (sorted keys, compact separators, shortest-round-trip reals,
addresses as decimal strings), so saving the same model state always
produces the same bytes.  Loading validates strictly and reports failures
as distinct error kinds.
"""

import json
import math

from .cluswisard import ClusWisard
from .encoding import KernelCanvas, MeanThresholding, Thermometer, Thresholding
from .errors import (AddressRangeError, CounterValueError, FormatVersionError,
                     ParseError, RamnetError, SchemaError,
                     UnknownModelTypeError)
from .mapping import TupleMapping
from .regression import ClusRegressionWisard, RegressionWisard
from .wisard import Discriminator, Wisard

__all__ = ["FORMAT_VERSION", "MODEL_TYPES", "save_model", "load_model"]

FORMAT_VERSION = 1

MODEL_TYPES = ("wisard", "cluswisard", "regressionWisard",
               "clusRegressionWisard", "thermometer", "kernelCanvas",
               "thresholding", "meanThresholding")

_DOCUMENT_KEYS = {"formatVersion", "modelType", "params", "mapping", "content"}


# -- saving --------------------------------------------------------------

def _mapping_field(mapping):
    return None if mapping is None else [list(t) for t in mapping.tuples]


def _classifier_cells(discriminator):
    return [{str(addr): count for addr, count in ram.cells.items()}
            for ram in discriminator.rams]


def _regression_cells(predictor):
    return [{str(addr): [cell[0], cell[1]] for addr, cell in ram.cells.items()}
            for ram in predictor.rams]


def _document(model):
    if isinstance(model, Wisard):
        params = {
            "addressSize": model.address_size,
            "base": model.base,
            "ignoreZero": model.ignore_zero,
            "balanced": model.balanced,
            "completeAddressSize": model.complete_address_size,
            "seed": model.seed,
            "entrySize": model.entry_size,
            "rngState": list(model._tie_rng.state),
        }
        content = {label: {"trainedCount": disc.trained_count,
                           "rams": _classifier_cells(disc)}
                   for label, disc in model.discriminators.items()}
        return "wisard", params, model.mapping, content
    if isinstance(model, ClusWisard):
        params = {
            "addressSize": model.address_size,
            "minScore": model.min_score,
            "threshold": model.threshold,
            "discriminatorsLimit": model.discriminators_limit,
            "completeAddressSize": model.complete_address_size,
            "seed": model.seed,
            "entrySize": model.entry_size,
            "rngState": list(model._tie_rng.state),
        }
        content = {label: [{"trainedCount": disc.trained_count,
                            "rams": _classifier_cells(disc)}
                           for disc in discs]
                   for label, discs in model.clusters.items()}
        return "cluswisard", params, model.mapping, content
    if isinstance(model, RegressionWisard):
        params = {
            "addressSize": model.address_size,
            "mean": model.mean,
            "power": model.power,
            "minZero": model.min_zero,
            "minOne": model.min_one,
            "completeAddressSize": model.complete_address_size,
            "seed": model.seed,
            "entrySize": model.entry_size,
        }
        content = {}
        if model.trained_count:
            content = {"trainedCount": model.trained_count,
                       "rams": _regression_cells(model)}
        return "regressionWisard", params, model.mapping, content
    if isinstance(model, ClusRegressionWisard):
        params = {
            "addressSize": model.address_size,
            "minScore": model.min_score,
            "threshold": model.threshold,
            "limit": model.limit,
            "mean": model.mean,
            "power": model.power,
            "minZero": model.min_zero,
            "minOne": model.min_one,
            "completeAddressSize": model.complete_address_size,
            "seed": model.seed,
            "entrySize": model.entry_size,
        }
        content = {}
        if model.predictors:
            content = {"predictors": [{"trainedCount": p.trained_count,
                                       "rams": _regression_cells(p)}
                                      for p in model.predictors]}
        return "clusRegressionWisard", params, model.mapping, content
    if isinstance(model, Thermometer):
        params = {"size": model.size, "minimum": model.minimum,
                  "maximum": model.maximum}
        return "thermometer", params, None, {}
    if isinstance(model, KernelCanvas):
        params = {"dim": model.dim, "numKernels": model.num_kernels,
                  "bitsByKernel": model.bits_by_kernel, "seed": model.seed}
        return "kernelCanvas", params, None, {}
    if isinstance(model, Thresholding):
        return "thresholding", {"threshold": model.threshold}, None, {}
    if isinstance(model, MeanThresholding):
        return "meanThresholding", {}, None, {}
    raise SchemaError(f"cannot serialize objects of type {type(model).__name__}")


def save_model(model):
    """Serialize a model or binarizer to canonical JSON text."""
    model_type, params, mapping, content = _document(model)
    doc = {
        "formatVersion": FORMAT_VERSION,
        "modelType": model_type,
        "params": params,
        "mapping": _mapping_field(mapping),
        "content": content,
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


# -- loading -------------------------------------------------------------

def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


def _take(params, key, what):
    if key not in params:
        raise SchemaError(f"{what}: missing params key {key!r}")
    return params.pop(key)


def _take_int(params, key, what, minimum=None):
    value = _take(params, key, what)
    if not _is_int(value):
        raise SchemaError(f"{what}: params key {key!r} must be an integer")
    if minimum is not None and value < minimum:
        raise SchemaError(f"{what}: params key {key!r} must be >= {minimum}")
    return value


def _take_real(params, key, what):
    value = _take(params, key, what)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{what}: params key {key!r} must be a number")
    value = float(value)
    if not math.isfinite(value):
        raise SchemaError(f"{what}: params key {key!r} must be finite")
    return value


def _take_bool(params, key, what):
    value = _take(params, key, what)
    if not isinstance(value, bool):
        raise SchemaError(f"{what}: params key {key!r} must be a boolean")
    return value


def _take_str(params, key, what):
    value = _take(params, key, what)
    if not isinstance(value, str):
        raise SchemaError(f"{what}: params key {key!r} must be a string")
    return value


def _take_entry_size(params, what, mapping_present):
    value = _take(params, "entrySize", what)
    if value is None:
        if mapping_present:
            raise SchemaError(f"{what}: entrySize is null but a mapping is present")
        return None
    if not _is_int(value) or value < 1:
        raise SchemaError(f"{what}: entrySize must be a positive integer or null")
    if not mapping_present:
        raise SchemaError(f"{what}: entrySize is set but the mapping is null")
    return value


def _take_rng_state(params, what):
    value = _take(params, "rngState", what)
    if (not isinstance(value, list) or len(value) != 4
            or not all(_is_int(w) and 0 <= w < 1 << 64 for w in value)):
        raise SchemaError(f"{what}: rngState must be four 64-bit integers")
    if not any(value):
        raise SchemaError(f"{what}: rngState must not be all zero")
    return value


def _no_leftovers(params, what):
    if params:
        extra = ", ".join(sorted(params))
        raise SchemaError(f"{what}: unknown params keys: {extra}")


def _build_mapping(raw, entry_size, address_size, what):
    if raw is None:
        return None
    if not isinstance(raw, list):
        raise SchemaError(f"{what}: mapping must be an array of index arrays")
    for t in raw:
        if not isinstance(t, list) or not all(_is_int(i) for i in t):
            raise SchemaError(f"{what}: mapping must be an array of index arrays")
    try:
        return TupleMapping(entry_size, address_size, raw)
    except RamnetError as exc:
        raise SchemaError(f"{what}: invalid mapping: {exc}") from exc


def _check_content_dict(content, mapping, what):
    if not isinstance(content, dict):
        raise SchemaError(f"{what}: content must be an object")
    if content and mapping is None:
        raise SchemaError(f"{what}: content requires a mapping")


def _parse_address(key, bound, what):
    try:
        addr = int(key)
    except ValueError as exc:
        raise SchemaError(f"{what}: cell address {key!r} is not decimal") from exc
    if str(addr) != key:
        raise SchemaError(f"{what}: cell address {key!r} is not canonical decimal")
    if addr < 0 or addr >= bound:
        raise AddressRangeError(
            f"{what}: cell address {addr} outside [0, {bound})")
    return addr


def _parse_counter(value, what):
    if not _is_int(value):
        raise SchemaError(f"{what}: cell counter must be an integer")
    if value < 1:
        raise CounterValueError(f"{what}: cell counter {value} must be >= 1")
    return value


def _load_classifier_rams(raw, mapping, bound, what):
    if (not isinstance(raw, list) or len(raw) != mapping.num_tuples
            or not all(isinstance(r, dict) for r in raw)):
        raise SchemaError(
            f"{what}: rams must be an array of {mapping.num_tuples} cell maps")
    rams = []
    for cellmap in raw:
        cells = {}
        for key, value in cellmap.items():
            addr = _parse_address(key, bound, what)
            cells[addr] = _parse_counter(value, what)
        rams.append(cells)
    return rams


def _load_regression_rams(raw, mapping, bound, what):
    if (not isinstance(raw, list) or len(raw) != mapping.num_tuples
            or not all(isinstance(r, dict) for r in raw)):
        raise SchemaError(
            f"{what}: rams must be an array of {mapping.num_tuples} cell maps")
    rams = []
    for cellmap in raw:
        cells = {}
        for key, value in cellmap.items():
            addr = _parse_address(key, bound, what)
            if not isinstance(value, list) or len(value) != 2:
                raise SchemaError(
                    f"{what}: regression cells must be [counter, partialSum]")
            counter = _parse_counter(value[0], what)
            partial = value[1]
            if isinstance(partial, bool) or not isinstance(partial, (int, float)):
                raise SchemaError(f"{what}: cell partial sum must be a number")
            partial = float(partial)
            if not math.isfinite(partial):
                raise SchemaError(f"{what}: cell partial sum must be finite")
            cells[addr] = [counter, partial]
        rams.append(cells)
    return rams


def _take_trained_count(payload, what):
    value = payload.pop("trainedCount", None)
    if not _is_int(value) or value < 0:
        raise SchemaError(f"{what}: trainedCount must be a non-negative integer")
    return value


def _classifier_payload(payload, mapping, bound, model, what):
    if not isinstance(payload, dict) or set(payload) != {"trainedCount", "rams"}:
        raise SchemaError(
            f"{what}: discriminators need exactly trainedCount and rams")
    payload = dict(payload)
    trained = _take_trained_count(payload, what)
    rams = _load_classifier_rams(payload["rams"], mapping, bound, what)
    disc = Discriminator(mapping, base=model.base, ignore_zero=model.ignore_zero)
    disc.trained_count = trained
    for node, cells in zip(disc.rams, rams):
        node.cells = cells
    return disc


def _load_wisard(params, raw_mapping, content):
    what = "wisard"
    address_size = _take_int(params, "addressSize", what, minimum=1)
    base = _take_int(params, "base", what, minimum=2)
    ignore_zero = _take_bool(params, "ignoreZero", what)
    balanced = _take_bool(params, "balanced", what)
    complete = _take_bool(params, "completeAddressSize", what)
    seed = _take_int(params, "seed", what)
    entry_size = _take_entry_size(params, what, raw_mapping is not None)
    rng_state = _take_rng_state(params, what)
    _no_leftovers(params, what)
    mapping = _build_mapping(raw_mapping, entry_size, address_size, what)
    _check_content_dict(content, mapping, what)
    model = Wisard(address_size, base=base, ignore_zero=ignore_zero,
                   balanced=balanced, complete_address_size=complete, seed=seed)
    if mapping is not None:
        model.mapping = mapping
        model.entry_size = mapping.entry_size
    bound = base ** address_size
    for label in sorted(content):
        model.discriminators[label] = _classifier_payload(
            content[label], mapping, bound, model, what)
    model._tie_rng.state = rng_state
    return model


def _load_cluswisard(params, raw_mapping, content):
    what = "cluswisard"
    address_size = _take_int(params, "addressSize", what, minimum=1)
    min_score = _take_real(params, "minScore", what)
    threshold = _take_int(params, "threshold", what, minimum=1)
    limit = _take_int(params, "discriminatorsLimit", what, minimum=1)
    complete = _take_bool(params, "completeAddressSize", what)
    seed = _take_int(params, "seed", what)
    entry_size = _take_entry_size(params, what, raw_mapping is not None)
    rng_state = _take_rng_state(params, what)
    _no_leftovers(params, what)
    mapping = _build_mapping(raw_mapping, entry_size, address_size, what)
    _check_content_dict(content, mapping, what)
    try:
        model = ClusWisard(address_size, min_score, threshold, limit,
                           complete_address_size=complete, seed=seed)
    except RamnetError as exc:
        raise SchemaError(f"{what}: invalid params: {exc}") from exc
    if mapping is not None:
        model.mapping = mapping
        model.entry_size = mapping.entry_size
    bound = model.base ** address_size
    for label in sorted(content):
        payloads = content[label]
        if not isinstance(payloads, list) or not payloads:
            raise SchemaError(
                f"{what}: each label needs a non-empty discriminator array")
        model.clusters[label] = [
            _classifier_payload(p, mapping, bound, model, what)
            for p in payloads]
    model._tie_rng.state = rng_state
    return model


def _regression_params(params, what):
    mean = _take_str(params, "mean", what)
    power = _take_real(params, "power", what)
    min_zero = _take_int(params, "minZero", what, minimum=0)
    min_one = _take_int(params, "minOne", what, minimum=0)
    return mean, power, min_zero, min_one


def _fill_regression(predictor, payload, mapping, bound, what):
    if not isinstance(payload, dict) or set(payload) != {"trainedCount", "rams"}:
        raise SchemaError(f"{what}: predictors need exactly trainedCount and rams")
    payload = dict(payload)
    trained = _take_trained_count(payload, what)
    rams = _load_regression_rams(payload["rams"], mapping, bound, what)
    predictor._adopt_mapping(mapping)
    predictor.trained_count = trained
    for node, cells in zip(predictor.rams, rams):
        node.cells = cells


def _load_regression_wisard(params, raw_mapping, content):
    what = "regressionWisard"
    address_size = _take_int(params, "addressSize", what, minimum=1)
    mean, power, min_zero, min_one = _regression_params(params, what)
    complete = _take_bool(params, "completeAddressSize", what)
    seed = _take_int(params, "seed", what)
    entry_size = _take_entry_size(params, what, raw_mapping is not None)
    _no_leftovers(params, what)
    mapping = _build_mapping(raw_mapping, entry_size, address_size, what)
    _check_content_dict(content, mapping, what)
    try:
        model = RegressionWisard(address_size, mean=mean, power=power,
                                 min_zero=min_zero, min_one=min_one,
                                 complete_address_size=complete, seed=seed)
    except RamnetError as exc:
        raise SchemaError(f"{what}: invalid params: {exc}") from exc
    if mapping is not None:
        model._adopt_mapping(mapping)
    if content:
        _fill_regression(model, content, mapping,
                         model.base ** address_size, what)
    return model


def _load_clus_regression_wisard(params, raw_mapping, content):
    what = "clusRegressionWisard"
    address_size = _take_int(params, "addressSize", what, minimum=1)
    min_score = _take_real(params, "minScore", what)
    threshold = _take_int(params, "threshold", what, minimum=1)
    limit = _take_int(params, "limit", what, minimum=1)
    mean, power, min_zero, min_one = _regression_params(params, what)
    complete = _take_bool(params, "completeAddressSize", what)
    seed = _take_int(params, "seed", what)
    entry_size = _take_entry_size(params, what, raw_mapping is not None)
    _no_leftovers(params, what)
    mapping = _build_mapping(raw_mapping, entry_size, address_size, what)
    _check_content_dict(content, mapping, what)
    try:
        model = ClusRegressionWisard(address_size, min_score, threshold, limit,
                                     mean=mean, power=power, min_zero=min_zero,
                                     min_one=min_one,
                                     complete_address_size=complete, seed=seed)
    except RamnetError as exc:
        raise SchemaError(f"{what}: invalid params: {exc}") from exc
    if mapping is not None:
        model.mapping = mapping
        model.entry_size = mapping.entry_size
    if content:
        if set(content) != {"predictors"}:
            raise SchemaError(f"{what}: content must hold exactly predictors")
        payloads = content["predictors"]
        if not isinstance(payloads, list) or not payloads:
            raise SchemaError(f"{what}: predictors must be a non-empty array")
        bound = model.base ** address_size
        for payload in payloads:
            predictor = model._new_predictor()
            _fill_regression(predictor, payload, mapping, bound, what)
            model.predictors.append(predictor)
    return model


def _load_binarizer(model_type, params, raw_mapping, content):
    what = model_type
    if raw_mapping is not None:
        raise SchemaError(f"{what}: binarizer documents have a null mapping")
    if content != {}:
        raise SchemaError(f"{what}: binarizer documents have empty content")
    try:
        if model_type == "thermometer":
            size = _take_int(params, "size", what, minimum=1)
            minimum = _take_real(params, "minimum", what)
            maximum = _take_real(params, "maximum", what)
            _no_leftovers(params, what)
            return Thermometer(size, minimum, maximum)
        if model_type == "kernelCanvas":
            dim = _take_int(params, "dim", what, minimum=1)
            kernels = _take_int(params, "numKernels", what, minimum=1)
            bits = _take_int(params, "bitsByKernel", what, minimum=1)
            seed = _take_int(params, "seed", what)
            _no_leftovers(params, what)
            return KernelCanvas(dim, kernels, bits_by_kernel=bits, seed=seed)
        if model_type == "thresholding":
            threshold = _take_real(params, "threshold", what)
            _no_leftovers(params, what)
            return Thresholding(threshold)
        _no_leftovers(params, what)
        return MeanThresholding()
    except RamnetError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"{what}: invalid params: {exc}") from exc


def load_model(text):
    """Rebuild a model or binarizer from document text.

    Raises ParseError, FormatVersionError, UnknownModelTypeError,
    SchemaError, AddressRangeError or CounterValueError; a loaded model
    behaves identically to the one that was saved.
    """
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, TypeError) as exc:
        raise ParseError(f"model document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("model document must be a JSON object")
    if set(doc) != _DOCUMENT_KEYS:
        raise SchemaError(
            "model document must have exactly the keys "
            + ", ".join(sorted(_DOCUMENT_KEYS)))
    version = doc["formatVersion"]
    if not _is_int(version):
        raise SchemaError("formatVersion must be an integer")
    if version != FORMAT_VERSION:
        raise FormatVersionError(f"unsupported formatVersion {version}")
    model_type = doc["modelType"]
    if not isinstance(model_type, str):
        raise SchemaError("modelType must be a string")
    if model_type not in MODEL_TYPES:
        raise UnknownModelTypeError(f"unknown modelType {model_type!r}")
    params = doc["params"]
    if not isinstance(params, dict):
        raise SchemaError("params must be an object")
    params = dict(params)
    raw_mapping = doc["mapping"]
    content = doc["content"]
    if model_type == "wisard":
        return _load_wisard(params, raw_mapping, content)
    if model_type == "cluswisard":
        return _load_cluswisard(params, raw_mapping, content)
    if model_type == "regressionWisard":
        return _load_regression_wisard(params, raw_mapping, content)
    if model_type == "clusRegressionWisard":
        return _load_clus_regression_wisard(params, raw_mapping, content)
    return _load_binarizer(model_type, params, raw_mapping, content)

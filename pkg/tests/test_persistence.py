"""Tests for model documents: canonical bytes, round trips, strict loads."""

import json

import numpy as np
import pytest

from ramnet import (
    AddressRangeError,
    ClusRegressionWisard,
    ClusWisard,
    CounterValueError,
    FormatVersionError,
    KernelCanvas,
    MeanThresholding,
    ParseError,
    PersistenceError,
    RegressionWisard,
    SchemaError,
    Thermometer,
    Thresholding,
    UnknownModelTypeError,
    Wisard,
    load_model,
    save_model,
)


def trained_wisard(seed=5):
    model = Wisard(2, seed=seed)
    rng = np.random.default_rng(seed)
    for _ in range(25):
        model.train(rng.integers(0, 2, size=8), str(rng.integers(0, 3)))
    return model


def trained_clus(seed=6):
    model = ClusWisard(2, 0.6, 4, 3, seed=seed)
    rng = np.random.default_rng(seed)
    for _ in range(25):
        model.train(rng.integers(0, 2, size=8), "AB"[int(rng.integers(0, 2))])
    return model


def trained_rew(seed=7):
    model = RegressionWisard(2, mean="harmonic", min_zero=1, seed=seed)
    rng = np.random.default_rng(seed)
    for _ in range(25):
        model.train(rng.integers(0, 2, size=8), float(rng.uniform(0.5, 9.5)))
    return model


def trained_crew(seed=8):
    model = ClusRegressionWisard(2, 0.6, 4, 3, mean="power", seed=seed)
    rng = np.random.default_rng(seed)
    for _ in range(25):
        model.train(rng.integers(0, 2, size=8), float(rng.uniform(0.5, 9.5)))
    return model


class TestDocumentShape:
    def test_exactly_five_keys(self):
        doc = json.loads(save_model(trained_wisard()))
        assert set(doc) == {"formatVersion", "modelType", "params", "mapping",
                            "content"}
        assert doc["formatVersion"] == 1
        assert doc["modelType"] == "wisard"

    def test_canonical_encoding(self):
        """Sorted keys, compact separators, no trailing whitespace."""
        text = save_model(trained_clus())
        assert text == json.dumps(json.loads(text), sort_keys=True,
                                  separators=(",", ":"))

    def test_addresses_are_decimal_strings(self):
        doc = json.loads(save_model(trained_wisard()))
        for payload in doc["content"].values():
            for cellmap in payload["rams"]:
                for key in cellmap:
                    assert key == str(int(key))

    def test_fresh_model_has_empty_content_and_null_mapping(self):
        doc = json.loads(save_model(Wisard(2, seed=1)))
        assert doc["content"] == {}
        assert doc["mapping"] is None
        assert doc["params"]["entrySize"] is None
        doc = json.loads(save_model(RegressionWisard(2)))
        assert doc["content"] == {}
        assert doc["mapping"] is None

    def test_rng_state_saved_for_classifiers(self):
        model = trained_wisard()
        doc = json.loads(save_model(model))
        assert doc["params"]["rngState"] == list(model._tie_rng.state)
        assert "rngState" not in json.loads(save_model(trained_rew()))["params"]


class TestRoundTrip:
    def test_wisard_behavioral(self):
        model = trained_wisard()
        clone = load_model(save_model(model))
        rng = np.random.default_rng(0)
        assert clone.labels() == model.labels()
        for _ in range(30):
            probe = rng.integers(0, 2, size=8)
            assert clone.score(probe, 1).raw == model.score(probe, 1).raw
            assert clone.classify(probe) == model.classify(probe)

    def test_wisard_tie_draws_continue_identically(self):
        """The restored generator state keeps post-load draws in sync."""
        model = Wisard(2, seed=9)
        model.train([1, 1, 0, 0], "A")
        model.train([1, 1, 0, 0], "B")
        model.classify([1, 1, 0, 0])
        clone = load_model(save_model(model))
        for _ in range(10):
            assert clone.classify([1, 1, 0, 0]) == model.classify([1, 1, 0, 0])

    def test_cluswisard_behavioral(self):
        model = trained_clus()
        clone = load_model(save_model(model))
        rng = np.random.default_rng(1)
        assert clone.stats() == model.stats()
        for _ in range(30):
            probe = rng.integers(0, 2, size=8)
            assert clone.classify(probe) == model.classify(probe)
            assert clone.classify_unsupervised(probe) == \
                model.classify_unsupervised(probe)

    def test_regression_behavioral(self):
        model = trained_rew()
        clone = load_model(save_model(model))
        rng = np.random.default_rng(2)
        for _ in range(30):
            probe = rng.integers(0, 2, size=8)
            try:
                expected = model.predict(probe)
            except Exception as exc:
                with pytest.raises(type(exc)):
                    clone.predict(probe)
            else:
                assert clone.predict(probe) == expected

    def test_clus_regression_behavioral(self):
        model = trained_crew()
        clone = load_model(save_model(model))
        assert clone.stats() == model.stats()
        rng = np.random.default_rng(3)
        for _ in range(30):
            probe = rng.integers(0, 2, size=8)
            try:
                expected = model.predict(probe)
            except Exception as exc:
                with pytest.raises(type(exc)):
                    clone.predict(probe)
            else:
                assert clone.predict(probe) == expected

    def test_binarizers_round_trip(self):
        rng = np.random.default_rng(4)
        data = rng.uniform(-2.0, 2.0, size=6)
        points = rng.uniform(0.0, 1.0, size=(4, 2))
        for encoder in (Thermometer(4, -2.0, 2.0),
                        Thresholding(0.25),
                        MeanThresholding(),
                        KernelCanvas(2, 8, bits_by_kernel=3, seed=11)):
            clone = load_model(save_model(encoder))
            source = points if isinstance(encoder, KernelCanvas) else data
            assert clone.transform(source).tolist() == \
                encoder.transform(source).tolist()

    def test_save_load_save_is_identity(self):
        models = [trained_wisard(), trained_clus(), trained_rew(),
                  trained_crew(), Wisard(3, seed=2), RegressionWisard(2),
                  Thermometer(8, 0.0, 1.0), Thresholding(0.5),
                  MeanThresholding(), KernelCanvas(2, 4, seed=3)]
        for model in models:
            text = save_model(model)
            assert save_model(load_model(text)) == text

    def test_byte_determinism_for_identical_state(self):
        assert save_model(trained_wisard(31)) == save_model(trained_wisard(31))
        assert save_model(trained_crew(32)) == save_model(trained_crew(32))

    def test_from_json_checks_model_kind(self):
        text = save_model(trained_wisard())
        assert isinstance(Wisard.from_json(text), Wisard)
        with pytest.raises(Exception):
            ClusWisard.from_json(text)


def corrupt(model, mutate):
    doc = json.loads(save_model(model))
    mutate(doc)
    return json.dumps(doc)


class TestLoadErrors:
    def test_truncated_text_is_parse_error(self):
        text = save_model(trained_wisard())
        with pytest.raises(ParseError):
            load_model(text[:len(text) // 2])

    def test_non_object_document_rejected(self):
        with pytest.raises(SchemaError):
            load_model("[]")

    def test_unknown_format_version(self):
        with pytest.raises(FormatVersionError):
            load_model(corrupt(trained_wisard(),
                               lambda d: d.update(formatVersion=999)))

    def test_unknown_model_type(self):
        with pytest.raises(UnknownModelTypeError):
            load_model(corrupt(trained_wisard(),
                               lambda d: d.update(modelType="perceptron")))

    def test_missing_top_level_key(self):
        with pytest.raises(SchemaError):
            load_model(corrupt(trained_wisard(),
                               lambda d: d.pop("params")))

    def test_extra_top_level_key(self):
        with pytest.raises(SchemaError):
            load_model(corrupt(trained_wisard(),
                               lambda d: d.update(extra=1)))

    def test_missing_params_key(self):
        with pytest.raises(SchemaError):
            load_model(corrupt(trained_wisard(),
                               lambda d: d["params"].pop("seed")))

    def test_unknown_params_key(self):
        with pytest.raises(SchemaError):
            load_model(corrupt(trained_wisard(),
                               lambda d: d["params"].update(bogus=True)))

    def test_address_out_of_range(self):
        def mutate(doc):
            label = sorted(doc["content"])[0]
            doc["content"][label]["rams"][0]["4"] = 1
        with pytest.raises(AddressRangeError):
            load_model(corrupt(trained_wisard(), mutate))

    def test_non_canonical_address(self):
        def mutate(doc):
            label = sorted(doc["content"])[0]
            doc["content"][label]["rams"][0]["01"] = 1
        with pytest.raises(SchemaError):
            load_model(corrupt(trained_wisard(), mutate))

    def test_counter_below_one(self):
        def mutate(doc):
            label = sorted(doc["content"])[0]
            cellmap = doc["content"][label]["rams"][0]
            cellmap[sorted(cellmap)[0]] = 0
        with pytest.raises(CounterValueError):
            load_model(corrupt(trained_wisard(), mutate))

    def test_negative_counter(self):
        def mutate(doc):
            label = sorted(doc["content"])[0]
            cellmap = doc["content"][label]["rams"][0]
            cellmap[sorted(cellmap)[0]] = -3
        with pytest.raises(CounterValueError):
            load_model(corrupt(trained_wisard(), mutate))

    def test_wrong_ram_count(self):
        def mutate(doc):
            label = sorted(doc["content"])[0]
            doc["content"][label]["rams"].append({})
        with pytest.raises(SchemaError):
            load_model(corrupt(trained_wisard(), mutate))

    def test_bad_rng_state(self):
        with pytest.raises(SchemaError):
            load_model(corrupt(trained_wisard(),
                               lambda d: d["params"].update(rngState=[1, 2, 3])))
        with pytest.raises(SchemaError):
            load_model(corrupt(trained_wisard(),
                               lambda d: d["params"].update(rngState=[0, 0, 0, 0])))

    def test_entry_size_mapping_consistency(self):
        with pytest.raises(SchemaError):
            load_model(corrupt(trained_wisard(),
                               lambda d: d["params"].update(entrySize=None)))
        with pytest.raises(SchemaError):
            load_model(corrupt(Wisard(2, seed=1),
                               lambda d: d["params"].update(entrySize=8)))

    def test_content_without_mapping(self):
        def mutate(doc):
            doc["mapping"] = None
            doc["params"]["entrySize"] = None
        with pytest.raises(SchemaError):
            load_model(corrupt(trained_wisard(), mutate))

    def test_invalid_mapping_entries(self):
        with pytest.raises(SchemaError):
            load_model(corrupt(trained_wisard(),
                               lambda d: d["mapping"].__setitem__(0, [0, 99])))

    def test_regression_cell_shape(self):
        def mutate(doc):
            cellmap = doc["content"]["rams"][0]
            cellmap[sorted(cellmap)[0]] = [1]
        with pytest.raises(SchemaError):
            load_model(corrupt(trained_rew(), mutate))

    def test_regression_partial_sum_must_be_finite(self):
        def mutate(doc):
            cellmap = doc["content"]["rams"][0]
            cellmap[sorted(cellmap)[0]] = [1, "1e999"]
        with pytest.raises(SchemaError):
            load_model(corrupt(trained_rew(), mutate))

    def test_binarizer_must_have_empty_content(self):
        with pytest.raises(SchemaError):
            load_model(corrupt(Thermometer(4, 0.0, 1.0),
                               lambda d: d.update(content={"x": 1})))

    def test_error_hierarchy(self):
        """Specific kinds remain catchable through the persistence root."""
        assert issubclass(AddressRangeError, SchemaError)
        assert issubclass(CounterValueError, SchemaError)
        for kind in (ParseError, FormatVersionError, UnknownModelTypeError,
                     SchemaError):
            assert issubclass(kind, PersistenceError)

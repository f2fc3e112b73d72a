"""Tests for instance file parsing and writing."""

import json

import numpy as np
import pytest

from src.services.instance_io import (
    dumps,
    load_instance,
    parse_ensemble,
    parse_instance,
    parse_instrument,
    write_instance,
)
from src.utils.errors import InstanceValidationError
from src.utils.matrix_codec import FORMAT_TAG


def document(**overrides):
    doc = {
        "format": FORMAT_TAG,
        "name": "pair",
        "ensemble": {
            "dim": 2,
            "entries": [
                {"label": "0", "p": 0.5, "state": [1, 0]},
                {"label": "+", "p": 0.5, "state": [0.7071067811865476, 0.7071067811865476]},
            ],
        },
        "instrument": {"builtin": "von_neumann", "dim": 2},
    }
    doc.update(overrides)
    return doc


def path_of(call):
    with pytest.raises(InstanceValidationError) as info:
        call()
    return info.value.path


class TestParseInstance:
    def test_builtin_instance(self):
        instance = parse_instance(document())
        assert instance.name == "pair"
        assert instance.ensemble.labels == ["0", "+"]
        assert instance.instrument.labels == ["0", "1"]

    def test_format_tag_is_required(self):
        assert path_of(lambda: parse_instance(document(format="other/1"))) == "$.format"

    def test_missing_sections(self):
        doc = document()
        del doc["instrument"]
        assert path_of(lambda: parse_instance(doc)) == "$.instrument"

    def test_dimension_mismatch(self):
        doc = document(instrument={"builtin": "identity", "dim": 3})
        assert path_of(lambda: parse_instance(doc)) == "$.instrument"

    def test_bad_probability(self):
        doc = document()
        doc["ensemble"]["entries"][0]["p"] = -1
        assert path_of(lambda: parse_instance(doc)) == "$.ensemble.entries[0].p"

    def test_default_name(self):
        doc = document()
        del doc["name"]
        assert parse_instance(doc, default_name="fallback").name == "fallback"


class TestParseInstrument:
    def test_explicit_outcomes_get_index_labels(self):
        data = {
            "outcomes": [
                {"kraus": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]]},
                {"kraus": [[[[0, 0], [0, 0]], [[0, 0], [1, 0]]]]},
            ]
        }
        instr = parse_instrument(data)
        assert instr.labels == ["0", "1"]
        assert (instr.in_dim, instr.out_dim) == (2, 2)

    def test_incomplete_explicit_instrument(self):
        data = {"outcomes": [{"label": "a", "kraus": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]]}]}
        assert path_of(lambda: parse_instrument(data)) == "$.instrument"

    def test_unknown_builtin(self):
        assert path_of(lambda: parse_instrument({"builtin": "teleport"})) == "$.instrument.builtin"

    def test_builtin_parameters_are_checked(self):
        data = {"builtin": "depolarizing", "dim": 2}
        assert path_of(lambda: parse_instrument(data)) == "$.instrument.p"

    def test_out_of_range_parameter(self):
        data = {"builtin": "weak_measurement", "dim": 2, "strength": 2.0}
        assert path_of(lambda: parse_instrument(data)) == "$.instrument"

    def test_unitary_branches(self):
        x = [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]
        one = [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]
        instr = parse_instrument(
            {"builtin": "unitary_branches", "weights": [0.5, 0.5], "unitaries": [one, x]}
        )
        assert instr.n_outcomes == 2

    def test_unitary_branches_need_one_matrix_per_weight(self):
        data = {"builtin": "unitary_branches", "weights": [0.5, 0.5], "unitaries": []}
        assert path_of(lambda: parse_instrument(data)) == "$.instrument.unitaries"

    def test_von_neumann_basis(self):
        s = 0.7071067811865476
        basis = [[[s, 0], [s, 0]], [[s, 0], [-s, 0]]]
        instr = parse_instrument({"builtin": "von_neumann", "dim": 2, "basis": basis})
        assert np.allclose(instr.branch("0").effect(), np.full((2, 2), 0.5))


class TestParseEnsemble:
    def test_christandl_winter_builtin(self):
        rho = [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]
        s = parse_ensemble({"builtin": "christandl_winter", "rho": rho})
        assert len(s) == 4

    def test_christandl_winter_rank_deficient(self):
        rho = [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]
        data = {"builtin": "christandl_winter", "rho": rho}
        assert path_of(lambda: parse_ensemble(data)) == "$.ensemble.rho"

    def test_unknown_ensemble_builtin(self):
        assert path_of(lambda: parse_ensemble({"builtin": "sic"})) == "$.ensemble.builtin"


class TestFiles:
    def test_round_trip_through_disk(self, tmp_path):
        instance = parse_instance(document())
        path = write_instance(instance, tmp_path / "pair.json")
        loaded = load_instance(path)
        assert loaded.name == "pair"
        assert loaded.instrument.labels == instance.instrument.labels
        assert np.allclose(loaded.ensemble.probabilities, instance.ensemble.probabilities)
        for a, b in zip(loaded.ensemble.matrices, instance.ensemble.matrices):
            assert np.allclose(a, b)

    def test_name_defaults_to_file_stem(self, tmp_path):
        doc = document()
        del doc["name"]
        path = tmp_path / "stem_name.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        assert load_instance(path).name == "stem_name"

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        assert path_of(lambda: load_instance(path)) == "$"

    def test_missing_file(self, tmp_path):
        assert path_of(lambda: load_instance(tmp_path / "absent.json")) == "$"

    def test_dumps_is_deterministic(self):
        text = dumps({"b": 1, "a": [1, 2]})
        assert text.endswith("\n")
        assert text.index('"a"') < text.index('"b"')

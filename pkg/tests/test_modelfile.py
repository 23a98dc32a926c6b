"""Parsing of declarative model files and its failure modes."""

import os

import pytest

from rrwqbd.model import (
    FACE1,
    INTERIOR,
    JacksonParams,
    jackson_spec,
    validate_spec,
)
from rrwqbd.modelfile import ModelFileError, load_model, load_model_with_params

from conftest import MODELS


def write(tmp_path, text):
    path = tmp_path / "model.toml"
    path.write_text(text)
    return str(path)


def test_jackson_file_reproduces_the_programmatic_spec():
    path = os.path.join(MODELS, "jackson_symmetric.toml")
    spec, params = load_model_with_params(path)
    assert isinstance(params, JacksonParams)
    expected = jackson_spec(params)
    for region, law in expected.laws.items():
        assert spec.law(region).probs == law.probs


def test_general_file_keeps_laws_verbatim(tmp_path):
    path = write(tmp_path, """
kind = "general"
[origin]
"0,0" = 0.6
"1,0" = 0.2
"0,1" = 0.2
[face1]
"1,0" = 0.1
"0,1" = 0.15
"-1,0" = 0.5
"-1,1" = 0.25
[face2]
"1,0" = 0.15
"0,1" = 0.1
"0,-1" = 0.5
"1,-1" = 0.25
[interior]
"1,0" = 0.1
"0,1" = 0.1
"-1,0" = 0.35
"0,-1" = 0.35
"-1,1" = 0.05
"1,-1" = 0.05
""")
    spec, params = load_model_with_params(path)
    assert params is None
    assert spec.law(FACE1).probs[(-1, 1)] == 0.25
    assert spec.law(INTERIOR).probs[(1, -1)] == 0.05
    assert validate_spec(spec) == []


def test_load_model_returns_only_the_spec():
    path = os.path.join(MODELS, "jackson_a.toml")
    spec = load_model(path)
    assert validate_spec(spec) == []


def test_all_shipped_models_parse_and_validate():
    for name in sorted(os.listdir(MODELS)):
        spec = load_model(os.path.join(MODELS, name))
        assert validate_spec(spec) == [], name


def test_missing_kind_is_rejected(tmp_path):
    path = write(tmp_path, 'lambda1 = 0.1\n')
    with pytest.raises(ModelFileError, match="missing required key 'kind'"):
        load_model(path)


def test_unknown_kind_is_rejected(tmp_path):
    path = write(tmp_path, 'kind = "markov"\n')
    with pytest.raises(ModelFileError, match="jackson"):
        load_model(path)


def test_unknown_jackson_key_is_rejected(tmp_path):
    path = write(tmp_path, """
kind = "jackson"
lambda1 = 0.1
lambda2 = 0.1
sigma1 = 0.4
sigma2 = 0.4
q1 = 0.5
q2 = 0.5
mu = 3.0
""")
    with pytest.raises(ModelFileError, match="unknown keys.*mu"):
        load_model(path)


def test_missing_jackson_parameter_is_rejected(tmp_path):
    path = write(tmp_path, """
kind = "jackson"
lambda1 = 0.1
lambda2 = 0.1
sigma1 = 0.4
sigma2 = 0.4
q1 = 0.5
""")
    with pytest.raises(ModelFileError, match="missing jackson parameters"):
        load_model(path)


def test_non_numeric_parameter_is_rejected(tmp_path):
    path = write(tmp_path, """
kind = "jackson"
lambda1 = "fast"
lambda2 = 0.1
sigma1 = 0.4
sigma2 = 0.4
q1 = 0.5
q2 = 0.5
""")
    with pytest.raises(ModelFileError, match="must be a number"):
        load_model(path)


def test_out_of_range_routing_is_rejected(tmp_path):
    path = write(tmp_path, """
kind = "jackson"
lambda1 = 0.1
lambda2 = 0.1
sigma1 = 0.4
sigma2 = 0.4
q1 = 1.5
q2 = 0.5
""")
    with pytest.raises(ModelFileError, match="q1"):
        load_model(path)


def test_bad_offset_syntax_is_rejected(tmp_path):
    path = write(tmp_path, """
kind = "general"
[origin]
"0;0" = 1.0
[face1]
"0,0" = 1.0
[face2]
"0,0" = 1.0
[interior]
"0,0" = 1.0
""")
    with pytest.raises(ModelFileError, match="dx,dy"):
        load_model(path)


def test_offset_outside_unit_box_is_rejected(tmp_path):
    path = write(tmp_path, """
kind = "general"
[origin]
"2,0" = 1.0
[face1]
"0,0" = 1.0
[face2]
"0,0" = 1.0
[interior]
"0,0" = 1.0
""")
    with pytest.raises(ModelFileError, match="outside"):
        load_model(path)


def test_missing_region_table_is_rejected(tmp_path):
    path = write(tmp_path, """
kind = "general"
[origin]
"0,0" = 1.0
""")
    with pytest.raises(ModelFileError, match="missing region tables"):
        load_model(path)


def test_toml_syntax_error_carries_location(tmp_path):
    path = write(tmp_path, 'kind = "jackson\n')
    with pytest.raises(ModelFileError, match="TOML parse error"):
        load_model(path)


def test_general_file_leaves_validation_to_validate_spec(tmp_path):
    # A parseable file with an unnormalized law loads fine; the
    # violation belongs to validate_spec.
    path = write(tmp_path, """
kind = "general"
[origin]
"0,0" = 0.5
[face1]
"0,0" = 1.0
[face2]
"0,0" = 1.0
[interior]
"0,0" = 1.0
""")
    spec = load_model(path)
    assert any("sum" in v for v in validate_spec(spec))

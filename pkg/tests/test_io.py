import json

import numpy as np
import pytest

from reward_placement import (
    GeneratorConfig,
    InstanceFormatError,
    ValidationError,
    generate,
    read_instance,
    write_instance,
)
from reward_placement.io import instance_digest, instance_from_dict, instance_to_dict


@pytest.fixture
def instance():
    return generate("er", GeneratorConfig(n=50, num_settings=3, horizon=3, seed=8))


def test_round_trip(instance, tmp_path):
    path = tmp_path / "inst.json"
    write_instance(instance, path)
    back = read_instance(path)
    np.testing.assert_array_equal(back.costs, instance.costs)
    assert back.budget == instance.budget
    for a, b in zip(instance.models, back.models):
        np.testing.assert_array_equal(a.initial, b.initial)
        np.testing.assert_array_equal(a.steps, b.steps)
        assert (a.transitions != b.transitions).nnz == 0
    assert instance_digest(back) == instance_digest(instance)


def test_missing_field_is_named(instance, tmp_path):
    doc = instance_to_dict(instance)
    del doc["budget"]
    path = tmp_path / "short.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(InstanceFormatError, match="'budget'"):
        read_instance(path)

    doc["budget"] = instance.budget
    del doc["models"][1]["steps"]
    with pytest.raises(InstanceFormatError, match=r"models\[1\].*'steps'"):
        instance_from_dict(doc)


def test_cut_off_text_reports_position(instance, tmp_path):
    path = tmp_path / "cut.json"
    text = json.dumps(instance_to_dict(instance))
    path.write_text(text[: len(text) // 2])
    with pytest.raises(InstanceFormatError, match="line 1, column"):
        read_instance(path)


def test_negative_probability(instance):
    doc = instance_to_dict(instance)
    doc["models"][0]["initial"][0] = -0.25
    with pytest.raises(ValidationError) as info:
        instance_from_dict(doc)
    assert any("initial[0]" in v for v in info.value.violations)
    instance_from_dict(doc, validate=False)


def test_horizon_mismatch(instance):
    doc = instance_to_dict(instance)
    doc["K"] = 5
    with pytest.raises(InstanceFormatError, match="K = 5"):
        instance_from_dict(doc)


def test_bad_costs(instance):
    doc = instance_to_dict(instance)
    doc["costs"][0] = 0
    with pytest.raises(InstanceFormatError):
        instance_from_dict(doc)

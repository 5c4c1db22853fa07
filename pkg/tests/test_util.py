import json

import pytest

from lleb.errors import ConfigError, DomainError, ReportedFailure
from lleb.modules.counterexample import CutoffBump
from lleb.util import get_obj_from_str, instantiate_from_config, parallel_map, sign


def _square(x):
    return x * x


def _fail_on_three(x):
    if x == 3:
        raise DomainError("three", x=x)
    return x


@pytest.mark.parametrize("n_proc", [1, 2, 4, 16])
def test_parallel_map_keeps_order(n_proc):
    assert parallel_map(_square, range(11), n_proc=n_proc) == [x * x for x in range(11)]


def _always_fail(x):
    raise DomainError("always", x=x)


@pytest.mark.parametrize("func,n_proc", [(_fail_on_three, 3), (_fail_on_three, 8), (_always_fail, 2),
                                         (_always_fail, 4)])
def test_parallel_map_reraises(func, n_proc):
    with pytest.raises(DomainError):
        parallel_map(func, range(8), n_proc=n_proc)


def test_instantiate_from_config():
    bump = instantiate_from_config({"target": "lleb.modules.counterexample.CutoffBump", "params": {"power": 2}})
    assert isinstance(bump, CutoffBump) and bump.power == 2
    with pytest.raises(KeyError):
        instantiate_from_config({"params": {"power": 2}})


def test_small_helpers():
    assert [sign(-2.0), sign(0.0), sign(3)] == [-1, 0, 1]
    assert get_obj_from_str("lleb.util.sign") is sign


def test_error_dict_is_json():
    err = ConfigError("bad", q=7, values=(1.5, 2), obj=object())
    doc = err.to_dict()
    assert doc["error"] == "ConfigError" and doc["message"] == "bad"
    assert doc["context"]["q"] == 7 and doc["context"]["values"] == [1.5, 2]
    json.dumps(doc)
    assert isinstance(err, ValueError)
    assert ReportedFailure("x", report="r").report == "r"

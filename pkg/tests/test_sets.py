import numpy as np
import pytest

from pdd.eqfree import EquationSpec, FreeSet, ThreeAP
from pdd.sets import GridSet, freeset_to_text, gridset_to_text, parse_set, read_set, write_set


def test_gridset_roundtrip_1d(tmp_path):
    g = GridSet.from_points(1, 10, [1, 4, 10])
    assert parse_set(gridset_to_text(g)) == g
    assert read_set(write_set(tmp_path / "a.txt", g)) == g
    assert g.points() == [1, 4, 10] and len(g) == 3


def test_gridset_roundtrip_2d():
    rng = np.random.default_rng(3)
    g = GridSet(2, 13, rng.random((13, 13)) < 0.3)
    assert parse_set(gridset_to_text(g)) == g


@pytest.mark.parametrize("spec", [ThreeAP(), ThreeAP(True), EquationSpec((-3, 1, 1, 1)),
                                  EquationSpec((-1, 3, -1, -1), 61)])
def test_freeset_roundtrip(spec):
    fs = FreeSet(61, (0, 1, 4, 5), spec)
    back = parse_set(freeset_to_text(fs))
    assert back == fs


def test_gridset_validation():
    with pytest.raises(ValueError):
        GridSet.from_points(1, 5, [0])
    with pytest.raises(ValueError):
        GridSet(3, 2, np.zeros((2, 2, 2)))
    with pytest.raises(ValueError):
        parse_set("not a set\n")


def test_full_and_empty():
    assert GridSet.full(2, 4).density == 1.0
    assert len(GridSet.empty(1, 9)) == 0

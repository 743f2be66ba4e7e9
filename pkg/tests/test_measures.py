import math

import numpy as np
import pytest

from orliczlab.measures import (GridFunction, SpaceSpec, indicator, line, read_csv, sample,
                                tail, torus, write_csv)


@pytest.mark.parametrize("space", [
    SpaceSpec("torus", 256, grading="none"),
    SpaceSpec("torus", 1024, ratio=1.25),
    SpaceSpec("line", 512, truncation=20.0),
    SpaceSpec("line-nu", 512, truncation=20.0, grading="none"),
])
def test_weights_and_cells_cover_the_space(space):
    assert space.weights.sum() == pytest.approx(space.total_measure, rel=1e-12)
    c = space.cells
    assert np.all(c[:, 1] > c[:, 0])
    assert np.allclose(c[1:, 0], c[:-1, 1])
    assert np.all((space.nodes >= c[:, 0]) & (space.nodes <= c[:, 1]))


def test_graded_torus_reaches_far_below_double_epsilon():
    s = torus(2 ** 12, ratio=1.25)
    assert np.abs(s.nodes).min() < 1e-200
    assert s.cells[0, 0] == pytest.approx(-math.pi)
    assert s.cells[-1, 1] == pytest.approx(math.pi)


def test_bad_specs_rejected():
    with pytest.raises(ValueError):
        SpaceSpec("sphere", 64)
    with pytest.raises(ValueError):
        SpaceSpec("torus", 100)
    with pytest.raises(ValueError):
        SpaceSpec("torus", 64, grading="chebyshev")


def test_sample_refuses_nonfinite_values():
    with pytest.raises(ValueError):
        sample(lambda x: 1.0 / (x - x), SpaceSpec("torus", 64, grading="none"))


def test_tail_of_linear_function():
    # |x| on the uniform line [-1, 1]: T(u) = 2(1-u)
    s = SpaceSpec("line", 2 ** 14, truncation=1.0, grading="none")
    f = sample(np.abs, s)
    u = np.array([0.1, 0.5, 0.9])
    assert np.allclose(tail(f, u), 2 * (1 - u), atol=2e-4)
    assert tail(f, 2.0) == 0.0


@pytest.mark.parametrize("space", [torus(2 ** 12), line(2 ** 12, truncation=50.0)])
def test_indicator_measure(space):
    for delta in (1e-3, 0.05, 0.4):
        ind = indicator(space, delta)
        # whole cells: off by at most one cell weight
        assert abs(ind.meta["measure"] - delta) <= space.weights.max()
        assert ind.integral() == pytest.approx(ind.meta["measure"])
    with pytest.raises(ValueError):
        indicator(space, 10 * space.total_measure)


def test_csv_round_trip(tmp_path):
    s = SpaceSpec("torus", 64, grading="none")
    f = sample(np.cos, s)
    write_csv(f, tmp_path / "f.csv")
    g = read_csv(tmp_path / "f.csv", s)
    assert np.array_equal(g.values, f.values)
    with pytest.raises(ValueError):
        read_csv(tmp_path / "f.csv", s.with_resolution(128))


def test_grid_function_arithmetic():
    s = SpaceSpec("torus", 64, grading="none")
    f = GridFunction(s, np.ones(64))
    assert (f * 3 - f).integral() == pytest.approx(2.0)
    assert SpaceSpec.from_json(s.to_json()) == s

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dags, toy
from oracle import optimum, random_dag
from salbp_ibs import IbsConfig, Instance, ProblemSpec
from salbp_ibs.tuning import (
    KAPPA_AXIS,
    TuneGrid,
    cell_seed,
    gray_levels,
    parse_csv,
    render_csv,
    render_heatmap,
    render_pgm,
    tune_cell,
    tune_grid,
)


def test_axis_exact():
    assert len(KAPPA_AXIS) == 21
    assert [f"{k:.1f}" for k in KAPPA_AXIS] == [f"{k / 10:.1f}" for k in range(-10, 11)]
    assert KAPPA_AXIS[0] == -1.0 and KAPPA_AXIS[10] == 0.0 and KAPPA_AXIS[-1] == 1.0
    assert KAPPA_AXIS[13] == 0.3


def test_toy_grid():
    grid = tune_grid(ProblemSpec(toy(), 2))
    flat = [v for row in grid.values for v in row]
    assert len(flat) == 441
    assert min(flat) >= 6
    assert grid.values[KAPPA_AXIS.index(0.0)][KAPPA_AXIS.index(1.0)] == 6
    assert tune_cell(ProblemSpec(toy(), 2), 0.0, 1.0) == 6
    assert grid.best_cell[2] <= grid.worst_cell[2]


def test_grid_reproducible():
    spec = ProblemSpec(Instance.build("r", *_inst(3)), 4)
    assert tune_grid(spec, seed=2) == tune_grid(spec, seed=2)


def test_cell_seeds_distinct():
    assert len({cell_seed(1, a, b) for a in range(21) for b in range(21)}) == 441


def _inst(seed):
    return random_dag(random.Random(seed), 9, density=0.25)


@settings(max_examples=15, deadline=None)
@given(dags(min_n=3, max_n=8), st.integers(2, 3), st.floats(-1, 1), st.floats(-1, 1))
def test_cells_never_below_optimum(g, m, k1, k2):
    times, arcs = g
    v = tune_cell(ProblemSpec(Instance.build("r", times, arcs), m), k1, k2)
    assert v >= optimum(times, arcs, m)


def _grid(values):
    return TuneGrid(tuple(tuple(r) for r in values), "g", 2)


def test_uniform_grid_all_white():
    pgm = render_pgm(_grid([[7] * 21] * 21))
    lines = pgm.decode().splitlines()
    assert lines[:3] == ["P2", "21 21", "255"]
    assert all(tok == "255" for ln in lines[3:] for tok in ln.split())


def test_two_value_grid_endpoints():
    vals = [[47 if (a + b) % 2 else 52 for b in range(21)] for a in range(21)]
    levels = gray_levels(vals)
    assert {g for row in levels for g in row} == {0, 255}
    assert levels[0][1] == 255 and levels[0][0] == 0


def test_linear_rounding():
    assert gray_levels([[0, 1, 2, 3]]) == [[255, 170, 85, 0]]
    assert gray_levels([[0, 1, 7, 8]]) == [[255, 223, 32, 0]]


def test_csv_round_trip_and_layout():
    vals = [[a * 21 + b for b in range(21)] for a in range(21)]
    grid = _grid(vals)
    text = render_csv(grid)
    head = text.splitlines()[0].split(",")
    assert head[0] == "kappa1\\kappa2" and head[1] == "-1.0" and head[-1] == "1.0"
    assert text.splitlines()[1].startswith("-1.0,0,1,2")
    assert parse_csv(text) == grid.values
    pgm, csv_text = render_heatmap(grid)
    assert csv_text == text
    assert pgm.decode().splitlines()[3].split()[0] == "255"  # smallest value, top-left


def test_gap():
    vals = [[47] * 21 for _ in range(21)]
    vals[3][4] = 52
    grid = _grid(vals)
    assert grid.best_cell == (-1.0, -1.0, 47)
    assert grid.worst_cell == (KAPPA_AXIS[3], KAPPA_AXIS[4], 52)
    assert grid.gap_percent == pytest.approx(10.638, abs=1e-3)

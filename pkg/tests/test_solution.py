import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dags, toy
from salbp_ibs import Instance, ProblemSpec, Solution, cycle_time, reverse_instance, reverse_solution, validate_solution
from salbp_ibs.solution import PartialSolution, format_solution, parse_solution


def sol(*stations, m=None):
    return Solution.from_stations(stations, "toy", m)


def test_valid_toy(toy_spec):
    s = sol({1, 2}, {3, 4})
    assert validate_solution(toy_spec, s, 6) == []
    assert s.loads(toy_spec.instance) == [5, 6]


def test_precedence_violation(toy_spec):
    bad = validate_solution(toy_spec, sol({1, 4}, {2, 3}), 6)
    assert [(v.kind, v.task) for v in bad] == [("precedence", 4)]
    assert "[2, 3]" in bad[0].message


def test_capacity_violation(toy_spec):
    bad = validate_solution(toy_spec, sol({1, 2}, {3, 4}), 5)
    assert [(v.kind, v.station) for v in bad] == [("capacity", 2)]
    assert str(bad[0]) == "capacity: station 2 load 6 > 5"


def test_violations_are_exhaustive(toy_spec):
    bad = validate_solution(toy_spec, sol({4, 1, 7}, {1}, set()), 3)
    kinds = sorted(v.kind for v in bad)
    # wrong station count, unknown task 7, duplicate 1, missing 2 and 3, task 4 too early, overload
    assert kinds.count("stations") == 1
    assert kinds.count("partition") == 4
    assert kinds.count("precedence") == 1
    assert kinds.count("capacity") == 1


def test_cycle_time_examples(toy_inst):
    assert cycle_time(sol({1, 2}, {3, 4}), toy_inst) == 6
    assert cycle_time(Solution.from_stations([{1}], "one"), Instance.build("one", [5], [])) == 5
    assert cycle_time(sol({1, 2, 3, 4}), toy_inst) == 11


def test_padding():
    s = sol({1, 2, 3, 4}, m=3)
    assert s.stations == (frozenset({1, 2, 3, 4}), frozenset(), frozenset())


def test_reverse_solution():
    a, b, c = frozenset({1}), frozenset({2}), frozenset({3})
    assert reverse_solution(Solution((a, b, c), "x", 3)).stations == (c, b, a)
    one = Solution((frozenset({1, 2}),), "x", 1)
    assert reverse_solution(one) == one


def test_format_parse_round_trip():
    s = sol({1, 2}, {3, 4}, m=3)
    text = format_solution(s, 6)
    assert text == "toy 3 6\n1 2\n3 4\n\n"
    assert parse_solution(text) == (s, 6)


def test_parse_rejects_station_count_mismatch():
    with pytest.raises(ValueError):
        parse_solution("toy 3 6\n1 2\n3 4\n")


def test_partial_solution_bookkeeping(toy_inst):
    p = PartialSolution.empty().extended(frozenset({1, 2}), toy_inst)
    assert p == PartialSolution.from_stations([{1, 2}], toy_inst)
    assert p.assigned_time == 5 and p.assigned == {1, 2}


def _topo(n, arcs, key):
    preds = {j: {i for i, k in arcs if k == j} for j in range(1, n + 1)}
    done, order = set(), []
    while len(order) < n:
        ready = sorted((j for j in preds if j not in done and preds[j] <= done), key=key)
        order.append(ready[0])
        done.add(ready[0])
    return order


@settings(max_examples=150, deadline=None)
@given(dags(max_n=12), st.integers(1, 6), st.randoms(use_true_random=False))
def test_topological_chunks_validate(g, m, rnd):
    times, arcs = g
    inst = Instance.build("r", times, arcs)
    order = _topo(inst.n, arcs, key=lambda j: rnd.random())
    cuts = sorted(rnd.randint(0, inst.n) for _ in range(m - 1))
    bounds = [0] + cuts + [inst.n]
    stations = [order[bounds[k]:bounds[k + 1]] for k in range(m)]
    s = Solution.from_stations(stations, "r", m)
    C = cycle_time(s, inst)
    assert validate_solution(ProblemSpec(inst, m), s, C) == []
    rev = reverse_solution(s)
    assert validate_solution(ProblemSpec(reverse_instance(inst), m), rev, C) == []

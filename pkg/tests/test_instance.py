import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import TOY_TEXT, dags, toy
from oracle import optimum, reachable
from salbp_ibs import (
    BadArcEndpoint,
    CycleDetected,
    Instance,
    InstanceSyntaxError,
    NonPositiveTime,
    ProblemSpec,
    export_ip_model,
    parse_instance,
    reverse_instance,
    starting_cycle_time,
    transitive_successors,
)
from salbp_ibs.instance import format_instance


def test_parse_toy():
    inst = parse_instance(TOY_TEXT.encode(), "toy")
    assert inst.n == 4
    assert inst.times == (2, 3, 2, 4)
    assert inst.arcs == {(1, 2), (1, 3), (2, 4), (3, 4)}
    assert inst == toy()


def test_parse_single_task():
    inst = parse_instance("1\n5\n-1,-1\n", "one")
    assert inst.n == 1 and inst.times == (5,)
    assert transitive_successors(inst) == {1: frozenset()}


def test_two_cycle_rejected():
    with pytest.raises(CycleDetected):
        parse_instance("2\n1\n1\n1,2\n2,1\n-1,-1\n", "cyc")


def test_self_loop_rejected():
    with pytest.raises(CycleDetected):
        parse_instance("2\n1\n1\n1,1\n-1,-1\n", "loop")


def test_nonpositive_time():
    with pytest.raises(NonPositiveTime):
        parse_instance("2\n1\n0\n-1,-1\n", "zero")


def test_bad_endpoint():
    with pytest.raises(BadArcEndpoint):
        parse_instance("2\n1\n1\n1,3\n-1,-1\n", "bad")


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("x\n", 1),
        ("2\n1\n", 3),  # ends before the second time
        ("2\n1\nfoo\n-1,-1\n", 3),
        ("2\n1\n1\n1;2\n-1,-1\n", 4),
        ("2\n1\n1\n1,2\n", 5),  # missing terminator
        ("2\n1\n1\n-1,-1\n3\n", 5),  # content after the terminator
        ("2\n1\n\n1\n-1,-1\n", 3),  # blank line inside the body
    ],
)
def test_syntax_errors_carry_line(text, lineno):
    with pytest.raises(InstanceSyntaxError) as exc:
        parse_instance(text, "bad")
    assert exc.value.lineno == lineno


def test_crlf_and_trailing_whitespace():
    text = TOY_TEXT.replace("\n", "  \r\n") + "\r\n\n"
    assert parse_instance(text.encode(), "toy") == toy()


def test_non_ascii_rejected():
    with pytest.raises(InstanceSyntaxError):
        parse_instance("1\n5\n-1,-1\né".encode("utf-8"), "x")


def test_transitive_successors_toy():
    inst = toy()
    assert transitive_successors(inst) == {1: {2, 3, 4}, 2: {4}, 3: {4}, 4: frozenset()}
    assert inst.max_succ_all == 3


def test_transitive_empty_and_chain():
    empty = Instance.build("e", [1, 1, 1], [])
    assert all(not s for s in transitive_successors(empty).values())
    assert empty.max_succ_all == 0
    chain = Instance.build("c", [1, 1, 1], [(1, 2), (2, 3)])
    assert transitive_successors(chain)[1] == {2, 3}


@settings(max_examples=150, deadline=None)
@given(dags(max_n=12))
def test_closure_matches_dfs(g):
    times, arcs = g
    inst = Instance.build("r", times, arcs)
    ref = reachable(len(times), arcs)
    assert transitive_successors(inst) == ref
    for j in range(1, inst.n + 1):
        assert inst.pred_sets[j - 1] == {i for i in ref if j in ref[i]}
    assert inst.max_succ_all == max(len(s) for s in ref.values())
    assert (inst.max_succ_all == 0) == (not arcs)


@settings(max_examples=100, deadline=None)
@given(dags(max_n=12))
def test_format_parse_round_trip(g):
    inst = Instance.build("r", *g)
    assert parse_instance(format_instance(inst), "r") == inst


def test_reverse_toy():
    assert reverse_instance(toy()).arcs == {(2, 1), (3, 1), (4, 2), (4, 3)}
    empty = Instance.build("e", [3, 1], [])
    assert reverse_instance(empty) == empty
    assert reverse_instance(reverse_instance(toy())) == toy()


@settings(max_examples=100, deadline=None)
@given(dags(max_n=12))
def test_reverse_involution(g):
    inst = Instance.build("r", *g)
    rev = reverse_instance(inst)
    assert rev.times == inst.times
    assert rev.arcs == {(j, i) for i, j in inst.arcs}
    assert reverse_instance(rev) == inst


@pytest.mark.parametrize("times, m, expected", [([2, 3, 2, 4], 2, 6), ([2, 3, 2, 4], 1, 11), ([5], 3, 5)])
def test_starting_cycle_time(times, m, expected):
    arcs = [(1, 2), (1, 3), (2, 4), (3, 4)] if len(times) == 4 else []
    assert starting_cycle_time(ProblemSpec(Instance.build("x", times, arcs), m)) == expected


@settings(max_examples=60, deadline=None)
@given(dags(max_n=7), st.integers(1, 3))
def test_starting_bound_below_optimum(g, m):
    times, arcs = g
    spec = ProblemSpec(Instance.build("r", times, arcs), m)
    assert starting_cycle_time(spec) <= optimum(times, arcs, m)


def test_problem_spec_rejects_zero_stations():
    with pytest.raises(ValueError):
        ProblemSpec(toy(), 0)


def test_export_single_task():
    lp = export_ip_model(ProblemSpec(Instance.build("one", [5], []), 1))
    assert " assign_1: x_1_1 = 1" in lp.splitlines()
    assert " cap_1: 5 x_1_1 - z <= 0" in lp.splitlines()
    assert lp.split("Binary\n")[1] == " x_1_1\nEnd\n"


def test_export_toy_counts():
    lp = export_ip_model(ProblemSpec(toy(), 2))
    lines = lp.splitlines()
    binaries = lines[lines.index("Binary") + 1: lines.index("End")]
    assert len(binaries) == 8
    assert sum(ln.startswith(" assign_") for ln in lines) == 4
    assert sum(ln.startswith(" prec_") for ln in lines) == 4
    assert sum(ln.startswith(" cap_") for ln in lines) == 2
    assert " prec_2_4: x_2_1 + 2 x_2_2 - x_4_1 - 2 x_4_2 <= 0" in lines
    assert lp.startswith("\\ ") and "Minimize\n obj: z\nSubject To\n" in lp
    assert lp.isascii() and "\r" not in lp
    assert export_ip_model(ProblemSpec(toy(), 2)) == lp

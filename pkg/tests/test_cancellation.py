import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import small_graphs
from oracles import global_property_holds, naive_violations, report_key
from smallcancel.cancellation import (
    CROSS_GRAPH,
    NOT_REDUCED,
    SAME_GRAPH,
    Thresholds,
    ViolationScanner,
    build_index,
    find_violations,
    require_admissible,
    thresholds,
    verify_sequence,
)
from smallcancel.errors import InadmissibleSpecError, ThresholdError, UnlabelledEdgeError
from smallcancel.generators import cycle_graph, petersen_graph
from smallcancel.graphs import DirectedPath, Graph, SequenceSpec
from smallcancel.solver import SolverConfig, label_sequence, random_reduced_labelling
from smallcancel.words import Labelling

SIXTH = Fraction(1, 6)


def spec_of(*graphs, A=Fraction(1, 2)):
    return SequenceSpec(SIXTH, A, 3, list(graphs))


def test_thresholds():
    assert thresholds(spec_of(cycle_graph(20), cycle_graph(30))).gamma == (3, 5)
    with pytest.raises(ThresholdError):
        thresholds(spec_of(petersen_graph()))
    with pytest.raises(ThresholdError):
        Thresholds((3, 1)).require_gt1()


def test_require_admissible_rejects_bad_sequences():
    with pytest.raises(InadmissibleSpecError):
        require_admissible(spec_of(cycle_graph(30), cycle_graph(20)))
    assert require_admissible(spec_of()).gamma == ()


def test_word_index():
    g = cycle_graph(6)
    l = Labelling(g, 4, (0, 0, 0, 0, 0, 0))
    index = build_index([l], [2])
    assert index.lengths == [2]
    assert index.entry_count(2) == 12
    assert len(index.occurrences(2, (0, 0))) == 6
    assert dict(index.repeated(2)).keys() == {(0, 0), (1, 1)}
    with pytest.raises(UnlabelledEdgeError):
        build_index([l.with_label(0, None)], [2])


def random_partial(g, L, rng, fill, graph_id):
    return Labelling(g, L, tuple(rng.randrange(L) if rng.random() < fill else None for _ in g.edges), graph_id)


def as_plain(g):
    return (g.vertex_count, list(g.edges))


@settings(max_examples=150, deadline=None)
@given(
    small_graphs(max_vertices=7, min_edges=1),
    st.one_of(st.none(), small_graphs(max_vertices=6, min_edges=1)),
    st.sampled_from([2, 4, 6]),
    st.integers(2, 3),
    st.integers(2, 3),
    st.floats(0.3, 1.0),
    st.integers(0, 10**6),
)
def test_find_violations_matches_oracle(g, earlier_graph, L, gam0, gam1, fill, seed):
    if g.edge_count > 16:
        return
    rng = random.Random(seed)
    if earlier_graph is None:
        graphs, gammas = [g], [gam0]
        earlier = []
    else:
        graphs, gammas = [earlier_graph, g], [gam0, gam1]
        earlier = [random_partial(earlier_graph, L, rng, 1.0, 0)]
    target = random_partial(g, L, rng, fill, len(earlier))
    spec = spec_of(*graphs)
    labellings = earlier + [target]
    got = find_violations(spec, Thresholds(gammas), labellings)
    expected = naive_violations([as_plain(h) for h in graphs], [list(l.labels) for l in labellings], gammas)
    assert {report_key(r) for r in got} == expected
    assert len(got) == len(expected)
    assert got == sorted(got, key=lambda r: r.sort_key())
    # focused scans cover exactly the unfocused set
    union = set()
    scanner = ViolationScanner(graphs, Thresholds(gammas), earlier)
    for e in range(g.edge_count):
        focused = scanner.scan(target, focus=e)
        assert all(r.touches(graphs, len(earlier), e) for r in focused)
        assert set(focused) == {r for r in got if r.touches(graphs, len(earlier), e)}
        assert focused == find_violations(spec, Thresholds(gammas), labellings, focus=(len(earlier), e))
        union |= set(focused)
    assert union == set(got)


def test_report_formats():
    g = Graph(3, ((0, 1), (0, 2)))
    l = Labelling(g, 4, (2, 2))
    reps = find_violations(spec_of(g), Thresholds((2,)), [l])
    # 1-0-2 and 2-0-1 both read (3, 2), so a repeat accompanies the fold
    assert [r.kind for r in reps] == [NOT_REDUCED, SAME_GRAPH]
    r = reps[0]
    assert r.vertex == (0, 1, 2)
    assert r.format() == "violation kind=not-reduced graph=0 vertex=0 neighbors=1,2 label=2"
    g = cycle_graph(6)
    l = Labelling(g, 4, (0, 2, 0, 2, 0, 2))
    reps = find_violations(spec_of(g), Thresholds((2,)), [l])
    assert {r.kind for r in reps} == {SAME_GRAPH}
    assert reps[0].format().startswith("violation kind=same-graph-repeat graph=0 word=")
    assert " path=0:" in reps[0].format() and " other=0:" in reps[0].format()


def test_cross_graph_detection():
    g0, g1 = cycle_graph(4), cycle_graph(5)
    l0 = Labelling(g0, 8, (0, 2, 4, 6))
    l1 = Labelling(g1, 8, (0, 2, 5, 7, 1), graph_id=1)
    with pytest.raises(ValueError):
        find_violations(spec_of(g0, g1), Thresholds((2, 2)), [l0, Labelling(g1, 8, l1.labels)])
    reps = find_violations(spec_of(g0, g1), Thresholds((2, 2)), [l0, l1])
    cross = [r for r in reps if r.kind == CROSS_GRAPH]
    assert cross and all(r.paths[0].graph_id == 1 and r.paths[1].graph_id == 0 for r in cross)
    assert any(r.word == (0, 2) for r in cross)


@pytest.fixture(scope="module")
def solved():
    spec = spec_of(cycle_graph(20), cycle_graph(30))
    result = label_sequence(spec, None, SolverConfig(8, seed=3))
    return spec, result.labellings


def test_verify_passes_solver_output(solved):
    spec, ls = solved
    res = verify_sequence(spec, ls)
    assert res.passed and res.reports == []
    full = verify_sequence(spec, ls, full=True, cap=10)
    assert full.passed
    text = res.format()
    assert text.splitlines()[:4] == ["status=pass", "mode=exact", "graphs=2", "violations=0"]


def test_verify_detects_cloned_out_label(solved):
    spec, ls = solved
    l = ls[1]
    g = l.graph
    # copy the out-label of vertex 1 towards 0 onto edge 1 -> 2
    bad = l.with_label(g.edge_id(1, 2), l.directed(1, 0))
    res = verify_sequence(spec, [ls[0], bad])
    assert not res.passed
    assert res.counts[NOT_REDUCED] >= 1
    assert any(r.kind == NOT_REDUCED and r.vertex[0] == 1 for r in res.reports)
    assert verify_sequence(spec, [ls[0], bad], full=True, cap=8).counts[NOT_REDUCED] >= 1


def test_verify_empty_sequence():
    assert verify_sequence(spec_of(), []).passed
    assert verify_sequence(spec_of(), [], full=True).passed


def test_verify_rejects_partial_and_mismatched(solved):
    spec, ls = solved
    with pytest.raises(UnlabelledEdgeError):
        verify_sequence(spec, [ls[0], ls[1].with_label(0, None)])
    with pytest.raises(ValueError):
        verify_sequence(spec, [ls[0]])
    with pytest.raises(ValueError):
        verify_sequence(spec, [ls[0], ls[1]], full=True, cap=3)


def test_thread_count_does_not_change_output(solved):
    spec, ls = solved
    bad = [ls[0], ls[1].with_label(0, ls[1].labels[1])]
    one = verify_sequence(spec, bad, threads=1).format()
    assert one == verify_sequence(spec, bad, threads=4).format()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([12, 14, 18, 24]), st.sampled_from([2, 4]), st.integers(2, 3), st.integers(0, 10**6))
def test_exact_and_full_modes_agree_on_cycles(n, L, gam, seed):
    g = cycle_graph(n)
    l = random_reduced_labelling(g, L, random.Random(seed))
    scanner = ViolationScanner([g], Thresholds((gam,)))
    exact_ok = not scanner.scan(l)
    assert exact_ok == global_property_holds([as_plain(g)], [list(l.labels)], [gam], cap=n - 1)


def test_paths_as_values():
    g = cycle_graph(6)
    l = Labelling(g, 4, (0, 2, 0, 2, 0, 2))
    reps = find_violations(spec_of(g), Thresholds((2,)), [l])
    for r in reps:
        p, q = r.paths
        assert p < q and isinstance(p, DirectedPath)

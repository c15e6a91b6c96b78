import pytest
from hypothesis import given, strategies as st

from dynkin_count.counting import e_of
from dynkin_count.diagram import (
    ConnectedDiagram,
    Diagram,
    DiagramSyntaxError,
    RankError,
    automorphism_rho,
    classify,
    connected_types,
    coxeter_number,
    delete_vertex,
    parse_diagram,
    render,
    weyl_order,
)

ALL_TYPES = connected_types(12)


def cd(s):
    return parse_diagram(s).components[0]


def test_parse_single():
    assert parse_diagram("A5") == Diagram((ConnectedDiagram("A", 5),))


def test_parse_multiset_order_independent():
    d = parse_diagram("B3+A2+A2")
    assert d == parse_diagram("A2 + b3 +A2")
    assert [str(c) for c in d] == ["A2", "A2", "B3"]
    assert d.rank == 7


@pytest.mark.parametrize("spec", ["E9", "E5", "F3", "G3", "A0", "B0"])
def test_parse_rank_errors(spec):
    with pytest.raises(RankError) as info:
        parse_diagram(spec)
    assert info.value.family == spec[0]


def test_e9_message_names_legal_ranks():
    with pytest.raises(RankError, match=r"\{6,7,8\}"):
        parse_diagram("E9")


@pytest.mark.parametrize(
    "spec, pos",
    [("", 0), ("H4", 0), ("A", 1), ("A5+", 3), ("A5*B2", 2), ("5A", 0), ("A2 B3", 3)],
)
def test_parse_syntax_errors(spec, pos):
    with pytest.raises(DiagramSyntaxError) as info:
        parse_diagram(spec)
    assert info.value.position == pos


@pytest.mark.parametrize("spec", ["B1", "C1", "D1", "b1"])
def test_low_rank_normalization(spec):
    assert parse_diagram(spec) == parse_diagram("A1")


def test_d2_d3_kept_as_typed():
    assert str(cd("D2")) == "D2"
    assert str(cd("D3")) == "D3"


types_st = st.sampled_from(ALL_TYPES + [cd("D2"), cd("D3")])


@given(st.lists(types_st, min_size=1, max_size=6))
def test_render_round_trip(comps):
    d = Diagram(tuple(comps))
    assert parse_diagram(render(d)) == d


@given(st.lists(types_st, max_size=6), st.randoms())
def test_multiset_equality_ignores_order(comps, rnd):
    shuffled = list(comps)
    rnd.shuffle(shuffled)
    assert Diagram(tuple(comps)) == Diagram(tuple(shuffled))


# -- vertex deletion ----------------------------------------------------------

def test_delete_e6_branch_vertex():
    assert delete_vertex(cd("E6"), 4) == parse_diagram("A2+A1+A2")


def test_delete_e7_vertex_2():
    assert delete_vertex(cd("E7"), 2) == parse_diagram("D6")


@pytest.mark.parametrize("n", [3, 4, 5])
def test_delete_b_long_end(n):
    # vertices 2..n form a path whose last edge is double and whose only short
    # root is n: that is B_{n-1}
    assert delete_vertex(ConnectedDiagram("B", n), 1) == Diagram((ConnectedDiagram("B", n - 1),))


def test_delete_b2_end_reads_as_a1():
    assert delete_vertex(cd("B2"), 1) == parse_diagram("A1")


def test_f4_rows_match_printed_table():
    f4 = cd("F4")
    assert [render(delete_vertex(f4, i)) for i in f4.vertices()] == ["B3", "A1+A2", "A1+A2", "C3"]


@pytest.mark.parametrize(
    "spec, expected",
    [
        ("E6", ["A5", "D5", "A1+A4", "A1+A2+A2", "A1+A4", "D5"]),
        ("E7", ["A6", "D6", "A1+A5", "A1+A2+A3", "A2+A4", "A1+D5", "E6"]),
        ("E8", ["A7", "D7", "A1+A6", "A1+A2+A4", "A3+A4", "A2+D5", "A1+E6", "E7"]),
    ],
)
def test_e_tables(spec, expected):
    d = cd(spec)
    assert [render(delete_vertex(d, i)) for i in d.vertices()] == expected


def test_d_n_deletions():
    d = cd("D6")
    got = [render(delete_vertex(d, i)) for i in d.vertices()]
    # D_{k-1} with k = 4 is a path, so it reads as A3
    assert got == ["A5", "A5", "A1+A1+A3", "A2+A3", "A1+D4", "D5"]


def test_delete_invalid_vertex():
    with pytest.raises(ValueError):
        delete_vertex(cd("A3"), 4)
    with pytest.raises(ValueError):
        delete_vertex(cd("A3"), 0)


@pytest.mark.parametrize("d", ALL_TYPES, ids=str)
def test_deletion_invariants(d):
    for v in d.vertices():
        sub = delete_vertex(d, v)
        assert sub.rank == d.rank - 1
        for c in sub:
            # constructing again re-validates the rank constraint
            assert ConnectedDiagram(c.family, c.rank) == c


@pytest.mark.parametrize("d", ALL_TYPES, ids=str)
def test_classify_recovers_own_type(d):
    assert classify(d.vertices(), d.edges(), d.root_lengths()) == d


def test_d3_graph_is_a3():
    d = cd("D3")
    assert classify(d.vertices(), d.edges(), d.root_lengths()) == cd("A3")


# -- tables -------------------------------------------------------------------

@pytest.mark.parametrize("spec, h", [("A4", 5), ("E7", 18), ("D4", 6), ("B3", 6), ("C5", 10),
                                     ("E6", 12), ("E8", 30), ("F4", 12), ("G2", 6)])
def test_coxeter_number(spec, h):
    assert coxeter_number(cd(spec)) == h


def test_weyl_order():
    assert weyl_order(cd("A3")) == 24
    assert weyl_order(cd("F4")) == 1152
    assert weyl_order(Diagram()) == 1
    assert weyl_order(parse_diagram("A1+A2")) == 12
    assert weyl_order(cd("E8")) == 696729600


# -- automorphism -------------------------------------------------------------

def test_rho_examples():
    assert automorphism_rho(cd("A3")) == {1: 3, 2: 2, 3: 1}
    assert automorphism_rho(cd("E6")) == {1: 1, 2: 6, 3: 5, 4: 4, 5: 3, 6: 2}
    assert automorphism_rho(cd("E7")) == {i: i for i in range(1, 8)}
    assert automorphism_rho(cd("A1")) == {1: 1}


def _edge_set(d):
    return {frozenset(e): m for e, m in d.edges().items()}


@pytest.mark.parametrize("d", ALL_TYPES, ids=str)
def test_rho_is_adjacency_preserving_involution(d):
    rho = automorphism_rho(d)
    assert sorted(rho) == sorted(rho.values()) == list(d.vertices())
    assert all(rho[rho[i]] == i for i in d.vertices())
    edges = _edge_set(d)
    image = {frozenset(rho[v] for v in e): m for e, m in edges.items()}
    assert image == edges
    lengths = d.root_lengths()
    assert all(lengths[rho[i]] == lengths[i] for i in d.vertices())


@pytest.mark.parametrize("d", [t for t in ALL_TYPES if t.family in "ADE"], ids=str)
def test_rho_preserves_deleted_counts(d):
    rho = automorphism_rho(d)
    for i in d.vertices():
        assert e_of(delete_vertex(d, rho[i])) == e_of(delete_vertex(d, i))


def test_connected_types_are_distinct():
    types = connected_types(8)
    assert len(types) == len(set(types))
    ranks = {n: sum(1 for t in types if t.rank == n) for n in range(1, 9)}
    # A, B, C from rank 2, D from 4, E6-8, F4, G2
    assert ranks == {1: 1, 2: 4, 3: 3, 4: 5, 5: 4, 6: 5, 7: 5, 8: 5}

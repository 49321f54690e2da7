import itertools
import random

import networkx as nx
import pytest

from qsms.graph import (
    ABSENT,
    PRESENT,
    Graph,
    GraphFormatError,
    PartialGraph,
    apply_permutation,
    cell_order,
    compose,
    emit_edge_line,
    emit_edge_list,
    emit_graph6,
    inverse,
    matrix_vector,
    parse_edge_line,
    parse_edge_list,
    parse_graph6,
    parse_graph_line,
)


def random_graph(n, rng, p=0.5):
    return Graph(n, [c for c in itertools.combinations(range(1, n + 1), 2) if rng.random() < p])


def random_perm(n, rng):
    p = list(range(1, n + 1))
    rng.shuffle(p)
    return tuple(p)


def test_cell_orders():
    assert cell_order(3, "lex").sequence == ((1, 2), (1, 3), (2, 3))
    assert cell_order(3, "colex").sequence == ((1, 2), (1, 3), (2, 3))
    assert cell_order(4, "lex").sequence == ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
    assert cell_order(4, "colex").sequence == ((1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4))
    for n in range(1, 8):
        for kind in ("lex", "colex"):
            assert sorted(cell_order(n, kind).sequence) == list(itertools.combinations(range(1, n + 1), 2))


def test_matrix_vector_examples():
    assert matrix_vector(Graph(3), cell_order(3)) == (0, 0, 0)
    assert matrix_vector(Graph(3, [(1, 2)]), cell_order(3)) == (1, 0, 0)
    assert matrix_vector(Graph(3, [(1, 2)]), cell_order(3, "colex")) == (1, 0, 0)
    assert matrix_vector(Graph(3, [(1, 3)]), cell_order(3, "colex")) == (0, 1, 0)
    g = PartialGraph(3, {(1, 2): PRESENT})
    assert matrix_vector(g, cell_order(3)) == (1, None, None)


def test_partial_graph_basics():
    g = PartialGraph(3, {(1, 2): 1, (2, 3): 0})
    assert g[(2, 1)] == PRESENT and g[(3, 2)] == ABSENT and g[(1, 3)] is None
    assert not g.is_total
    assert len(g.cells()) == 3
    with pytest.raises(ValueError):
        PartialGraph(3, {(1, 1): 1})
    with pytest.raises(ValueError):
        PartialGraph(0)


def test_extension_relation():
    g = PartialGraph(3, {(1, 2): 1})
    h = Graph(3, [(1, 2), (2, 3)])
    assert h.extends(g)
    assert not g.extends(h)
    assert g.extends(g)
    assert not Graph(3, [(2, 3)]).extends(g)
    # a total graph extends only itself
    for other in [Graph(3, e) for e in ([], [(1, 2)], [(1, 2), (2, 3)])]:
        assert other.extends(h) == (other == h)


def test_apply_permutation_examples():
    g = Graph(3, [(1, 2)])
    assert apply_permutation(g, (3, 2, 1)) == Graph(3, [(2, 3)])
    assert apply_permutation(g, (1, 2, 3)) == g
    with pytest.raises(ValueError):
        apply_permutation(g, (1, 2))
    with pytest.raises(ValueError):
        apply_permutation(g, (1, 1, 2))


def test_permutation_round_trip_and_composition():
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(1, 7)
        g = random_graph(n, rng)
        p, q = random_perm(n, rng), random_perm(n, rng)
        assert apply_permutation(apply_permutation(g, p), inverse(p)) == g
        assert apply_permutation(g, compose(p, q)) == apply_permutation(apply_permutation(g, q), p)


def test_matrix_vector_under_permutation():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(2, 6)
        g = random_graph(n, rng)
        p = random_perm(n, rng)
        pinv = inverse(p)
        h = apply_permutation(g, p)
        order = cell_order(n)
        vh = matrix_vector(h, order)
        for t, (i, j) in enumerate(order.sequence):
            assert vh[t] == g[(pinv[i - 1], pinv[j - 1])]


def test_edge_list_parse_and_emit():
    g = parse_edge_list("3 1\n2 3\n")
    assert g == Graph(3, [(2, 3)])
    s = "4 3\n1 2\n1 4\n3 4\n"
    assert emit_edge_list(parse_edge_list(s)) == s


@pytest.mark.parametrize("text,line", [
    ("3 1\n3 2\n", 2),
    ("3 2\n1 2\n1 2\n", 3),
    ("3 1\n1 4\n", 2),
    ("3 1\n1 x\n", 2),
    ("3\n", 1),
    ("3 2\n1 2\n", 1),
])
def test_edge_list_errors_carry_line_numbers(text, line):
    with pytest.raises(GraphFormatError) as exc:
        parse_edge_list(text)
    assert exc.value.line == line


def test_edge_line_round_trip():
    g = Graph(5, [(1, 2), (4, 5)])
    assert emit_edge_line(g) == "5: 1-2 4-5"
    assert parse_edge_line("5: 1-2 4-5") == g
    assert parse_edge_line("3: ") == Graph(3)
    with pytest.raises(GraphFormatError):
        parse_edge_line("3: 2-1")


def test_graph6_examples():
    assert emit_graph6(Graph(1)) == "@"
    assert emit_graph6(Graph(2, [(1, 2)])) == "A_"
    assert parse_graph6("A_") == Graph(2, [(1, 2)])
    with pytest.raises(ValueError):
        emit_graph6(Graph(63))


def test_graph6_against_networkx_decoder():
    for n in range(1, 6):
        for bits in range(1 << (n * (n - 1) // 2)):
            cells = list(itertools.combinations(range(1, n + 1), 2))
            g = Graph(n, [c for t, c in enumerate(cells) if bits >> t & 1])
            s = emit_graph6(g)
            h = nx.from_graph6_bytes(s.encode())
            assert h.number_of_nodes() == n
            assert sorted(tuple(sorted((u + 1, v + 1))) for u, v in h.edges()) == sorted(g.edges)
            assert parse_graph6(s) == g
            assert parse_graph_line(s) == g


def test_graph6_matches_networkx_encoder():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randint(1, 20)
        g = random_graph(n, rng)
        G = nx.Graph()
        G.add_nodes_from(range(n))
        G.add_edges_from((u - 1, v - 1) for u, v in g.edges)
        expected = nx.to_graph6_bytes(G, header=False).decode().strip()
        assert emit_graph6(g) == expected

import random

import networkx as nx
import pytest

from helpers import brute_displacement_table, random_symmetric_tree
from margulis.errors import NotDisjoint, PreconditionFailed, TruncationAmbiguous
from margulis.gtree import (
    ActionSpec,
    AutKind,
    OrbitStatus,
    Subtree,
    Tree,
    TreeAut,
    axes_distinct,
    bridge,
    classify_aut,
    coset_tree,
    finite_orbit_fixed_vertex,
    fix_subtree,
    format_word,
    identity_alternating_words,
    parse_word,
    per_subtree,
    ping_pong_witness,
    xy_decomposition,
)


# ---------------------------------------------------------------------------
# trees and subtrees
# ---------------------------------------------------------------------------

def test_tree_validation():
    with pytest.raises(ValueError):
        Tree(3, [(0, 1)])  # not enough edges
    with pytest.raises(ValueError):
        Tree(3, [(0, 1), (0, 1)])  # parallel
    with pytest.raises(ValueError):
        Tree(3, [(0, 0), (1, 2)])  # loop
    with pytest.raises(ValueError):
        Tree(4, [(0, 1), (2, 3), (0, 2), (1, 3)])  # cycle, wrong count anyway


def test_tree_distance_matches_networkx():
    rng = random.Random(31)
    for _ in range(30):
        n = rng.randint(2, 60)
        edges = [(rng.randrange(i), i) for i in range(1, n)]
        tree = Tree(n, edges)
        g = nx.Graph(edges)
        g.add_nodes_from(range(n))
        lengths = dict(nx.all_pairs_shortest_path_length(g))
        for u in range(n):
            for v in range(n):
                assert tree.distance(u, v) == lengths[u][v]
                path = tree.path(u, v)
                assert len(path) == lengths[u][v] + 1
                assert path[0] == u and path[-1] == v


def test_subtree_validation():
    tree = Tree.path_graph(5)
    Subtree(tree, frozenset())
    Subtree(tree, frozenset({1, 2, 3}))
    with pytest.raises(ValueError):
        Subtree(tree, frozenset({0, 2}))


def test_component_without_edge():
    tree = Tree.path_graph(5)
    left = tree.component_without_edge(1, 2, 1)
    assert left == frozenset({0, 1})
    right = tree.component_without_edge(1, 2, 2)
    assert right == frozenset({2, 3, 4})


def test_tree_save_load_roundtrip(tmp_path):
    tree = Tree.star(4)
    path = tmp_path / "star.tree"
    tree.save(str(path))
    text = path.read_text()
    assert text.splitlines()[0] == "tree 5"
    back = Tree.load(str(path))
    assert back.n_vertices == tree.n_vertices
    assert back.edges == tree.edges


# ---------------------------------------------------------------------------
# automorphisms
# ---------------------------------------------------------------------------

def test_treeaut_validation():
    tree = Tree.path_graph(2)
    with pytest.raises(ValueError):
        TreeAut(tree, [1, 0])  # inversion of the only edge
    tree3 = Tree.path_graph(3)
    with pytest.raises(ValueError):
        TreeAut(tree3, [0, 1, 1])  # not injective
    # adjacency-violating partial map: edge 0-1 would map to non-edge 0-2
    with pytest.raises(ValueError):
        TreeAut(tree3, [0, 2, None])
    # the reflection is legitimate: no edge is inverted
    TreeAut(tree3, [2, 1, 0])


def test_classify_identity_and_swap():
    tree = Tree.path_graph(3)
    ident = TreeAut.identity(tree)
    out = classify_aut(ident)
    assert out.kind is AutKind.ELLIPTIC
    assert out.fix.vertices == frozenset({0, 1, 2})

    swap = TreeAut(tree, [2, 1, 0])
    out = classify_aut(swap)
    assert out.kind is AutKind.ELLIPTIC
    assert out.fix.vertices == frozenset({1})
    assert fix_subtree(swap).vertices == frozenset({1})
    assert per_subtree(swap).vertices == frozenset({0, 1, 2})  # swap^2 = id


def test_classify_line_shift_window():
    tree = Tree.path_graph(11)
    shift2 = TreeAut(tree, [2, 3, 4, 5, 6, 7, 8, 9, 10, None, None])
    out = classify_aut(shift2)
    assert out.kind is AutKind.HYPERBOLIC
    assert out.translation == 2
    assert out.axis.vertices == frozenset(range(9))
    table = brute_displacement_table(tree, shift2)
    assert min(table.values()) == 2
    assert {v for v, d in table.items() if d == 2} == frozenset(range(9))


def test_classify_truncation_ambiguous():
    # one isolated minimizer: a single vertex mapped two steps away
    tree = Tree.path_graph(5)
    lone = TreeAut(tree, [2, None, 4, None, None])
    with pytest.raises(TruncationAmbiguous):
        classify_aut(lone)


def test_star_rotation_fix_and_per():
    tree = Tree.star(3)
    rot = TreeAut(tree, [0, 2, 3, 1])
    assert fix_subtree(rot).vertices == frozenset({0})
    assert per_subtree(rot).vertices == frozenset({0, 1, 2, 3})  # rot^3 = id
    ident = TreeAut.identity(tree)
    assert per_subtree(ident).vertices == fix_subtree(ident).vertices == frozenset(range(4))


def test_random_automorphisms_agree_with_brute_force():
    rng = random.Random(32)
    for _ in range(200):
        tree, aut = random_symmetric_tree(rng)
        if rng.random() < 0.5:
            aut = aut * aut
        table = brute_displacement_table(tree, aut)
        m = min(table.values())
        out = classify_aut(aut)
        assert m == 0  # total automorphisms of finite trees are elliptic
        assert out.kind is AutKind.ELLIPTIC
        assert out.fix.vertices == frozenset(v for v, d in table.items() if d == 0)
        per = per_subtree(aut)
        assert out.fix.vertices <= per.vertices
        assert per.vertices == aut.power(aut.order()).fixed_vertices()


def test_treeaut_order_and_power():
    tree = Tree.star(3)
    rot = TreeAut(tree, [0, 2, 3, 1])
    assert rot.order() == 3
    assert rot.power(3) == TreeAut.identity(tree)
    assert rot.power(-1) == rot.inverse()


# ---------------------------------------------------------------------------
# bridge
# ---------------------------------------------------------------------------

def test_bridge_examples():
    tree = Tree.path_graph(6)
    assert bridge(Subtree(tree, frozenset({2})), Subtree(tree, frozenset({3}))) == [2, 3]
    assert bridge(Subtree(tree, frozenset({0})), Subtree(tree, frozenset({5}))) == [0, 1, 2, 3, 4, 5]
    with pytest.raises(NotDisjoint):
        bridge(Subtree(tree, frozenset({1, 2})), Subtree(tree, frozenset({2, 3})))


def test_bridge_matches_bfs_oracle():
    rng = random.Random(33)
    for _ in range(100):
        n = rng.randint(4, 40)
        edges = [(rng.randrange(i), i) for i in range(1, n)]
        tree = Tree(n, edges)
        g = nx.Graph(edges)
        # grow two disjoint connected vertex sets
        a = rng.randrange(n)
        t1 = {a}
        for _ in range(rng.randint(0, 3)):
            options = [w for v in t1 for w in tree.neighbors(v) if w not in t1]
            if options:
                t1.add(rng.choice(options))
        rest = [v for v in range(n) if v not in t1]
        if not rest:
            continue
        b = rng.choice(rest)
        t2 = {b}
        for _ in range(rng.randint(0, 3)):
            options = [w for v in t2 for w in tree.neighbors(v)
                       if w not in t2 and w not in t1]
            if options:
                t2.add(rng.choice(options))
        if t1 & t2:
            continue
        path = bridge(Subtree(tree, frozenset(t1)), Subtree(tree, frozenset(t2)))
        best = min(nx.shortest_path_length(g, u, v) for u in t1 for v in t2)
        assert len(path) - 1 == best
        assert path[0] in t1 and path[-1] in t2
        assert all(v not in t1 and v not in t2 for v in path[1:-1])


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------

def test_parse_word_forms():
    assert parse_word("x y^-1 x") == (("x", 1), ("y", -1), ("x", 1))
    assert parse_word("x*y^2") == (("x", 1), ("y", 2))
    assert parse_word("xyX") == (("x", 1), ("y", 1), ("x", -1))
    assert parse_word([("x", 2), ("y", 0)]) == (("x", 2),)
    assert parse_word("") == ()
    assert format_word("xyX") == "x y x^-1"
    assert format_word("") == "1"


def test_action_word_evaluation_is_homomorphism():
    window = coset_tree(5)
    act = window.action
    rng = random.Random(34)
    letters = ["x", "X", "y", "Y"]
    for _ in range(50):
        w1 = "".join(rng.choice(letters) for _ in range(rng.randint(0, 3)))
        w2 = "".join(rng.choice(letters) for _ in range(rng.randint(0, 3)))
        combined = act.aut_of_word(w1 + w2)
        split = act.aut_of_word(w1) * act.aut_of_word(w2)
        for v in range(act.tree.n_vertices):
            a, b = combined.images[v], split.images[v]
            if a is not None and b is not None:
                assert a == b


# ---------------------------------------------------------------------------
# coset-tree windows
# ---------------------------------------------------------------------------

def test_coset_tree_structure():
    for radius in (1, 2, 3, 5):
        window = coset_tree(radius)
        expected_edges = 1 + 2 * (3 ** radius - 1)
        assert len(window.tree.edges) == expected_edges
        assert window.tree.n_vertices == expected_edges + 1

    window = coset_tree(4)
    x = window.action.generators["x"]
    base_x, base_y = window.base_edge
    assert x.images[base_x] == base_x  # x fixes <x>
    assert x.images[base_y] != base_y
    assert window.vertex_of_coset("x", "") == base_x
    assert window.vertex_of_coset("y", "") == base_y
    assert window.vertex_of_coset("x", "x") == base_x  # same coset
    assert window.vertex_of_coset("y", "x") != base_y


def test_coset_tree_finite_orders():
    window = coset_tree(4, order_x=2, order_y=3)
    x = window.action.generators["x"]
    xx = x * x
    # x has order 2: where defined, x^2 is the identity
    assert all(xx.images[v] in (None, v) for v in range(window.tree.n_vertices))
    c = classify_aut(x)
    assert c.kind is AutKind.ELLIPTIC
    assert c.fix.vertices == frozenset({window.base_edge[0]})


def test_coset_tree_generator_classification():
    window = coset_tree(5)
    cx = classify_aut(window.action.generators["x"])
    assert cx.is_elliptic
    assert cx.fix.vertices == frozenset({window.base_edge[0]})
    px = per_subtree(window.action.generators["x"])
    assert px.vertices == frozenset({window.base_edge[0]})


# ---------------------------------------------------------------------------
# xy decomposition
# ---------------------------------------------------------------------------

def all_reduced_words(max_len: int) -> list[str]:
    """Compact-form reduced words over x, y and inverses, length <= max_len."""
    out = [""]
    frontier = [""]
    inverse = {"x": "X", "X": "x", "y": "Y", "Y": "y"}
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for letter in "xXyY":
                if w and inverse[w[-1]] == letter:
                    continue
                nxt.append(w + letter)
        out.extend(nxt)
        frontier = nxt
    return out


def test_xy_decomposition_free_product():
    window = coset_tree(5)
    elements = all_reduced_words(3)
    report = xy_decomposition(window.action, "x", "y", window.base_edge, 1, elements)
    assert report.ok
    for word in elements:
        tag = report.tags[format_word(word)]
        if not word:
            assert tag == "Stab"
        elif word[0] in ("x", "X"):
            assert tag == "X"
        else:
            assert tag == "Y"
    counts = report.counts()
    assert counts["Stab"] == 1
    assert counts["X"] == counts["Y"]


def test_xy_decomposition_depth_three():
    window = coset_tree(7)
    elements = all_reduced_words(3)
    report = xy_decomposition(window.action, "x", "y", window.base_edge, 3, elements)
    assert report.ok


def test_xy_decomposition_finite_order_rejects_large_n():
    window = coset_tree(6, order_x=4, order_y=4)
    with pytest.raises(PreconditionFailed):
        xy_decomposition(window.action, "x", "y", window.base_edge, 2, [""])
    report = xy_decomposition(window.action, "x", "y", window.base_edge, 1, [""])
    assert report.tags["1"] == "Stab"


def test_xy_decomposition_precondition_failures():
    window = coset_tree(5)
    with pytest.raises(PreconditionFailed):
        xy_decomposition(window.action, "x", "x", window.base_edge, 1, [""])
    # an edge not on the bridge between the fixed trees
    other_edge = None
    base = set(window.base_edge)
    for u, v in window.tree.edges:
        if not {u, v} & base:
            other_edge = (u, v)
            break
    with pytest.raises(PreconditionFailed):
        xy_decomposition(window.action, "x", "y", other_edge, 1, [""])
    # hyperbolic word rejected
    with pytest.raises(PreconditionFailed):
        xy_decomposition(window.action, "xy", "y", window.base_edge, 1, [""])


# ---------------------------------------------------------------------------
# ping-pong
# ---------------------------------------------------------------------------

def test_ping_pong_free_product_generators():
    window = coset_tree(6)
    witness = ping_pong_witness(window.action, "x", "y", 3)
    assert witness.ok
    base_x, base_y = window.base_edge
    assert witness.s == (base_x, base_y)
    # the two sides partition the tree minus nothing: one edge bridge
    assert witness.omega0 | witness.omega1 == frozenset(range(window.tree.n_vertices))
    assert witness.omega0 & witness.omega1 == frozenset()
    assert base_y in witness.omega0 and base_x in witness.omega1


def test_ping_pong_conjugate_generator():
    window = coset_tree(6)
    witness = ping_pong_witness(window.action, "x", "yxY", 2)
    assert witness.ok
    assert len(witness.omega0 | witness.omega1) < window.tree.n_vertices


def test_ping_pong_same_element_rejected():
    window = coset_tree(5)
    with pytest.raises(PreconditionFailed):
        ping_pong_witness(window.action, "x", "x", 2)


def test_no_identity_alternating_words_in_free_pair():
    window = coset_tree(6)
    assert identity_alternating_words(window.action, "x", "y", 4) == []


def test_identity_alternating_words_detects_torsion():
    window = coset_tree(5, order_x=2, order_y=3)
    offenders = identity_alternating_words(window.action, "x", "y", 3)
    assert "g0^2" in offenders  # x has order 2
    assert "g1^3" in offenders  # y has order 3


# ---------------------------------------------------------------------------
# axes
# ---------------------------------------------------------------------------

def test_axes_distinct_same_line_shifts():
    tree = Tree.path_graph(12)
    shift = TreeAut(tree, list(range(1, 12)) + [None])
    act = ActionSpec(tree, {"a": shift})
    assert axes_distinct(act, "a", "aa") is False


def test_axes_distinct_on_coset_tree():
    window = coset_tree(6)
    assert axes_distinct(window.action, "xy", "yx") is True
    assert axes_distinct(window.action, "xy", "xyxy") is False
    with pytest.raises(PreconditionFailed):
        axes_distinct(window.action, "x", "xy")


# ---------------------------------------------------------------------------
# finite orbits
# ---------------------------------------------------------------------------

def test_finite_orbit_star_rotation():
    tree = Tree.star(3)
    rot = TreeAut(tree, [0, 2, 3, 1])
    act = ActionSpec(tree, {"r": rot})
    verdict = finite_orbit_fixed_vertex(act, 1, 10)
    assert verdict.status is OrbitStatus.FIXED_VERTEX
    assert verdict.vertex == 0
    assert verdict.orbit == frozenset({1, 2, 3})


def test_finite_orbit_global_fixed_vertex():
    tree = Tree.path_graph(3)
    swap = TreeAut(tree, [2, 1, 0])
    act = ActionSpec(tree, {"s": swap})
    verdict = finite_orbit_fixed_vertex(act, 1, 5)
    assert verdict.status is OrbitStatus.FIXED_VERTEX
    assert verdict.vertex == 1


def test_finite_orbit_inconclusive_for_shift():
    tree = Tree.path_graph(12)
    shift = TreeAut(tree, list(range(1, 12)) + [None])
    act = ActionSpec(tree, {"a": shift})
    verdict = finite_orbit_fixed_vertex(act, 5, 20)
    assert verdict.status is OrbitStatus.INCONCLUSIVE

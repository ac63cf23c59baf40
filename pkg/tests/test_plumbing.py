from fractions import Fraction
import itertools
import json

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from dinv import snf
from dinv.errors import (
    InvalidInput,
    InvalidTree,
    NotNegativeDefinite,
    SingularForm,
    TooManyBadVertices,
)
from dinv.plumbing import (
    PlumbedTree,
    bad_vertices,
    char_square,
    class_label,
    conjugate_class,
    d_invariant_plumbing,
    d_lower_bound_form,
    d_table_plumbing,
    intersection_form,
    is_negative_definite,
    same_class,
    spinc_classes,
)
from dinv.randomized import regression_trees

from oracles import cofactor_det

F = Fraction


def single(w):
    return PlumbedTree(((0, w),), ())


def star(centre, leaves):
    verts = [(0, centre)] + [(k + 1, w) for k, w in enumerate(leaves)]
    return PlumbedTree(tuple(verts), tuple((0, k + 1) for k in range(len(leaves))))


def brute_force_table(tree, slack=3):
    """Maximum over a wide box, classes decided by exact solving."""
    Q = intersection_form(tree)
    inv = snf.inverse(Q.matrix)
    n = Q.n

    def apply(v):
        return [sum(inv[i][j] * v[j] for j in range(n)) for i in range(n)]

    classes = spinc_classes(Q)
    best = {}
    ranges = [range(m - 2 * slack, -m + 2 * slack + 1, 2) for m in Q.weights]
    for K in itertools.product(*ranges):
        cls = next(
            c for c in classes
            if all(x.denominator == 1 for x in apply([(a - b) // 2 for a, b in zip(K, c.representative)]))
        )
        sq = sum(k * x for k, x in zip(K, apply(K)))
        if cls.label not in best or sq > best[cls.label]:
            best[cls.label] = sq
    return [(best[c.label] + Q.n) / 4 for c in classes]


def test_intersection_form_examples():
    assert intersection_form(single(-2)).det == -2
    Q = intersection_form(PlumbedTree.linear([-3, -2, -2]))
    assert Q.matrix == ((-3, 1, 0), (1, -2, 1), (0, 1, -2)) and Q.det == -7
    D4 = intersection_form(star(-2, [-2, -2, -2]))
    assert D4.det == cofactor_det([list(r) for r in D4.matrix]) == 4
    assert D4.group == (2, 2)


def test_singular_form():
    with pytest.raises(SingularForm):
        intersection_form(PlumbedTree.linear([-1, -1]))


def test_negative_definite_examples():
    assert is_negative_definite(intersection_form(single(-2)))
    assert is_negative_definite(intersection_form(PlumbedTree.linear([-3, -2, -2])))
    assert not is_negative_definite(intersection_form(PlumbedTree.linear([0, 2])))


def test_bad_vertices_examples():
    assert bad_vertices(PlumbedTree.linear([-2, -2, -2])) == []
    assert bad_vertices(PlumbedTree.linear([-2, -1, -2])) == [1]
    assert bad_vertices(single(-1)) == []


def test_char_square_examples():
    assert char_square((0,), intersection_form(single(-2))) == 0
    assert char_square((2,), intersection_form(single(-2))) == -2
    assert char_square((1,), intersection_form(single(-3))) == F(-1, 3)


def test_spinc_classes_examples():
    Q2 = intersection_form(single(-2))
    reps = sorted(c.representative[0] % 4 for c in spinc_classes(Q2))
    assert reps == [0, 2]
    Q3 = intersection_form(single(-3))
    assert sorted(c.representative[0] % 6 for c in spinc_classes(Q3)) == [1, 3, 5]
    assert len(spinc_classes(intersection_form(single(-1)))) == 1


def test_single_vertex_tables():
    assert d_table_plumbing(single(-1)).values == (0,)
    assert sorted(d_table_plumbing(single(-2)).values) == [F(-1, 4), F(1, 4)]
    assert sorted(d_table_plumbing(single(-3)).values) == [F(-1, 2), F(1, 6), F(1, 6)]


def test_chain_table():
    t = d_table_plumbing(PlumbedTree.linear([-3, -2, -2]))
    assert len(t) == 7
    assert sorted(t.values) == sorted([F(1, 14), F(9, 14), F(-3, 14), F(-1, 2),
                                       F(-3, 14), F(9, 14), F(1, 14)])


def test_lower_bound_matches_value():
    tree = PlumbedTree.linear([-2, -2])
    Q = intersection_form(tree)
    cls = next(c for c in spinc_classes(Q) if same_class((0, 0), c.representative, Q))
    assert d_lower_bound_form(Q, cls) == d_invariant_plumbing(tree, cls) == F(1, 2)
    Q2 = intersection_form(single(-2))
    zero = next(c for c in spinc_classes(Q2) if same_class((0,), c.representative, Q2))
    assert d_lower_bound_form(Q2, zero) == F(1, 4)


def test_precondition_errors():
    with pytest.raises(NotNegativeDefinite):
        d_table_plumbing(single(2))
    # three arms of -1 vertices between -9 weights: three bad vertices
    tree = PlumbedTree(
        ((0, -9), (1, -1), (2, -9), (3, -1), (4, -9), (5, -1), (6, -9)),
        ((0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)),
    )
    assert bad_vertices(tree) == [1, 3, 5]
    assert is_negative_definite(intersection_form(tree))
    with pytest.raises(TooManyBadVertices):
        d_table_plumbing(tree)


def test_invalid_trees():
    with pytest.raises(InvalidTree):
        PlumbedTree(((0, -2), (1, -2)), ())
    with pytest.raises(InvalidTree):
        PlumbedTree(((0, -2), (1, -2), (2, -2)), ((0, 1), (1, 2), (2, 0)))
    with pytest.raises(InvalidInput):
        PlumbedTree.from_json({"vertices": [{"id": 0}]})


def test_tree_json_round_trip():
    tree = star(-2, [-2, -3, -5])
    text = json.dumps(tree.to_json())
    assert PlumbedTree.from_json(text) == tree
    assert json.dumps(PlumbedTree.from_json(text).to_json()) == text


@pytest.mark.parametrize("name", sorted(regression_trees()))
def test_regression_trees(name):
    tree = regression_trees()[name]
    Q = intersection_form(tree)
    t = d_table_plumbing(tree)
    assert len(t) == abs(Q.det)
    assert d_table_plumbing(tree, slack=2) == t
    assert d_table_plumbing(tree, method="box") == t
    assert d_table_plumbing(tree, method="lattice") == t
    for c in spinc_classes(Q):
        assert t[conjugate_class(c, Q).label] == t[c.label]
        assert class_label(c.representative, Q) == c.label


def test_regression_trees_against_brute_force():
    for name in ["chain -5/2", "chain -7/3", "star -2;-2,-3,-5", "star -1;-2,-3,-7"]:
        tree = regression_trees()[name]
        assert list(d_table_plumbing(tree).values) == brute_force_table(tree, slack=2)


def test_known_homology_spheres():
    # E8: K = 0 is characteristic and the form is negative definite, so d = 8/4
    e8 = PlumbedTree(
        tuple((k, -2) for k in range(8)),
        ((0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6), (6, 7)),
    )
    assert d_table_plumbing(e8).values == (2,)
    assert d_table_plumbing(star(-1, [-2, -3, -7])).values == (0,)


def test_non_cyclic_group():
    t = d_table_plumbing(star(-2, [-2, -2, -2]))
    assert t.group == (2, 2)
    assert sorted(t.values) == [0, 0, 0, 1]
    assert t.conjugation_center() is not None


trees = st.integers(1, 4).flatmap(
    lambda n: st.tuples(
        st.lists(st.integers(-5, -1), min_size=n, max_size=n),
        st.lists(st.integers(0, 10), min_size=n - 1, max_size=n - 1),
    )
)


def build_tree(data):
    weights, parents = data
    verts = tuple(enumerate(weights))
    edges = tuple((p % (k + 1), k + 1) for k, p in enumerate(parents))
    return PlumbedTree(verts, edges)


def admissible(tree):
    if snf.determinant(intersection_form_matrix(tree)) == 0:
        return None
    Q = intersection_form(tree)
    if not is_negative_definite(Q) or len(bad_vertices(tree)) > 2:
        return None
    return Q


def intersection_form_matrix(tree):
    idx = {v: k for k, v in enumerate(tree.ids)}
    M = [[0] * len(idx) for _ in idx]
    for k, w in enumerate(tree.weights):
        M[k][k] = w
    for a, b in tree.edges:
        M[idx[a]][idx[b]] = M[idx[b]][idx[a]] = 1
    return M


@settings(max_examples=60, suppress_health_check=[HealthCheck.too_slow], deadline=None)
@given(trees)
def test_random_trees(data):
    tree = build_tree(data)
    Q = admissible(tree)
    if Q is None:
        return
    t = d_table_plumbing(tree)
    assert len(t) == abs(Q.det)
    assert d_table_plumbing(tree, slack=2) == t
    assert d_table_plumbing(tree, method="lattice") == t
    for c in spinc_classes(Q):
        assert t[conjugate_class(c, Q).label] == t[c.label]
    if tree.weights and len(tree.weights) <= 3:
        assert list(t.values) == brute_force_table(tree, slack=2)

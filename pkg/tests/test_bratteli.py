import numpy as np
import pytest
from hypothesis import given, settings

from afcantor import bratteli as B
from afcantor.bratteli import BratteliDiagram, Node
from afcantor.fdalg import FdAlgebra, MalformedInput, is_left_invertible, matmul

from strategies import diagrams, li_diagrams


def test_path_count_examples():
    d = BratteliDiagram([[1], [1, 1], [1, 1, 2]], [[[1], [1]], [[1, 0], [0, 1], [1, 1]]])
    assert B.path_count(d, (1, 0), (1, 0)) == 1
    assert B.path_count(d, (0, 0), (2, 2)) == 2
    b = B.binary_diagram(5)
    assert all(B.path_count(b, (0, 0), (4, t)) == 1 for t in range(16))


def test_steps_must_be_embeddings():
    with pytest.raises(MalformedInput):
        BratteliDiagram([[1], [1, 1]], [[[0], [0]]])
    with pytest.raises(MalformedInput):
        BratteliDiagram([[2], [3]], [[[2]]])


@settings(max_examples=60, deadline=None)
@given(diagrams())
def test_path_matrices_compose(d):
    for n in range(d.depth):
        for m in range(n, d.depth):
            for k in range(m, d.depth):
                assert np.array_equal(d.path_matrix(n, k), matmul(d.path_matrix(m, k), d.path_matrix(n, m)))


class TestCertifier:
    def test_binary_diagram_is_certified(self):
        rep = B.check_cantor(B.binary_diagram(6))
        assert rep.verdict == "certified-at-depth"
        assert all(B.recheck_witness(B.binary_diagram(6), i) for i in rep.instances)

    def test_single_level(self):
        rep = B.check_cantor(BratteliDiagram([[2]], []))
        assert not [i for i in rep.instances if i.condition in ("D0", "D1")]
        assert [i.data for i in rep.instances if i.condition == "D2"] == [{"coeffs": {0: 1}, "target_dim": 2}]

    def test_constant_chain_lacks_duplicates(self):
        d = BratteliDiagram([[3]] * 4, [[[1]]] * 3)
        rep = B.check_cantor(d, dim_universe=[3, 4])
        assert len(rep.unwitnessed("D1")) == 3
        assert [i.data["dim"] for i in rep.unwitnessed("D3")] == [4]

    def test_unital_uses_equality(self):
        d = BratteliDiagram([[1], [1, 2]], [[[1], [2]]])
        loose = B.check_cantor(d)
        tight = B.check_cantor(d, unital=True)
        assert len(tight.instances) < len(loose.instances)
        assert all(i.data["target_dim"] == sum(x * d.levels[i.level].dims[s] for s, x in i.data["coeffs"].items())
                   for i in tight.instances if i.condition == "D2")

    def test_scope_notes(self):
        rep = B.check_cantor(B.binary_diagram(4), levels=[0], max_support=1)
        assert rep.notes and {i.level for i in rep.instances if i.condition in ("D1", "D2")} == {0}


@settings(max_examples=40, deadline=None)
@given(li_diagrams())
def test_every_witness_rechecks(d):
    rep = B.check_cantor(d, dim_universe=range(1, 5))
    assert all(B.recheck_witness(d, i) for i in rep.witnessed())


class TestIdeals:
    def test_extremes(self):
        d = B.binary_diagram(3)
        everything = [tuple(n) for n in d.nodes()]
        assert B.same_shape(B.restrict(d, everything), d)
        assert all(a.is_zero for a in B.quotient(d, everything).levels)
        assert B.same_shape(B.quotient(d, []), d)
        assert B.is_essential(d, everything) == "yes-at-depth"
        assert B.is_essential(d, [(2, 0)]) == "inconclusive"
        assert B.is_essential(d, []) == "no"

    def test_closure_is_directed_and_hereditary(self):
        d = BratteliDiagram([[1], [1, 1], [1, 1]], [[[1], [1]], [[1, 0], [0, 1]]])
        j = B.ideal_closure(d, [(2, 0), (2, 1)])
        assert j == {Node(0, 0), Node(1, 0), Node(1, 1), Node(2, 0), Node(2, 1)}
        assert B.ideal_closure(d, [(1, 0)]) == {Node(1, 0), Node(2, 0)}


@settings(max_examples=60, deadline=None)
@given(diagrams())
def test_closure_properties(d):
    seed = [tuple(n) for n in d.nodes()][::3]
    j = B.ideal_closure(d, seed)
    assert B.ideal_closure(d, j) == j
    for node in j:
        assert all(t in j for t in B._successors(d, node))
    for node in d.nodes():
        succ = B._successors(d, node)
        if succ and all(t in j for t in succ):
            assert node in j


class TestConstructions:
    def test_tensor(self):
        a = BratteliDiagram([[2, 3]], [])
        b = BratteliDiagram([[5]], [])
        assert B.tensor(a, b).levels[0] == FdAlgebra([10, 15])

    def test_cantorize_of_point_is_binary(self):
        d = BratteliDiagram([[1]] * 4, [[[1]]] * 3)
        assert B.same_shape(B.cantorize(d), B.binary_diagram(4))

    def test_split_cover_examples(self):
        one = BratteliDiagram([[3, 1]], [])
        cover, j = B.split_cover(one)
        assert B.same_shape(cover, one) and not j
        d = BratteliDiagram([[2], [4]], [[[2]]])
        cover, j = B.split_cover(d)
        assert cover.levels == (FdAlgebra([2]), FdAlgebra([4, 2]))
        assert j == {Node(1, 1)}
        assert B.same_shape(B.quotient(cover, j), d)

    def test_dot(self):
        text = B.to_dot(B.binary_diagram(3))
        assert text.count("[label=") == 13 and text.count("->") == 6
        text = B.to_dot(BratteliDiagram([[1]], []))
        assert text.count("[label=") == 1 and "->" not in text


@settings(max_examples=60, deadline=None)
@given(diagrams())
def test_split_cover_contract(d):
    cover, j = B.split_cover(d)
    assert cover.is_left_invertible_sequence()
    assert B.is_essential(cover, j) == "yes-at-depth"
    assert B.same_shape(B.quotient(cover, j), d)


@settings(max_examples=40, deadline=None)
@given(li_diagrams(max_dim=3), li_diagrams(max_dim=3))
def test_tensor_and_cantorize_keep_left_invertibility(a, b):
    t = B.tensor(a, b)
    assert t.is_left_invertible_sequence()
    assert set(t.levels[0].dims) <= {x * y for x in a.levels[0].dims for y in b.levels[0].dims}
    c = B.cantorize(a)
    assert c.is_left_invertible_sequence()
    assert [len(x) for x in c.levels] == [len(x) * 2**n for n, x in enumerate(a.levels)]


@settings(max_examples=30, deadline=None)
@given(li_diagrams(depth=3, max_dim=2, max_extra=3))
def test_cantorize_keeps_the_cantor_property(d):
    if B.check_cantor(d).verdict == "certified-at-depth":
        assert B.check_cantor(B.cantorize(d)).verdict == "certified-at-depth"


def test_random_diagram_is_reproducible():
    a = B.random_diagram(np.random.default_rng(5), 3, 4)
    b = B.random_diagram(np.random.default_rng(5), 3, 4)
    assert B.same_shape(a, b) and a.depth == 3 and max(a.all_dims()) <= 4

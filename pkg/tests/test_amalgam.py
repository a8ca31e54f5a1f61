import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afcantor.amalgam import amalgam_identities, joint_embed, proper_amalgamate, representable, weakly_initial
from afcantor.fdalg import FdAlgebra, MalformedInput, Morphism, identity_ep, is_left_invertible, is_unital, ep_from_section

from strategies import algebras, ep_pairs


def test_worked_example():
    d = FdAlgebra([2])
    ep1 = ep_from_section(Morphism(d, [2, 3], [[1], [1]]), [0])
    ep2 = ep_from_section(Morphism(d, [2, 2], [[1], [1]]), [0])
    g, o1, o2 = proper_amalgamate(ep1, ep2)
    assert g == FdAlgebra([2, 3, 2])
    assert o1.fwd.mult == ((1, 0), (0, 1), (1, 0))
    assert o2.fwd.mult == ((1, 0), (1, 0), (0, 1))
    assert all(amalgam_identities(ep1, ep2, o1, o2).values())


def test_identity_pairs_amalgamate_to_identity():
    d = FdAlgebra([1, 3])
    g, o1, o2 = proper_amalgamate(identity_ep(d), identity_ep(d))
    assert g == d and o1 == identity_ep(d) and o2 == identity_ep(d)


def test_domains_must_agree():
    with pytest.raises(MalformedInput):
        proper_amalgamate(identity_ep(FdAlgebra([1])), identity_ep(FdAlgebra([2])))


def test_joint_embed():
    g, a, b = joint_embed(FdAlgebra([2]), FdAlgebra([3]))
    assert g == FdAlgebra([2, 3]) and a.fwd.mult == ((1,), (0,)) and b.fwd.mult == ((0,), (1,))
    g, a, b = joint_embed(FdAlgebra([]), FdAlgebra([4, 1]))
    assert g == FdAlgebra([4, 1]) and len(a.fwd.dom) == 0 and b.fwd.mult == ((1, 0), (0, 1))


@settings(max_examples=100, deadline=None)
@given(algebras(min_len=0), algebras(min_len=0))
def test_joint_embed_is_left_invertible(a, b):
    _, ea, eb = joint_embed(a, b)
    ea.check()
    eb.check()
    assert is_left_invertible(ea.fwd) and is_left_invertible(eb.fwd)


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_amalgam_squares_commute(data):
    unital = data.draw(st.booleans())
    ep1 = data.draw(ep_pairs(unital=unital))
    ep2 = data.draw(ep_pairs(ep1.dom, unital=unital))
    g, o1, o2 = proper_amalgamate(ep1, ep2, unital)
    o1.check()
    o2.check()
    assert all(amalgam_identities(ep1, ep2, o1, o2).values())
    assert g.dims[: len(ep1.dom)] == ep1.dom.dims
    if unital:
        assert is_unital(o1.fwd) and is_unital(o2.fwd)


def test_weakly_initial_examples():
    assert weakly_initial({2, 3, 5}) == FdAlgebra([2, 3])
    assert weakly_initial({7}) == FdAlgebra([7])
    assert weakly_initial({6, 10, 15}) == FdAlgebra([6, 10, 15])
    with pytest.raises(MalformedInput):
        weakly_initial(set())


def test_representable():
    assert representable(11, [2, 3])
    assert not representable(1, [2, 3])
    assert representable(0, [])


@settings(max_examples=200, deadline=None)
@given(st.sets(st.integers(1, 20), min_size=1, max_size=6))
def test_weakly_initial_generates_and_is_independent(dims):
    gens = weakly_initial(dims).dims
    assert all(representable(k, gens) for k in dims)
    for g in gens:
        assert not representable(g, [x for x in gens if x != g])
    # nothing smaller does the job
    for r in range(len(gens)):
        for sub in itertools.combinations(sorted(dims), r):
            assert not all(representable(k, sub) for k in dims)

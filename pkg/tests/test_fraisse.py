import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from afcantor import fraisse as F
from afcantor import textio
from afcantor.amalgam import proper_amalgamate
from afcantor.bratteli import BratteliDiagram, check_cantor
from afcantor.fdalg import FdAlgebra, MalformedInput, Morphism, compose, ep_from_section, is_left_invertible

from strategies import li_diagrams


def spec(text, **kw):
    return F.CategorySpec.parse(text, **kw)


class TestCategory:
    def test_parse_and_describe(self):
        assert spec("all:6").describe() == "all:6"
        assert spec("{5, 2,3}").describe() == "2,3,5"
        for bad in ("all:x", "a,b", "all:0", "0,1"):
            with pytest.raises(MalformedInput):
                spec(bad)

    def test_objects(self):
        assert F.enumerate_objects(spec("1"), 2) == [FdAlgebra([1]), FdAlgebra([1, 1])]

    def test_arrows(self):
        out = {m.mult for m in F.enumerate_arrows(spec("2"), FdAlgebra([2]), 2) if m.cod == FdAlgebra([2, 2])}
        assert out == {((1,), (0,)), ((0,), (1,)), ((1,), (1,))}
        simple = [m for m in F.enumerate_arrows(spec("2,3,6", simple=True), FdAlgebra([2]), 6) if m.cod == FdAlgebra([6])]
        assert [m.mult for m in simple] == [((3,),)]


def brute_factor(gamma: Morphism, target: Morphism) -> bool:
    """Is there any left-invertible delta with delta o gamma = target?"""
    e, a = gamma.cod.dims, target.cod.dims
    rows = []
    for k in a:
        rows.append([r for r in itertools.product(*[range(k // x + 1) for x in e]) if sum(p * q for p, q in zip(r, e)) <= k])
    for choice in itertools.product(*rows):
        delta = Morphism(gamma.cod, target.cod, np.array(choice, dtype=np.int64).reshape(len(a), len(e)))
        if compose(delta, gamma) == target and is_left_invertible(delta):
            return True
    return False


@settings(max_examples=120, deadline=None)
@given(li_diagrams(depth=3, max_dim=3, max_extra=1))
def test_solve_factor_agrees_with_brute_force(d):
    gamma = d.composed(0, 1)
    target = d.composed(0, 2)
    found = F.solve_factor(gamma, target)
    if found is not None:
        assert compose(found, gamma) == target and is_left_invertible(found)
    assert (found is not None) == brute_factor(gamma, target)


def test_absorb_search_examples():
    d = BratteliDiagram([[1], [1, 1]], [[[1], [1]]])
    m, delta = F.absorb_search(d, 0, d.steps[0])
    assert m == 1 and delta.mult == ((1, 0), (0, 1))
    e, _ = F.build_fraisse(spec("2,3"), 12)
    n = 2
    a = e.levels[n]
    gamma = Morphism(a, list(a.dims) + [5], [[int(i == j) for j in range(len(a))] for i in range(len(a))] + [[1] + [0] * (len(a) - 1)])
    assert F.absorb_search(e, n, gamma) is None


@pytest.mark.parametrize("universe", ["1", "1,2", "2,3,5", "all:3"])
@pytest.mark.parametrize("unital", [False, True])
def test_engine_steps_are_proper_amalgams(universe, unital):
    """Each new level is the amalgam of the path into the top level with the
    request, summands in creation order, with no renumbering."""
    d, log = F.build_fraisse(spec(universe, unital=unital), 25)
    for r in log.records:
        n, top = r.request.stage, r.level - 1
        path = d.composed(n, top)
        ep1 = ep_from_section(path, range(len(d.levels[n])))
        ep2 = ep_from_section(r.request.arrow, range(len(d.levels[n])))
        g, o1, o2 = proper_amalgamate(ep1, ep2, unital)
        assert g == d.levels[top + 1]
        assert o1.fwd == d.steps[top]
        assert o2.fwd == r.delta


@pytest.mark.parametrize("universe", ["1", "2,3", "all:4"])
def test_logs_replay_and_round_trip(universe):
    d, log = F.build_fraisse(spec(universe), 30)
    assert F.verify_log(d, log) == [] and F.replay_log(d, log) == []
    again = F.log_from_node(textio.parse(textio.dump(log.as_data())))
    assert again == log


def test_engine_is_deterministic_and_schedules_differ():
    a1, _ = F.build_fraisse(spec("1,2"), 30, "stage-first")
    a2, _ = F.build_fraisse(spec("1,2"), 30, "stage-first")
    b, _ = F.build_fraisse(spec("1,2"), 30, "stage-last")
    assert a1 == a2 and a1 != b


def test_unital_runs_start_weakly_initial():
    d, _ = F.build_fraisse(spec("2,3,5", unital=True), 10)
    assert d.levels[0] == FdAlgebra([2, 3])
    assert d.is_unital_sequence()


def test_small_universes_fill_in():
    d, _ = F.build_fraisse(spec("1"), 10)
    assert set(d.all_dims()) == {1}
    assert not check_cantor(d, levels=[0, 1, 2]).unwitnessed()
    d, _ = F.build_fraisse(spec("1,2,3,4"), 60)
    assert not check_cantor(d, dim_universe=range(1, 5), levels=[]).unwitnessed()


class TestIntertwine:
    def test_self_chain_follows_the_steps(self):
        a, _ = F.build_fraisse(spec("1,2"), 30)
        chain = F.intertwine(a, a, 5)
        assert len(chain) == 5 and F.check_chain(a, a, chain)
        for link in chain[1:]:
            assert link.arrow == a.composed(link.src_level, link.dst_level)

    def test_incompatible_sizes(self):
        a, _ = F.build_fraisse(spec("2"), 10)
        b, _ = F.build_fraisse(spec("3"), 10)
        assert F.intertwine(a, b, 4) is None

    def test_needs_left_invertible_steps(self):
        d = BratteliDiagram([[1], [2]], [[[2]]])
        with pytest.raises(MalformedInput):
            F.intertwine(d, d, 2)


class TestSections:
    def test_one_level(self):
        u, _ = F.build_fraisse(spec("1"), 10)
        rounds = F.ep_section(u, BratteliDiagram([[1]], []), 1)
        assert rounds[0].alpha.mult == ((1,),) and rounds[0].beta.mult == ((1,),)
        assert all(F.check_section(u, BratteliDiagram([[1]], []), rounds).values())

    def test_trivial_surjection(self):
        u, _ = F.build_fraisse(spec("1"), 10)
        w = F.universal_surjection_witness(u, BratteliDiagram([[1]], []), 1)
        assert w is not None and not w.ideal

    def test_section_into_a_richer_run(self):
        u, _ = F.build_fraisse(spec("1,2"), 60)
        b = BratteliDiagram([[1], [1, 1]], [[[1], [1]]])
        rounds = F.ep_section(u, b, 2)
        assert rounds is not None and all(F.check_section(u, b, rounds).values())


class TestSupernatural:
    def test_examples(self):
        d = BratteliDiagram([[1], [2], [4], [8]], [[[2]], [[2]], [[2]]])
        assert F.supernatural(d, 13) == {2: (3, True)}
        d = BratteliDiagram([[1], [2], [6], [30]], [[[2]], [[3]], [[5]]])
        assert F.supernatural(d, 13) == {2: (1, False), 3: (1, False), 5: (1, True)}

    def test_needs_single_summands(self):
        with pytest.raises(MalformedInput):
            F.supernatural(BratteliDiagram([[1, 1]], []), 5)

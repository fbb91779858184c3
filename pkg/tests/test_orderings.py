import itertools

import pytest

from nodalis.cones import MultiplicityVector, enumerate_delta
from nodalis.graphs import AdmissibleGraph
from nodalis.oracles import FIG7_LARGE, FIG7_SMALL, FIG8_MIDDLE, restriction_lemma_violations
from nodalis.orderings import (
    OrderingContext,
    build_models_order,
    common_degenerations,
    gg,
    intermediate_graph,
    sq,
    succ,
)

M = MultiplicityVector


def G(n, *edges):
    return AdmissibleGraph.from_edges(n, edges)


FAN3 = G(3, (1, 2), (1, 3))
FAN4 = G(4, (1, 2), (1, 3), (1, 4))


@pytest.fixture(scope="module")
def ctx4():
    return OrderingContext(4, M.uniform(4))


class TestRelations:
    def test_top_is_above_everything(self, ctx4):
        top = AdmissibleGraph.empty(4)
        for g in ctx4.delta:
            assert succ(top, g, ctx4.m)
            if g != top:
                assert gg(top, g, ctx4.m)

    def test_reflexive(self, ctx4):
        for g in ctx4.delta:
            assert succ(g, g, ctx4.m)
            assert sq(g, g, ctx4.m)

    def test_gg_direction(self):
        m = M.uniform(3)
        assert not gg(FAN3, AdmissibleGraph.empty(3), m)
        assert gg(AdmissibleGraph.empty(3), FAN3, m)

    def test_fig7(self):
        assert succ(FIG7_SMALL, FIG7_LARGE, M.uniform(7))

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_gg_implies_succ_and_excludes_sq(self, n):
        ctx = OrderingContext(n, M.uniform(n))
        for a, b in itertools.product(ctx.delta, repeat=2):
            if ctx.gg(a, b):
                assert ctx.succ(a, b)
                assert not ctx.sq(a, b)

    def test_common_degenerations_shortcut(self):
        assert common_degenerations(FAN4, AdmissibleGraph.empty(4)) == [FAN4]


class TestModelsOrder:
    def test_small(self):
        assert build_models_order(enumerate_delta(2, M.uniform(2)), M.uniform(2)) == [AdmissibleGraph.empty(2)]
        assert build_models_order(enumerate_delta(3, M.uniform(3)), M.uniform(3)) == [FAN3, AdmissibleGraph.empty(3)]
        m = M((1, 2))
        assert build_models_order(enumerate_delta(2, m), m) == [G(2, (1, 2)), AdmissibleGraph.empty(2)]

    @pytest.mark.parametrize("reverse", [False, True])
    def test_linear_extension(self, ctx4, reverse):
        order = build_models_order(ctx4.delta, ctx4.m, reverse)
        pos = {g: i for i, g in enumerate(order)}
        assert order[-1] == AdmissibleGraph.empty(4)
        for a, b in itertools.permutations(order, 2):
            if ctx4.succ(a, b) and not ctx4.succ(b, a):
                assert pos[a] > pos[b]

    def test_large_fans_before_small(self, ctx4):
        pos = ctx4.position
        fans3 = [g for g in ctx4.delta if max(len(g.descendents(i)) for i in range(1, 5)) == 3]
        fans2 = [g for g in ctx4.delta if len(g.edges) == 2]
        for a in fans3:
            for b in fans2:
                if ctx4.succ(b, a):
                    assert pos[a] < pos[b]


class TestIndexSets:
    def test_minimum(self, ctx4):
        first = ctx4.order[0]
        s = ctx4.index_sets(first)
        assert (s.below, s.reduced, s.persistent) == ([], [], [])

    def test_top(self, ctx4):
        assert set(ctx4.index_sets(ctx4.top).below) == set(ctx4.delta) - {ctx4.top}

    def test_n3(self):
        ctx = OrderingContext(3, M.uniform(3))
        s = ctx.index_sets(AdmissibleGraph.empty(3))
        assert s.reduced == s.persistent == [FAN3]

    def test_restriction_n4(self, ctx4):
        assert restriction_lemma_violations(ctx4) == []

    def test_vdash_persistent_last(self, ctx4):
        for g in ctx4.order:
            seq = ctx4.vdash_order(g)
            flags = [ctx4.gg(g, h) for h in seq]
            assert flags == sorted(flags)
            assert sorted(seq) == sorted(ctx4.index_sets(g).reduced)

    def test_vdash_equals_models_when_all_persistent(self, ctx4):
        top = ctx4.top
        s = ctx4.index_sets(top)
        assert s.reduced == s.persistent
        assert ctx4.vdash_order(top) == sorted(s.reduced, key=ctx4.position.get)

    def test_accumulation(self, ctx4):
        for g in ctx4.order:
            for h in ctx4.index_sets(g).reduced:
                acc = ctx4.accumulation(g, h)
                assert acc
                if ctx4.gg(g, h):
                    assert acc == [h]


class TestIntermediate:
    def test_fig8(self):
        m = M.uniform(7)
        assert intermediate_graph(FIG7_SMALL, FIG7_LARGE, m) == FIG8_MIDDLE
        assert sq(FIG7_SMALL, FIG8_MIDDLE, m)
        assert gg(FIG8_MIDDLE, FIG7_LARGE, m)

    def test_persisting_class_gives_none(self, ctx4):
        other = G(4, (1, 2), (1, 3), (1, 4))
        assert intermediate_graph(FAN4, other, ctx4.m) is None
        assert intermediate_graph(AdmissibleGraph.empty(4), FAN4, ctx4.m) is None


def test_relation_matrices_shape(ctx4):
    mats = ctx4.relation_matrices()
    k = len(ctx4.order)
    for name in ("succ", "gg", "sq"):
        assert len(mats[name]) == k and all(len(r) == k for r in mats[name])

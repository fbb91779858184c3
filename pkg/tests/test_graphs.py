import itertools

import pytest
from hypothesis import given, strategies as st

from nodalis.graphs import (
    AdmissibleGraph,
    AxiomError,
    ClassShapeError,
    ExcClass,
    GraphInputError,
    PairingError,
    check_axioms,
    codim,
    d_gt,
    degenerates,
    enumerate_adm,
    fan_subgraph,
    graph_from_classes,
    is_chain_like,
    restrict,
    type_I_classes,
)
from nodalis.config import ResourceLimitError
from nodalis.oracles import brute_force_adm

E = lambda n, *c: ExcClass(tuple(c))  # noqa: E731


def G(n, *edges):
    return AdmissibleGraph.from_edges(n, edges)


FAN3 = G(3, (1, 2), (1, 3))
CHAIN3 = G(3, (1, 2), (2, 3))
TRIANGLE = G(3, (1, 2), (1, 3), (2, 3))


class TestAxioms:
    def test_empty_graph_ok(self):
        assert check_axioms(3, []) == []

    def test_two_ascendents_without_triangle(self):
        bad = check_axioms(3, [(1, 3), (2, 3)])
        assert [v.axiom for v in bad] == [4]
        assert set(bad[0].vertices) >= {3}

    def test_triangle_ok(self):
        assert check_axioms(3, [(1, 2), (1, 3), (2, 3)]) == []

    def test_square_loop_rejected(self):
        # 4-cycle 1-2-4-3-1 without chord
        bad = check_axioms(4, [(1, 2), (1, 3), (2, 4), (3, 4)])
        assert 3 in {v.axiom for v in bad}

    @pytest.mark.parametrize("edges", [[(2, 1)], [(1, 1)], [(0, 1)], [(1, 5)]])
    def test_malformed_edges_are_input_errors(self, edges):
        with pytest.raises(GraphInputError):
            check_axioms(3, edges)

    def test_from_edges_raises_axiom_error(self):
        with pytest.raises(AxiomError) as exc:
            G(3, (1, 3), (2, 3))
        assert exc.value.violations[0].to_json()["axiom"] == 4

    def test_json_round_trip(self):
        data = {"n": 3, "edges": [[1, 2], [1, 3]]}
        g = AdmissibleGraph.from_json(data)
        assert g == FAN3
        assert g.to_json() == data

    def test_edges_are_canonical(self):
        assert G(3, (1, 3), (1, 2)).edges == ((1, 2), (1, 3))


class TestEnumeration:
    def test_small_counts(self):
        assert enumerate_adm(1) == [AdmissibleGraph.empty(1)]
        assert enumerate_adm(2) == [AdmissibleGraph.empty(2), G(2, (1, 2))]
        assert len(enumerate_adm(3)) == 7

    def test_n3_is_everything_but_the_bad_pair(self):
        subsets = {tuple(sorted(s)) for r in range(4) for s in itertools.combinations([(1, 2), (1, 3), (2, 3)], r)}
        got = {g.edges for g in enumerate_adm(3)}
        assert subsets - got == {((1, 3), (2, 3))}

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_matches_brute_force(self, n):
        assert enumerate_adm(n) == brute_force_adm(n)

    def test_larger_counts_frozen(self):
        # n <= 4 from the exhaustive filter; n = 5 from the pruned enumerator,
        # whose pruning is exact (every violation inside a prefix is permanent)
        assert [len(enumerate_adm(n)) for n in range(1, 6)] == [1, 2, 7, 37, 266]

    def test_sorted_and_unique(self):
        gs = enumerate_adm(4)
        assert gs == sorted(set(gs))

    def test_bound(self, monkeypatch):
        with pytest.raises(ResourceLimitError):
            enumerate_adm(99)
        monkeypatch.setenv("NODALIS_MAX_N", "2")
        with pytest.raises(ResourceLimitError):
            enumerate_adm(3)


class TestClasses:
    def test_codim(self):
        assert codim(AdmissibleGraph.empty(4)) == 0
        assert codim(G(4, (1, 2), (1, 3), (1, 4))) == 3
        assert codim(TRIANGLE) == 3

    def test_type_I(self):
        assert type_I_classes(AdmissibleGraph.empty(3)) == [E(3, 1, 0, 0), E(3, 0, 1, 0), E(3, 0, 0, 1)]
        assert type_I_classes(FAN3) == [E(3, 1, -1, -1), E(3, 0, 1, 0), E(3, 0, 0, 1)]
        e = type_I_classes(CHAIN3)
        assert e == [E(3, 1, -1, 0), E(3, 0, 1, -1), E(3, 0, 0, 1)]
        assert e[0].dot(e[1]) == 1

    def test_pairing_rules(self):
        assert E(2, 1, 0).dot(E(2, 1, 0)) == -1
        assert E(2, 1, 0).dot(E(2, 0, 1)) == 0
        c = ExcClass((0, 0), c_coeff=1)
        assert c.dot(E(2, 1, 0)) == 0
        with pytest.raises(ValueError):
            c.dot(c)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_cross_pairings_non_negative(self, n):
        for g in enumerate_adm(n):
            cls = type_I_classes(g)
            assert all(cls[a].dot(cls[b]) >= 0 for a, b in itertools.combinations(range(n), 2))

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_codim_of_fan_is_minus_dgt(self, n):
        for g in enumerate_adm(n):
            for i, e in enumerate(type_I_classes(g), 1):
                assert codim(fan_subgraph(g, i)) == len(g.descendents(i)) == -d_gt(e)

    def test_fan_subgraph(self):
        g = G(4, (1, 2), (1, 3), (3, 4))
        assert fan_subgraph(g, 1) == G(4, (1, 2), (1, 3))
        assert fan_subgraph(g, 2) == AdmissibleGraph.empty(4)
        assert fan_subgraph(CHAIN3, 2) == G(3, (2, 3))

    def test_chain_like(self):
        assert is_chain_like(AdmissibleGraph.empty(3))
        assert is_chain_like(CHAIN3)
        assert not is_chain_like(FAN3)


class TestReverse:
    def test_examples(self):
        assert graph_from_classes([E(3, 1, 0, 0), E(3, 0, 1, 0), E(3, 0, 0, 1)]) == AdmissibleGraph.empty(3)
        assert graph_from_classes([E(3, 1, -1, -1), E(3, 0, 1, 0), E(3, 0, 0, 1)]) == FAN3

    def test_malformed(self):
        with pytest.raises(ClassShapeError):
            graph_from_classes([E(2, 1, -1), E(2, -1, 1)])

    def test_negative_pairing_names_pair(self):
        # e1 = E1 - E2 - E3 and e2 = E2 - E3 share E3 without the edge 1->2 compensating
        classes = [E(3, 1, 0, -1), E(3, 0, 1, -1), E(3, 0, 0, 1)]
        with pytest.raises(PairingError) as exc:
            graph_from_classes(classes)
        assert exc.value.pair == (1, 2)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_round_trip(self, n):
        for g in enumerate_adm(n):
            assert graph_from_classes(type_I_classes(g)) == g


class TestRestrict:
    def test_identity(self):
        for g in enumerate_adm(4):
            assert restrict(g, range(1, 5)) == g

    def test_examples(self):
        assert restrict(FAN3, [1, 3]) == G(2, (1, 2))
        assert restrict(FAN3, [2, 3]) == AdmissibleGraph.empty(2)

    def test_pairings_never_decrease(self):
        for g in enumerate_adm(4):
            cls = type_I_classes(g)
            for r in (2, 3):
                for keep in itertools.combinations(range(1, 5), r):
                    sub = type_I_classes(restrict(g, keep))
                    for (i, a), (j, b) in itertools.combinations(enumerate(keep), 2):
                        assert sub[i].dot(sub[j]) >= cls[a - 1].dot(cls[b - 1])

    def test_bad_index_set(self):
        with pytest.raises(GraphInputError):
            restrict(FAN3, [])


class TestDegenerates:
    def test_examples(self):
        assert degenerates(FAN3, FAN3)
        assert degenerates(FAN3, AdmissibleGraph.empty(3))
        assert not degenerates(AdmissibleGraph.empty(3), FAN3)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_partial_order(self, n):
        gs = enumerate_adm(n)
        rel = {(a, b): degenerates(a, b) for a in gs for b in gs}
        for a in gs:
            assert rel[a, a]
        for a, b in itertools.permutations(gs, 2):
            assert not (rel[a, b] and rel[b, a])
        for a, b, c in itertools.product(gs, repeat=3):
            if rel[a, b] and rel[b, c]:
                assert rel[a, c]


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.integers(-3, 3))
def test_pairing_bilinear_symmetric(a, b, k):
    u, v = ExcClass(tuple(a)), ExcClass(tuple(b))
    assert u.dot(v) == v.dot(u)
    assert (u * k).dot(v) == k * u.dot(v)
    assert (u + v).dot(v) == u.dot(v) + v.dot(v)

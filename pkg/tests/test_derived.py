import networkx as nx
import pytest

from ceer.coding import new_coding, new_merged
from ceer.derived import (
    DerivedContext,
    NoWalk,
    ScaleExceeded,
    decide,
    formula_scan,
    formula_witness,
    in_F,
    in_F_formula,
    in_G,
    in_H,
    in_J,
    in_R,
    in_S,
    in_T,
    minimal_walk,
    walk_shape_ok,
)
from ceer.generators import load_spec
from ceer.relations import FiniteRelation, is_equivalence, is_walk


def oracle_graph(ctx, cap):
    """Component structure of R | R^-1 over every edge with second component <= cap."""
    g = nx.Graph()
    g.add_edges_from(ctx.edges(cap))
    return g


def test_full_examples(full_ctx):
    full_ctx.ensure(4)
    assert full_ctx.pis()[:4] == ((0, 2), (1, 3), (0, 7), (2, 8))
    assert [(i, j) for i in range(10) for j in range(10) if in_R(i, j, full_ctx)] == [
        (0, 2), (0, 7), (1, 3), (2, 8)]
    # nu(2) = (1, 0) and nu(3) = (0, 1) are inverse
    assert [(i, j) for i in range(10) for j in range(10) if in_S(i, j, full_ctx)] == [
        (2, 2), (3, 7), (7, 3)]
    assert not in_T(3, 7, full_ctx) and in_T(8, 8, full_ctx)
    assert in_H(3, 7, full_ctx) and not in_H(0, 2, full_ctx)


def test_small_arguments_are_never_seconds(full_ctx):
    # seconds of pi exceed their index, and the first index is 1
    assert not any(in_R(i, j, full_ctx) for i in range(20) for j in range(2))
    for j in range(20):
        assert not in_S(0, j, full_ctx) and not in_T(1, j, full_ctx)


def test_fair_enumeration_puts_distinct_seconds_in_T():
    ctx = DerivedContext(new_coding(load_spec("mod:1").nu))
    off = [(i, j) for i in range(60) for j in range(60) if i != j and in_T(i, j, ctx)]
    assert off
    for i, j in off:
        m, n = ctx.witness_T(i, j)
        assert m != n and ctx.nu(m) == ctx.nu(n)


@pytest.mark.parametrize("spec", ["mod:1", "mod:2", "mod:3", "mod:5"])
def test_H_is_symmetric_and_reflexive_on_its_field(spec):
    ctx = DerivedContext(new_coding(load_spec(spec).nu))
    h = FiniteRelation.from_predicate(40, lambda i, j: in_H(i, j, ctx))
    assert all((j, i) in h for i, j in h)
    fld = {i for i, _ in h}
    assert all((i, i) in h for i in fld)
    assert all(ctx.in_field_H(i) == (i in fld) for i in range(41))


@pytest.mark.parametrize("spec", ["mod:1", "mod:2", "mod:3", "mod:5"])
def test_F_matches_graph_oracle(spec):
    ctx = DerivedContext(new_coding(load_spec(spec).nu))
    # a generous edge cap: the bounded decider must agree with the looser graph
    g = oracle_graph(ctx, 400)
    for i in range(51):
        for j in range(51):
            truth = i == j or (i in g and j in g and nx.has_path(g, i, j))
            assert in_F(i, j, ctx) == truth, (i, j)


@pytest.mark.parametrize("spec", ["mod:2", "mod:3"])
def test_F_is_an_equivalence_inside_the_relation(spec):
    s = load_spec(spec)
    ctx = DerivedContext(new_coding(s.nu))
    f = FiniteRelation.from_predicate(40, lambda i, j: in_F(i, j, ctx))
    assert is_equivalence(f)
    assert all(s.truth(i, j) for i, j in f)


def test_formula_agrees_with_closure(full_ctx):
    for i in range(5):
        for j in range(5 - i):
            assert in_F_formula(i, j, full_ctx) == in_F(i, j, full_ctx), (i, j)
    assert not in_F_formula(0, 4, full_ctx)
    with pytest.raises(ScaleExceeded):
        in_F_formula(2, 3, full_ctx)


def test_formula_search_matches_literal_scan(full_ctx):
    for i in range(4):
        for j in range(4 - i):
            if i + j:
                assert formula_witness(i, j, full_ctx) == formula_scan(i, j, full_ctx), (i, j)


def test_minimal_walks(full_ctx):
    assert minimal_walk(2, 7, full_ctx) == (-1, 3)
    w = minimal_walk(3, 3, full_ctx)
    assert w == (-2, 2) and is_walk(w, 3, 3, full_ctx.pi)
    with pytest.raises(NoWalk):
        minimal_walk(0, 1, full_ctx)


@pytest.mark.parametrize("spec", ["mod:2", "mod:3"])
def test_walks_have_the_negative_then_positive_shape(spec):
    ctx = DerivedContext(new_coding(load_spec(spec).nu))
    g = oracle_graph(ctx, 400)
    for i in range(30):
        for j in range(30):
            if i != j and in_F(i, j, ctx):
                w = minimal_walk(i, j, ctx)
                assert is_walk(w, i, j, ctx.pi) and walk_shape_ok(w)
                assert len(w) == nx.shortest_path_length(g, i, j)
                assert len(w) <= i + j


def test_shape_predicate():
    assert walk_shape_ok((-3, -1, 2, 5)) and walk_shape_ok(()) and walk_shape_ok((4,))
    assert not walk_shape_ok((2, -1))


def test_G_is_an_equivalence_inside_the_relation(mod3, mod3_merged_ctx):
    ctx = mod3_merged_ctx
    g = FiniteRelation.from_predicate(40, lambda i, j: in_G(i, j, ctx))
    assert is_equivalence(g)
    assert all(mod3.truth(i, j) for i, j in g)
    assert all(in_G(i, i, ctx) for i in range(41))


@pytest.mark.parametrize("spec", ["mod:1", "mod:2", "mod:3", "mod:5"])
def test_J_lives_off_the_field_of_H(spec):
    ctx = DerivedContext(new_merged(load_spec(spec).nu))
    n = 40
    j = FiniteRelation.from_predicate(n, lambda a, b: in_J(a, b, ctx))
    outside = {i for i in range(n + 1) if not ctx.in_field_H(i)}
    assert {a for a, _ in j} == outside
    assert all((b, a) in j for a, b in j)


def test_J_needs_a_merged_coding(full_ctx):
    with pytest.raises(ValueError):
        in_J(0, 0, full_ctx)


def test_S_and_T_only_look_below_their_arguments(mod3):
    ctx = DerivedContext(new_coding(mod3.nu))
    ctx.ensure(200)
    for i, j in ((5, 17), (30, 12), (44, 44), (90, 7)):
        for rel in (in_S, in_T):
            ctx.nu.reset()
            rel(i, j, ctx)
            assert ctx.nu.max_index < max(i, j)


def test_decisions_carry_witnesses(full_ctx):
    d = decide(full_ctx, "F", 2, 7)
    assert d.value and d.witness == {"walk": [-1, 3]}
    d = decide(full_ctx, "R", 0, 7)
    assert d.witness == {"index": 3, "pi": [0, 7]}
    d = decide(full_ctx, "H", 3, 7)
    assert d.witness["via"] == "S" and (d.witness["m"], d.witness["n"]) == (2, 3)
    assert not decide(full_ctx, "R", 2, 0).value
    with pytest.raises(ValueError):
        decide(full_ctx, "Q", 0, 0)


def test_G_decision_nests_its_H_witness(mod3_merged_ctx):
    ctx = mod3_merged_ctx
    hit = next((i, j) for i in range(40) for j in range(40) if in_H(i, j, ctx))
    d = decide(ctx, "G", *hit)
    assert d.witness["via"] == "H" and "via" in d.witness["H"]
    off = [(i, j) for i in range(40) for j in range(40) if i != j and in_J(i, j, ctx)]
    if off:
        d = decide(ctx, "G", *off[0])
        assert d.witness["via"] == "J" and is_walk(tuple(d.witness["walk_zeta"]), *off[0],
                                                    lambda n: ctx.pi(n, "zeta"))

"""Entourage algebra, the budgeted checkers, embeddings, partitions."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conjcoarse import (
    Budget,
    action_space,
    asymorphic_embedding_check,
    ball,
    cellularity_criterion,
    component_of,
    conj,
    conjugation_space,
    entourage,
    entourage_inverse,
    entourage_product,
    generate_finite,
    indicator_embedding,
    is_bounded,
    is_direct_union,
    is_discrete,
    is_n_discrete,
    macro_uniform_check,
    partition_n_discrete,
    sample_entourages,
)
from conjcoarse.coarse import compose_relations, relation_of
from conjcoarse.groups import direct_product, enumerate_ball, power
from conjcoarse.zoo import GroupSpec, finite_zoo, indicator_instance, make_group

S3 = make_group(GroupSpec.make("symmetric", n=3))
Z2 = make_group(GroupSpec.make("zk", k=2))
DINF = make_group(GroupSpec.make("dinf"))
HEIS = make_group(GroupSpec.make("heisenberg"))


def test_ball_examples():
    x = S3.named()["s"]
    assert ball(S3, x, entourage(S3, [])) == frozenset([x])
    got = ball(S3, x, entourage(S3, [(2, 1, 0)]))
    assert got == frozenset([(1, 0, 2), (0, 2, 1)])
    for v in [(0, 0), (3, -1)]:
        assert ball(Z2, v, entourage(Z2, Z2.generators)) == frozenset([v])


def test_entourage_product_with_identity_is_identity():
    E = entourage(S3, [(2, 1, 0)])
    unit = entourage(S3, [])
    assert entourage_product(S3, E, unit) == E
    assert entourage_product(S3, unit, E) == E


def test_entourage_relations_exhaustive_s3():
    G = generate_finite(S3.generators, S3, cap=6)
    ctx = G.as_ctx()
    universe = G.elements
    F = entourage(ctx, [(2, 1, 0)])
    assert len(F.conjugators) == 2  # (1 3) is an involution, plus e
    lhs = compose_relations(
        relation_of(ctx, F, universe), relation_of(ctx, F, universe)
    )
    rhs = relation_of(ctx, entourage_product(ctx, F, F), universe)
    assert lhs == rhs
    assert len(lhs) <= 36


def test_entourage_relation_identities_seeded():
    rng = random.Random(7)
    for spec, G in finite_zoo(24):
        ctx = G.as_ctx()
        universe = G.elements
        for _ in range(6):
            F = entourage(ctx, rng.sample(universe, min(2, len(universe))))
            F2 = entourage(ctx, rng.sample(universe, min(2, len(universe))))
            r1, r2 = relation_of(ctx, F, universe), relation_of(ctx, F2, universe)
            assert compose_relations(r1, r2) == relation_of(
                ctx, entourage_product(ctx, F, F2), universe
            )
            assert frozenset((y, x) for x, y in r1) == relation_of(
                ctx, entourage_inverse(ctx, F), universe
            )
            assert all((x, x) in r1 for x in universe)  # diagonal


def test_is_discrete_abelian_holds():
    for E in sample_entourages(Z2, 5):
        assert is_discrete(Z2, E, Budget(radius=5, cap=100)).holds


def test_is_discrete_dinf_fails_with_recheckable_witnesses():
    t = DINF.named()["t"]
    E = entourage(DINF, [t])
    v = is_discrete(DINF, E, Budget(radius=20))
    assert v.fails and len(v.witnesses) >= 10
    # independent re-check: each witness really is moved by conjugation by t
    by_render = {DINF.render(x): x for x in enumerate_ball(DINF, 20)}
    for w in v.witnesses:
        x = by_render[w]
        assert conj(DINF, x, t) != x


def test_is_discrete_finite_holds_vacuously():
    E = entourage(S3, [S3.named()["s"]])
    assert is_discrete(S3, E, Budget(radius=4)).holds


def test_is_n_discrete_heisenberg_fails_beyond_bound():
    x, y = HEIS.named()["x"], HEIS.named()["y"]
    n = 3
    conjugators = [power(HEIS, x, j) for j in range(n + 2)]
    E = entourage(HEIS, conjugators)
    # oracle: the ball of y is exactly {y z^-j : 0 <= j <= n+1}
    expected = frozenset((0, 1, -j) for j in range(n + 2))
    assert ball(HEIS, y, E) == expected
    v = is_n_discrete(HEIS, E, n, Budget(radius=3))
    assert v.fails


def test_is_n_discrete_bounded_by_commutant_q8z3():
    q8z3 = direct_product(
        make_group(GroupSpec.make("quaternion")),
        make_group(GroupSpec.make("zk", k=3)),
        name="Q8xZ3",
    )
    assert q8z3.commutant_size == 2
    for E in sample_entourages(q8z3, 3):
        assert is_n_discrete(q8z3, E, 2, Budget(radius=4, cap=120)).holds


def test_component_examples():
    assert component_of(Z2, (1, 2)).holds
    v = component_of(S3, S3.named()["s"])
    assert v.holds
    assert set(v.witnesses) == {"(1 2)", "(1 3)", "(2 3)"}
    v = component_of(HEIS, HEIS.named()["y"], Budget(rounds=50))
    assert v.unknown
    assert v.certificate["partial_component"] >= 51


def test_is_bounded_reduction():
    assert is_bounded(Z2, []).holds
    assert is_bounded(S3, enumerate_ball(S3, 4)).holds
    refl_stream = [(1, m) for m in range(100)]
    assert is_bounded(DINF, refl_stream).holds


def test_direct_union_examples():
    assert is_direct_union(Z2, entourage(Z2, Z2.generators), Budget(radius=3, cap=40)).holds
    assert is_direct_union(S3, entourage(S3, [S3.named()["s"]]), Budget(radius=3)).holds
    r = DINF.named()["r"]
    v = is_direct_union(DINF, entourage(DINF, [r]), Budget(radius=14, rounds=30))
    assert v.fails and len(v.witnesses) >= 10
    # oracle: conjugating t^n by r lands on t^-n, a different point of the
    # same two-element component
    t = DINF.named()["t"]
    for n in range(1, 11):
        tn = power(DINF, t, n)
        assert conj(DINF, tn, r) == power(DINF, t, -n)


def test_macro_uniform_identity_and_constant():
    space = conjugation_space(S3)
    assert macro_uniform_check(lambda x: x, space, space, Budget(radius=3)).holds
    const = S3.identity
    assert macro_uniform_check(lambda x: const, space, space, Budget(radius=3)).holds


def test_asymorphic_identity_holds_constant_fails():
    space = conjugation_space(S3)
    assert asymorphic_embedding_check(lambda x: x, space, space, Budget(radius=3)).holds
    v = asymorphic_embedding_check(
        lambda x: S3.identity, space, space, Budget(radius=3)
    )
    assert v.fails
    assert v.certificate["reason"] == "not injective"


def test_indicator_embedding_trivial_group():
    action, G, f = indicator_instance(1, "cyclic")
    closed = generate_finite(G.generators, G, cap=4)
    assert closed.order == 2
    assert f(1) != G.identity


def test_indicator_embedding_conjugation_identity():
    action, G, f = indicator_instance(3, "symmetric")
    closed = generate_finite(G.generators, G, cap=64)
    assert closed.order == 48
    pairs = 0
    for x in action.points:
        for g in action.group.elements:
            lhs = conj(G, f(x), (frozenset(), g))
            rhs = f(action.apply(action.group.invert(g), x))
            assert lhs == rhs
            pairs += 1
    assert pairs == 18


def test_indicator_embedding_c4_and_asymorphic():
    action, G, f = indicator_instance(4, "cyclic")
    for x in action.points:
        for g in action.group.elements:
            assert conj(G, f(x), (frozenset(), g)) == f(
                action.apply(action.group.invert(g), x)
            )
    v = asymorphic_embedding_check(
        f, action_space(action), conjugation_space(G), Budget(radius=3, cap=400)
    )
    assert v.holds


def test_partition_single_part_when_discrete():
    E = entourage(Z2, Z2.generators)
    A = enumerate_ball(Z2, 2)
    parts, report = partition_n_discrete(Z2, A, E, 1)
    assert report["verified"] and len(parts) == 1 and parts[0] == frozenset(A)


def test_partition_empty_set():
    E = entourage(Z2, Z2.generators)
    parts, report = partition_n_discrete(Z2, [], E, 3)
    assert [len(p) for p in parts] == [0, 0, 0]


def test_partition_q8z_two_parts_verified():
    q8z = direct_product(
        make_group(GroupSpec.make("quaternion")),
        make_group(GroupSpec.make("zk", k=1)),
        name="Q8xZ",
    )
    E = entourage(q8z, [q8z.named()["j"]])
    A = enumerate_ball(q8z, 20)
    parts, report = partition_n_discrete(q8z, A, E, 2)
    assert report["verified"]
    assert sum(len(p) for p in parts) == len(A)
    # definitional re-check, independent of the verifier inside
    for part in parts:
        for x in part:
            assert ball(q8z, x, E) & part == frozenset([x])


def test_partition_rejects_non_n_discrete_input():
    x = HEIS.named()["x"]
    E = entourage(HEIS, [power(HEIS, x, j) for j in range(4)])
    A = enumerate_ball(HEIS, 2)
    with pytest.raises(ValueError):
        partition_n_discrete(HEIS, A, E, 2)


def test_cellularity_abelian_trivial_conjugators():
    v = cellularity_criterion(Z2, [Z2.named()["e1"]], Budget(radius=2, cap=60))
    assert v.holds
    assert v.certificate["conjugator_set"] == ["(0;0)"]


def test_cellularity_heisenberg_fails_with_growing_orbits():
    x = HEIS.named()["x"]
    v = cellularity_criterion(HEIS, [x], Budget(radius=3, rounds=40, witnesses=12, cap=300))
    assert v.fails
    sizes = [item["orbit_size"] for item in v.certificate["orbit_sizes"]]
    assert sizes == sorted(sizes) and sizes[-1] > 12


def test_cellularity_remark6_fails():
    bs = make_group(GroupSpec.make("remark6"))
    v = cellularity_criterion(
        bs, [bs.named()["a"]], Budget(radius=1, rounds=25, witnesses=15, cap=300)
    )
    assert v.fails


@given(r=st.integers(0, 4))
def test_sample_entourages_chain_is_monotone(r):
    ents = sample_entourages(DINF, r)
    for small, big in zip(ents, ents[1:]):
        assert set(small.conjugators) <= set(big.conjugators)

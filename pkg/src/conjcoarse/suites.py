"""Named verification suites runnable from the CLI and the test suite.

Each suite exercises one cluster of cross-validations over the zoo and
returns a deterministic report dict: same seed, byte-identical JSON.
Report ordering follows suite definition order, never completion order.
"""

from __future__ import annotations

import random

from . import bergman, coarse, saturation, subgroups, zoo
from .groups import (
    commutator_subgroup,
    conj,
    conjugacy_classes,
    direct_product,
    generate_finite,
    power,
)
from .verdicts import Budget
from .zoo import GroupSpec, make_group


def _entry(name: str, ok: bool, **detail) -> dict:
    out = {"name": name, "ok": bool(ok)}
    out.update(detail)
    return out


def _suite(name: str, entries: list) -> dict:
    return {
        "suite": name,
        "ok": all(e["ok"] for e in entries),
        "reports": entries,
    }


# ---------------------------------------------------------------------------


def entourage_algebra_suite(seed: int = 0) -> dict:
    """Relation identities E_F o E_F' = E_{FF'} and (E_F)^-1 = E_{F^-1},
    exhaustively compared on every finite zoo group for seeded pairs."""
    rng = random.Random(seed)
    entries = []
    for spec, G in zoo.finite_zoo(48):
        ctx = G.as_ctx()
        universe = G.elements
        ok = True
        pairs_checked = 0
        for _ in range(20):
            F = coarse.entourage(
                ctx, rng.sample(universe, rng.randint(1, min(3, len(universe))))
            )
            F2 = coarse.entourage(
                ctx, rng.sample(universe, rng.randint(1, min(3, len(universe))))
            )
            lhs = coarse.compose_relations(
                coarse.relation_of(ctx, F, universe),
                coarse.relation_of(ctx, F2, universe),
            )
            rhs = coarse.relation_of(ctx, coarse.entourage_product(ctx, F, F2), universe)
            inv_lhs = frozenset((y, x) for x, y in coarse.relation_of(ctx, F, universe))
            inv_rhs = coarse.relation_of(ctx, coarse.entourage_inverse(ctx, F), universe)
            diag = all((x, x) in coarse.relation_of(ctx, F, universe) for x in universe)
            if lhs != rhs or inv_lhs != inv_rhs or not diag:
                ok = False
                break
            pairs_checked += 1
        entries.append(_entry(G.name, ok, order=G.order, pairs=pairs_checked))
    return _suite("entourage-algebra", entries)


def discreteness_suite() -> dict:
    """Discreteness is commutativity: free abelian groups hold for every
    sampled entourage, the infinite dihedral and integer Heisenberg
    groups fail with witnesses, and on finite groups commutativity is
    exactly 'all conjugacy classes are singletons'."""
    entries = []
    for k in (1, 2, 3):
        ctx = make_group(GroupSpec.make("zk", k=k))
        budget = Budget(radius=8, cap=150)
        verdicts = [
            coarse.is_discrete(ctx, E, budget)
            for E in coarse.sample_entourages(ctx, 8)
        ]
        entries.append(
            _entry(
                f"Z^{k}-discrete",
                all(v.holds for v in verdicts),
                entourages=len(verdicts),
            )
        )

    dinf = make_group(GroupSpec.make("dinf"))
    E = coarse.entourage(dinf, [dinf.named()["t"]])
    v = coarse.is_discrete(dinf, E, Budget(radius=20))
    entries.append(
        _entry(
            "Dinf-not-discrete",
            v.fails and len(v.witnesses) >= 10,
            witnesses=list(v.witnesses),
        )
    )

    heis = make_group(GroupSpec.make("heisenberg"))
    E = coarse.entourage(heis, [heis.named()["x"]])
    v = coarse.is_discrete(heis, E, Budget(radius=3))
    entries.append(
        _entry(
            "Heisenberg-not-discrete",
            v.fails and len(v.witnesses) >= 10,
            witnesses=list(v.witnesses),
        )
    )

    for spec, G in zoo.finite_zoo(48):
        singletons = all(len(c) == 1 for c in conjugacy_classes(G))
        entries.append(
            _entry(
                f"{G.name}-finite-shadow",
                singletons == G.is_abelian,
                abelian=G.is_abelian,
                all_classes_singleton=singletons,
            )
        )
    return _suite("theorem1", entries)


def class_bound_suite() -> dict:
    """Conjugacy classes never outgrow the commutant, and a finite
    commutant makes the space n-discrete for n its order: exact on the
    finite zoo, sampled on Q8 x Z truncated to word radius 20."""
    entries = []
    for spec, G in zoo.finite_zoo(48):
        bound = commutator_subgroup(G).order
        biggest = max(len(c) for c in conjugacy_classes(G))
        entries.append(
            _entry(
                f"{G.name}-class-bound",
                biggest <= bound,
                max_class=biggest,
                commutant=bound,
            )
        )

    q8z = direct_product(
        make_group(GroupSpec.make("quaternion")),
        make_group(GroupSpec.make("zk", k=1)),
        name="Q8xZ",
    )
    budget = Budget(radius=20, cap=300)
    verdicts = [
        coarse.is_n_discrete(q8z, E, 2, budget)
        for E in coarse.sample_entourages(q8z, 8)
    ]
    entries.append(
        _entry(
            "Q8xZ-2-discrete",
            all(v.holds for v in verdicts) and q8z.commutant_size == 2,
            commutant=q8z.commutant_size,
            entourages=len(verdicts),
        )
    )
    return _suite("theorem3", entries)


def cellularity_suite() -> dict:
    """Orbit confinement of finitely generated subgroups against local
    finiteness of the central quotient, on both positive and negative
    instances, with the refuting orbit growth verified exactly."""
    entries = []

    q8z2 = direct_product(
        make_group(GroupSpec.make("quaternion")),
        make_group(GroupSpec.make("zk", k=2)),
        name="Q8xZ2",
    )
    names = q8z2.named()
    samples = [
        ("i",),
        ("j",),
        ("e1",),
        ("i", "e1"),
        ("k", "e2"),
    ]
    all_hold = True
    certs = []
    for sample in samples:
        gens = [names[n] for n in sample]
        v = coarse.cellularity_criterion(q8z2, gens, Budget(radius=3, cap=200))
        all_hold = all_hold and v.holds
        certs.append(
            {"subgroup": list(sample), "status": v.status.value, "certificate": v.certificate}
        )
    quotient = saturation.locally_finite_quotient_check(q8z2, budget=Budget(rounds=30))
    entries.append(
        _entry(
            "Q8xZ2-cellular",
            all_hold and quotient.holds,
            subgroups=certs,
            quotient=quotient.status.value,
        )
    )

    heis = make_group(GroupSpec.make("heisenberg"))
    x, y = heis.named()["x"], heis.named()["y"]
    v = coarse.cellularity_criterion(
        heis, [x], Budget(radius=4, rounds=100, witnesses=100, cap=400)
    )
    # independent verification: the k+1 conjugates of y under x^0..x^k
    k = 100
    seenconj = {conj(heis, y, power(heis, x, j)) for j in range(k + 1)}
    quotient = saturation.locally_finite_quotient_check(
        heis, gens_sample=[x], budget=Budget(rounds=120, witnesses=100)
    )
    entries.append(
        _entry(
            "Heisenberg-not-cellular",
            v.fails and len(seenconj) == k + 1 and quotient.fails,
            orbit_size_at_100=len(seenconj),
            largest_refuting_orbit=v.certificate["orbit_sizes"][-1] if v.fails else None,
            quotient=quotient.status.value,
        )
    )

    bs = make_group(GroupSpec.make("remark6"))
    a = bs.named()["a"]
    v = coarse.cellularity_criterion(
        bs, [a], Budget(radius=1, rounds=30, witnesses=20, cap=400)
    )
    orbit_formula = all(zoo.blockshift_orbit_size(i, bs) == i + 1 for i in range(21))
    quotient = saturation.locally_finite_quotient_check(
        bs, gens_sample=[a], budget=Budget(rounds=60)
    )
    noncentral = all(
        conj(bs, zoo.blockshift_noncentral_power(n, bs), power(bs, a, n))
        != zoo.blockshift_noncentral_power(n, bs)
        for n in (1, 6, 12)
    )
    entries.append(
        _entry(
            "BlockShift-not-cellular",
            v.fails and orbit_formula and quotient.fails and noncentral,
            orbit_formula_to=20,
            quotient=quotient.status.value,
        )
    )
    return _suite("theorem5", entries)


def embedding_suite() -> dict:
    """The indicator embedding of finite action spaces: the conjugation
    identity exhaustively, then the two-way macro-uniformity check."""
    entries = []
    for pts, perms in ((3, "symmetric"), (4, "cyclic"), (4, "symmetric")):
        action, G, f = zoo.indicator_instance(pts, perms)
        identity_ok = True
        pairs = 0
        for xx in action.points:
            for g in action.group.elements:
                lhs = conj(G, f(xx), (frozenset(), g))
                rhs = f(action.apply(action.group.invert(g), xx))
                identity_ok = identity_ok and lhs == rhs
                pairs += 1
        v = coarse.asymorphic_embedding_check(
            f,
            coarse.action_space(action),
            coarse.conjugation_space(G),
            Budget(radius=3, cap=500),
        )
        entries.append(
            _entry(
                f"indicator-{pts}-{perms}",
                identity_ok and v.holds,
                conjugation_identity_pairs=pairs,
                embedding=v.status.value,
            )
        )
    return _suite("theorem7", entries)


def subgroup_space_suite() -> dict:
    """Dedekind recognition against subgroup-space discreteness, plus the
    quaternion-times-abelian splitting in both directions on the zoo."""
    entries = []
    expected = {
        "Q8": True,
        "Q8xC3": True,
        "Q8xC4": False,
        "D4": False,
        "S3": False,
        "S4": False,
    }
    for spec, G in zoo.finite_zoo(64):
        dedekind = subgroups.is_dedekind(G)
        decomposition = subgroups.hamiltonian_decomposition(G)
        consistent = (decomposition is not None) == (dedekind and not G.is_abelian)
        named_ok = expected.get(G.name) is None or (
            (decomposition is not None) == expected[G.name]
        )
        entries.append(
            _entry(
                f"{G.name}-hamiltonian",
                consistent and named_ok,
                dedekind=dedekind,
                abelian=G.is_abelian,
                decomposes=decomposition is not None,
            )
        )

    dinf = make_group(GroupSpec.make("dinf"))
    E = coarse.entourage(dinf, [dinf.named()["t"]])
    v = subgroups.subgroup_space_discrete(dinf, E)
    entries.append(
        _entry(
            "Dinf-subgroup-space-not-discrete",
            v.fails and len(v.witnesses) >= 10,
            witnesses=list(v.witnesses),
        )
    )

    z = make_group(GroupSpec.make("zk", k=1))
    E = coarse.entourage(z, [z.named()["e1"]])
    v = subgroups.subgroup_space_discrete(z, E)
    entries.append(_entry("Z-subgroup-space-discrete", v.holds))
    return _suite("theorem10", entries)


def bergman_suite() -> dict:
    """The tower of finite-support isometry groups: exact orders, metric
    preservation, the far-conjugates-commute law over every triple at
    level 3, class growth of the first flip, and transitivity witnesses."""
    entries = []
    orders = [bergman.level_group(n).order for n in (1, 2, 3, 4)]
    entries.append(
        _entry("level-orders", orders == [2, 8, 128, 32768], orders=orders)
    )

    G3 = bergman.level_group(3)
    entries.append(
        _entry(
            "level3-distance-preserving",
            all(bergman.is_distance_preserving(g) for g in G3.elements),
            elements=G3.order,
        )
    )

    rep = bergman.far_commutation_exhaustive(G3)
    entries.append(
        _entry(
            "level3-far-conjugates-commute",
            rep["violations"] == 0 and rep["triples"] == 127 * 127 * 128,
            **rep,
        )
    )

    flip = bergman.tree_generators(1)[0]
    growth = bergman.conjugacy_growth(flip, 4)
    sizes = [e["class_size"] for e in growth]
    exact = [e["exact"] for e in growth]
    entries.append(
        _entry(
            "flip-class-growth",
            sizes[0] == 1
            and sizes[1] == 2
            and all(a < b for a, b in zip(sizes, sizes[1:]))
            and all(exact),
            sizes=sizes,
        )
    )

    ok = True
    for mask in range(16):
        target = frozenset(p + 1 for p in range(4) if mask >> p & 1)
        w = bergman.transitivity_witness(target)
        ok = ok and w.apply(frozenset()) == target
        ok = ok and bergman.is_distance_preserving(w)
        ok = ok and bergman.compose_iso(w, w).is_identity()
    entries.append(_entry("transitivity-witnesses", ok, targets=16))
    return _suite("bergman", entries)


def saturation_oracle_suite() -> dict:
    """The saturation loop agrees exactly with the orbit partition on
    every finite zoo group, element by element."""
    entries = []
    for spec, G in zoo.finite_zoo(48):
        ctx = G.as_ctx()
        classes = {x: c for c in conjugacy_classes(G) for x in c}
        ok = True
        for g in G.elements:
            v, trace = saturation.saturate_conjugacy_class(ctx, g, Budget(rounds=G.order + 2))
            if not (v.holds and trace.final == classes[g]):
                ok = False
                break
        entries.append(_entry(f"{G.name}-oracle", ok, order=G.order))
    return _suite("saturation-oracle", entries)


def direct_union_suite() -> dict:
    """Splitting into conjugacy components: commutative and finite groups
    split, the infinite dihedral group does not."""
    entries = []
    z2 = make_group(GroupSpec.make("zk", k=2))
    v = coarse.is_direct_union(z2, coarse.entourage(z2, z2.generators), Budget(radius=3, cap=60))
    entries.append(_entry("Z^2-direct-union", v.holds))

    for spec, G in zoo.finite_zoo(48):
        ctx = make_group(spec)
        v = coarse.is_direct_union(ctx, coarse.entourage(ctx, ctx.generators), Budget(radius=3))
        entries.append(_entry(f"{G.name}-direct-union", v.holds))

    dinf = make_group(GroupSpec.make("dinf"))
    E = coarse.entourage(dinf, [dinf.named()["r"]])
    v = coarse.is_direct_union(dinf, E, Budget(radius=14, rounds=30))
    entries.append(
        _entry(
            "Dinf-not-direct-union",
            v.fails and len(v.witnesses) >= 10,
            moved_components=list(v.witnesses),
        )
    )
    return _suite("direct-union", entries)


SUITES = {
    "entourage-algebra": entourage_algebra_suite,
    "theorem1": discreteness_suite,
    "theorem3": class_bound_suite,
    "theorem5": cellularity_suite,
    "theorem7": embedding_suite,
    "theorem10": subgroup_space_suite,
    "bergman": bergman_suite,
    "saturation-oracle": saturation_oracle_suite,
    "direct-union": direct_union_suite,
}


def run_suite(name: str, seed: int = 0) -> dict:
    """Run one named suite, or all of them in definition order."""
    if name == "all":
        parts = []
        for key in SUITES:
            parts.append(run_suite(key, seed))
        return {"suite": "all", "ok": all(p["ok"] for p in parts), "suites": parts}
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    fn = SUITES[name]
    if name == "entourage-algebra":
        return fn(seed)
    return fn()

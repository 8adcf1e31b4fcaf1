"""The coarse space of subgroups under conjugation.

Subgroups of a finite group are frozenset carriers; infinite contexts
ship a hand-rolled SubgroupFamily enumerating finitely described
subgroups with a closed-form conjugation action. Discreteness of the
subgroup space characterizes Dedekind groups, and nonabelian Dedekind
groups split as a quaternion factor times an abelian complement without
order-4 elements; both directions are exercised by the suites.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .coarse import CoarseSpace, action_space, asymorphic_embedding_check, EntourageSpec
from .groups import (
    CapExceeded,
    Element,
    FiniteGroup,
    GroupCtx,
    PermutationAction,
    _closure,
    enumerate_ball,
)
from .verdicts import Budget, Verdict, fails, holds, unknown


class NotTransitive(Exception):
    pass


@dataclass(frozen=True)
class SubgroupFamily:
    """Finitely described subgroups of an infinite context.

    ``keys`` enumerates canonical descriptors deterministically;
    ``conjugate`` maps a descriptor and a group element to the
    descriptor of the conjugated subgroup.
    """

    name: str
    keys: Callable[[Budget], tuple]
    conjugate: Callable[[tuple, Element], tuple]
    render: Callable[[tuple], str]


def render_carrier(G: FiniteGroup, carrier: frozenset) -> str:
    return "{" + ",".join(sorted(G.render(x) for x in carrier)) + "}"


def _span(G: FiniteGroup, seed: frozenset) -> frozenset:
    """Subgroup generated by a symmetric seed containing the identity."""
    sym = set(seed) | {G.invert(x) for x in seed} | {G.identity}
    return frozenset(_closure(tuple(sym), G.compose, tuple(sym), cap=G.order))


def all_subgroups(G: FiniteGroup, cap: int = 64) -> tuple:
    """Every subgroup: cyclic seeds closed under pairwise join.

    A subgroup generated by k elements is the join of k cyclic ones, so
    iterating pairwise joins to a fixpoint is complete.
    """
    if G.order > cap:
        raise CapExceeded(cap, partial=G.order)
    cyclics = set()
    for g in G.elements:
        sub = []
        x = G.identity
        while x not in sub:
            sub.append(x)
            x = G.compose(x, g)
        cyclics.add(frozenset(sub))
    subs = set(cyclics)
    frontier = set(cyclics)
    while frontier:
        new = set()
        for A in frontier:
            for B in subs:
                if A <= B or B <= A:
                    continue
                j = _span(G, A | B)
                if j not in subs and j not in new:
                    new.add(j)
        subs |= new
        frontier = new
    return tuple(sorted(subs, key=lambda s: (len(s), render_carrier(G, s))))


def conj_subgroup(G: FiniteGroup, X: frozenset, g: Element) -> frozenset:
    ginv = G.invert(g)
    return frozenset(G.compose(G.compose(ginv, x), g) for x in X)


def is_dedekind(G: FiniteGroup, cap: int = 64) -> bool:
    """Every subgroup normal?"""
    for X in all_subgroups(G, cap):
        for g in G.elements:
            if conj_subgroup(G, X, g) != X:
                return False
    return True


def _carrier_abelian(G: FiniteGroup, carrier: frozenset) -> bool:
    els = sorted(carrier, key=G.render)
    return all(
        G.compose(a, b) == G.compose(b, a)
        for i, a in enumerate(els)
        for b in els[i + 1 :]
    )


def _element_order(G: FiniteGroup, x: Element) -> int:
    n, acc = 1, x
    while acc != G.identity:
        acc = G.compose(acc, x)
        n += 1
    return n


def _looks_like_q8(G: FiniteGroup, carrier: frozenset) -> bool:
    # order 8, nonabelian, exactly one involution: that pins Q8
    if len(carrier) != 8 or _carrier_abelian(G, carrier):
        return False
    invols = [x for x in carrier if x != G.identity and _element_order(G, x) == 2]
    return len(invols) == 1


def hamiltonian_decomposition(G: FiniteGroup, cap: int = 64):
    """For a nonabelian Dedekind group, a quaternion subgroup Q and a
    complement P (abelian, trivial meet, elementwise commuting, no
    order-4 element) with Q * P = G; None when no such split applies."""
    if G.is_abelian or not is_dedekind(G, cap):
        return None
    subs = all_subgroups(G, cap)
    trivial = frozenset([G.identity])
    for Q in subs:
        if not _looks_like_q8(G, Q):
            continue
        for P in subs:
            if len(Q) * len(P) != G.order:
                continue
            if Q & P != trivial:
                continue
            if not _carrier_abelian(G, P):
                continue
            if any(_element_order(G, x) == 4 for x in P):
                continue
            if not all(
                G.compose(q, p) == G.compose(p, q) for q in Q for p in P
            ):
                continue
            return Q, P
    return None


def generic_finite_family(G: FiniteGroup, cap: int = 64) -> SubgroupFamily:
    subs = all_subgroups(G, cap)

    def keys(budget: Budget) -> tuple:
        return subs

    def conjugate(key, g):
        return conj_subgroup(G, key, g)

    return SubgroupFamily(
        name=f"{G.name}-subgroups",
        keys=keys,
        conjugate=conjugate,
        render=lambda s: render_carrier(G, s),
    )


def subgroup_space_discrete(
    ctx: GroupCtx,
    E: EntourageSpec,
    budget: Budget = Budget(),
    family: SubgroupFamily | None = None,
) -> Verdict:
    """Is the subgroup space discrete for this entourage, on the sample?

    Fails carries subgroups moved by some conjugator; each witness can
    be re-checked from the descriptor alone.
    """
    used = budget.as_dict()
    fam = family if family is not None else ctx.subgroup_family
    if fam is None:
        if ctx.is_finite_hint:
            return holds({"reason": "finite space is bounded"}, budget_used=used)
        raise ValueError(f"{ctx.name} ships no subgroup enumerator")
    moved = []
    for key in fam.keys(budget)[budget.skip :]:
        ballset = {fam.conjugate(key, f) for f in E.conjugators}
        if ballset != {key}:
            moved.append(key)
            if len(moved) >= budget.witnesses:
                return fails(
                    [fam.render(k) for k in moved],
                    {"moved_subgroups": len(moved)},
                    budget_used=used,
                )
    if not moved:
        return holds({"checked_beyond_prefix": True}, budget_used=used)
    return unknown(
        {"moved_subgroups": len(moved)},
        witnesses=[fam.render(k) for k in moved],
        budget_used=used,
    )


def stabilizer_map_check(action: PermutationAction, budget: Budget = Budget()) -> dict:
    """Measure the point-to-stabilizer map into the subgroup space.

    Reports injectivity, the equivariance identity St(x)^g = St(g^-1 x),
    and the asymorphic-embedding verdict. It measures rather than
    asserts: a regular action collapses every stabilizer to the trivial
    subgroup, so the map can fail to embed.
    """
    if not action.is_transitive():
        raise NotTransitive(f"{action.name} is not transitive")
    G = action.group
    st = {x: action.stabilizer(x) for x in action.points}
    injective = len(set(st.values())) == len(action.points)
    equivariant = all(
        conj_subgroup(G, st[x], g) == st[action.apply(G.invert(g), x)]
        for x in action.points
        for g in G.elements
    )

    gctx = G.as_ctx()
    image = tuple(dict.fromkeys(st[x] for x in action.points))

    def entourage_chain(r: int) -> tuple:
        out = []
        prev = -1
        for k in range(r + 1):
            b = enumerate_ball(gctx, k)
            if len(b) == prev:
                break
            prev = len(b)
            out.append(EntourageSpec(tuple(b)))
        return tuple(out)

    dst = CoarseSpace(
        name=f"S({G.name})",
        points=lambda r: image,
        entourages=entourage_chain,
        ball_of=lambda X, E: frozenset(
            conj_subgroup(G, X, g) for g in E.conjugators
        ),
        render_point=lambda X: render_carrier(G, X),
    )
    verdict = asymorphic_embedding_check(
        lambda x: st[x], action_space(action), dst, budget
    )
    return {
        "action": action.name,
        "transitive": True,
        "injective": injective,
        "equivariant": equivariant,
        "embedding": verdict.to_report("stabilizer-map-embedding"),
    }

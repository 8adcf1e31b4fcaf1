"""Entourages, balls, and the definitional coarse-geometry checkers.

The conjugation coarse structure on a group has base entourages
E_F = {(x, y) : y in x^F} for finite conjugator sets F containing the
identity; the ball of x is its conjugate set x^F. The checkers here are
budgeted: they sample the word enumeration, skip a bounded prefix (the
definitions quantify outside a bounded set), and either certify the
property on the sample, refute it with independently re-checkable
witnesses, or give up with the exhausted budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional

from .groups import (
    Element,
    GroupCtx,
    PermutationAction,
    ball_saturates,
    conj,
    conj_set,
    enumerate_ball,
    semidirect_product,
)
from .saturation import coset_closure, saturate_conjugacy_class
from .verdicts import Budget, Verdict, fails, holds, unknown


class PartitionFailed(Exception):
    """The greedy colorer could not split a set into n discrete parts.

    This is a limitation of the constructor, not a refutation of the
    underlying partition statement; callers must surface it.
    """


@dataclass(frozen=True)
class EntourageSpec:
    """A base entourage of the conjugation coarse structure, named by its
    finite conjugator set (always containing the identity)."""

    conjugators: tuple

    def __len__(self) -> int:
        return len(self.conjugators)


def entourage(ctx: GroupCtx, conjugators) -> EntourageSpec:
    """Canonical entourage: identity adjoined, deduplicated, sorted."""
    pool = dict.fromkeys((ctx.identity, *conjugators))
    return EntourageSpec(tuple(sorted(pool, key=ctx.render)))


def ball(ctx: GroupCtx, x: Element, E: EntourageSpec) -> frozenset:
    """E[x] = x^F: everything reachable from x by one conjugation in F."""
    return conj_set(ctx, x, E.conjugators)


def entourage_product(ctx: GroupCtx, E: EntourageSpec, E2: EntourageSpec) -> EntourageSpec:
    """E_F o E_F' = E_{FF'} as relations; returns the composite conjugator set."""
    prods = {ctx.compose(f, f2) for f in E.conjugators for f2 in E2.conjugators}
    return entourage(ctx, prods)


def entourage_inverse(ctx: GroupCtx, E: EntourageSpec) -> EntourageSpec:
    return entourage(ctx, (ctx.invert(f) for f in E.conjugators))


def relation_of(ctx: GroupCtx, E: EntourageSpec, universe) -> frozenset:
    """The entourage as an explicit pair set over a finite universe."""
    return frozenset((x, y) for x in universe for y in ball(ctx, x, E))


def compose_relations(r1: frozenset, r2: frozenset) -> frozenset:
    """{(x, y) : exists z with (x, z) in r1 and (z, y) in r2}."""
    by_mid: dict = {}
    for x, z in r1:
        by_mid.setdefault(z, []).append(x)
    return frozenset((x, y) for z, y in r2 for x in by_mid.get(z, ()))


def sample_entourages(ctx: GroupCtx, radius: int) -> tuple:
    """Cofinal chain E_{B_0} <= E_{B_1} <= ... of ball entourages.

    Every finite conjugator set lies inside some word ball, so a
    property monotone in the entourage holds for all base entourages up
    to radius r iff it holds along this chain.
    """
    out = []
    prev = None
    for r in range(radius + 1):
        b = enumerate_ball(ctx, r)
        if prev is not None and len(b) == len(prev):
            break
        out.append(EntourageSpec(tuple(b)))
        prev = b
    return tuple(out)


def is_bounded(ctx: GroupCtx, subset, budget: Budget = Budget()) -> Verdict:
    """Boundedness in the conjugation coarse space.

    Balls x^F are finite for finite F, so a set is bounded iff it is
    finite; the operation materializes the query up to the cap and
    reports that reduction in its certificate.
    """
    seen = []
    for x in subset:
        seen.append(x)
        if len(seen) > budget.cap:
            return unknown(
                {"reason": "input exceeded cap", "seen": len(seen)},
                budget_used={"cap": budget.cap},
            )
    return holds(
        {"size": len(seen), "reduction": "bounded iff finite in conjugation space"},
        budget_used={"cap": budget.cap},
    )


def _sample_points(ctx: GroupCtx, budget: Budget) -> tuple:
    return enumerate_ball(ctx, budget.radius)[: budget.cap]


def is_n_discrete(ctx: GroupCtx, E: EntourageSpec, n: int, budget: Budget = Budget()) -> Verdict:
    """Beyond a bounded prefix, does every ball meet the space in <= n points?

    Finite contexts hold vacuously (the whole space is bounded). On
    infinite contexts the verdict quantifies over the enumerated sample
    only, which the certificate records.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    used = budget.as_dict()
    if ctx.is_finite_hint or ball_saturates(ctx, budget.radius):
        return holds({"reason": "finite space is bounded", "n": n}, budget_used=used)
    points = _sample_points(ctx, budget)
    violations = []
    for x in points[budget.skip :]:
        b = ball(ctx, x, E)
        if len(b) > n:
            violations.append((x, b))
            if len(violations) >= budget.witnesses:
                wit = [ctx.render(x) for x, _ in violations]
                cert = {
                    "n": n,
                    "violating_balls": [
                        sorted(ctx.render(y) for y in b) for _, b in violations
                    ],
                }
                return fails(wit, cert, budget_used=used)
    if not violations:
        return holds(
            {"n": n, "checked": max(0, len(points) - budget.skip)},
            budget_used=used,
        )
    return unknown(
        {"n": n, "violations_found": len(violations)},
        witnesses=[ctx.render(x) for x, _ in violations],
        budget_used=used,
    )


def is_discrete(ctx: GroupCtx, E: EntourageSpec, budget: Budget = Budget()) -> Verdict:
    """Discreteness is 1-discreteness: balls are eventually singletons."""
    return is_n_discrete(ctx, E, 1, budget)


def is_direct_union(
    ctx: GroupCtx,
    E: EntourageSpec,
    budget: Budget = Budget(),
    component_seeds=None,
) -> Verdict:
    """Does E act trivially on all but finitely many connected components?

    Components are conjugacy classes. Only fully saturated classes are
    counted as distinct moved components, so a Fails witness is a list
    of pairwise disjoint finite classes, each containing a moved point.
    """
    used = budget.as_dict()
    if ctx.is_finite_hint or ball_saturates(ctx, budget.radius):
        return holds({"reason": "finitely many components"}, budget_used=used)
    seeds = tuple(component_seeds) if component_seeds is not None else _sample_points(ctx, budget)
    seen: set = set()
    moved_components = []
    unresolved = 0
    for s in seeds:
        if s in seen:
            continue
        v, trace = saturate_conjugacy_class(ctx, s, budget)
        if not v.holds:
            unresolved += 1
            seen.add(s)
            continue
        cls = trace.final
        seen |= cls
        if any(ball(ctx, x, E) != frozenset([x]) for x in cls):
            moved_components.append(cls)
            if len(moved_components) >= budget.witnesses:
                wit = [
                    "{" + ",".join(sorted(ctx.render(x) for x in c)) + "}"
                    for c in moved_components
                ]
                return fails(wit, {"moved_components": len(moved_components)}, budget_used=used)
    if not moved_components and unresolved == 0:
        return holds({"components_checked": "all enumerated"}, budget_used=used)
    return unknown(
        {"moved_components": len(moved_components), "unresolved_seeds": unresolved},
        budget_used=used,
    )


def cellularity_criterion(ctx: GroupCtx, h_gens, budget: Budget = Budget()) -> Verdict:
    """Is there one finite conjugator set F with g^H inside g^F for every g?

    Holds search tries two certified candidates: representatives of H
    modulo the center (conjugation cannot see central factors), and H
    itself when its closure saturates. Fails exhibits elements whose
    orbits under growing balls of H outgrow every bound up to the
    witness budget; since |g^F| <= |F| for any finite F, a strictly
    growing orbit family refutes every candidate.
    """
    h_gens = tuple(h_gens)
    used = budget.as_dict()

    # Candidate 1: coset representatives of H modulo the center.
    if ctx.central is not None:
        reps, saturated = coset_closure(ctx, h_gens, ctx.central, budget)
        if saturated:
            F = tuple(dict.fromkeys([ctx.identity, *reps]))
            witness_note = _verify_orbit_cover(ctx, h_gens, F, budget)
            if witness_note is None:
                return holds(
                    {
                        "conjugator_set": sorted(ctx.render(f) for f in F),
                        "source": "center-coset representatives",
                    },
                    budget_used=used,
                )

    # Candidate 2: H itself, when finite.
    h_ctx = GroupCtx(
        name=f"<{ctx.name} subgroup>",
        identity=ctx.identity,
        compose=ctx.compose,
        invert=ctx.invert,
        generators=_sym_gens(ctx, h_gens),
        render=ctx.render,
    )
    r = 1
    while r <= budget.rounds:
        if ball_saturates(h_ctx, r):
            F = enumerate_ball(h_ctx, r)
            return holds(
                {
                    "conjugator_set_size": len(F),
                    "source": "finite subgroup closure",
                },
                budget_used=used,
            )
        if len(enumerate_ball(h_ctx, r)) > budget.cap:
            break
        r = min(2 * r, budget.rounds) if r < budget.rounds else budget.rounds + 1

    # Refutation: orbit sizes exceeding every bound up to the witness budget.
    family = _growing_orbit_family(ctx, h_ctx, budget)
    if family is not None:
        wit = list(dict.fromkeys(ctx.render(g) for g, _ in family))
        cert = {
            "orbit_sizes": [
                {"element": ctx.render(g), "orbit_size": s} for g, s in family
            ],
            "refutes_candidates_up_to": budget.witnesses,
        }
        return fails(wit, cert, budget_used=used)
    return unknown({"reason": "no certificate or refutation in budget"}, budget_used=used)


def _sym_gens(ctx: GroupCtx, gens) -> tuple:
    pool = dict.fromkeys((ctx.identity, *gens))
    for g in list(pool):
        pool.setdefault(ctx.invert(g), None)
    return tuple(pool)


def _verify_orbit_cover(ctx, h_gens, F, budget: Budget):
    """Check g^{H-ball} subset of g^F on the enumerated sample; returns a
    violating (g, conjugate) pair or None."""
    h_ctx_gens = _sym_gens(ctx, h_gens)
    sample = _sample_points(ctx, budget.with_(cap=min(budget.cap, 200)))
    for g in sample:
        cover = conj_set(ctx, g, F)
        v, trace = saturate_conjugacy_class(
            ctx, g, budget.with_(cap=len(cover) + 1), conjugators=h_ctx_gens
        )
        if not trace.final <= cover:
            extra = next(iter(trace.final - cover))
            return (g, extra)
    return None


def _growing_orbit_family(ctx, h_ctx, budget: Budget):
    """Elements whose H-ball orbits exceed each bound 1..witnesses.

    Orbits grow incrementally: round k only conjugates by subgroup
    elements first reached at word length k.
    """
    sample = _sample_points(ctx, budget.with_(cap=min(budget.cap, 400)))
    orbits = {g: {g} for g in sample}
    found = []
    best = 1
    stalled = 0
    prev_ball: tuple = (h_ctx.identity,)
    for k in range(1, budget.rounds + 1):
        hball = enumerate_ball(h_ctx, k)
        new_h = [h for h in hball if h not in set(prev_ball)]
        prev_ball = hball
        progressed = False
        for g in sample:
            orb = orbits[g]
            for h in new_h:
                orb.add(conj(ctx, g, h))
            if len(orb) > best:
                found.append((g, len(orb)))
                best = len(orb)
                progressed = True
            if best > budget.witnesses:
                return found
        stalled = 0 if progressed else stalled + 1
        if stalled >= 3:
            break
    return None


# ---------------------------------------------------------------------------
# Coarse spaces as sampling interfaces, macro-uniform maps, embeddings.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoarseSpace:
    """A coarse space presented by deterministic samplers.

    ``entourages(r)`` must return a chain cofinal in the structure up to
    radius r (larger entourages later); monotone searches walk it.
    """

    name: str
    points: Callable[[int], tuple]
    entourages: Callable[[int], tuple]
    ball_of: Callable[[Any, Any], frozenset]
    render_point: Callable[[Any], str] = repr


def conjugation_space(ctx: GroupCtx) -> CoarseSpace:
    return CoarseSpace(
        name=f"<->{ctx.name}",
        points=lambda r: enumerate_ball(ctx, r),
        entourages=lambda r: sample_entourages(ctx, r),
        ball_of=lambda x, E: ball(ctx, x, E),
        render_point=ctx.render,
    )


@dataclass(frozen=True)
class ActionEntourage:
    """Entourage {(x, gx) : g in movers} of an action coarse space."""

    movers: tuple


def action_space(action: PermutationAction) -> CoarseSpace:
    G = action.group

    def chain(r: int) -> tuple:
        ctx = G.as_ctx()
        out = []
        prev_len = -1
        for k in range(r + 1):
            b = enumerate_ball(ctx, k)
            if len(b) == prev_len:
                break
            prev_len = len(b)
            out.append(ActionEntourage(tuple(b)))
        return tuple(out)

    return CoarseSpace(
        name=f"{action.name}-space",
        points=lambda r: action.points,
        entourages=chain,
        ball_of=lambda x, E: frozenset(action.apply(g, x) for g in E.movers),
        render_point=repr,
    )


def macro_uniform_check(
    f: Callable,
    src: CoarseSpace,
    dst: CoarseSpace,
    budget: Budget = Budget(),
) -> Verdict:
    """For every sampled source entourage, find a destination entourage whose
    balls absorb the images: f(E[x]) inside E'[f(x)] for all sampled x."""
    used = budget.as_dict()
    pts = src.points(budget.radius)[: budget.cap]
    pairs = []
    for i, E in enumerate(src.entourages(budget.radius)):
        match = None
        for j, E2 in enumerate(dst.entourages(budget.radius)):
            if all(
                frozenset(map(f, src.ball_of(x, E))) <= dst.ball_of(f(x), E2)
                for x in pts
            ):
                match = j
                break
        if match is None:
            return unknown(
                {"unmatched_source_entourage": i, "points_sampled": len(pts)},
                budget_used=used,
            )
        pairs.append({"source": i, "destination": match})
    return holds({"entourage_pairs": pairs, "points_sampled": len(pts)}, budget_used=used)


def asymorphic_embedding_check(
    f: Callable,
    src: CoarseSpace,
    dst: CoarseSpace,
    budget: Budget = Budget(),
) -> Verdict:
    """Injective on the sample, macro-uniform both ways."""
    used = budget.as_dict()
    pts = src.points(budget.radius)[: budget.cap]
    images: dict = {}
    for x in pts:
        y = f(x)
        if y in images and images[y] != x:
            return fails(
                [src.render_point(images[y]), src.render_point(x)],
                {"reason": "not injective", "collision": dst.render_point(y)},
                budget_used=used,
            )
        images[y] = x
    forward = macro_uniform_check(f, src, dst, budget)
    if not forward.holds:
        return unknown({"direction": "forward", "inner": forward.certificate}, budget_used=used)

    image_set = frozenset(images)
    backward_pairs = []
    for j, E2 in enumerate(dst.entourages(budget.radius)):
        match = None
        for i, E in enumerate(src.entourages(budget.radius)):
            ok = True
            for x in pts:
                back = {images[y] for y in dst.ball_of(f(x), E2) & image_set}
                if not back <= src.ball_of(x, E):
                    ok = False
                    break
            if ok:
                match = i
                break
        if match is None:
            return unknown(
                {"direction": "backward", "unmatched_destination_entourage": j},
                budget_used=used,
            )
        backward_pairs.append({"destination": j, "source": match})
    return holds(
        {
            "injective_on": len(pts),
            "forward": forward.certificate,
            "backward": {"entourage_pairs": backward_pairs},
        },
        budget_used=used,
    )


# ---------------------------------------------------------------------------
# The indicator embedding of a finitary action space.
# ---------------------------------------------------------------------------


def indicator_embedding(action: PermutationAction, name: str | None = None):
    """Embed a finite action space into a conjugation coarse space.

    Builds G = {0,1}^X x| H (pointwise mod-2 addition, H permuting
    coordinates) and the map sending a point to the indicator of the
    corresponding singleton paired with the identity. Conjugating the
    image of x by (0, g) lands on the image of g^-1 x, which is what
    makes the embedding work; tests exercise that identity exhaustively.
    """
    H = action.group
    X = action.points

    def xor(u: frozenset, v: frozenset) -> frozenset:
        return u ^ v

    def render_vec(u: frozenset) -> str:
        return "{" + ",".join(str(p) for p in sorted(u)) + "}"

    vec_ctx = GroupCtx(
        name=f"2^{len(X)}",
        identity=frozenset(),
        compose=xor,
        invert=lambda u: u,
        generators=tuple([frozenset()] + [frozenset([x]) for x in X]),
        render=render_vec,
        is_finite_hint=True,
        abelian=True,
        named_generators=tuple((f"d{x}", frozenset([x])) for x in X),
    )
    h_ctx = H.as_ctx()

    def act(h, chi: frozenset) -> frozenset:
        return frozenset(action.apply(h, y) for y in chi)

    G = semidirect_product(
        vec_ctx,
        h_ctx,
        act,
        name=name or f"2^{len(X)}:{H.name}",
        is_finite_hint=True,
        abelian=False if len(X) > 1 and not H.is_abelian else None,
    )

    def embed(x):
        return (frozenset([x]), H.identity)

    return G, embed


# ---------------------------------------------------------------------------
# Partitioning an n-discrete set into n discrete pieces (greedy constructor).
# ---------------------------------------------------------------------------


def partition_n_discrete(ctx: GroupCtx, subset, E: EntourageSpec, n: int):
    """Split a finite n-discrete set into n parts, each discrete for E.

    The verifier is definitional and always re-runs on the output; the
    greedy colorer is best-effort and raises PartitionFailed rather than
    returning an unverified partition.
    """
    A = tuple(dict.fromkeys(subset))
    Aset = frozenset(A)
    balls = {x: ball(ctx, x, E) & Aset for x in A}
    for x in A:
        if len(balls[x]) > n:
            raise ValueError(
                f"set is not {n}-discrete on its span: |E[{ctx.render(x)}] & A| = {len(balls[x])}"
            )

    neighbors: dict = {x: set() for x in A}
    for x in A:
        for y in balls[x]:
            if y != x:
                neighbors[x].add(y)
                neighbors[y].add(x)

    color: dict = {}
    for x in A:
        taken = {color[y] for y in neighbors[x] if y in color}
        free = [c for c in range(n) if c not in taken]
        if not free:
            raise PartitionFailed(
                f"greedy coloring stuck at {ctx.render(x)} with {n} colors"
            )
        color[x] = free[0]

    parts = [frozenset(x for x in A if color[x] == c) for c in range(n)]
    for c, part in enumerate(parts):
        for x in part:
            meet = balls[x] & part
            if meet != frozenset([x]):
                raise PartitionFailed(
                    f"verifier rejected part {c}: ball of {ctx.render(x)} meets it in {len(meet)} points"
                )
    report = {
        "parts": n,
        "sizes": [len(p) for p in parts],
        "verified": True,
    }
    return parts, report

"""Group contexts, materialized finite groups, and basic algebraic invariants.

Elements are plain hashable Python values in a per-family canonical form
(int tuples, frozensets, small ints); value equality is group equality.
The composition convention is functional order throughout the project:
``compose(f, g)`` applies ``g`` first, and ``conj(x, g) = g^-1 * x * g``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, Callable, Optional

Element = Any


class CapExceeded(Exception):
    """A closure grew past its cap; the generated subgroup may be infinite."""

    def __init__(self, cap: int, partial: int | None = None):
        super().__init__(f"closure exceeded cap={cap}")
        self.cap = cap
        self.partial = partial


class ActionNotAutomorphism(Exception):
    """A semidirect-product action failed an automorphism law on a sample."""


@dataclass(frozen=True)
class GroupCtx:
    """A group given by callables plus a finite symmetric generator sample.

    ``generators`` always contains the identity and is closed under
    inversion, so :func:`enumerate_ball` yields the full word ball of a
    given radius. For families that are not finitely generated (for
    example the block-shift group) the ball covers the subgroup the
    sample generates; checkers only ever quantify over enumerated
    elements and say so in their verdicts.

    The optional metadata fields are exact per-family oracles (center
    membership, commutant size, ...) consumed by the algebraic sides of
    the cross-validation suites. ``None`` means "not known exactly".
    """

    name: str
    identity: Element
    compose: Callable[[Element, Element], Element]
    invert: Callable[[Element], Element]
    generators: tuple
    render: Callable[[Element], str] = repr
    is_finite_hint: Optional[bool] = None
    abelian: Optional[bool] = None
    central: Optional[Callable[[Element], bool]] = None
    commutant_finite: Optional[bool] = None
    commutant_size: Optional[int] = None
    infinite_order: tuple = ()
    named_generators: tuple = ()  # ((name, element), ...)
    subgroup_family: Any = None

    def named(self) -> dict:
        return dict(self.named_generators)


def conj(ctx: GroupCtx, x: Element, g: Element) -> Element:
    """Conjugate x by g, i.e. g^-1 x g."""
    return ctx.compose(ctx.compose(ctx.invert(g), x), g)


def conj_set(ctx: GroupCtx, x: Element, conjugators) -> frozenset:
    """The set {x^f : f in conjugators}, deduplicated."""
    return frozenset(conj(ctx, x, f) for f in conjugators)


def power(ctx: GroupCtx, x: Element, n: int) -> Element:
    if n < 0:
        return power(ctx, ctx.invert(x), -n)
    acc = ctx.identity
    for _ in range(n):
        acc = ctx.compose(acc, x)
    return acc


def commutator(ctx: GroupCtx, a: Element, b: Element) -> Element:
    """[a, b] = a^-1 b^-1 a b."""
    return ctx.compose(
        ctx.compose(ctx.compose(ctx.invert(a), ctx.invert(b)), a), b
    )


@lru_cache(maxsize=None)
def _word_ball(ctx: GroupCtx, radius: int):
    """(elements sorted by (word length, render), saturated flag)."""
    depth = {ctx.identity: 0}
    frontier = [ctx.identity]
    saturated = False
    for d in range(1, radius + 1):
        nxt = []
        for x in frontier:
            for g in ctx.generators:
                y = ctx.compose(x, g)
                if y not in depth:
                    depth[y] = d
                    nxt.append(y)
        frontier = nxt
        if not frontier:
            saturated = True
            break
    order = sorted(depth, key=lambda e: (depth[e], ctx.render(e)))
    return tuple(order), saturated


def enumerate_ball(ctx: GroupCtx, radius: int) -> tuple:
    """All products of at most ``radius`` generators, deterministically sorted."""
    return _word_ball(ctx, radius)[0]


def ball_saturates(ctx: GroupCtx, radius: int) -> bool:
    """True when the word ball stops growing before the radius is spent.

    For a context whose generators generate the whole group this means
    the group is finite and fully enumerated.
    """
    return _word_ball(ctx, radius)[1]


@dataclass(frozen=True)
class FiniteGroup:
    """A fully materialized finite group.

    ``elements`` is the complete carrier in a fixed deterministic order.
    Composition stays functional (tables are derived lazily) so that
    large groups, e.g. the level-4 isometry group of order 32768, do not
    force a dense multiplication table.
    """

    name: str
    elements: tuple
    compose: Callable[[Element, Element], Element]
    invert: Callable[[Element], Element]
    identity: Element
    render: Callable[[Element], str] = repr

    @cached_property
    def _index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._index

    @cached_property
    def is_abelian(self) -> bool:
        els = self.elements
        return all(
            self.compose(a, b) == self.compose(b, a)
            for a, b in itertools.combinations(els, 2)
        )

    @cached_property
    def center_carrier(self) -> frozenset:
        return frozenset(
            z
            for z in self.elements
            if all(self.compose(z, g) == self.compose(g, z) for g in self.elements)
        )

    def subgroup(self, carrier, name: str | None = None) -> "FiniteGroup":
        els = tuple(sorted(set(carrier), key=self.render))
        return FiniteGroup(
            name=name or f"{self.name}-sub{len(els)}",
            elements=els,
            compose=self.compose,
            invert=self.invert,
            identity=self.identity,
            render=self.render,
        )

    def as_ctx(self, generators=None, name: str | None = None, **meta) -> GroupCtx:
        gens = tuple(generators) if generators is not None else self.elements
        gens = _symmetrize(gens, self.identity, self.invert)
        center = self.center_carrier
        defaults = dict(
            is_finite_hint=True,
            abelian=self.is_abelian,
            central=lambda z, _c=center: z in _c,
        )
        defaults.update(meta)
        return GroupCtx(
            name=name or self.name,
            identity=self.identity,
            compose=self.compose,
            invert=self.invert,
            generators=gens,
            render=self.render,
            **defaults,
        )


def _symmetrize(gens, identity, invert) -> tuple:
    out = dict.fromkeys((identity, *gens))
    for g in list(out):
        out.setdefault(invert(g), None)
    return tuple(out)


def _closure(seed, compose, multipliers, cap: int):
    """Right-multiplication closure; raises CapExceeded past the cap."""
    seen = dict.fromkeys(seed)
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in multipliers:
                y = compose(x, g)
                if y not in seen:
                    seen[y] = None
                    nxt.append(y)
                    if len(seen) > cap:
                        raise CapExceeded(cap, partial=len(seen))
        frontier = nxt
    return list(seen)


def generate_finite(gens, ctx: GroupCtx, cap: int, name: str | None = None) -> FiniteGroup:
    """Cayley closure of ``gens`` inside ``ctx``; fails loudly past ``cap``."""
    if cap <= 0:
        raise ValueError("cap must be positive")
    base = _symmetrize(tuple(gens), ctx.identity, ctx.invert)
    carrier = _closure(base, ctx.compose, base, cap)
    els = tuple(sorted(carrier, key=ctx.render))
    return FiniteGroup(
        name=name or f"<{ctx.name} closure>",
        elements=els,
        compose=ctx.compose,
        invert=ctx.invert,
        identity=ctx.identity,
        render=ctx.render,
    )


def center(G: FiniteGroup) -> FiniteGroup:
    return G.subgroup(G.center_carrier, name=f"Z({G.name})")


def commutator_subgroup(G: FiniteGroup) -> FiniteGroup:
    comms = {
        G.compose(G.compose(G.compose(G.invert(a), G.invert(b)), a), b)
        for a in G.elements
        for b in G.elements
    }
    base = _symmetrize(tuple(comms), G.identity, G.invert)
    carrier = _closure(base, G.compose, base, cap=G.order)
    return G.subgroup(carrier, name=f"[{G.name},{G.name}]")


def conjugacy_classes(G: FiniteGroup) -> tuple:
    """Partition of the carrier into conjugation orbits, in first-seen order."""
    seen = set()
    classes = []
    for x in G.elements:
        if x in seen:
            continue
        cls = frozenset(
            G.compose(G.compose(G.invert(g), x), g) for g in G.elements
        )
        classes.append(cls)
        seen |= cls
    return tuple(classes)


def centralizer(G: FiniteGroup, a: Element) -> FiniteGroup:
    carrier = [g for g in G.elements if G.compose(g, a) == G.compose(a, g)]
    return G.subgroup(carrier, name=f"C({G.name})")


def direct_product(A: GroupCtx, B: GroupCtx, name: str | None = None) -> GroupCtx:
    """Componentwise product with concatenated canonical encodings."""

    def compose(x, y):
        return (A.compose(x[0], y[0]), B.compose(x[1], y[1]))

    def invert(x):
        return (A.invert(x[0]), B.invert(x[1]))

    def render(x):
        return f"({A.render(x[0])};{B.render(x[1])})"

    identity = (A.identity, B.identity)
    gens = dict.fromkeys(
        [identity]
        + [(g, B.identity) for g in A.generators]
        + [(A.identity, h) for h in B.generators]
    )

    central = None
    if A.central is not None and B.central is not None:
        ac, bc = A.central, B.central
        central = lambda x: ac(x[0]) and bc(x[1])  # noqa: E731

    lifted = [(k, (v, B.identity)) for k, v in A.named_generators]
    taken = {k for k, _ in lifted}
    lifted += [
        (k if k not in taken else f"r.{k}", (A.identity, v))
        for k, v in B.named_generators
    ]

    return GroupCtx(
        name=name or f"{A.name}x{B.name}",
        identity=identity,
        compose=compose,
        invert=invert,
        generators=tuple(gens),
        render=render,
        is_finite_hint=_both(A.is_finite_hint, B.is_finite_hint),
        abelian=_both(A.abelian, B.abelian),
        central=central,
        commutant_finite=_both(A.commutant_finite, B.commutant_finite),
        commutant_size=(
            A.commutant_size * B.commutant_size
            if A.commutant_size is not None and B.commutant_size is not None
            else None
        ),
        infinite_order=tuple(
            [(a, B.identity) for a in A.infinite_order]
            + [(A.identity, b) for b in B.infinite_order]
        ),
        named_generators=tuple(lifted),
    )


def _both(p: Optional[bool], q: Optional[bool]) -> Optional[bool]:
    if p is False or q is False:
        return False
    if p is True and q is True:
        return True
    return None


def semidirect_product(
    N: GroupCtx,
    H: GroupCtx,
    act: Callable[[Element, Element], Element],
    name: str | None = None,
    render: Callable[[Element], str] | None = None,
    **meta,
) -> GroupCtx:
    """N x| H with H acting on N through ``act``.

    Law: (n1, h1)(n2, h2) = (n1 * act(h1, n2), h1 h2). The action is
    property-tested on generator samples; a violation raises
    ActionNotAutomorphism rather than constructing a non-group.
    """
    _check_action(N, H, act)

    def compose(x, y):
        return (N.compose(x[0], act(x[1], y[0])), H.compose(x[1], y[1]))

    def invert(x):
        hinv = H.invert(x[1])
        return (act(hinv, N.invert(x[0])), hinv)

    rend = render or (lambda x: f"({N.render(x[0])};{H.render(x[1])})")
    identity = (N.identity, H.identity)
    gens = dict.fromkeys(
        [identity]
        + [(g, H.identity) for g in N.generators]
        + [(N.identity, h) for h in H.generators]
    )
    lifted = [(k, (v, H.identity)) for k, v in N.named_generators]
    taken = {k for k, _ in lifted}
    lifted += [
        (k if k not in taken else f"r.{k}", (N.identity, v))
        for k, v in H.named_generators
    ]
    return GroupCtx(
        name=name or f"{N.name}:{H.name}",
        identity=identity,
        compose=compose,
        invert=invert,
        generators=tuple(gens),
        render=rend,
        named_generators=tuple(lifted),
        **meta,
    )


def _check_action(N: GroupCtx, H: GroupCtx, act) -> None:
    ngens = N.generators[: min(len(N.generators), 8)]
    hgens = H.generators[: min(len(H.generators), 8)]
    for n in ngens:
        if act(H.identity, n) != n:
            raise ActionNotAutomorphism(f"act(e, {N.render(n)}) != {N.render(n)}")
    for h in hgens:
        for n1 in ngens:
            for n2 in ngens:
                lhs = act(h, N.compose(n1, n2))
                rhs = N.compose(act(h, n1), act(h, n2))
                if lhs != rhs:
                    raise ActionNotAutomorphism(
                        f"act({H.render(h)}, -) does not respect composition"
                    )
    for h1 in hgens:
        for h2 in hgens:
            for n in ngens:
                if act(H.compose(h1, h2), n) != act(h1, act(h2, n)):
                    raise ActionNotAutomorphism("act is not a homomorphism into Aut(N)")


@dataclass(frozen=True)
class PermutationAction:
    """A finite group acting on a finite point set.

    apply(identity, x) = x and apply(gh, x) = apply(g, apply(h, x)),
    matching the project-wide functional composition order.
    """

    group: FiniteGroup
    points: tuple
    apply: Callable[[Element, Any], Any]
    name: str = "action"

    def orbit(self, x) -> frozenset:
        return frozenset(self.apply(g, x) for g in self.group.elements)

    def is_transitive(self) -> bool:
        return len(self.orbit(self.points[0])) == len(self.points)

    def stabilizer(self, x) -> frozenset:
        return frozenset(g for g in self.group.elements if self.apply(g, x) == x)

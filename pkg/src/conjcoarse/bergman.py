"""Isometries of the finite-support binary-sequence space, two ways.

The space is all 0/1 sequences with finitely many 1s, metrized by the
greatest differing index. Its finitely supported isometry group is also
the direct limit of G_0 = 1, G_{n+1} = (G_n x G_n) x| Z_2 with the flip
interchanging the two factors; level n acts on the 2^n sequences
supported in positions 1..n and fixes everything deeper.

Both presentations are implemented: explicit permutation tables
(Isometry) and the recursive tree form (LimitElement), with conversion
verified to be a group isomorphism by the test suite. Within one level,
every (left, right, swap) combination preserves the metric because the
two half-cubes are exactly the level-n balls and cross-half distances
are constantly n+1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .groups import CapExceeded, FiniteGroup
from .verdicts import Budget, Verdict, fails, holds

BitSeq = frozenset  # finite support: the set of positions carrying a 1


def dist(x: BitSeq, y: BitSeq) -> int:
    """Greatest differing position, 0 iff equal."""
    d = x ^ y
    return max(d) if d else 0


def mask_of(seq: BitSeq) -> int:
    m = 0
    for p in seq:
        m |= 1 << (p - 1)
    return m


def seq_of(mask: int) -> BitSeq:
    return frozenset(p + 1 for p in range(mask.bit_length()) if mask >> p & 1)


def render_seq(seq: BitSeq) -> str:
    return "{" + ",".join(str(p) for p in sorted(seq)) + "}"


@dataclass(frozen=True)
class Isometry:
    """Level-n isometry as a permutation table of the 2^n level masks.

    Sequences with a 1 beyond position n are fixed; this matches the
    direct-limit embedding, which extends by the identity on the deeper
    half-cubes.
    """

    level: int
    table: tuple

    def apply(self, seq: BitSeq) -> BitSeq:
        if any(p > self.level for p in seq):
            return seq
        return seq_of(self.table[mask_of(seq)])

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.table))


def identity_iso(level: int) -> Isometry:
    return Isometry(level, tuple(range(1 << level)))


def compose_iso(a: Isometry, b: Isometry) -> Isometry:
    """Functional order: apply b first."""
    if a.level != b.level:
        lvl = max(a.level, b.level)
        a, b = lift_iso(a, lvl), lift_iso(b, lvl)
    return Isometry(a.level, tuple(a.table[v] for v in b.table))


def invert_iso(a: Isometry) -> Isometry:
    out = [0] * len(a.table)
    for i, v in enumerate(a.table):
        out[v] = i
    return Isometry(a.level, tuple(out))


def lift_iso(a: Isometry, level: int) -> Isometry:
    """Extend to a higher level by fixing every sequence that touches the
    new positions."""
    if level < a.level:
        raise ValueError("cannot lower an isometry's level")
    t = list(a.table) + list(range(1 << a.level, 1 << level))
    return Isometry(level, tuple(t))


def moved_set(g: Isometry) -> frozenset:
    """Level sequences displaced by g (deeper sequences are fixed by type)."""
    return frozenset(seq_of(m) for m, v in enumerate(g.table) if m != v)


def is_distance_preserving(g: Isometry) -> bool:
    n = 1 << g.level
    pts = range(n)
    for p in pts:
        for q in range(p + 1, n):
            if ((p ^ q).bit_length()) != ((g.table[p] ^ g.table[q]).bit_length()):
                return False
    return True


def render_iso(g: Isometry) -> str:
    cycles = []
    seen = set()
    for start in range(len(g.table)):
        if start in seen or g.table[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        cur = g.table[start]
        while cur != start:
            cyc.append(cur)
            seen.add(cur)
            cur = g.table[cur]
        cycles.append("(" + " ".join(render_seq(seq_of(m)) for m in cyc) + ")")
    body = "".join(cycles) if cycles else "id"
    return f"iso{g.level}[{body}]"


def transitivity_witness(target: BitSeq) -> Isometry:
    """The involution adding ``target`` mod 2 within its level cube.

    Carries the zero sequence to ``target`` and fixes every sequence
    with support beyond the level; XOR by a constant mask preserves the
    greatest-differing-index metric.
    """
    level = max(target) if target else 0
    tmask = mask_of(target)
    return Isometry(level, tuple(m ^ tmask for m in range(1 << level)))


# ---------------------------------------------------------------------------
# The tree presentation: G_{n+1} = (G_n x G_n) x| Z_2.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LimitElement:
    """Element of the level-n tower group in recursive (left, right, swap) form."""

    level: int
    left: Optional["LimitElement"]
    right: Optional["LimitElement"]
    swap: int

    def is_identity(self) -> bool:
        if self.level == 0:
            return True
        return self.swap == 0 and self.left.is_identity() and self.right.is_identity()


@lru_cache(maxsize=None)
def tree_identity(level: int) -> LimitElement:
    if level == 0:
        return LimitElement(0, None, None, 0)
    sub = tree_identity(level - 1)
    return LimitElement(level, sub, sub, 0)


def tree_compose(a: LimitElement, b: LimitElement) -> LimitElement:
    """(l_a, r_a, s_a)(l_b, r_b, s_b) = ((l_a, r_a) * sigma^{s_a}(l_b, r_b), s_a + s_b)."""
    if a.level != b.level:
        lvl = max(a.level, b.level)
        a, b = embed_to(a, lvl), embed_to(b, lvl)
    if a.level == 0:
        return a
    bl, br = (b.left, b.right) if a.swap == 0 else (b.right, b.left)
    return LimitElement(
        a.level,
        tree_compose(a.left, bl),
        tree_compose(a.right, br),
        a.swap ^ b.swap,
    )


def tree_invert(a: LimitElement) -> LimitElement:
    if a.level == 0:
        return a
    li, ri = tree_invert(a.left), tree_invert(a.right)
    if a.swap == 0:
        return LimitElement(a.level, li, ri, 0)
    return LimitElement(a.level, ri, li, 1)


def embed(g: LimitElement) -> LimitElement:
    """One level up: g goes to ((g, e), no swap), acting on the shallow
    half-cube as before and fixing the deep half pointwise."""
    return LimitElement(g.level + 1, g, tree_identity(g.level), 0)


def embed_to(g: LimitElement, level: int) -> LimitElement:
    while g.level < level:
        g = embed(g)
    if g.level != level:
        raise ValueError("cannot lower a tree element's level")
    return g


def tree_to_isometry(g: LimitElement) -> Isometry:
    """Convert to the table form. The action of (l, r, s) on (x, top bit b)
    is (apply l or r to x by the flipped bit, b xor s); conversion is a
    group isomorphism onto the level isometry group (property-tested)."""
    if g.level == 0:
        return Isometry(0, (0,))
    tl = tree_to_isometry(g.left)
    tr = tree_to_isometry(g.right)
    half = 1 << (g.level - 1)
    table = []
    for m in range(1 << g.level):
        b = m >> (g.level - 1)
        x = m & (half - 1)
        b2 = b ^ g.swap
        y = (tl.table if b2 == 0 else tr.table)[x]
        table.append(y | (b2 << (g.level - 1)))
    return Isometry(g.level, tuple(table))


@lru_cache(maxsize=None)
def tree_generators(level: int) -> tuple:
    """A generating set: both embedded copies of the lower generators plus
    the interchange flip. Size 2^level - 1."""
    if level == 0:
        return ()
    if level == 1:
        return (LimitElement(1, tree_identity(0), tree_identity(0), 1),)
    prev = tree_generators(level - 1)
    idp = tree_identity(level - 1)
    left = tuple(embed(g) for g in prev)
    right = tuple(LimitElement(level, idp, g, 0) for g in prev)
    flip = (LimitElement(level, idp, idp, 1),)
    return left + right + flip


@lru_cache(maxsize=None)
def _level_tables(n: int) -> tuple:
    if n == 0:
        return ((0,),)
    prev = _level_tables(n - 1)
    half = 1 << (n - 1)
    out = []
    for s in (0, 1):
        for lt in prev:
            for rt in prev:
                table = []
                for m in range(1 << n):
                    b = m >> (n - 1)
                    x = m & (half - 1)
                    b2 = b ^ s
                    y = (lt if b2 == 0 else rt)[x]
                    table.append(y | (b2 << (n - 1)))
                out.append(tuple(table))
    return tuple(out)


@lru_cache(maxsize=None)
def level_group(n: int, cap: int = 65536) -> FiniteGroup:
    """The full level-n group materialized: order 2^(2^n - 1)."""
    expected = 1 << ((1 << n) - 1)
    if expected > cap:
        raise CapExceeded(cap, partial=expected)
    tables = _level_tables(n)
    if len(set(tables)) != expected:
        raise AssertionError("level construction produced duplicate isometries")
    els = tuple(
        sorted((Isometry(n, t) for t in tables), key=render_iso)
    )
    return FiniteGroup(
        name=f"G{n}",
        elements=els,
        compose=compose_iso,
        invert=invert_iso,
        identity=identity_iso(n),
        render=render_iso,
    )


# ---------------------------------------------------------------------------
# Locality of conjugation: far conjugates commute.
# ---------------------------------------------------------------------------


def far_conjugates_commute(g: Isometry, h: Isometry, conjugators) -> Verdict:
    """Check, over the given conjugators f, that whenever some point moved
    by h^f sits farther than 2C from every point moved by g (C the
    diameter of moved(g) united with moved(h)), h^f and g commute. Also
    counts the distinct non-commuting conjugates, which the metric
    argument forces to be finitely many."""
    if g.is_identity() or h.is_identity():
        raise ValueError("locality check needs nonidentity g and h")
    level = max([g.level, h.level] + [f.level for f in conjugators])
    g, h = lift_iso(g, level), lift_iso(h, level)
    mg, mh = moved_set(g), moved_set(h)
    pool = sorted(mg | mh, key=sorted)
    C = max(
        (dist(p, q) for i, p in enumerate(pool) for q in pool[i + 1 :]),
        default=0,
    )
    noncommuting = set()
    checked = 0
    for f in conjugators:
        f = lift_iso(f, level)
        hf = compose_iso(compose_iso(invert_iso(f), h), f)
        mhf = moved_set(hf)
        commutes = compose_iso(hf, g) == compose_iso(g, hf)
        if not commutes:
            noncommuting.add(hf.table)
        far_point = next(
            (p for p in mhf if all(dist(p, q) > 2 * C for q in mg)), None
        )
        checked += 1
        if far_point is not None and not commutes:
            return fails(
                [render_iso(f)],
                {
                    "C": C,
                    "far_moved_point": render_seq(far_point),
                    "reason": "far conjugate fails to commute",
                },
            )
    return holds(
        {
            "C": C,
            "conjugators_checked": checked,
            "noncommuting_conjugates": len(noncommuting),
        }
    )


def far_commutation_exhaustive(G: FiniteGroup) -> dict:
    """The locality check over every triple (g, h, f) of a level group.

    Prunes pairs whose moved-set diameter C already satisfies 2C >= max
    possible distance: no far point can exist, so no assertion can fire
    for any f. The returned counts treat pruned triples as checked,
    which they are, by that bound.
    """
    els = G.elements
    n = els[0].level
    idx = {e: i for i, e in enumerate(els)}
    moved_masks = []
    for e in els:
        mm = 0
        for m, v in enumerate(e.table):
            if m != v:
                mm |= 1 << m
        moved_masks.append(mm)

    def points(mask):
        return [m for m in range(1 << n) if mask >> m & 1]

    pdist = [[(p ^ q).bit_length() for q in range(1 << n)] for p in range(1 << n)]

    violations = []
    scanned = 0
    pruned_pairs = 0
    nonid = [i for i, e in enumerate(els) if not e.is_identity()]
    comp = None
    for gi in nonid:
        gm = points(moved_masks[gi])
        for hi in nonid:
            pool = sorted(set(gm) | set(points(moved_masks[hi])))
            C = max(
                (pdist[p][q] for a, p in enumerate(pool) for q in pool[a + 1 :]),
                default=0,
            )
            if 2 * C >= n:
                pruned_pairs += 1
                continue
            if comp is None:
                # composition table built lazily: only pairs with small C need it
                comp = [
                    [idx[compose_iso(a, b)] for b in els] for a in els
                ]
                inv = [idx[invert_iso(a)] for a in els]
            g = els[gi]
            for fi in range(len(els)):
                hf_i = comp[comp[inv[fi]][hi]][fi]
                hf = els[hf_i]
                far = next(
                    (
                        p
                        for p in points(moved_masks[hf_i])
                        if all(pdist[p][q] > 2 * C for q in gm)
                    ),
                    None,
                )
                scanned += 1
                if far is not None and compose_iso(hf, g) != compose_iso(g, hf):
                    violations.append((gi, hi, fi))
    total = len(nonid) * len(nonid) * len(els)
    return {
        "group": G.name,
        "triples": total,
        "scanned": scanned,
        "pruned_pairs": pruned_pairs,
        "violations": len(violations),
    }


def conjugacy_growth(g: LimitElement, n_max: int, cap: int = 65536) -> list:
    """Conjugacy class sizes of g embedded level by level.

    Uses orbit search under the level generators, so it works past the
    materialization ceiling; an entry is exact when the search closed
    within the cap.
    """
    if g.is_identity():
        raise ValueError("growth is about nonidentity elements")
    if n_max > 16:
        raise CapExceeded(cap, partial=n_max)
    out = []
    for level in range(g.level, n_max + 1):
        seed = tree_to_isometry(embed_to(g, level))
        gens = [tree_to_isometry(t) for t in tree_generators(level)]
        gens = gens + [invert_iso(x) for x in gens]
        visited = {seed.table}
        frontier = [seed]
        exact = True
        while frontier:
            nxt = []
            for x in frontier:
                for c in gens:
                    y = compose_iso(compose_iso(invert_iso(c), x), c)
                    if y.table not in visited:
                        visited.add(y.table)
                        nxt.append(y)
            frontier = nxt
            if len(visited) > cap:
                exact = False
                break
        out.append({"level": level, "class_size": len(visited), "exact": exact})
    return out

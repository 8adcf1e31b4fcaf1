"""Concrete group families with exact normal forms and per-family oracles.

Every family constructs a law-abiding GroupCtx (group axioms are
property-tested) carrying whatever exact metadata the cross-validation
suites need: commutativity, a center-membership predicate, commutant
finiteness, infinite-order sample elements, and for the infinite
families a hand-rolled subgroup enumerator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .bergman import level_group, tree_generators, tree_to_isometry
from .groups import (
    FiniteGroup,
    GroupCtx,
    PermutationAction,
    conj,
    direct_product,
    generate_finite,
    power,
    semidirect_product,
)
from .subgroups import SubgroupFamily
from .verdicts import Budget


class UnknownFamily(Exception):
    pass


class BadParameters(Exception):
    pass


@dataclass(frozen=True)
class GroupSpec:
    """Serializable family name + parameters; the CLI's input schema."""

    family: str
    params: tuple = ()  # sorted ((key, value), ...) with hashable values

    @classmethod
    def make(cls, family: str, **params) -> "GroupSpec":
        return cls(family, _freeze_params(params))

    def param_dict(self) -> dict:
        return {k: _thaw(v) for k, v in self.params}

    def to_json(self) -> dict:
        return {"family": self.family, "params": self.param_dict()}

    @classmethod
    def from_json(cls, obj) -> "GroupSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict) or "family" not in obj:
            raise BadParameters(f"not a group spec: {obj!r}")
        return cls(str(obj["family"]), _freeze_params(obj.get("params", {})))


def _freeze_params(params: dict) -> tuple:
    out = []
    for k in sorted(params):
        out.append((str(k), _freeze(params[k])))
    return tuple(out)


def _freeze(v):
    if isinstance(v, dict):
        return ("__spec__", str(v["family"]), _freeze_params(v.get("params", {})))
    if isinstance(v, (list, tuple)):
        return tuple(_freeze(x) for x in v)
    if isinstance(v, (int, str, bool)):
        return v
    raise BadParameters(f"unsupported parameter value {v!r}")


def _thaw(v):
    if isinstance(v, tuple) and len(v) == 3 and v[0] == "__spec__":
        return {"family": v[1], "params": {k: _thaw(x) for k, x in v[2]}}
    if isinstance(v, tuple):
        return [_thaw(x) for x in v]
    return v


# ---------------------------------------------------------------------------
# Renderers.
# ---------------------------------------------------------------------------


def perm_render(p: tuple) -> str:
    """Cycle notation over 1-based points; identity prints as e."""
    cycles = []
    seen = set()
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        cycles.append("(" + " ".join(str(k + 1) for k in cyc) + ")")
    return "".join(cycles) or "e"


def _tuple_render(t) -> str:
    return "(" + ";".join(str(v) for v in t) + ")"


def _set_render(s) -> str:
    return "{" + ",".join(str(p) for p in sorted(s)) + "}"


# ---------------------------------------------------------------------------
# Families.
# ---------------------------------------------------------------------------


def _zk(k: int) -> GroupCtx:
    if k < 1:
        raise BadParameters("zk needs k >= 1")
    zero = (0,) * k
    units = [tuple(1 if i == j else 0 for j in range(k)) for i in range(k)]

    def add(a, b):
        return tuple(x + y for x, y in zip(a, b))

    gens = [zero] + units + [tuple(-x for x in u) for u in units]
    fam = _z_subgroups() if k == 1 else None
    return GroupCtx(
        name=f"Z^{k}",
        identity=zero,
        compose=add,
        invert=lambda a: tuple(-x for x in a),
        generators=tuple(gens),
        render=_tuple_render,
        is_finite_hint=False,
        abelian=True,
        central=lambda a: True,
        commutant_finite=True,
        commutant_size=1,
        infinite_order=(units[0],),
        named_generators=tuple((f"e{i+1}", u) for i, u in enumerate(units)),
        subgroup_family=fam,
    )


def _z_subgroups() -> SubgroupFamily:
    def enum(budget: Budget) -> tuple:
        count = budget.skip + 4 * budget.witnesses + 8
        return (("triv",),) + tuple(("nZ", n) for n in range(1, count))

    def conjugate(key, g):
        return key  # abelian: every subgroup is normal

    def render(key):
        return "{0}" if key[0] == "triv" else f"{key[1]}Z"

    return SubgroupFamily("Z-subgroups", enum, conjugate, render)


def _cyclic(n: int) -> GroupCtx:
    if n < 1:
        raise BadParameters("cyclic needs n >= 1")
    return GroupCtx(
        name=f"C{n}",
        identity=0,
        compose=lambda a, b: (a + b) % n,
        invert=lambda a: (-a) % n,
        generators=(0, 1 % n, (n - 1) % n),
        render=str,
        is_finite_hint=True,
        abelian=True,
        central=lambda a: True,
        commutant_finite=True,
        commutant_size=1,
        named_generators=(("g", 1 % n),),
    )


def _dihedral_law(n):
    # normal form r^eps t^k: reflections conjugate rotations to inverses
    def compose(x, y):
        e1, k1 = x
        e2, k2 = y
        k = (-k1 if e2 else k1) + k2
        return (e1 ^ e2, k % n if n else k)

    def invert(x):
        e, k = x
        if e:
            return x
        return (0, (-k) % n if n else -k)

    return compose, invert


def _dihedral(n: int) -> GroupCtx:
    if n < 1:
        raise BadParameters("dihedral needs n >= 1")
    compose, invert = _dihedral_law(n)
    center = {(0, 0)} | ({(0, n // 2)} if n % 2 == 0 and n > 2 else set())
    abelian = n <= 2
    return GroupCtx(
        name=f"D{n}",
        identity=(0, 0),
        compose=compose,
        invert=invert,
        generators=((0, 0), (1, 0), (0, 1 % n), (0, (n - 1) % n)),
        render=_tuple_render,
        is_finite_hint=True,
        abelian=abelian,
        central=(lambda a: True) if abelian else (lambda x, _c=frozenset(center): x in _c),
        named_generators=(("r", (1, 0)), ("t", (0, 1 % n))),
    )


def _dinf() -> GroupCtx:
    compose, invert = _dihedral_law(0)
    return GroupCtx(
        name="Dinf",
        identity=(0, 0),
        compose=compose,
        invert=invert,
        generators=((0, 0), (1, 0), (0, 1), (0, -1)),
        render=_tuple_render,
        is_finite_hint=False,
        abelian=False,
        central=lambda x: x == (0, 0),
        commutant_finite=False,
        infinite_order=((0, 1),),
        named_generators=(("r", (1, 0)), ("t", (0, 1))),
        subgroup_family=_dinf_subgroups(compose, invert),
    )


def _dinf_subgroups(compose, invert) -> SubgroupFamily:
    def enum(budget: Budget) -> tuple:
        keys = [("triv",)]
        k = 1
        target = budget.skip + 6 * budget.witnesses + 8
        while len(keys) < target:
            keys.append(("rot", k))
            keys.append(("refl", k - 1))
            if k > 1:
                keys.append(("refl", -(k - 1)))
            k += 1
        return tuple(keys)

    def conjugate(key, g):
        if key[0] == "triv":
            return key
        if key[0] == "rot":
            return key  # g^-1 <t^k> g = <t^{+-k}> = <t^k>
        _, m = key
        gen = (1, m)
        ge, gk = g
        c = compose(compose(invert(g), gen), g)
        return ("refl", c[1])

    def render(key):
        if key[0] == "triv":
            return "{e}"
        if key[0] == "rot":
            return f"<t^{key[1]}>"
        return f"<r*t^{key[1]}>"

    return SubgroupFamily("Dinf-subgroups", enum, conjugate, render)


_Q8_NAMES = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
# unit products: (u1, u2) -> (unit, negative?)
_Q8_UNIT = {
    (0, 0): (0, 0), (0, 1): (1, 0), (0, 2): (2, 0), (0, 3): (3, 0),
    (1, 0): (1, 0), (2, 0): (2, 0), (3, 0): (3, 0),
    (1, 1): (0, 1), (2, 2): (0, 1), (3, 3): (0, 1),
    (1, 2): (3, 0), (2, 3): (1, 0), (3, 1): (2, 0),
    (2, 1): (3, 1), (3, 2): (1, 1), (1, 3): (2, 1),
}


def _q8_compose(a: int, b: int) -> int:
    ua, sa = a >> 1, a & 1
    ub, sb = b >> 1, b & 1
    u, neg = _Q8_UNIT[(ua, ub)]
    return (u << 1) | (sa ^ sb ^ neg)


def _quaternion() -> GroupCtx:
    return GroupCtx(
        name="Q8",
        identity=0,
        compose=_q8_compose,
        invert=lambda a: a if a >> 1 == 0 else a ^ 1,
        generators=(0, 2, 3, 4, 5),
        render=lambda a: _Q8_NAMES[a],
        is_finite_hint=True,
        abelian=False,
        central=lambda a: a < 2,
        commutant_finite=True,
        commutant_size=2,
        named_generators=(("i", 2), ("j", 4), ("k", 6)),
    )


def _symmetric(n: int) -> GroupCtx:
    if n < 1:
        raise BadParameters("symmetric needs n >= 1")
    idp = tuple(range(n))

    def compose(f, g):  # apply g first
        return tuple(f[g[i]] for i in range(n))

    def invert(f):
        out = [0] * n
        for i, v in enumerate(f):
            out[v] = i
        return tuple(out)

    swap = tuple([1, 0] + list(range(2, n))) if n >= 2 else idp
    cyc = tuple(list(range(1, n)) + [0])
    gens = (idp, swap, cyc, invert(cyc))
    return GroupCtx(
        name=f"S{n}",
        identity=idp,
        compose=compose,
        invert=invert,
        generators=gens,
        render=perm_render,
        is_finite_hint=True,
        abelian=n <= 2,
        central=lambda p: p == idp if n >= 3 else True,
        named_generators=(("s", swap), ("c", cyc)),
    )


def _heisenberg() -> GroupCtx:
    def compose(x, y):
        a, b, c = x
        a2, b2, c2 = y
        return (a + a2, b + b2, c + c2 + a * b2)

    def invert(x):
        a, b, c = x
        return (-a, -b, -c + a * b)

    x, y, z = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    gens = ((0, 0, 0), x, (-1, 0, 0), y, (0, -1, 0), z, (0, 0, -1))
    return GroupCtx(
        name="Heisenberg",
        identity=(0, 0, 0),
        compose=compose,
        invert=invert,
        generators=gens,
        render=_tuple_render,
        is_finite_hint=False,
        abelian=False,
        central=lambda v: v[0] == 0 and v[1] == 0,
        commutant_finite=False,
        infinite_order=(x, y, z),
        named_generators=(("x", x), ("y", y), ("z", z)),
    )


# Block-shift group: finite-support bit vectors over consecutive blocks
# W_i of length i+1 (W_i starts at i(i+1)/2), with an integer shift acting
# by cyclic rotation inside every block simultaneously.


def block_of(p: int) -> tuple:
    """(block index, block start, block length) containing position p."""
    i = 0
    start = 0
    while start + i + 1 <= p:
        start += i + 1
        i += 1
    return i, start, i + 1


def block_start(i: int) -> int:
    return i * (i + 1) // 2


def _shift_position(p: int, k: int) -> int:
    _, start, length = block_of(p)
    return start + (p - start + k) % length


def _blockshift(blocks: int = 24) -> GroupCtx:
    if blocks < 1:
        raise BadParameters("blockshift needs blocks >= 1")

    def act(k: int, h: frozenset) -> frozenset:
        return frozenset(_shift_position(p, k) for p in h)

    vec_gens = [frozenset()] + [frozenset([block_start(i)]) for i in range(blocks)]
    vectors = GroupCtx(
        name="(Z2)^w",
        identity=frozenset(),
        compose=lambda u, v: u ^ v,
        invert=lambda u: u,
        generators=tuple(vec_gens),
        render=_set_render,
        is_finite_hint=False,
        abelian=True,
        named_generators=tuple(
            (f"v{i}", frozenset([block_start(i)])) for i in range(blocks)
        ),
    )
    shifts = GroupCtx(
        name="Z-shift",
        identity=0,
        compose=lambda a, b: a + b,
        invert=lambda a: -a,
        generators=(0, 1, -1),
        render=str,
        is_finite_hint=False,
        abelian=True,
        named_generators=(("a", 1),),
    )

    def central(el) -> bool:
        h, k = el
        if k != 0:
            return False
        # fixed by every shift iff each touched block is fully present
        for p in h:
            _, start, length = block_of(p)
            if any(start + j not in h for j in range(length)):
                return False
        return True

    return semidirect_product(
        vectors,
        shifts,
        act,
        name="BlockShift",
        render=lambda el: f"({_set_render(el[0])};{el[1]})",
        is_finite_hint=False,
        abelian=False,
        central=central,
        commutant_finite=False,
        infinite_order=((frozenset(), 1),),
    )


def blockshift_orbit_size(i: int, ctx: GroupCtx | None = None) -> int:
    """Conjugation orbit size of a weight-1 vector in block W_i under the
    shift generator: enumerated explicitly, then checked against i + 1."""
    if i < 0:
        raise BadParameters("block index must be >= 0")
    ctx = ctx or make_group(GroupSpec.make("remark6", blocks=max(24, i + 1)))
    a = ctx.named()["a"]
    seed = (frozenset([block_start(i)]), 0)
    orbit = {seed}
    cur = seed
    while True:
        cur = conj(ctx, cur, a)
        if cur in orbit:
            break
        orbit.add(cur)
    if len(orbit) != i + 1:
        raise AssertionError(
            f"block orbit enumeration gave {len(orbit)}, expected {i + 1}"
        )
    return len(orbit)


def blockshift_noncentral_power(n: int, ctx: GroupCtx | None = None):
    """A witness that the n-th power of the shift is not central: a weight-1
    vector it moves, taken from the first block whose length does not
    divide n."""
    if n < 1:
        raise BadParameters("power must be >= 1")
    i = 1
    while n % (i + 1) == 0:
        i += 1
    ctx = ctx or make_group(GroupSpec.make("remark6", blocks=max(24, i + 1)))
    a_n = power(ctx, ctx.named()["a"], n)
    h = (frozenset([block_start(i)]), 0)
    if conj(ctx, h, a_n) == h:
        raise AssertionError("chosen witness is fixed; block arithmetic is wrong")
    return h


def _bergman_ctx(level: int, cap: int = 65536) -> GroupCtx:
    G = level_group(level, cap)
    gens = [tree_to_isometry(t) for t in tree_generators(level)]
    return G.as_ctx(generators=gens, name=f"Bergman-G{level}")


def _theorem7_action(points: int, perms: str) -> PermutationAction:
    if points < 1:
        raise BadParameters("need at least one point")
    sym = _symmetric(points)
    if perms == "symmetric":
        H = generate_finite(sym.generators, sym, cap=40320, name=f"S{points}")
    elif perms == "cyclic":
        cyc = sym.named()["c"]
        H = generate_finite([cyc], sym, cap=points + 1, name=f"C{points}-rot")
    else:
        raise BadParameters(f"perms must be symmetric or cyclic, got {perms!r}")
    pts = tuple(range(1, points + 1))
    return PermutationAction(
        group=H,
        points=pts,
        apply=lambda p, x: p[x - 1] + 1,
        name=f"{perms}-{points}",
    )


def indicator_instance(points: int, perms: str):
    """(action, ambient group, embedding map) for the indicator construction."""
    from .coarse import indicator_embedding

    action = _theorem7_action(points, perms)
    G, embed = indicator_embedding(action)
    return action, G, embed


_FAMILIES = (
    "zk",
    "cyclic",
    "dihedral",
    "symmetric",
    "quaternion",
    "q8xcyclic",
    "dinf",
    "heisenberg",
    "remark6",
    "bergman",
    "theorem7",
    "product",
)


@lru_cache(maxsize=None)
def make_group(spec: GroupSpec) -> GroupCtx:
    """Construct the GroupCtx a spec describes. Cached so repeated runs
    share one context object (and its enumeration caches)."""
    fam = spec.family
    p = spec.param_dict()
    try:
        if fam == "zk":
            return _zk(int(p.get("k", 1)))
        if fam == "cyclic":
            return _cyclic(int(p.get("n", 1)))
        if fam == "dihedral":
            return _dihedral(int(p.get("n", 3)))
        if fam == "symmetric":
            return _symmetric(int(p.get("n", 3)))
        if fam == "quaternion":
            return _quaternion()
        if fam == "q8xcyclic":
            m = int(p.get("m", 2))
            return direct_product(
                _quaternion(), _cyclic(m), name=f"Q8xC{m}"
            )
        if fam == "dinf":
            return _dinf()
        if fam == "heisenberg":
            return _heisenberg()
        if fam == "remark6":
            return _blockshift(int(p.get("blocks", 24)))
        if fam == "bergman":
            return _bergman_ctx(int(p.get("level", 2)), int(p.get("cap", 65536)))
        if fam == "theorem7":
            _, G, _ = indicator_instance(
                int(p.get("points", 3)), str(p.get("perms", "symmetric"))
            )
            return G
        if fam == "product":
            factors = p.get("factors")
            if not factors or len(factors) < 2:
                raise BadParameters("product needs at least two factors")
            ctxs = [make_group(GroupSpec.from_json(f)) for f in factors]
            out = ctxs[0]
            for c in ctxs[1:]:
                out = direct_product(out, c)
            return out
    except (TypeError, ValueError) as exc:
        raise BadParameters(str(exc)) from exc
    raise UnknownFamily(f"unknown family {fam!r} (known: {', '.join(_FAMILIES)})")


def natural_action(spec: GroupSpec) -> PermutationAction:
    """The defining action, where one exists (symmetric family only)."""
    if spec.family != "symmetric":
        raise UnknownFamily(f"no natural action for family {spec.family!r}")
    n = int(spec.param_dict().get("n", 3))
    ctx = _symmetric(n)
    G = generate_finite(ctx.generators, ctx, cap=40320, name=f"S{n}")
    return PermutationAction(
        group=G,
        points=tuple(range(1, n + 1)),
        apply=lambda p, x: p[x - 1] + 1,
        name=f"S{n}-natural",
    )


FINITE_ZOO_SPECS = (
    GroupSpec.make("cyclic", n=2),
    GroupSpec.make("cyclic", n=3),
    GroupSpec.make("cyclic", n=4),
    GroupSpec.make("cyclic", n=6),
    GroupSpec.make("cyclic", n=8),
    GroupSpec.make("cyclic", n=12),
    GroupSpec.make(
        "product",
        factors=[
            {"family": "cyclic", "params": {"n": 2}},
            {"family": "cyclic", "params": {"n": 2}},
        ],
    ),
    GroupSpec.make("dihedral", n=3),
    GroupSpec.make("dihedral", n=4),
    GroupSpec.make("dihedral", n=5),
    GroupSpec.make("dihedral", n=6),
    GroupSpec.make("symmetric", n=3),
    GroupSpec.make("symmetric", n=4),
    GroupSpec.make("quaternion"),
    GroupSpec.make("q8xcyclic", m=2),
    GroupSpec.make("q8xcyclic", m=3),
    GroupSpec.make("q8xcyclic", m=4),
)


@lru_cache(maxsize=None)
def finite_zoo(max_order: int = 48) -> tuple:
    """(spec, materialized FiniteGroup) pairs for every finite zoo family
    of order at most max_order."""
    from .groups import CapExceeded

    out = []
    for spec in FINITE_ZOO_SPECS:
        ctx = make_group(spec)
        try:
            G = generate_finite(ctx.generators, ctx, cap=max_order, name=ctx.name)
        except CapExceeded:
            continue
        out.append((spec, G))
    return tuple(out)

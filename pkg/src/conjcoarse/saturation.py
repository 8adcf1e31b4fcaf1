"""Conjugacy-class saturation for finitely generated contexts.

The core loop conjugates a growing set by every generator, deduplicates
by canonical value, and stops when a round adds nothing: the set is then
the full conjugacy class under the subgroup the conjugators generate.
On top of that sit the finite-class check, the central-quotient local
finiteness check, and cross-validation reports pairing definitional
coarse properties with their algebraic characterizations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional

from .groups import Element, GroupCtx, conj, enumerate_ball, power
from .verdicts import Budget, Verdict, fails, holds, unknown


class PredicateUnavailable(Exception):
    """The context ships no exact center-membership oracle."""


@dataclass(frozen=True, eq=False)
class SaturationTrace:
    """Round-by-round record of a saturation run.

    ``words[e]`` is the conjugator word (generator indices) discovered
    for ``e``; replaying it through :func:`verify_trace` re-derives the
    element, so every trace is independently checkable.
    """

    seed: Element
    rounds: tuple  # tuple[frozenset, ...]
    terminated: bool
    words: Mapping  # element -> tuple[int, ...]

    @property
    def final(self) -> frozenset:
        return self.rounds[-1] if self.rounds else frozenset([self.seed])


def saturate_conjugacy_class(
    ctx: GroupCtx,
    seed: Element,
    budget: Budget = Budget(),
    conjugators: Optional[tuple] = None,
) -> tuple[Verdict, SaturationTrace]:
    """Budgeted orbit of ``seed`` under conjugation by the generator set.

    Holds carries the saturated class; Unknown carries the strictly
    growing partial orbit when a round or element budget trips first.
    """
    F = tuple(conjugators) if conjugators is not None else ctx.generators
    words = {seed: ()}
    frontier = [seed]
    rounds = []
    terminated = False
    for _ in range(budget.rounds):
        new = []
        for a in frontier:
            wa = words[a]
            for idx, f in enumerate(F):
                y = conj(ctx, a, f)
                if y not in words:
                    words[y] = wa + (idx,)
                    new.append(y)
        rounds.append(frozenset(words))
        if not new:
            terminated = True
            break
        if len(words) > budget.cap:
            break
        frontier = new
    trace = SaturationTrace(seed, tuple(rounds), terminated, words)
    used = {"rounds": len(rounds), "cap": budget.cap}
    if terminated:
        cls = trace.final
        cert = {"class_size": len(cls), "rounds": len(rounds)}
        return holds(cert, witnesses=_render_all(ctx, cls), budget_used=used), trace
    cert = {"lower_bound": len(words), "rounds": len(rounds)}
    return unknown(cert, budget_used=used), trace


def verify_trace(
    ctx: GroupCtx,
    trace: SaturationTrace,
    conjugators: Optional[tuple] = None,
) -> bool:
    """Re-derive every recorded element from its conjugator word."""
    F = tuple(conjugators) if conjugators is not None else ctx.generators
    for el, word in trace.words.items():
        acc = trace.seed
        for idx in word:
            acc = conj(ctx, acc, F[idx])
        if acc != el:
            return False
    return True


def fc_check(ctx: GroupCtx, seeds, budget: Budget = Budget()) -> Verdict:
    """Do all seed classes saturate? Holds or Unknown, never Fails:
    class finiteness cannot be refuted by enumeration alone."""
    sizes = {}
    pending = {}
    for s in seeds:
        v, trace = saturate_conjugacy_class(ctx, s, budget)
        if v.holds:
            sizes[ctx.render(s)] = len(trace.final)
        else:
            pending[ctx.render(s)] = len(trace.final)
    used = {"rounds": budget.rounds, "cap": budget.cap}
    if not pending:
        return holds({"class_sizes": sizes}, budget_used=used)
    return unknown(
        {"class_sizes": sizes, "unsaturated_lower_bounds": pending},
        budget_used=used,
    )


def _central_or_raise(ctx: GroupCtx, central) -> Callable[[Element], bool]:
    pred = central if central is not None else ctx.central
    if pred is None:
        raise PredicateUnavailable(f"{ctx.name} has no center oracle")
    return pred


def coset_closure(ctx: GroupCtx, gens, central, budget: Budget):
    """Cayley closure of ``gens`` modulo the center: keep one
    representative per coset, where x and y sit in one coset iff
    x * y^-1 is central. Returns (representatives, saturated)."""
    sym = [ctx.identity]
    for g in gens:
        for h in (g, ctx.invert(g)):
            if h not in sym:
                sym.append(h)
    reps = [ctx.identity]
    frontier = [ctx.identity]
    for _ in range(budget.rounds):
        new = []
        for x in frontier:
            for s in sym:
                y = ctx.compose(x, s)
                if not any(central(ctx.compose(y, ctx.invert(r))) for r in reps):
                    reps.append(y)
                    new.append(y)
                    if len(reps) > budget.cap:
                        return reps, False
        if not new:
            return reps, True
        frontier = new
    return reps, False


def locally_finite_quotient_check(
    ctx: GroupCtx,
    gens_sample=None,
    budget: Budget = Budget(),
    central=None,
) -> Verdict:
    """Is the central quotient locally finite, sampled on generator prefixes?

    For each prefix S of the sample, close S modulo the center. All
    closures saturating means Holds. A closure that keeps growing yields
    Fails carrying pairwise center-inequivalent elements: a re-checkable
    lower bound on the quotient subgroup the prefix generates.
    """
    pred = _central_or_raise(ctx, central)
    sample = tuple(gens_sample) if gens_sample is not None else tuple(
        g for g in ctx.generators if g != ctx.identity
    )
    used = {"rounds": budget.rounds, "witnesses": budget.witnesses, "cap": budget.cap}
    sizes = []
    for k in range(1, len(sample) + 1):
        S = sample[:k]
        reps, saturated = coset_closure(ctx, S, pred, budget)
        if saturated:
            sizes.append(len(reps))
            continue
        if len(reps) >= budget.witnesses:
            wit = [ctx.render(r) for r in reps[: budget.witnesses]]
            cert = {
                "subset": [ctx.render(s) for s in S],
                "inequivalent_count": len(reps),
            }
            return fails(wit, cert, budget_used=used)
        return unknown({"partial_quotient": len(reps)}, budget_used=used)
    return holds({"quotient_closure_sizes": sizes}, budget_used=used)


def central_power_check(
    ctx: GroupCtx,
    a: Element,
    n_max: int = 100,
    central=None,
) -> Verdict:
    """Least n <= n_max with a^n central, or Fails(n_max)."""
    pred = _central_or_raise(ctx, central)
    acc = ctx.identity
    for n in range(1, n_max + 1):
        acc = ctx.compose(acc, a)
        if pred(acc):
            return holds({"n": n}, budget_used={"n_max": n_max})
    return fails(
        [ctx.render(a)], {"n_max": n_max, "central_power": None},
        budget_used={"n_max": n_max},
    )


CHARACTERIZATIONS = ("discreteness", "class-bound", "cellularity")


def characterization_report(kind: str, ctx: GroupCtx, budget: Budget = Budget()) -> dict:
    """Evaluate one algebra <-> coarse-geometry characterization both ways.

    kind "discreteness":   commutativity  <->  every ball eventually a singleton
    kind "class-bound":    finite commutant  <->  n-discrete for some n
    kind "cellularity":    locally finite central quotient  <->  conjugation
                           orbits of every finitely generated subgroup trapped
                           in a single finite conjugator set

    A disagreement is reported, never reconciled; callers treat it as a
    test failure.
    """
    from . import coarse  # local import: coarse depends on this module

    if kind not in CHARACTERIZATIONS:
        raise ValueError(f"unknown characterization {kind!r}")
    report: dict = {"kind": kind, "group": ctx.name}
    ents = coarse.sample_entourages(ctx, budget.radius)

    if kind == "discreteness":
        algebraic = ctx.abelian
        verdicts = [coarse.is_discrete(ctx, E, budget) for E in ents]
        definitional = (
            "holds" if all(v.holds for v in verdicts)
            else "fails" if any(v.fails for v in verdicts)
            else "unknown"
        )
        finite = bool(ctx.is_finite_hint)
        if finite:
            # bounded space: the informative shadow is the class partition
            from .groups import conjugacy_classes, generate_finite

            G = generate_finite(ctx.generators, ctx, cap=budget.cap)
            singletons = all(len(c) == 1 for c in conjugacy_classes(G))
            agreed = singletons == bool(algebraic)
            report["finite_shadow_all_classes_singleton"] = singletons
        else:
            agreed = (
                (bool(algebraic) and definitional == "holds")
                or (algebraic is False and definitional == "fails")
            )
        report.update(
            algebraic_abelian=algebraic,
            definitional=definitional,
            agreed=agreed,
        )
        return report

    if kind == "class-bound":
        finite_comm = ctx.commutant_finite
        bound = ctx.commutant_size
        if ctx.is_finite_hint:
            from .groups import commutator_subgroup, generate_finite

            G = generate_finite(ctx.generators, ctx, cap=budget.cap)
            comm = commutator_subgroup(G)
            finite_comm, bound = True, comm.order
        report["commutant_finite"] = finite_comm
        report["commutant_size"] = bound
        if finite_comm and bound is not None:
            verdicts = [coarse.is_n_discrete(ctx, E, bound, budget) for E in ents]
            ok = all(v.holds for v in verdicts)
            report.update(definitional=("holds" if ok else "violated"), agreed=ok)
        elif finite_comm is False:
            # no uniform bound may survive: some sampled ball must outgrow
            # any fixed n eventually; sample n = 1..witnesses
            grew = False
            for n in range(1, budget.witnesses + 1):
                if any(coarse.is_n_discrete(ctx, E, n, budget).fails for E in ents):
                    grew = True
                    break
            report.update(definitional=("fails" if grew else "unknown"), agreed=grew)
        else:
            report.update(definitional="unknown", agreed=True)
        return report

    # cellularity
    algebraic = locally_finite_quotient_check(ctx, budget=budget)
    subgroup_samples = _fg_subgroup_samples(ctx, budget)
    coarse_verdicts = []
    for gens in subgroup_samples:
        v = coarse.cellularity_criterion(ctx, gens, budget)
        coarse_verdicts.append((tuple(ctx.render(g) for g in gens), v))
    any_fail = any(v.fails for _, v in coarse_verdicts)
    all_hold = all(v.holds for _, v in coarse_verdicts)
    if algebraic.holds:
        agreed = all_hold
    elif algebraic.fails:
        agreed = any_fail
    else:
        agreed = True
    report.update(
        algebraic=algebraic.status.value,
        definitional=[
            {"subgroup_gens": list(gs), "status": v.status.value}
            for gs, v in coarse_verdicts
        ],
        agreed=agreed,
    )
    return report


def _fg_subgroup_samples(ctx: GroupCtx, budget: Budget):
    """Deterministic finitely generated subgroup samples: each single
    generator, then the full generator sample."""
    singles = [
        (g,) for g in ctx.generators if g != ctx.identity
    ]
    out = singles[:4]
    gens = tuple(g for g in ctx.generators if g != ctx.identity)
    if gens and gens not in out:
        out.append(gens)
    return out


def _render_all(ctx: GroupCtx, els) -> tuple:
    return tuple(sorted(ctx.render(e) for e in els))


def component_of(ctx: GroupCtx, a: Element, budget: Budget = Budget()) -> Verdict:
    """Connected component of ``a`` in the conjugation coarse space: its
    conjugacy class under the generator sample. Delegates to saturation."""
    v, trace = saturate_conjugacy_class(ctx, a, budget)
    if v.holds:
        return v
    return unknown(
        {"partial_component": len(trace.final), "rounds": len(trace.rounds)},
        witnesses=_render_all(ctx, trace.final)[: budget.witnesses],
        budget_used=v.budget_used,
    )

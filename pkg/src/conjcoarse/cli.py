"""Command-line front door: named checks and suites over group specs.

Reports are deterministic: an identical RunConfig (including the seed)
produces byte-identical JSON. Measured wall time therefore only appears
in the text rendering; the JSON field ``elapsed_ms`` is pinned to 0 so
reports can be diffed and replayed. Exit codes: 0 holds or completed,
1 fails, 2 unknown, 3 usage or construction error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

from . import coarse, saturation, subgroups, suites
from .groups import CapExceeded, GroupCtx, generate_finite, power
from .verdicts import Budget, Verdict
from .zoo import BadParameters, GroupSpec, UnknownFamily, make_group


class BadSpec(Exception):
    pass


class UnknownCheck(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    check: str
    spec: GroupSpec | None = None
    budget: Budget = Budget()
    seed: int = 0
    format: str = "json"
    entourage: str | None = None
    element: str | None = None
    subgroup: str | None = None
    n: int = 2
    n_max: int = 100


def parse_word(ctx: GroupCtx, text: str):
    """Words over the named generators: 'x*y^-1', 't^3', 'e'."""
    text = text.strip()
    if text in ("", "e"):
        return ctx.identity
    named = ctx.named()
    acc = ctx.identity
    for term in text.split("*"):
        term = term.strip()
        if "^" in term:
            name, _, exp_s = term.partition("^")
            try:
                exp = int(exp_s)
            except ValueError as e:
                raise BadSpec(f"bad exponent in {term!r}") from e
        else:
            name, exp = term, 1
        name = name.strip()
        if name == "e":
            base = ctx.identity
        elif name in named:
            base = named[name]
        else:
            known = ", ".join(sorted(named)) or "none"
            raise BadSpec(f"unknown generator {name!r} (named generators: {known})")
        acc = ctx.compose(acc, power(ctx, base, exp))
    return acc


def parse_words(ctx: GroupCtx, text: str) -> list:
    return [parse_word(ctx, part) for part in text.split(",") if part.strip()]


def _entourage_from(ctx: GroupCtx, config: RunConfig) -> coarse.EntourageSpec:
    if config.entourage:
        return coarse.entourage(ctx, parse_words(ctx, config.entourage))
    return coarse.entourage(ctx, ctx.generators)


def _element_from(ctx: GroupCtx, config: RunConfig):
    if not config.element:
        raise BadSpec("this check needs --element")
    return parse_word(ctx, config.element)


def _materialize(ctx: GroupCtx, budget: Budget):
    try:
        return generate_finite(ctx.generators, ctx, cap=min(budget.cap, 4096))
    except CapExceeded as e:
        raise BadSpec(
            f"{ctx.name}: closure exceeded {e.cap} elements; this check needs a finite group"
        ) from e


def _bool_verdict(flag: bool, certificate: dict) -> Verdict:
    from .verdicts import fails, holds

    return holds(certificate) if flag else fails([], certificate)


def _run_check(config: RunConfig) -> Verdict:
    ctx = make_group(config.spec)
    b = config.budget
    name = config.check
    if name in ("is_discrete", "discrete"):
        return coarse.is_discrete(ctx, _entourage_from(ctx, config), b)
    if name in ("is_n_discrete", "n_discrete"):
        return coarse.is_n_discrete(ctx, _entourage_from(ctx, config), config.n, b)
    if name in ("is_direct_union", "direct_union"):
        return coarse.is_direct_union(ctx, _entourage_from(ctx, config), b)
    if name in ("component", "conjugacy_class", "class"):
        return saturation.component_of(ctx, _element_from(ctx, config), b)
    if name == "fc":
        seeds = (
            parse_words(ctx, config.element)
            if config.element
            else [g for g in ctx.generators if g != ctx.identity]
        )
        return saturation.fc_check(ctx, seeds, b)
    if name in ("cellularity", "cellularity_criterion"):
        if not config.subgroup:
            raise BadSpec("cellularity needs --subgroup with generator words")
        return coarse.cellularity_criterion(ctx, parse_words(ctx, config.subgroup), b)
    if name == "central_power":
        return saturation.central_power_check(
            ctx, _element_from(ctx, config), n_max=config.n_max
        )
    if name == "locally_finite_quotient":
        sample = parse_words(ctx, config.subgroup) if config.subgroup else None
        return saturation.locally_finite_quotient_check(ctx, sample, b)
    if name == "is_bounded":
        els = parse_words(ctx, config.element) if config.element else []
        return coarse.is_bounded(ctx, els, b)
    if name == "dedekind":
        G = _materialize(ctx, b)
        flag = subgroups.is_dedekind(G, cap=min(b.cap, 64))
        return _bool_verdict(flag, {"dedekind": flag, "order": G.order})
    if name == "hamiltonian":
        G = _materialize(ctx, b)
        dec = subgroups.hamiltonian_decomposition(G, cap=min(b.cap, 64))
        cert = {
            "dedekind": subgroups.is_dedekind(G, cap=min(b.cap, 64)),
            "hamiltonian": None
            if dec is None
            else {
                "q8": sorted(G.render(x) for x in dec[0]),
                "p": sorted(G.render(x) for x in dec[1]),
            },
        }
        return _bool_verdict(dec is not None, cert)
    if name == "subgroup_space_discrete":
        return subgroups.subgroup_space_discrete(ctx, _entourage_from(ctx, config), b)
    raise UnknownCheck(f"unknown check {name!r}")


_EXIT = {"holds": 0, "fails": 1, "unknown": 2}


def run(config: RunConfig) -> tuple[dict, int]:
    """Execute a RunConfig; returns (report, exit code)."""
    started = time.monotonic()
    budget_obj = dict(config.budget.as_dict(), seed=config.seed)
    if config.check in suites.SUITES or config.check == "all":
        result = suites.run_suite(config.check, seed=config.seed)
        status = "holds" if result["ok"] else "fails"
        report = {
            "check": config.check,
            "group": None,
            "status": status,
            "witnesses": [],
            "certificate": result,
            "budget": budget_obj,
            "elapsed_ms": 0,
        }
        return _with_elapsed(report, started, config.format), _EXIT[status]
    if config.spec is None:
        raise BadSpec("--spec is required for single checks")
    verdict = _run_check(config)
    inner = verdict.to_report(config.check)
    report = {
        "check": config.check,
        "group": config.spec.to_json(),
        "status": inner["status"],
        "witnesses": inner["witnesses"],
        "certificate": inner["certificate"],
        "budget": budget_obj,
        "elapsed_ms": 0,
    }
    return _with_elapsed(report, started, config.format), _EXIT[inner["status"]]


def _with_elapsed(report: dict, started: float, fmt: str) -> dict:
    if fmt == "text":
        report = dict(report, elapsed_ms=int((time.monotonic() - started) * 1000))
    return report


def render_text(report: dict) -> str:
    lines = [
        f"check:     {report['check']}",
        f"group:     {json.dumps(report['group'], sort_keys=True)}",
        f"status:    {report['status']}",
    ]
    wits = report["witnesses"]
    lines.append(f"witnesses: {len(wits)}")
    for w in wits[:20]:
        lines.append(f"  - {w}")
    lines.append(f"certificate: {json.dumps(report['certificate'], sort_keys=True)}")
    lines.append(f"budget:    {json.dumps(report['budget'], sort_keys=True)}")
    lines.append(f"elapsed:   {report['elapsed_ms']}ms")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="conjcoarse",
        description="Budgeted checks over conjugation coarse spaces on groups.",
    )
    p.add_argument(
        "--spec",
        help='group spec: inline JSON {"family": ..., "params": {...}} or @file',
    )
    p.add_argument(
        "--check",
        required=True,
        help="check name, or a suite: "
        + ", ".join(["all", *suites.SUITES]),
    )
    p.add_argument("--entourage", help="conjugator words, comma separated (e.g. 'e,t')")
    p.add_argument("--element", help="element word (e.g. 'x*y^-1')")
    p.add_argument("--subgroup", help="subgroup generator words, comma separated")
    p.add_argument("--n", type=int, default=2, help="ball bound for is_n_discrete")
    p.add_argument("--n-max", type=int, default=100, help="power bound for central_power")
    p.add_argument("--radius", type=int, default=8)
    p.add_argument("--rounds", type=int, default=50)
    p.add_argument("--skip", type=int, default=20)
    p.add_argument("--witnesses", type=int, default=10)
    p.add_argument("--cap", type=int, default=65536)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "text"), default="json")
    return p


def _load_spec(text: str | None) -> GroupSpec | None:
    if text is None:
        return None
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        return GroupSpec.from_json(json.loads(text))
    except json.JSONDecodeError as e:
        raise BadSpec(f"spec is not valid JSON: {e}") from e


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(
            check=args.check,
            spec=_load_spec(args.spec),
            budget=Budget(
                radius=args.radius,
                rounds=args.rounds,
                skip=args.skip,
                witnesses=args.witnesses,
                cap=args.cap,
            ),
            seed=args.seed,
            format=args.format,
            entourage=args.entourage,
            element=args.element,
            subgroup=args.subgroup,
            n=args.n,
            n_max=args.n_max,
        )
        report, code = run(config)
    except (BadSpec, UnknownCheck, BadParameters, UnknownFamily, CapExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    if args.format == "text":
        print(render_text(report))
    else:
        print(json.dumps(report, indent=2, sort_keys=True))
    return code


if __name__ == "__main__":
    raise SystemExit(main())

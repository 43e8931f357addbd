"""Command-line front end.

Subcommands: ball, verify-growth, coxeter, constants, heat, gap, boundary,
words.  Exit codes: 0 all checks hold, 1 some check certifiably fails,
2 undecided checks remain (none false), 3 input/usage error.  Every
subcommand supports --format json with a stable schema and byte-identical
output for identical inputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from . import bounds, coxeter, groups, heat, percolation, tower, words
from .errors import GrowthLabError
from .percolation import StepStatus

SCHEMA = "growthlab/1"

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_UNDECIDED = 2
EXIT_USAGE = 3


class CLIError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CLIError(message)


@dataclass
class RunConfig:
    structure_constant: int = 100
    precision: int = tower.DEFAULT_PRECISION
    budget: int = groups.DEFAULT_BUDGET
    fmt: str = "text"
    seed: int = 0


def _fraction_str(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def _bound_str(b, digits: int = 12) -> str:
    if isinstance(b, Fraction):
        return _fraction_str(b)
    if isinstance(b, int):
        return str(b)
    return tower.format_tower(b, digits)


def _decimal_upper(b, digits: int = 15) -> str:
    """Certified upper endpoint as a plain decimal; tower notation if huge."""
    if isinstance(b, Fraction):
        return _fraction_str(b)
    flat = tower._flatten(b, 256)
    if flat is not None:
        return tower._fmt_mpfr(flat[1], digits)
    return tower.format_tower(b, digits)


def _element_str(g) -> str:
    if isinstance(g, tuple) and g and isinstance(g[0], tuple):
        return ";".join(",".join(str(v) for v in row) for row in g)
    if isinstance(g, tuple):
        return ",".join(str(v) for v in g)
    return str(g)


def _resolve_group(args, cfg) -> groups.GroupModel:
    if getattr(args, "group_file", None):
        with open(args.group_file) as fh:
            doc = json.load(fh)
        return groups.build_group(groups.spec_from_json(doc), name=os.path.basename(args.group_file))
    name = args.group
    if name.startswith("builtin:"):
        return groups.builtin_group(name[len("builtin:"):])
    raise CLIError(f"unknown group {name!r}; use builtin:<name> or --group-file")


def _emit(cfg: RunConfig, payload: dict, text_lines: List[str], csv_rows: Optional[List[str]] = None) -> None:
    if cfg.fmt == "json":
        payload = {"schema": SCHEMA, **payload}
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    elif cfg.fmt == "csv":
        for row in (csv_rows if csv_rows is not None else text_lines):
            print(row)
    else:
        for line in text_lines:
            print(line)


def _status_exit(statuses) -> int:
    vals = list(statuses)
    if any(s in ("violated", "CertifiedFalse") for s in vals):
        return EXIT_VIOLATED
    if any(s in ("undecided", "Undecided") for s in vals):
        return EXIT_UNDECIDED
    return EXIT_OK


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_ball(args, cfg: RunConfig) -> int:
    model = _resolve_group(args, cfg)
    profile = groups.ball_profile(model, args.radius, cfg.budget)
    rows = [f"{n},{profile.size(n)}" for n in range(profile.radius + 1)]
    payload = {
        "command": "ball",
        "group": model.name,
        "radius": profile.radius,
        "cumulative": list(profile.cumulative),
        "spheres": list(profile.spheres),
        "exhausted": profile.exhausted,
    }
    text = [f"group {model.name}, valency {model.valency}"] + [
        f"s_{n} = {profile.size(n)}" for n in range(profile.radius + 1)
    ]
    _emit(cfg, payload, text, rows)
    return EXIT_OK


def _cmd_verify_growth(args, cfg: RunConfig) -> int:
    model = _resolve_group(args, cfg)
    profile = groups.ball_profile(model, args.radius, cfg.budget)
    checks = []

    def record(name, ok, detail):
        checks.append({"check": name, "status": "satisfied" if ok else "violated", "detail": detail})

    if not profile.exhausted:
        bad = [n for n in range(1, profile.radius + 1) if profile.size(n) < 2 * n + 1]
        record("infinite_growth_floor", not bad, f"s_n >= 2n+1 fails at {bad}" if bad else "s_n >= 2n+1")
    sub_bad = [
        (m, n)
        for m in range(1, profile.radius + 1)
        for n in range(1, profile.radius + 1 - m)
        if profile.size(m + n) > profile.size(m) * profile.size(n)
    ]
    record("submultiplicative", not sub_bad, f"fails at {sub_bad[:3]}" if sub_bad else "s_(m+n) <= s_m s_n")
    if args.degree:
        for rep in bounds.profile_floor_reports(profile, args.degree, args.hirsch):
            checks.append({
                "check": rep.name,
                "status": rep.status.value,
                "detail": f"n={dict(rep.params)['n']}: bound {_bound_str(rep.bound)} vs s_n {rep.measured}",
            })
    lin = bounds.linear_growth_criterion(profile)
    fin = bounds.finiteness_report(profile)
    payload = {
        "command": "verify-growth",
        "group": model.name,
        "radius": profile.radius,
        "checks": checks,
        "linear_growth": {"n": lin[0], "index_bound": lin[1]} if lin else None,
        "finite_at": list(fin.finite_at),
        "virtually_cyclic_at": list(fin.virtually_cyclic_at),
    }
    text = [f"group {model.name}, radius {profile.radius}"]
    for c in checks:
        text.append(f"  [{c['status']}] {c['check']}: {c['detail']}")
    text.append(f"  linear-growth criterion: {payload['linear_growth']}")
    text.append(f"  finite flags: {payload['finite_at']}, virtually-cyclic flags: {payload['virtually_cyclic_at']}")
    _emit(cfg, payload, text)
    return _status_exit(c["status"] for c in checks)


def _cmd_coxeter(args, cfg: RunConfig) -> int:
    if args.mg_window is not None:
        win = coxeter.mg_window(args.mg_window, cfg.structure_constant, cfg.precision)
        payload = {
            "command": "coxeter",
            "mg_window": {
                "degree": win.degree,
                "lower": tower.format_tower(win.lower, 12) if win.lower is not None else None,
                "upper": _fraction_str(win.upper),
                "upper_witness": win.upper_witness,
            },
        }
        text = [f"mg({win.degree}) in [{payload['mg_window']['lower']}, {payload['mg_window']['upper']}]"
                f"  (upper from {win.upper_witness})"]
        _emit(cfg, payload, text)
        return EXIT_OK
    datum = coxeter.builtin(args.family, args.rank)
    payload = {"command": "coxeter", "family": datum.name, "exponents": list(datum.exponents)}
    text = [f"{datum.name}: exponents {datum.exponents}"]
    rows = []
    if args.limit:
        const = coxeter.asymptotic_constant(datum)
        payload["asymptotic_constant"] = _fraction_str(const)
        text.append(f"lim s_n/n^{datum.rank} = {_fraction_str(const)}")
        rows.append(_fraction_str(const))
    if args.series is not None:
        series = coxeter.bott_cumulative_series(datum, args.series)
        payload["cumulative"] = list(series.cumulative)
        rows = [f"{n},{series.size(n)}" for n in range(series.truncation + 1)]
        text += [f"s_{n} = {series.size(n)}" for n in range(series.truncation + 1)]
    _emit(cfg, payload, text, rows)
    return EXIT_OK


def _cmd_constants(args, cfg: RunConfig) -> int:
    d = args.degree
    eps = bounds.min_growth_constant(d, cfg.structure_constant, cfg.precision)
    payload = {
        "command": "constants",
        "degree": d,
        "minkowski_bound": str(bounds.minkowski_bound(d)),
        "min_growth_constant": {
            "branch": eps.branch,
            "value": tower.format_tower(eps.value, 12) if eps.value is not None else None,
            "subgroup_branch": tower.format_tower(eps.subgroup_branch, 12),
            "radius_branch": tower.format_tower(eps.radius_branch, 12),
        },
    }
    text = [
        f"degree {d}",
        f"  minkowski bound (2d)! = {bounds.minkowski_bound(d)}",
        f"  effective growth constant: {payload['min_growth_constant']['value']} (branch: {eps.branch})",
        f"    subgroup branch: {payload['min_growth_constant']['subgroup_branch']}",
        f"    radius branch:   {payload['min_growth_constant']['radius_branch']}",
    ]
    if args.radius:
        n = args.radius
        payload["floors"] = {
            "nilpotent": _fraction_str(bounds.ball_floor_nilpotent(d, n)),
            "min_degree": _fraction_str(bounds.ball_floor_min_degree(d, n)),
            "vertex_transitive": _fraction_str(bounds.ball_floor_vertex_transitive(d, n)),
        }
        if args.hirsch:
            payload["floors"]["virtually_nilpotent"] = _fraction_str(
                bounds.ball_floor_virtually_nilpotent(d, args.hirsch, n))
        for k, v in sorted(payload["floors"].items()):
            text.append(f"  {k} floor at n={n}: {v}")
    _emit(cfg, payload, text)
    return EXIT_OK


def _cmd_heat(args, cfg: RunConfig) -> int:
    model = _resolve_group(args, cfg)
    series = heat.return_series(model, args.steps, cfg.budget)
    rows, table = [], []
    reports = []
    if args.degree:
        profile = groups.ball_profile(model, args.steps, cfg.budget)
        c = heat.measured_growth_constant(profile, args.degree)
        reports = heat.check_return_bounds(series, profile, args.degree, model.valency, c, cfg.precision)
    bound_by_t = {dict(r.params)["t"]: r for r in reports if r.name == "return_probability"}
    for t in range(series.steps + 1):
        p = series.at(t)
        b = bound_by_t.get(t)
        btxt = _decimal_upper(b.bound) if b else ""
        rows.append(f"{t},{p.numerator},{p.denominator},{btxt}")
        table.append(f"p_{t}(o,o) = {_fraction_str(p)}" + (f"  bound {btxt} [{b.status.value}]" if b else ""))
    payload = {
        "command": "heat",
        "group": model.name,
        "valency": model.valency,
        "returns": [[t, str(series.at(t).numerator), str(series.at(t).denominator)]
                    for t in range(series.steps + 1)],
        "checks": [{"check": r.name, "params": dict(r.params), "status": r.status.value} for r in reports],
    }
    _emit(cfg, payload, [f"group {model.name}, valency {model.valency}"] + table, rows)
    return _status_exit(r.status.value for r in reports)


def _cmd_gap(args, cfg: RunConfig) -> int:
    params = percolation.GapParams(
        C=cfg.structure_constant, r=args.r, index_n=args.index_n, C0=args.c0)
    steps = percolation.certify_chain(params, cfg.precision)
    payload = {
        "command": "gap",
        "params": {"C": params.C, "r": params.r, "index_n": str(params.index_n), "C0": params.C0},
        "steps": [
            {
                "name": s.name,
                "role": s.role,
                "relation": s.relation,
                "status": s.status.value,
                "left": tower.format_tower(s.left, 12) if s.left is not None else None,
                "right": tower.format_tower(s.right, 12) if s.right is not None else None,
                "statement": s.statement,
            }
            for s in steps
        ],
        "worst": percolation.worst_status(steps).value,
    }
    text = []
    for s in steps:
        text.append(f"[{s.role:5s}] {s.status.value:15s} {s.name}")
        if args.verbose:
            text.append(f"        {s.statement}")
            if s.left is not None:
                text.append(f"        left  {tower.format_tower(s.left, 12)}")
                text.append(f"        right {tower.format_tower(s.right, 12)}")
    text.append(f"worst status over claims: {payload['worst']}")
    rows = [f"{s.name},{s.role},{s.status.value}" for s in steps]
    _emit(cfg, payload, text, rows)
    worst = percolation.worst_status(steps)
    if worst is StepStatus.CERTIFIED_FALSE:
        return EXIT_VIOLATED
    if worst is StepStatus.UNDECIDED:
        return EXIT_UNDECIDED
    return EXIT_OK


def _cmd_boundary(args, cfg: RunConfig) -> int:
    model = _resolve_group(args, cfg)
    levels = groups.ball_elements(model, args.radius, cfg.budget)
    ball = [g for level in levels for g in level]
    size = groups.vertex_boundary_size(model, ball)
    payload = {
        "command": "boundary",
        "group": model.name,
        "radius": args.radius,
        "ball_size": len(ball),
        "boundary_size": size,
    }
    text = [f"|B_{args.radius}| = {len(ball)}, |boundary| = {size}"]
    statuses = []
    if args.degree:
        profile = groups.ball_profile(model, max(args.radius, 1), cfg.budget)
        c = heat.measured_growth_constant(profile, args.degree)
        iso = bounds.isoperimetric_bounds(args.degree, len(ball), c, cfg.precision)
        ok_csc = Fraction(size) >= iso.csc_form
        cmp_pow = tower.compare(tower.from_rational(Fraction(size)), iso.power_form)
        pow_status = ("satisfied" if cmp_pow in (tower.Comparison.GREATER, tower.Comparison.EQUAL)
                      else "violated" if cmp_pow is tower.Comparison.LESS else "undecided")
        payload["isoperimetric"] = {
            "growth_constant": _fraction_str(c),
            "csc_form": _fraction_str(iso.csc_form),
            "csc_status": "satisfied" if ok_csc else "violated",
            "power_form": tower.format_tower(iso.power_form, 12),
            "power_status": pow_status,
        }
        text.append(f"  CSC floor {_fraction_str(iso.csc_form)}: {'satisfied' if ok_csc else 'violated'}")
        text.append(f"  power-form floor {tower.format_tower(iso.power_form, 12)}: {pow_status}")
        statuses = [payload["isoperimetric"]["csc_status"], pow_status]
    _emit(cfg, payload, text)
    return _status_exit(statuses)


def _cmd_words(args, cfg: RunConfig) -> int:
    if args.commutator:
        word = words.simple_commutator_word(args.commutator)
        expected = words.commutator_word_length(args.commutator)
    elif args.parse:
        word = words.parse_word(args.parse)
        expected = None
    else:
        raise CLIError("words needs --commutator K or --parse TEXT")
    payload = {
        "command": "words",
        "word": words.format_word(word),
        "length": len(word),
        "reduced": words.format_word(words.free_reduce(word)),
    }
    text = [f"word: {payload['word']}", f"length: {len(word)}"]
    if expected is not None:
        payload["commutator_length_formula"] = expected
        text.append(f"3*2^(k-1) - 2 = {expected}")
    if args.group or args.group_file:
        model = _resolve_group(args, cfg)
        need = word.max_index()
        supplied = list(model.base_generators[:need])
        if len(supplied) < need:
            raise CLIError(f"group supplies {len(supplied)} generators, word needs {need}")
        value = words.evaluate_word(model, word, supplied)
        payload["evaluated"] = _element_str(value)
        text.append(f"evaluated: {payload['evaluated']}")
    _emit(cfg, payload, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------


def _add_run_options(p, top: bool) -> None:
    # options usable both before and after the subcommand; the sub-level
    # copies default to SUPPRESS so they never clobber top-level values
    kw = {} if top else {"default": argparse.SUPPRESS}
    p.add_argument("--format", choices=("text", "json", "csv"),
                   **({"default": "text"} if top else kw))
    p.add_argument("--precision", type=int, help="mantissa bits (default 128)",
                   **({"default": None} if top else kw))
    p.add_argument("--budget", type=int,
                   **({"default": groups.DEFAULT_BUDGET} if top else kw))
    p.add_argument("--structure-constant", type=int, metavar="C",
                   **({"default": 100} if top else kw))
    p.add_argument("--seed", type=int, **({"default": 0} if top else kw))


def _build_parser() -> _Parser:
    top = _Parser(prog="growthlab", description=__doc__)
    _add_run_options(top, top=True)
    common = _Parser(add_help=False)
    _add_run_options(common, top=False)
    sub = top.add_subparsers(dest="command", required=True)

    def group_opts(p):
        p.add_argument("--group", default=None, help="builtin:z | builtin:zd:<d> | builtin:heisenberg | builtin:ut:<n> | builtin:cyclic:<k> | builtin:dihedralinf")
        p.add_argument("--group-file", default=None, help="path to a JSON group spec")

    p = sub.add_parser("ball", parents=[common]);          group_opts(p)
    p.add_argument("--radius", type=int, required=True)

    p = sub.add_parser("verify-growth", parents=[common]); group_opts(p)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--hirsch", type=int, default=None)

    p = sub.add_parser("coxeter", parents=[common])
    p.add_argument("--family", default="Btilde")
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--limit", action="store_true", help="print the exact asymptotic constant")
    p.add_argument("--series", type=int, default=None, metavar="N")
    p.add_argument("--mg-window", type=int, default=None, metavar="D")

    p = sub.add_parser("constants", parents=[common])
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--hirsch", type=int, default=None)

    p = sub.add_parser("heat", parents=[common]);          group_opts(p)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--degree", type=int, default=None)

    p = sub.add_parser("gap", parents=[common])
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--index-n", type=int, default=percolation.FACTORIAL_16)
    p.add_argument("--c0", type=int, default=4000)
    p.add_argument("--verbose", action="store_true")

    p = sub.add_parser("boundary", parents=[common]);      group_opts(p)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--degree", type=int, default=None)

    p = sub.add_parser("words", parents=[common]);         group_opts(p)
    p.add_argument("--commutator", type=int, default=None, metavar="K")
    p.add_argument("--parse", default=None, metavar="TEXT")

    return top


_DISPATCH = {
    "ball": _cmd_ball,
    "verify-growth": _cmd_verify_growth,
    "coxeter": _cmd_coxeter,
    "constants": _cmd_constants,
    "heat": _cmd_heat,
    "gap": _cmd_gap,
    "boundary": _cmd_boundary,
    "words": _cmd_words,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        precision = args.precision
        if precision is None:
            precision = int(os.environ.get("GROWTHLAB_PRECISION", tower.DEFAULT_PRECISION))
        if precision < 2 or precision > tower.MAX_PRECISION:
            raise CLIError(f"precision must lie in [2, {tower.MAX_PRECISION}]")
        cfg = RunConfig(
            structure_constant=args.structure_constant,
            precision=precision,
            budget=args.budget,
            fmt=args.format,
            seed=args.seed,
        )
        if getattr(args, "group", None) is None and getattr(args, "group_file", None) is None \
                and args.command in ("ball", "verify-growth", "heat", "boundary"):
            raise CLIError(f"{args.command} needs --group or --group-file")
        return _DISPATCH[args.command](args, cfg)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GrowthLabError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line explorer: ``sdst <verb> ...``.

Exit statuses: 0 success, 2 parse error, 3 unsupported level, 4 precondition
violation.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import dsl
from .borel import (
    ClosedCantorSet,
    PreconditionError,
    is_empty_closed,
    is_nonempty_jump,
    jump_overt_cantor,
    sigma2_decompose,
)
from .jumps import (
    JumpPairToNabla,
    LevelError,
    jump_pair_to_nabla,
    nabla_decode,
    nabla_fixture_value,
    nabla_to_jump_pair,
)
from .kernel import EP, Interleave, NoOutput, unpair
from .scan import scan
from .setops import UnsupportedLevel, level_text
from .spaces import ObservedTop, SpaceMismatch, observe_name

FUEL_ENV = "SDST_FUEL"
SCAN_FUEL_ENV = "SDST_SCAN_FUEL"


def _default(env: str, fallback: int) -> int:
    try:
        return int(os.environ.get(env, fallback))
    except ValueError:
        return fallback


def _observation(name, fuel):
    obs = observe_name(name, fuel)
    if isinstance(obs, ObservedTop):
        return {"outcome": "ObservedTop", "step": obs.at_step}
    return {"outcome": "NotYetBottom", "step": None}


def _scan_fields(q, rows, max_column):
    rep = scan(q, rows, max_column)
    return {
        "heuristic": True,
        "denotation": rep.denotation,
        "rows": [{"row": r.row, "bound": r.bound, "value": r.value, "window": r.window} for r in rep.rows],
    }


def _pair_points(text):
    p = dsl.Parser(text)
    a = p.jpoint()
    p.take(",")
    b = p.jpoint()
    p.end()
    return a, b


def cmd_observe(args):
    U = dsl.parse_set(args.set)
    if U.level != 0:
        raise UnsupportedLevel("observe works on base-level sets; %s needs the estimate verb" % level_text(U.level))
    x = dsl.parse_point(args.point)
    out = {"set": args.set, "point": args.point, "fuel_used": args.fuel}
    out.update(_observation(U.machine.apply(x), args.fuel))
    return out


def cmd_eval(args):
    m = dsl.parse_machine(args.machine)
    x = dsl.parse_point(args.point)
    prefix = m.step(x.prefix(args.fuel), args.fuel)
    return {"machine": m.descriptor, "point": args.point, "prefix": list(prefix[: args.length]), "fuel_used": args.fuel}


def cmd_decompose(args):
    U = dsl.parse_set(args.set)
    if U.level != 1:
        raise UnsupportedLevel("decompose needs a jump^1 set, got %s" % level_text(U.level))
    dec = sigma2_decompose(U)
    upto = (1 << (args.depth + 1)) - 1
    pieces = []
    for c in range(args.pieces):
        n, k = unpair(c)
        words = dec.piece(c).removed_words(upto)
        pieces.append({"index": c, "n": n, "k": k, "removed": [w or "e" for w in words]})
    return {"set": args.set, "depth": args.depth, "pieces": pieces, "fuel_used": upto}


def cmd_overt(args):
    if args.closed:
        A = ClosedCantorSet.from_words(dsl.parse_words(args.closed))
        out = {"closed": args.closed, "fuel_used": args.fuel}
        out.update(_observation(is_empty_closed(A), args.fuel))
        out["nonempty"] = _scan_fields(is_nonempty_jump(A), args.rows, args.fuel)
        return out
    if not args.set:
        raise PreconditionError("overt needs --set or --closed")
    U = dsl.parse_set(args.set)
    if U.level != 1:
        raise UnsupportedLevel("overt needs a jump^1 set, got %s" % level_text(U.level))
    out = {"set": args.set, "fuel_used": args.fuel}
    out.update(_scan_fields(jump_overt_cantor(U), args.rows, args.fuel))
    return out


def cmd_mindchanges(args):
    p, q = _pair_points(args.pair)
    u = Interleave(p, q).prefix(2 * args.fuel)
    tokens, guesses = JumpPairToNabla().trace(u, 2 * args.fuel)
    traj = nabla_decode(tokens)
    changes = []
    for t, g in enumerate(guesses):
        if g is not None and (not changes or changes[-1]["guess"] != g):
            changes.append({"stage": t, "guess": g})
    return {
        "pair": args.pair,
        "mindchanges": traj.mindchanges,
        "final": guesses[-1] if guesses else None,
        "trajectory": changes,
        "fuel_used": args.fuel,
    }


def cmd_estimate(args):
    if args.set:
        U = dsl.parse_set(args.set)
        if U.level == 0 or U.level == "nabla":
            raise UnsupportedLevel("estimate scans jump^1 sets, got %s" % level_text(U.level))
        if not args.point:
            raise PreconditionError("estimate --set needs --point")
        q = U.machine.apply(dsl.parse_point(args.point))
        subject = {"set": args.set, "point": args.point}
    elif args.jpoint:
        q = dsl.parse_jump_point(args.jpoint)
        subject = {"jpoint": args.jpoint}
    else:
        raise PreconditionError("estimate needs --jpoint or --set")
    out = dict(subject, fuel_used=args.fuel)
    out.update(_scan_fields(q, args.rows, args.fuel))
    return out


def cmd_roundtrip(args):
    b = dsl.parse_point(args.nabla)
    if not isinstance(b, EP) or 0 in b.per:
        raise PreconditionError("roundtrip needs a nabla fixture with finitely many resets")
    value = nabla_fixture_value(b)
    top, bot = nabla_to_jump_pair(b)
    back = jump_pair_to_nabla(top, bot).prefix(args.fuel)
    traj = nabla_decode(back)
    flags = [x for x in back if x]
    recovered = bool(flags) and flags[-1] == 2
    return {
        "nabla": args.nabla,
        "value": value,
        "recovered": recovered,
        "mindchanges": traj.mindchanges,
        "fuel_used": args.fuel,
    }


VERBS = {
    "observe": cmd_observe,
    "eval": cmd_eval,
    "decompose": cmd_decompose,
    "overt": cmd_overt,
    "mindchanges": cmd_mindchanges,
    "estimate": cmd_estimate,
    "roundtrip": cmd_roundtrip,
}


def build_parser() -> argparse.ArgumentParser:
    fuel = _default(FUEL_ENV, 1024)
    scan_fuel = _default(SCAN_FUEL_ENV, 16384)
    ap = argparse.ArgumentParser(prog="sdst", description=__doc__.splitlines()[0])
    ap.add_argument("--format", choices=("text", "json"), default="text")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("observe", help="observe membership of a point in a base-level set")
    p.add_argument("--set", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--fuel", type=int, default=fuel)

    p = sub.add_parser("eval", help="run a machine on a point")
    p.add_argument("--machine", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--fuel", type=int, default=fuel)
    p.add_argument("--length", type=int, default=32)

    p = sub.add_parser("decompose", help="decompose a jump^1 set of Cantor space into closed pieces")
    p.add_argument("--set", required=True)
    p.add_argument("--pieces", type=int, default=16)
    p.add_argument("--depth", type=int, default=8)

    p = sub.add_parser("overt", help="nonemptiness of a jump^1 set or a closed set")
    p.add_argument("--set")
    p.add_argument("--closed", help="removed words, e.g. 'words: 0, _, 1'")
    p.add_argument("--rows", type=int, default=4)
    p.add_argument("--fuel", type=int, default=scan_fuel)

    p = sub.add_parser("mindchanges", help="trace the pair-to-nabla conversion")
    p.add_argument("--pair", required=True, help="two jump points separated by a comma")
    p.add_argument("--fuel", type=int, default=fuel)

    p = sub.add_parser("estimate", help="heuristic stabilization scan of a jump name")
    p.add_argument("--jpoint")
    p.add_argument("--set")
    p.add_argument("--point")
    p.add_argument("--rows", type=int, default=4)
    p.add_argument("--fuel", type=int, default=scan_fuel)

    p = sub.add_parser("roundtrip", help="nabla name to jump pair and back")
    p.add_argument("--nabla", required=True)
    p.add_argument("--fuel", type=int, default=fuel)
    return ap


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True)
    lines = []
    for key in sorted(report):
        val = report[key]
        if isinstance(val, (list, dict)):
            val = json.dumps(val, sort_keys=True)
        lines.append("%s: %s" % (key, val))
    return "\n".join(lines)


def run(argv=None) -> tuple[int, str]:
    ap = build_parser()
    args = ap.parse_args(argv)
    for name in ("fuel", "depth", "pieces", "rows", "length"):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            ap.error("--%s must be non-negative" % name)
    try:
        report = {"verb": args.verb}
        report.update(VERBS[args.verb](args))
        return 0, render(report, args.format)
    except dsl.ParseError as e:
        return 2, render({"verb": args.verb, "error": "parse", "message": str(e)}, args.format)
    except (UnsupportedLevel, LevelError) as e:
        return 3, render({"verb": args.verb, "error": "unsupported-level", "message": str(e)}, args.format)
    except (PreconditionError, SpaceMismatch, NoOutput) as e:
        return 4, render({"verb": args.verb, "error": "precondition", "message": str(e)}, args.format)


def main(argv=None):
    status, text = run(argv)
    print(text, file=sys.stdout if status == 0 else sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``topogame <subcommand> ...``.

Exit codes: 0 when every validation passes, 2 when violations are found,
1 for usage errors.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys

from .errors import PreconditionError, SeparationError, TopologyError
from .games import (GAME_NAMES, GameSpec, OrdinalFamily, Strategy, find_counterplay, from_function,
                    named_game, positional_I)
from .harness import (_least_pick_II, profile, report, revalidate, run_combinator, sweep_profiles,
                      verify_diagram, verify_duality, verify_pi_base, verify_transformers, play,
                      COMBINATORS)
from .ordinals import OMEGA, OMEGA_1, OrdinalSpace, example24_strategy_I
from .principles import s1_holds, s1_oracle, s1_star_holds, seq_s1_fails
from .solver import solve
from .topology import CD, Family, FiniteSpace, catalog, enumerate_topologies, points

__all__ = ["main", "load_space"]


class UsageError(Exception):
    pass


def load_space(text: str):
    """A JSON file path, a catalog name such as ``chain:3``, or ``omega`` / ``omega1``."""
    if text in ("omega", "w"):
        return OrdinalSpace(OMEGA)
    if text in ("omega1", "W1"):
        return OrdinalSpace(OMEGA_1)
    if os.path.exists(text):
        with open(text) as fh:
            return FiniteSpace.from_json(fh.read(), os.path.splitext(os.path.basename(text))[0])
    name, _, args = text.partition(":")
    try:
        params = [int(p) for p in args.split(",") if p]
        return catalog(name, *params)
    except (TopologyError, ValueError) as exc:
        raise UsageError(f"cannot load space {text!r}: {exc}") from exc


def _finite(space) -> FiniteSpace:
    if not isinstance(space, FiniteSpace):
        raise UsageError("this subcommand needs a finite space")
    return space


def _point(space: FiniteSpace, x) -> int:
    if x is None or not 0 <= x < space.n:
        raise UsageError(f"--point must be in 0..{space.n - 1}")
    return x


def _emit(doc, out: str | None) -> None:
    text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_enumerate(args) -> int:
    doc = {}
    for n in range(1, args.nmax + 1):
        spaces = list(enumerate_topologies(n, canonical=args.canonical))
        doc[str(n)] = {"count": len(spaces)}
        if args.out:
            doc[str(n)]["spaces"] = [[points(u) for u in sp.min_nbhd] for sp in spaces]
    _emit(doc, args.out)
    return 0


def cmd_profile(args) -> int:
    space = _finite(load_space(args.space))
    x = _point(space, args.point)
    try:
        p = profile(space, x)
    except PreconditionError as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return 1
    doc = p.to_dict()
    doc["revalidation"] = revalidate(p)
    doc["violations"] = verify_diagram([p])
    _emit(doc, args.out)
    return 2 if doc["revalidation"] or doc["violations"] else 0


def cmd_solve(args) -> int:
    space = _finite(load_space(args.space))
    x = _point(space, args.point)
    if args.game not in GAME_NAMES:
        raise UsageError(f"--game must be one of {', '.join(GAME_NAMES)}")
    res = solve(named_game(space, args.game, x))
    strat = res.strategy_I if res.winner == "I" else res.strategy_II
    doc = {"game": res.spec.label(), "winner": res.winner, "vacuous": res.vacuous,
           "explored": res.explored}
    if args.emit_strategy and strat is not None:
        with open(args.emit_strategy, "w") as fh:
            json.dump(strat.to_json(), fh, indent=1)
            fh.write("\n")
    doc["verified"] = strat is None or find_counterplay(res.spec, strat) is None
    _emit(doc, args.out)
    return 0 if doc["verified"] else 2


def cmd_principle(args) -> int:
    space = _finite(load_space(args.space))
    if args.kind == "seq":
        r = seq_s1_fails(space, _point(space, args.point))
        _emit({"principle": "not (S1)(tau*, not L_x)", "holds": r.holds, "note": r.note}, args.out)
        return 0
    if not args.A or not args.B:
        raise UsageError("--A and --B are required for s1 and s1star")
    try:
        a, b = Family.parse(args.A), Family.parse(args.B)
    except (TopologyError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    if args.kind == "s1star":
        r = s1_star_holds(space, a, b)
        _emit({"principle": f"S1*({a.label()},{b.label()})", "holds": r.holds, "note": r.note}, args.out)
        return 0
    r = s1_holds(space, a, b)
    oracle = s1_oracle(space, a, b)
    doc = {"principle": f"S1({a.label()},{b.label()})", "holds": r.holds, "oracle": oracle}
    if not r.holds:
        sub, inf = r.refuter
        doc["refuter"] = {"members": [points(m) for m in sub], "repeated": points(inf)}
    _emit(doc, args.out)
    return 0 if oracle == r.holds else 2


def cmd_transform(args) -> int:
    space = _finite(load_space(args.space))
    x = _point(space, args.point)
    if args.kind not in COMBINATORS:
        raise UsageError(f"--kind must be one of {', '.join(COMBINATORS)}")
    if args.strategy:
        # a user strategy replaces the solver's certificate for the input game
        with open(args.strategy) as fh:
            strat = Strategy.from_json(json.load(fh))
        verdict = _transform_user(args.kind, strat, space, x)
    else:
        verdict = run_combinator(args.kind, space, x)
    _emit({"combinator": args.kind, "space": space.name, "x": x, "verdict": verdict}, args.out)
    return 2 if verdict in ("fail", "illegal") else 0


def _transform_user(kind: str, strat: Strategy, space: FiniteSpace, x: int) -> str:
    from . import transformers as tf
    from .harness import _check
    target = {"dual_i": ("dual", lambda: tf.dual_i(strat, space, x)),
              "dual_ii": ("qgame", lambda: tf.dual_ii(strat, space, x)),
              "dual_iii": ("dual", lambda: tf.dual_iii(strat, space, x)),
              "dual_iv": ("qgame", lambda: tf.dual_iv(strat, space, x)),
              "na_oo": ("csft", lambda: tf.na_oo(strat, tf.gdelta_for(space, x), space, x)),
              "q_to_wtilde": ("wtilde", lambda: tf.q_to_wtilde(strat, tf.gdelta_for(space, x), space, x)),
              "II_transfer": ("qgame", lambda: tf.II_transfer(strat, tf.gdelta_for(space, x), space, x))}
    if kind not in target:
        raise UsageError(f"{kind} takes no strategy input")
    game, build = target[kind]
    try:
        out = build()
    except (PreconditionError, SeparationError, ValueError):
        return "precondition"
    return _check(named_game(space, game, x), out)


def cmd_verify_duality(args) -> int:
    doc = verify_duality(args.nmax)
    if not args.rows:
        doc.pop("rows")
    _emit(doc, args.out)
    return 0 if not doc["exceptions"] else 2


def cmd_verify_diagram(args) -> int:
    rows = sweep_profiles(args.nmax)
    violations = verify_diagram(rows)
    bad = [r for r in rows if r["revalidation"]]
    doc = {"n_max": args.nmax, "profiles": len(rows), "all_true": all(all(r["entries"].values()) for r in rows),
           "violations": violations, "revalidation_failures": bad}
    _emit(doc, args.out)
    return 2 if violations or bad else 0


def cmd_verify_transformers(args) -> int:
    doc = verify_transformers(args.nmax)
    _emit(doc, args.out)
    return 2 if doc["failures"] else 0


def cmd_play(args) -> int:
    space = load_space(args.space)
    if isinstance(space, OrdinalSpace):
        if space.lam != OMEGA_1 or args.side != "II":
            raise UsageError("on ordinal spaces only the W1 example is playable, with the human as II")
        spec = GameSpec(space, OrdinalFamily("tau", OMEGA_1), CD(), injective=True, name="qgame")
        machine = from_function("I", lambda h: example24_strategy_I([b for _, b in h]), name="example24")
    else:
        x = _point(space, args.point)
        if args.game not in GAME_NAMES:
            raise UsageError(f"--game must be one of {', '.join(GAME_NAMES)}")
        spec = named_game(space, args.game, x)
        res = solve(spec)
        machine_side = "I" if args.side == "II" else "II"
        machine = res.strategy_I if machine_side == "I" else res.strategy_II
        if machine is None:
            # the machine's seat has no winning strategy: fall back to least moves
            machine = (positional_I({None: spec.moves[0]}, "none") if machine_side == "I"
                       else _least_pick_II(spec))
    t = play(spec, args.side, machine, args.horizon)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(t.to_json() + "\n")
    return 0


def cmd_report(args) -> int:
    rows = sweep_profiles(args.nmax)
    results = {"profiles": rows, "violations": verify_diagram(rows),
               "duality": verify_duality(min(args.nmax, 5))["rows"]}
    if args.nmax <= 4:
        results["transformers"] = verify_transformers(args.nmax)["table"]
        results["pi_base"] = verify_pi_base(args.nmax)
    dot, doc = report(results)
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, "diagram.dot"), "w") as fh:
        fh.write(dot)
    with open(os.path.join(out, "results.json"), "w") as fh:
        fh.write(doc)
    print(f"wrote {os.path.join(out, 'diagram.dot')} and {os.path.join(out, 'results.json')}")
    return 2 if results["violations"] else 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="topogame", description="Selection games on finite and ordinal spaces.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        p.add_argument("--out", help="output file (directory for report)")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
        return p

    p = add("enumerate", cmd_enumerate, "count (and optionally list) topologies")
    p.add_argument("--nmax", type=int, default=4)
    p.add_argument("--canonical", action="store_true", help="one space per homeomorphism class")

    p = add("profile", cmd_profile, "property profile at a point")
    p.add_argument("--space", required=True)
    p.add_argument("--point", type=int)

    p = add("solve", cmd_solve, "solve a named game")
    p.add_argument("--space", required=True)
    p.add_argument("--point", type=int)
    p.add_argument("--game", required=True, help=", ".join(GAME_NAMES))
    p.add_argument("--emit-strategy", help="write the winner's table as JSON")

    p = add("principle", cmd_principle, "decide a selection principle")
    p.add_argument("--space", required=True)
    p.add_argument("--kind", choices=("s1", "s1star", "seq"), default="s1")
    p.add_argument("--A", help="selector family, e.g. omega:0")
    p.add_argument("--B", help="outcome family, e.g. gamma:0")
    p.add_argument("--point", type=int)

    p = add("transform", cmd_transform, "run and verify a strategy combinator")
    p.add_argument("--space", required=True)
    p.add_argument("--point", type=int)
    p.add_argument("--kind", required=True, help=", ".join(COMBINATORS))
    p.add_argument("--strategy", help="input strategy JSON (default: the solver's certificate)")
    p.add_argument("--verify", choices=("exhaustive",), default="exhaustive")

    p = add("verify-duality", cmd_verify_duality, "duality sweep")
    p.add_argument("--nmax", type=int, default=4)
    p.add_argument("--rows", action="store_true", help="include every row, not just exceptions")

    p = add("verify-diagram", cmd_verify_diagram, "implication-diagram sweep")
    p.add_argument("--nmax", type=int, default=4)

    p = add("verify-transformers", cmd_verify_transformers, "combinator sweep")
    p.add_argument("--nmax", type=int, default=3)

    p = add("play", cmd_play, "play interactively against the machine")
    p.add_argument("--space", required=True, help="finite space, or omega1 for the W1 example")
    p.add_argument("--point", type=int)
    p.add_argument("--game", default="qgame")
    p.add_argument("--side", choices=("I", "II"), default="II")
    p.add_argument("--horizon", type=int, default=10)

    p = add("report", cmd_report, "write diagram.dot and results.json")
    p.add_argument("--nmax", type=int, default=3)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    random.seed(args.seed)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

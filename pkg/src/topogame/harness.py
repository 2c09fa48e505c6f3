"""Profiles, implication-diagram checks, duality and transformer sweeps, play, reports.

Finite models cannot tell the properties apart (every profile is all true),
so the sweeps get their checking power elsewhere: solver certificates for
both players are re-validated by exhaustive adversary search, the two games
of the duality are solved independently, and transformer outputs are played
against every adversary.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable

from .errors import IllegalMove, PreconditionError, SeparationError
from .games import (GameSpec, Strategy, Transcript, find_counterplay, named_game,
                    outcome_winner, positional_II)
from .ordinals import Interval, Ordinal
from .principles import recheck_s1, s1_holds, s1_star_holds, seq_s1_fails
from .solver import SolveResult, solve
from .topology import (CD, FiniteSpace, catalog, GammaX, NotGamma, OmegaX, TauX, enumerate_topologies,
                       family_members, is_member, points, separation_axioms)
from .transformers import (II_transfer, dual_i, dual_ii, dual_iii, dual_iv, frechet_refuter,
                           gdelta_for, na_oo, pi_base_from_strategy, q_to_wtilde)

__all__ = [
    "ENTRIES", "ARROWS", "Arrow", "Profile", "profile", "revalidate", "verify_diagram",
    "inject_fault", "verify_duality", "verify_transformers", "verify_pi_base", "sweep_profiles",
    "play", "report", "parallel_map", "space_id", "LIMITATION",
]

LIMITATION = ("finite models satisfy every property, so profiles are all true; "
              "checking power comes from certificates, duality and transformer sweeps")

# the sixteen profile entries, in diagram order
ENTRIES = (
    "clb",                 # countable local base
    "not_S1_tau_notGamma",
    "not_seqS1_tau_star",  # not (S1)(tau*, not L_x)
    "q_point",
    "W", "w",              # I wins / II does not win G1(tau_x, not Gamma_x)
    "W~", "w~",            # same for (G1)(tau*, not L_x)
    "I_q", "II_not_q",     # G1*(tau_x, CD)
    "II_dual", "I_not_dual",   # G1(Omega_x, union of Omega_p)
    "II_csft", "I_not_csft",   # G1(Omega_x, Omega_x)
    "S1_Omega_Omega", "S1_Omega_Gamma",
)


@dataclass(frozen=True)
class Arrow:
    src: str
    dst: str
    label: str
    guarded: bool = False


ARROWS = (
    Arrow("clb", "not_S1_tau_notGamma", "local base"),
    Arrow("not_S1_tau_notGamma", "clb", "local base"),
    Arrow("not_S1_tau_notGamma", "W", "not S1 => I wins"),
    Arrow("not_seqS1_tau_star", "W~", "not S1 => I wins"),
    Arrow("q_point", "I_q", "not S1* => I wins"),
    Arrow("W", "w", "I wins => II does not"),
    Arrow("W~", "w~", "I wins => II does not"),
    Arrow("I_q", "II_not_q", "I wins => II does not"),
    Arrow("W", "W~", "W => W~"),
    Arrow("not_S1_tau_notGamma", "not_seqS1_tau_star", "S1 column"),
    Arrow("clb", "q_point", "first countable => q"),
    Arrow("II_not_q", "w~", "II transfer", guarded=True),
    Arrow("I_q", "W~", "q strategy => W~", guarded=True),
    Arrow("q_point", "not_seqS1_tau_star", "onion schedule", guarded=True),
    Arrow("I_q", "II_dual", "duality"),
    Arrow("II_dual", "I_q", "duality"),
    Arrow("II_not_q", "I_not_dual", "duality"),
    Arrow("I_not_dual", "II_not_q", "duality"),
    Arrow("II_csft", "II_dual", "Omega_x inside union"),
    Arrow("I_not_csft", "I_not_dual", "Omega_x inside union"),
    Arrow("II_dual", "I_not_dual", "II wins => I does not"),
    Arrow("II_csft", "I_not_csft", "II wins => I does not"),
    Arrow("I_not_csft", "S1_Omega_Omega", "I does not win => S1"),
    Arrow("I_q", "II_csft", "q strategy => csft", guarded=True),
    Arrow("clb", "II_csft", "first countable => csft"),
    Arrow("w", "S1_Omega_Gamma", "w => strictly Frechet"),
)


@lru_cache(maxsize=None)
def _catalog_layouts(n: int) -> dict:
    names = [("sierpinski",)] if n == 2 else []
    names += [("chain", n), ("discrete", n), ("indiscrete", n)]
    layouts: dict = {}
    for args in names:
        sp = catalog(*args)
        layouts.setdefault(tuple(sp.min_nbhd), sp.name)
    return layouts


def space_id(space: FiniteSpace) -> str:
    """Catalog name when the labeled layout matches one exactly, else the space's own name."""
    known = _catalog_layouts(space.n).get(tuple(space.min_nbhd))
    if known:
        return known
    if space.name:
        return space.name
    return json.dumps([points(u) for u in space.min_nbhd], separators=(",", ":"))


# ---------------------------------------------------------------------------
# profiles


@dataclass
class Profile:
    space: FiniteSpace
    x: int
    regular: bool
    entries: dict
    certificates: dict = field(default_factory=dict, repr=False)

    @property
    def all_true(self) -> bool:
        return all(self.entries[e] for e in ENTRIES)

    def to_dict(self) -> dict:
        return {"space": space_id(self.space), "x": self.x, "regular": self.regular,
                "entries": {e: self.entries[e] for e in ENTRIES}}


def profile(space: FiniteSpace, x: int) -> Profile:
    """Compute every entry with its certificate; isolated points are rejected."""
    if space.is_isolated(x):
        raise PreconditionError(f"point {x} is isolated; the properties concern non-isolated points",
                                "profile")
    certs: dict = {}
    games = {name: solve(named_game(space, name, x)) for name in ("wgame", "wtilde", "qgame", "dual", "csft")}
    certs.update({f"game:{k}": v for k, v in games.items()})
    s1_w = s1_holds(space, TauX(x), NotGamma(x), barred=x)
    seq = seq_s1_fails(space, x)
    star = s1_star_holds(space, TauX(x), CD())
    s1_oo = s1_holds(space, OmegaX(x), OmegaX(x))
    s1_og = s1_holds(space, OmegaX(x), GammaX(x))
    certs.update({"s1:tau_notGamma": s1_w, "seq": seq, "s1star": star,
                  "s1:Omega_Omega": s1_oo, "s1:Omega_Gamma": s1_og,
                  "clb": space.min_nbhd[x]})
    w = {k: v.winner for k, v in games.items()}
    entries = {
        "clb": True,
        "not_S1_tau_notGamma": not s1_w.holds,
        "not_seqS1_tau_star": seq.holds,
        "q_point": not star.holds,
        "W": w["wgame"] == "I", "w": w["wgame"] != "II",
        "W~": w["wtilde"] == "I", "w~": w["wtilde"] != "II",
        "I_q": w["qgame"] == "I", "II_not_q": w["qgame"] != "II",
        "II_dual": w["dual"] == "II", "I_not_dual": w["dual"] != "I",
        "II_csft": w["csft"] == "II", "I_not_csft": w["csft"] != "I",
        "S1_Omega_Omega": s1_oo.holds, "S1_Omega_Gamma": s1_og.holds,
    }
    return Profile(space, x, separation_axioms(space).regular, entries, certs)


def revalidate(p: Profile) -> list[str]:
    """Re-check every certificate independently of how it was produced; returns failures."""
    sp, x = p.space, p.x
    bad = []
    for name in ("wgame", "wtilde", "qgame", "dual", "csft"):
        res: SolveResult = p.certificates[f"game:{name}"]
        strat = res.strategy_I if res.winner == "I" else res.strategy_II
        if find_counterplay(res.spec, strat) is not None:
            bad.append(f"{name}: the {res.winner} strategy loses a play")
    for key, sel, out, barred in (("s1:tau_notGamma", TauX(x), NotGamma(x), x),
                                  ("s1:Omega_Omega", OmegaX(x), OmegaX(x), None),
                                  ("s1:Omega_Gamma", OmegaX(x), GammaX(x), None)):
        if not recheck_s1(sp, sel, out, p.certificates[key], barred):
            bad.append(f"{key}: certificate does not check")
    seq = p.certificates["seq"]
    if seq.holds:
        # every selection from the constant schedule lies in min_nbhd(x)
        kind, v = seq.witness
        if not (kind == "constant" and v and sp.is_open(v) and v & ~sp.min_nbhd[x] == 0):
            bad.append("seq: witness schedule leaves min_nbhd(x)")
    # no injective omega-sequence in a finite carrier; the q-game must agree
    if p.entries["q_point"] and p.certificates["game:qgame"].winner != "I":
        bad.append("q_point: solver does not confirm I wins the q-game")
    u = p.certificates["clb"]
    if not (sp.is_open(u) and all(v & u == u for v in sp.opens if v >> x & 1)):
        bad.append("clb: min_nbhd(x) is not the least neighborhood")
    return bad


def _holds(p, name: str) -> bool:
    return p.entries[name] if isinstance(p, Profile) else p["entries"][name]


def _regular(p) -> bool:
    return p.regular if isinstance(p, Profile) else p["regular"]


def verify_diagram(profiles: Iterable, arrows: Iterable[Arrow] = ARROWS) -> list[dict]:
    """Every arrow whose antecedent holds must have its consequent hold.

    Guarded arrows are only checked on regular spaces.  Returns violations.
    """
    out = []
    for p in profiles:
        for arrow in arrows:
            if arrow.guarded and not _regular(p):
                continue
            if _holds(p, arrow.src) and not _holds(p, arrow.dst):
                d = p.to_dict() if isinstance(p, Profile) else p
                out.append({"space": d["space"], "x": d["x"], "arrow": f"{arrow.src} -> {arrow.dst}",
                            "label": arrow.label, "entries": d["entries"]})
    return out


def inject_fault(p, entry: str):
    """Copy of a profile with one entry flipped, for testing the verifier."""
    d = p.to_dict() if isinstance(p, Profile) else json.loads(json.dumps(p))
    d["entries"][entry] = not d["entries"][entry]
    return d


# ---------------------------------------------------------------------------
# parallel sweeps


def _jobs(jobs: int | None) -> int:
    """Worker count: explicit argument, else TOPOGAME_JOBS, else the CPU count."""
    if jobs is None:
        env = os.environ.get("TOPOGAME_JOBS")
        jobs = int(env) if env else (os.cpu_count() or 1)
    return max(1, jobs)


def parallel_map(fn: Callable, items: list, jobs: int | None = None, chunksize: int = 64) -> list:
    """``[fn(i) for i in items]`` across processes; results keep the input order."""
    jobs = _jobs(jobs)
    if jobs == 1 or len(items) < 2 * chunksize:
        return [fn(i) for i in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))


def _spaces(n_max: int, n_min: int = 1) -> list[tuple]:
    """Picklable ``(min_nbhd, name)`` pairs for every labeled topology in range."""
    return [(sp.min_nbhd, sp.name) for n in range(n_min, n_max + 1) for sp in enumerate_topologies(n)]


def _rebuild(item) -> FiniteSpace:
    nb, name = item
    return FiniteSpace(len(nb), nb, name)


def _profile_task(args) -> list[dict]:
    item, check = args
    sp = _rebuild(item)
    rows = []
    for x in sp.non_isolated():
        p = profile(sp, x)
        row = p.to_dict()
        if check:
            row["revalidation"] = revalidate(p)
        rows.append(row)
    return rows


def sweep_profiles(n_max: int, revalidate_certs: bool = True, jobs: int | None = None) -> list[dict]:
    items = [(item, revalidate_certs) for item in _spaces(n_max)]
    return [row for rows in parallel_map(_profile_task, items, jobs) for row in rows]


# ---------------------------------------------------------------------------
# duality


def _diagnose(space: FiniteSpace, x: int, q: SolveResult, d: SolveResult) -> tuple[str, Transcript | None]:
    # replay the two certified strategies against each other's game for a transcript
    strat = q.strategy_I if q.winner == "I" else q.strategy_II
    t = None
    try:
        if q.winner == "I":
            t = find_counterplay(named_game(space, "dual", x), dual_i(strat, space, x))
    except PreconditionError:
        pass
    if t is not None and t.terminal in ("stuck-I", "stuck-II"):
        return "stuck-rule artifact", t
    if len(family_members(space, OmegaX(x))) <= 1:
        return "Omega-degeneracy", t
    return "genuine", t


def _duality_task(item) -> list[dict]:
    sp = _rebuild(item)
    rows = []
    for x in sp.non_isolated():
        q = solve(named_game(sp, "qgame", x))
        d = solve(named_game(sp, "dual", x))
        agree = (q.winner == "I") == (d.winner == "II") and (q.winner == "II") == (d.winner == "I")
        row = {"space": space_id(sp), "x": x, "qgame": q.winner, "dual": d.winner, "agree": agree}
        if not agree:
            tag, t = _diagnose(sp, x, q, d)
            row["diagnosis"] = tag
            row["transcript"] = None if t is None else t.to_dict()
        rows.append(row)
    return rows


def verify_duality(n_max: int, jobs: int | None = None) -> dict:
    if n_max > 5:
        raise ValueError("duality sweeps go up to n = 5")
    rows = [r for rs in parallel_map(_duality_task, _spaces(n_max), jobs) for r in rs]
    agreed = sum(r["agree"] for r in rows)
    return {"n_max": n_max, "instances": len(rows), "agree": agreed,
            "percent": 100.0 if not rows else round(100.0 * agreed / len(rows), 3),
            "exceptions": [r for r in rows if not r["agree"]], "rows": rows}


# ---------------------------------------------------------------------------
# transformer sweep

COMBINATORS = ("dual_i", "dual_ii", "dual_iii", "dual_iv", "na_oo", "q_to_wtilde",
               "II_transfer", "frechet_refuter")


def _least_pick_II(spec: GameSpec) -> Strategy:
    """Positional Player II answering every offer with its least point."""
    table = {(None, a): points(a)[0] for a in spec.moves}
    return positional_II(table, keyed="none")


def _check(spec: GameSpec, strat: Strategy) -> str:
    try:
        return "pass" if find_counterplay(spec, strat) is None else "fail"
    except (PreconditionError, SeparationError):
        return "precondition"
    except IllegalMove:
        return "illegal"


def run_combinator(kind: str, space: FiniteSpace, x: int, solved: dict | None = None) -> str:
    """Outcome of one combinator on one instance.

    ``vacuous``: no certified input exists.  ``precondition``: the input exists
    but the construction's hypotheses fail.  ``pass``/``fail``/``illegal``:
    verdict of the exhaustive adversary search on the output.
    """
    if solved is None:
        solved = {}

    def res(name):
        if name not in solved:
            solved[name] = solve(named_game(space, name, x))
        return solved[name]

    q, d = res("qgame"), res("dual")
    if kind == "dual_i":
        if q.winner != "I":
            return "vacuous"
        return _check(d.spec, dual_i(q.strategy_I, space, x))
    if kind == "dual_ii":
        if d.winner != "I":
            return "vacuous"
        return _check(q.spec, dual_ii(d.strategy_I, space, x))
    if kind == "dual_iii":
        if q.winner != "II":
            return "vacuous"
        return _check(d.spec, dual_iii(q.strategy_II, space, x))
    if kind == "dual_iv":
        if d.winner != "II":
            return "vacuous"
        return _check(q.spec, dual_iv(d.strategy_II, space, x))
    if kind == "na_oo":
        if q.winner != "I":
            return "vacuous"
        try:
            strat = na_oo(q.strategy_I, gdelta_for(space, x), space, x)
        except PreconditionError:
            return "precondition"
        return _check(res("csft").spec, strat)
    if kind == "q_to_wtilde":
        if q.winner != "I":
            return "vacuous"
        return _check(res("wtilde").spec, q_to_wtilde(q.strategy_I, gdelta_for(space, x), space, x))
    if kind == "II_transfer":
        wt = res("wtilde")
        if wt.winner != "II":
            # no winning mu; still exercise the construction on a least-pick mu
            mu = _least_pick_II(wt.spec)
            verdict = _check(q.spec, II_transfer(mu, gdelta_for(space, x), space, x))
            return "vacuous" if verdict != "precondition" else "vacuous+precondition"
        return _check(q.spec, II_transfer(wt.strategy_II, gdelta_for(space, x), space, x))
    if kind == "frechet_refuter":
        wg = res("wgame")
        if wg.winner != "I":
            return "vacuous"
        for y in points(space.min_nbhd[x] & ~(1 << x)):
            strat = frechet_refuter([1 << y], space, x)
            try:
                t = find_counterplay(wg.spec, strat)
            except (PreconditionError, IllegalMove):
                return "precondition"
            # II must lose, and the losing play selects from F_n into Gamma_x
            if t is None or not all(b == y for b in t.picks()):
                return "fail"
            if not is_member(space, GammaX(x), 1 << y):
                return "fail"
        return "pass"
    raise ValueError(f"unknown combinator {kind!r}; expected one of {COMBINATORS}")


def _transformer_task(item) -> list[tuple]:
    sp = _rebuild(item)
    out = []
    for x in sp.non_isolated():
        solved: dict = {}
        for kind in COMBINATORS:
            out.append((kind, run_combinator(kind, sp, x, solved), space_id(sp), x))
    return out


def verify_transformers(n_max: int, jobs: int | None = None) -> dict:
    if n_max > 4:
        raise ValueError("transformer sweeps go up to n = 4")
    table = {k: {"domain": 0, "pass": 0, "fail": 0, "illegal": 0, "precondition": 0, "vacuous": 0}
             for k in COMBINATORS}
    failures = []
    for rows in parallel_map(_transformer_task, _spaces(n_max), jobs):
        for kind, verdict, sid, x in rows:
            row = table[kind]
            for part in verdict.split("+"):
                row[part] += 1
            if verdict in ("pass", "fail", "illegal"):
                row["domain"] += 1
            if verdict in ("fail", "illegal"):
                failures.append({"combinator": kind, "space": sid, "x": x, "verdict": verdict})
    for row in table.values():
        row["pass_rate"] = None if not row["domain"] else round(100.0 * row["pass"] / row["domain"], 3)
    return {"n_max": n_max, "table": table, "failures": failures}


def _pi_base_task(item) -> list[tuple]:
    sp = _rebuild(item)
    out = []
    for x in sp.non_isolated():
        res = solve(named_game(sp, "wtilde", x))
        if res.winner != "I":
            out.append((space_id(sp), x, None))
            continue
        out.append((space_id(sp), x, pi_base_from_strategy(res.strategy_I, sp, x, depth=4).verdict))
    return out


def verify_pi_base(n_max: int, jobs: int | None = None) -> dict:
    rows = [r for rs in parallel_map(_pi_base_task, _spaces(n_max), jobs) for r in rs]
    checked = [r for r in rows if r[2] is not None]
    return {"n_max": n_max, "strategies": len(checked), "pi_base": sum(1 for r in checked if r[2]),
            "without_I_win": len(rows) - len(checked),
            "failures": [{"space": s, "x": x} for s, x, v in checked if not v]}


# ---------------------------------------------------------------------------
# interactive play


def _parse_pick(text: str, spec: GameSpec):
    text = text.strip()
    if spec.finite:
        return int(text)
    return Ordinal.parse(text)


def _parse_move(text: str, spec: GameSpec):
    text = text.strip()
    if spec.finite:
        return sum(1 << int(p) for p in text.replace("{", "").replace("}", "").split(",") if p.strip())
    # "(a,b]" or "[0,b]"
    body = text[1:-1]
    left, right = (s.strip() for s in body.split(","))
    return Interval(None if text[0] == "[" else Ordinal.parse(left), Ordinal.parse(right))


def _fmt(a) -> str:
    return str(a) if isinstance(a, Interval) else "{" + ",".join(map(str, points(a))) + "}"


def play(spec: GameSpec, human_side: str, machine: Strategy, horizon: int = 16,
         input_fn: Callable[[str], str] = input, output_fn: Callable[[str], None] = print) -> Transcript:
    """Inning-by-inning game between a human (via ``input_fn``) and ``machine``.

    Illegal or unparsable human moves are re-prompted.  Typing ``q`` ends the
    play early.
    """
    if human_side not in ("I", "II") or machine.owner == human_side:
        raise ValueError("the human and the machine must take different seats")
    t = Transcript()
    history: tuple = ()
    picked: set = set()
    s = 0
    for inning in range(horizon):
        if spec.finite and not spec.moves:
            t.terminal = "stuck-I"
            break
        if human_side == "I":
            while True:
                raw = input_fn(f"inning {inning}: your open set> ")
                if raw.strip() == "q":
                    break
                try:
                    a = _parse_move(raw, spec)
                except (ValueError, IndexError):
                    output_fn("could not parse that move")
                    continue
                if spec.is_legal_move(a):
                    break
                output_fn(f"{raw.strip()} is not a legal move")
            if raw.strip() == "q":
                break
        else:
            a = machine(history)
        output_fn(f"inning {inning}: I plays {_fmt(a)}")
        if spec.finite and not spec.legal_picks(a, s):
            t.terminal = "stuck-II"
            break
        if human_side == "II":
            while True:
                raw = input_fn(f"inning {inning}: your point> ")
                if raw.strip() == "q":
                    break
                try:
                    b = _parse_pick(raw, spec)
                except ValueError:
                    output_fn("could not parse that point")
                    continue
                if spec.is_legal_pick(a, b, picked):
                    break
                output_fn(f"{raw.strip()} is not a legal pick against {_fmt(a)}")
            if raw.strip() == "q":
                break
        else:
            b = machine(history, a)
        output_fn(f"inning {inning}: II picks {b}")
        history += ((a, b),)
        t.moves.append((a, b))
        picked.add(b)
        if spec.finite:
            s |= 1 << b
    if t.terminal is None:
        t.terminal = "horizon"
    t.winner = outcome_winner(spec, t)
    output_fn(f"play ended ({t.terminal}); winner: {t.winner or 'undecided at this horizon'}")
    return t


# ---------------------------------------------------------------------------
# reports


def report(results: dict) -> tuple[str, str]:
    """DOT rendering of the diagram annotated with truth counts, plus a JSON document.

    ``results`` may hold ``profiles``, ``duality`` and ``transformers``; missing
    keys are omitted and empty input gives empty documents.
    """
    if not results:
        return "digraph implications {\n}\n", "{}\n"
    profiles = results.get("profiles", [])
    lines = ["digraph implications {", "  rankdir=TB;", "  node [shape=box];",
             f'  label="{LIMITATION}";']
    for e in ENTRIES:
        true = sum(1 for p in profiles if _holds(p, e))
        color = "green" if true == len(profiles) else "red"
        lines.append(f'  "{e}" [label="{e}\\n{true}/{len(profiles)}", color={color}];')
    for a in ARROWS:
        style = "dashed" if a.guarded else "solid"
        lines.append(f'  "{a.src}" -> "{a.dst}" [label="{a.label}", style={style}];')
    lines.append("}")
    doc = {}
    for key in sorted(results):
        doc[key] = results[key]
    return "\n".join(lines) + "\n", json.dumps(doc, indent=1, sort_keys=True) + "\n"

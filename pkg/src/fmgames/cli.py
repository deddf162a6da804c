"""Command-line front end.

Machine-readable output is JSON lines on stdout; human summaries go to
stderr alongside JSON error payloads.  Exit codes: 0 success or verdict
true, 1 verdict false or violation found, 2 usage error, 3 enumeration
budget exhausted.
"""

from __future__ import annotations

import argparse
import fnmatch
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from . import formats
from .arena import arena_to_dot, num_choices, validate_arena
from .automata import nfa_to_dot
from .conditions import ConditionBudget, Violation, test_monotony, test_selectivity, counterexample_harness
from .covers import check_cyclic_cover, check_prefix_cover
from .errors import BudgetExceededError, FmgamesError, FormatError, SearchExhaustedError
from .preference import PreferenceRelation
from .skeleton import skeleton_to_dot, trivial_skeleton
from .strategy import reachable_product, product_arena
from .synthesis import SynthesisProblem, solve_covered, solve_general
from .verify import DeviationClass, UNRESTRICTED, is_ne_within

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_pref(path: str, alphabet) -> PreferenceRelation:
    return formats.parse_pref(_read(path)).bind(alphabet)


def _match_states(arena, patterns: str) -> list[int]:
    out = []
    for pat in patterns.split(","):
        pat = pat.strip()
        hits = [i for i, n in enumerate(arena.state_names) if fnmatch.fnmatchcase(n, pat)]
        if not hits:
            raise FormatError(f"no state matches {pat!r}")
        out.extend(hits)
    return sorted(set(out))


def _budget_from(args) -> ConditionBudget:
    return ConditionBudget(
        max_nfa_states=args.budget_nfa_states,
        max_word_len=args.budget_word_len,
        max_instances=args.budget_instances,
        max_nfas=args.budget_nfas,
        time_limit_s=args.budget_seconds,
    )


def cmd_validate(args) -> int:
    for path in args.files:
        if path.endswith(".arena"):
            obj = formats.parse_arena(_read(path))
            _emit({"file": path, "kind": "arena", "states": obj.n_states, "edges": len(obj.edges), "choices": num_choices(obj)})
        elif path.endswith(".skel"):
            obj = formats.parse_skeleton(_read(path))
            _emit({"file": path, "kind": "skeleton", "states": obj.n_states})
        elif path.endswith(".nfa"):
            obj = formats.parse_nfa(_read(path))
            _emit({"file": path, "kind": "nfa", "states": obj.n_states})
        elif path.endswith(".pref"):
            obj = formats.parse_pref(_read(path))
            _emit({"file": path, "kind": "pref", "relation": obj.kind})
        else:
            raise FormatError(f"unknown file extension: {path}")
    return EXIT_OK


def cmd_product(args) -> int:
    arena = formats.parse_arena(_read(args.arena))
    sk = formats.parse_skeleton(_read(args.skel))
    prod = reachable_product(arena, sk) if args.reachable else product_arena(arena, sk)
    text = formats.serialize_arena(prod.arena)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    _emit({"event": "product", "states": prod.arena.n_states, "edges": len(prod.arena.edges)})
    return EXIT_OK


def cmd_covers(args) -> int:
    arena = formats.parse_arena(_read(args.arena))
    sk = formats.parse_skeleton(_read(args.skel))
    s_cov = _match_states(arena, args.cov)
    ok = True
    for kind, check in (("prefix", check_prefix_cover), ("cyclic", check_cyclic_cover)):
        if args.kind not in ("both", kind):
            continue
        rep = check(arena, sk, s_cov)
        payload = {"event": "cover", "kind": kind, "verdict": rep.verdict}
        if rep.verdict and kind == "prefix":
            payload["assignment"] = {
                arena.state_names[s]: sk.state_names[m] for s, m in sorted(rep.assignment.items())
            }
        if not rep.verdict:
            h1, h2 = rep.violation
            payload["witness"] = {
                "first": [arena.state_names[h1.start]] + [arena.alphabet[c] for c in h1.colors],
                "second": [arena.state_names[h2.start]] + [arena.alphabet[c] for c in h2.colors],
            }
            ok = False
        _emit(payload)
    return EXIT_OK if ok else EXIT_FALSE


def _skeletons_for(args, alphabet):
    skels = [formats.parse_skeleton(_read(p)) for p in args.skel or []]
    if not skels:
        triv = trivial_skeleton(alphabet)
        return triv, triv, triv, triv
    if len(skels) == 1:
        return skels[0], skels[0], skels[0], skels[0]
    if len(skels) == 2:
        return skels[0], skels[1], skels[0], skels[1]
    if len(skels) == 4:
        return tuple(skels)
    raise FormatError("pass 1, 2 (prefix+cycle, shared by both players) or 4 skeletons")


def cmd_solve(args) -> int:
    arena = formats.parse_arena(_read(args.arena))
    rel = _load_pref(args.pref, arena.alphabet)
    p1p, c1p, p2p, c2p = _skeletons_for(args, arena.alphabet)
    if args.general:
        result = solve_general(arena, rel, p1p, c1p, p2p, c2p)
        out_arena = arena
    else:
        if not args.cov:
            raise FormatError("solve needs --cov STATES or --general")
        s_cov = _match_states(arena, args.cov)
        problem = SynthesisProblem(arena, tuple(s_cov), rel, p1p, c1p, p2p, c2p)
        result = solve_covered(problem)
        out_arena = arena
    for d in result.trace:
        _emit(
            {
                "event": "split",
                "focus": d.focus,
                "state": out_arena.state_names[d.state]
                if not args.general
                else (result.product.arena.state_names[d.state] if result.product else d.state),
                "chose_first": d.chose_first,
            }
        )
    for name, sigma in (("sigma1", result.sigma1), ("sigma2", result.sigma2)):
        path = f"{args.out_prefix}.{name}.strat"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(formats.serialize_strategy(sigma, out_arena))
        _emit({"event": "strategy", "player": name, "file": path, "memory": sigma.n_memory})
    _emit({"event": "solved", "starts": [out_arena.state_names[s] for s in result.starts]})
    return EXIT_OK


def cmd_verify(args) -> int:
    arena = formats.parse_arena(_read(args.arena))
    rel = _load_pref(args.pref, arena.alphabet)
    sigma1 = formats.parse_strategy(_read(args.strat1), arena)
    sigma2 = formats.parse_strategy(_read(args.strat2), arena)
    starts = _match_states(arena, args.starts) if args.starts else list(range(arena.n_states))
    if args.dev_skel:
        sk = formats.parse_skeleton(_read(args.dev_skel))
        dev = DeviationClass(sk, sk)
    else:
        dev = UNRESTRICTED
    verdict = is_ne_within(arena, rel, sigma1, sigma2, starts, dev)
    payload = {
        "event": "verify",
        "verdict": verdict.verdict,
        "values": {
            arena.state_names[s]: {
                "prefix": [arena.alphabet[c] for c in v.prefix],
                "cycle": [arena.alphabet[c] for c in v.cycle],
            }
            for s, v in verdict.values.items()
        },
    }
    if verdict.witness is not None:
        payload["witness"] = {
            "player": verdict.witness.player,
            "start": arena.state_names[verdict.witness.start],
            "improved_cycle": [arena.alphabet[c] for c in verdict.witness.improved.cycle],
        }
    _emit(payload)
    return EXIT_OK if verdict.verdict else EXIT_FALSE


def cmd_test_conditions(args) -> int:
    sk = formats.parse_skeleton(_read(args.skel))
    rel = _load_pref(args.pref, sk.alphabet)
    if args.inverse:
        rel = rel.inverse()
    if args.replay:
        with open(args.replay, encoding="utf-8") as fh:
            violation = Violation.from_dict(json.load(fh))
        still = violation.replay(rel)
        _emit({"event": "replay", "violated": still})
        return EXIT_FALSE if still else EXIT_OK
    budget = _budget_from(args)
    props = ("monotony", "selectivity") if args.property == "both" else (args.property,)
    runners = {"monotony": test_monotony, "selectivity": test_selectivity}
    if len(props) > 1 and args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(lambda p: runners[p](rel, sk, budget), props))
    else:
        reports = [runners[p](rel, sk, budget) for p in props]
    code = EXIT_OK
    for report in reports:
        payload = {
            "event": "conditions",
            "property": report.property_name,
            "verdict": report.verdict,
            "exhausted": report.exhausted,
            "coverage": report.coverage,
        }
        if report.violation is not None:
            payload["violation"] = report.violation.to_dict()
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    json.dump(report.violation.to_dict(), fh, indent=2, sort_keys=True)
            code = EXIT_FALSE
        elif report.exhausted and code == EXIT_OK:
            code = EXIT_BUDGET
        _emit(payload)
    return code


def cmd_counterexample(args) -> int:
    arena = formats.parse_arena(_read(args.arena))
    rel = _load_pref(args.pref, arena.alphabet)
    try:
        report = counterexample_harness(
            arena,
            rel,
            args.max_skeleton_states,
            args.max_cycle_len,
            max_prefix_len=args.max_prefix_len,
        )
    except SearchExhaustedError as exc:
        _emit({"event": "counterexample", "verdict": False, "reason": str(exc)})
        return EXIT_FALSE
    _emit(
        {
            "event": "counterexample",
            "verdict": True,
            "strategies_beaten": report.strategies_checked,
            "one_player_cycle": [arena.alphabet[c] for c in report.one_player_witness.cycle],
        }
    )
    return EXIT_OK


def cmd_export_dot(args) -> int:
    path = args.file
    if path.endswith(".arena"):
        sys.stdout.write(arena_to_dot(formats.parse_arena(_read(path))))
    elif path.endswith(".skel"):
        sys.stdout.write(skeleton_to_dot(formats.parse_skeleton(_read(path))))
    elif path.endswith(".nfa"):
        sys.stdout.write(nfa_to_dot(formats.parse_nfa(_read(path))))
    else:
        raise FormatError(f"cannot export {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fmgames")
    parser.add_argument("--jobs", type=int, default=1, help="worker threads for independent sub-tasks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse files and report their shapes")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("product", help="build the arena-skeleton product")
    p.add_argument("--arena", required=True)
    p.add_argument("--skel", required=True)
    p.add_argument("--reachable", action="store_true", help="restrict to states reachable from the initial memory")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("covers", help="check prefix-/cyclic-covers of a state set")
    p.add_argument("--arena", required=True)
    p.add_argument("--skel", required=True)
    p.add_argument("--cov", required=True, help="comma-separated state names or glob patterns")
    p.add_argument("--kind", choices=["prefix", "cyclic", "both"], default="both")
    p.set_defaults(func=cmd_covers)

    p = sub.add_parser("solve", help="synthesize an equilibrium")
    p.add_argument("--arena", required=True)
    p.add_argument("--pref", required=True)
    p.add_argument("--skel", action="append", help="repeat for prefix/cycle monitors (1, 2 or 4 files)")
    p.add_argument("--cov", help="covered states for the memoryless construction")
    p.add_argument("--general", action="store_true", help="solve on the product and lift back")
    p.add_argument("--out-prefix", default="equilibrium")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a strategy pair within a deviation class")
    p.add_argument("--arena", required=True)
    p.add_argument("--pref", required=True)
    p.add_argument("--strat1", required=True)
    p.add_argument("--strat2", required=True)
    p.add_argument("--starts")
    p.add_argument("--dev-skel", help="deviation skeleton (default: unrestricted best responses)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("test-conditions", help="refutation-test monotony/selectivity")
    p.add_argument("--pref", required=True)
    p.add_argument("--skel", required=True)
    p.add_argument("--property", choices=["monotony", "selectivity", "both"], default="both")
    p.add_argument("--inverse", action="store_true", help="test the second player's relation")
    p.add_argument("--budget-nfa-states", type=int, default=2)
    p.add_argument("--budget-word-len", type=int, default=2)
    p.add_argument("--budget-instances", type=int, default=20000)
    p.add_argument("--budget-nfas", type=int, default=24)
    p.add_argument("--budget-seconds", type=float, default=None)
    p.add_argument("--replay", help="re-check a serialized violation instead of searching")
    p.add_argument("-o", "--out", help="write a found violation to this JSON file")
    p.set_defaults(func=cmd_test_conditions)

    p = sub.add_parser("counterexample", help="beat all bounded-memory strategies on a duel arena")
    p.add_argument("--arena", required=True)
    p.add_argument("--pref", required=True)
    p.add_argument("--max-skeleton-states", type=int, default=2)
    p.add_argument("--max-cycle-len", type=int, default=8)
    p.add_argument("--max-prefix-len", type=int, default=8)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("export-dot", help="emit Graphviz text for a file")
    p.add_argument("file")
    p.set_defaults(func=cmd_export_dot)
    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0,) else EXIT_OK
    if args.jobs < 1:
        sys.stderr.write(json.dumps({"error": "usage", "message": "--jobs must be >= 1"}) + "\n")
        return EXIT_USAGE
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        sys.stderr.write(json.dumps({"error": "budget", "message": str(exc)}) + "\n")
        return EXIT_BUDGET
    except (FormatError, OSError) as exc:
        sys.stderr.write(json.dumps({"error": "usage", "message": str(exc)}) + "\n")
        return EXIT_USAGE
    except FmgamesError as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_FALSE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

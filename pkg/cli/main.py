"""
Batch front-end.

    python -m cli check FILE [--infer | --annotated] [--semiring NAME] [--json]
    python -m cli transform FILE {bottomup | rename MAPFILE | subst ENVFILE | cut} [--json]
    python -m cli translate FILE {dill2lr | lr2dill | pd2lr | lr2pd} [-o OUT]
    python -m cli laws --semiring NAME [--budget N]
    python -m cli validate DUMP

Exit codes: 0 success, 1 a judgment or law failed, 2 bad input or usage.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

from config import Config, setup_logging
from engine.judgment_file import show_derivation
from engine.workbench import DIRECTIONS, workbench
from lang.errors import CONFIG_ERRORS
from logics.dill import show_dill_script, show_dill_sequent
from logics.pd import show_pd_script, show_pd_sequent
from usage_ops.semiring import SEMIRINGS, get_semiring

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _marks() -> Dict[str, str]:
    if Config.color_enabled():
        return {"ok": "✅", "fail": "❌", "info": "📄"}
    return {"ok": "OK", "fail": "FAIL", "info": "--"}


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _report(result: Dict[str, Any], out: TextIO) -> None:
    marks = _marks()
    sr = get_semiring(result["semiring"])
    for r in result["results"]:
        if not r["success"]:
            print(f"{marks['fail']} {r['judgment']}", file=out)
            print(f"   {r['kind']}: {r['error']}", file=out)
            continue
        print(f"{marks['ok']} {r['judgment']}", file=out)
        if r.get("derivation") is not None:
            print(show_derivation(sr, r["derivation"], 1), file=out)
        elif r.get("proof") is not None:
            proof = r["proof"]
            if r["stanza"] == "dill":
                print(f"  {show_dill_sequent(proof.sequent)}\n{show_dill_script(proof)}", file=out)
            else:
                print(f"  {show_pd_sequent(proof.sequent)}\n{show_pd_script(proof)}", file=out)
        for v in r.get("violations", []):
            print(f"   bottom-up violation: {v}", file=out)


def cmd_check(args: argparse.Namespace, out: TextIO) -> int:
    mode = "annotated" if args.annotated else "infer"
    result = workbench.check(_read(args.file), mode, args.semiring)
    if args.json:
        out.write(workbench.dump(result))
    else:
        _report(result, out)
    return EXIT_OK if result["success"] else EXIT_FAIL


def cmd_transform(args: argparse.Namespace, out: TextIO) -> int:
    aux = _read(args.aux) if args.aux else None
    mode = "annotated" if args.annotated else "infer"
    result = workbench.transform(_read(args.file), args.op, aux, mode, args.semiring)
    if args.json:
        out.write(workbench.dump(result))
    else:
        failed = [r for r in result["results"] if not r["success"]]
        for r in failed:
            print(f"{_marks()['fail']} {r['judgment']}\n   {r['kind']}: {r['error']}", file=out)
        if not failed:
            out.write(result["output"])
            for r in result["results"]:
                for v in r.get("violations", []):
                    print(f"-- bottom-up violation: {v}", file=out)
    return EXIT_OK if result["success"] else EXIT_FAIL


def cmd_translate(args: argparse.Namespace, out: TextIO) -> int:
    result = workbench.translate(_read(args.file), args.direction)
    for r in result["results"]:
        if not r["success"]:
            print(f"{_marks()['fail']} {r['judgment']}\n   {r['kind']}: {r['error']}", file=sys.stderr)
    if result["success"]:
        if args.output:
            Path(args.output).write_text(result["output"], encoding="utf-8")
            print(f"{_marks()['info']} wrote {args.output}", file=out)
        else:
            out.write(result["output"])
    return EXIT_OK if result["success"] else EXIT_FAIL


def cmd_laws(args: argparse.Namespace, out: TextIO) -> int:
    result = workbench.laws(args.semiring, args.budget)
    marks = _marks()
    if result["success"]:
        print(f"{marks['ok']} {result['semiring']}: no law violations", file=out)
        return EXIT_OK
    print(f"{marks['fail']} {result['semiring']}: {len(result['violations'])} violation(s)", file=out)
    for v in result["violations"]:
        print(f"   {v}", file=out)
    return EXIT_FAIL


def cmd_validate(args: argparse.Namespace, out: TextIO) -> int:
    result = workbench.validate(_read(args.file))
    marks = _marks()
    if result["success"]:
        print(f"{marks['ok']} {result['entries']} entr{'y' if result['entries'] == 1 else 'ies'} "
              f"re-check and re-dump byte-identically", file=out)
        return EXIT_OK
    print(f"{marks['fail']} {result.get('kind', 'validate')}: {result['error']}", file=out)
    return EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lr", description="Usage-checked linear lambda calculus workbench")
    parser.add_argument("--log-level", default=None, help="overrides LR_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_semiring(p: argparse.ArgumentParser) -> None:
        p.add_argument("--semiring", choices=sorted(SEMIRINGS), default=None,
                       help="overrides the file header and LR_DEFAULT_SEMIRING")

    def with_mode(p: argparse.ArgumentParser) -> None:
        group = p.add_mutually_exclusive_group()
        group.add_argument("--infer", action="store_true", help="synthesize split annotations (default)")
        group.add_argument("--annotated", action="store_true", help="check the annotations as written")

    p = sub.add_parser("check", help="check every stanza of a judgment file")
    p.add_argument("file")
    with_mode(p)
    with_semiring(p)
    p.add_argument("--json", action="store_true", help="print derivations as JSON")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("transform", help="bottom-up form, renaming, substitution or cut")
    p.add_argument("file")
    p.add_argument("op", choices=["bottomup", "rename", "subst", "cut"])
    p.add_argument("aux", nargs="?", help="MAPFILE for rename, ENVFILE for subst")
    with_mode(p)
    with_semiring(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("translate", help="move derivations between DILL, PD and the calculus")
    p.add_argument("file")
    p.add_argument("direction", choices=list(DIRECTIONS))
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("laws", help="audit an instance's skew-semiring laws")
    p.add_argument("--semiring", choices=sorted(SEMIRINGS), required=True)
    p.add_argument("--budget", type=int, default=None, help="samples for infinite carriers")
    p.set_defaults(func=cmd_laws)

    p = sub.add_parser("validate", help="re-check a --json dump")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Optional[List[str]] = None, out: TextIO = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    setup_logging(args.log_level)
    if args.command == "transform" and args.op in ("rename", "subst") and not args.aux:
        print(f"{_marks()['fail']} {args.op} needs an auxiliary file", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except CONFIG_ERRORS as e:
        print(f"{_marks()['fail']} {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"{_marks()['fail']} cannot read input: {e}", file=sys.stderr)
        return EXIT_USAGE

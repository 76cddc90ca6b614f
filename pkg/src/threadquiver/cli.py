"""Command line front end.

Every subcommand reads a thread-quiver file, builds whatever window it
needs, prints JSON (deterministic: sorted keys) or DOT, and exits with
0 on pass, 1 on a failed certificate, 2 on usage or parse errors, and
3 for window-limited answers under --strict.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import metric, orders, quivers, sections, threads
from .errors import (InconclusiveAtWindow, QuiverSyntaxError,
                     ThreadQuiverError, WindowTooSmall)
from .window import Window, build_window

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_WINDOW = 3


def _load_tq(path):
    with open(path, "r", encoding="utf-8") as fh:
        return quivers.parse(fh.read())


def _window_for(tq, radius) -> Window:
    return build_window(quivers.underlying_quiver(tq), radius)


def _obj(w, name):
    """P<orbit> means level 0; <orbit>@<level> is explicit."""
    if "@" in name:
        orbit, level = name.rsplit("@", 1)
        return w.get(orbit, int(level))
    if name.startswith("P") and not w.has(name, 0) and w.has(name[1:], 0):
        return w.get(name[1:], 0)
    return w.get(name, 0)


def _obj_name(X) -> str:
    return f"P{X.orbit}" if X.level == 0 else f"{X.orbit}@{X.level}"


def _emit(data, as_json=True):
    if as_json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(data)


def _load_section(w, path, tq):
    with open(path, "r", encoding="utf-8") as fh:
        return sections.section_from_json(w, json.load(fh), tq)


def _default_section(w, tq):
    return sections.Section(w, {v: 0 for v in w.quiver.vertices},
                            thread_quiver=tq)


def _certificate_exit(cert, strict):
    if cert.verdict == sections.FAIL:
        return EXIT_FAIL
    if cert.verdict == sections.INCONCLUSIVE and strict:
        return EXIT_WINDOW
    return EXIT_PASS


def _dist_json(res):
    out = res.to_json()
    if res.is_exact:
        out["certificate"] = "exact"
    elif res.is_infinite:
        out["certificate"] = "window-closed-infinite"
    else:
        out["certificate"] = "inconclusive"
    return out


def cmd_parse(args):
    tq = _load_tq(args.file)
    sys.stdout.write(quivers.serialize(tq))
    return EXIT_PASS


def cmd_window(args):
    tq = _load_tq(args.file)
    w = _window_for(tq, args.radius)
    _emit(w.dump(full=args.full))
    return EXIT_PASS


def cmd_distance(args):
    tq = _load_tq(args.file)
    w = _window_for(tq, args.radius)
    X, Y = _obj(w, args.source), _obj(w, args.target)
    fwd = metric.lightcone_distance(w, X, Y)
    back = metric.lightcone_distance(w, Y, X)
    both = fwd + back
    record = {"schema": 1, "from": _obj_name(X), "to": _obj_name(Y),
              "r_forward": _dist_json(fwd), "r_backward": _dist_json(back),
              "roundtrip": _dist_json(both),
              "certificate": _dist_json(both)["certificate"]}
    _emit(record)
    if both.is_inconclusive and args.strict:
        return EXIT_WINDOW
    return EXIT_PASS


def cmd_interval(args):
    tq = _load_tq(args.file)
    w = _window_for(tq, args.radius)
    S = (_load_section(w, args.section, tq) if args.section
         else _default_section(w, tq))
    X, Y = _obj(w, args.source), _obj(w, args.target)
    iv = threads.r_in_between(w, S, X, Y)
    out = iv.to_json()
    out["schema"] = 1
    out["members"] = sorted(_obj_name(m) for m in iv.members)
    out["from"] = _obj_name(X)
    out["to"] = _obj_name(Y)
    _emit(out)
    return EXIT_PASS


def cmd_section(args):
    tq = _load_tq(args.file)
    w = _window_for(tq, args.radius)
    S = (_load_section(w, args.section, tq) if args.section
         else _default_section(w, tq))
    if args.action == "verify":
        cert = sections.verify_section(w, S)
        _emit(cert.to_json())
        return _certificate_exit(cert, args.strict)
    if args.action == "star":
        cert = sections.check_condition_star(w, S)
        _emit(cert.to_json())
        return _certificate_exit(cert, args.strict)
    if args.action == "dualizing":
        cert = sections.dualizing_check(w, S)
        _emit(cert.to_json())
        return _certificate_exit(cert, args.strict)
    if args.action == "heart":
        res = sections.compute_heart(w, S)
        _emit({"schema": 1,
               "heart": sorted(_obj_name(X) for X in res.heart),
               "projectives": sorted(_obj_name(X) for X in res.projectives),
               "inconclusive": sorted(_obj_name(X) for X in res.inconclusive)})
        return EXIT_PASS
    if args.action == "tilt":
        if not args.seeds:
            print("tilt needs --seeds", file=sys.stderr)
            return EXIT_USAGE
        seed = [_obj(w, s.strip()) for s in args.seeds.split(",")]
        refined = sections.choose_seed(w, seed)
        out = sections.tilt_construction(w, refined)
        _emit({"schema": 1, "seed": [_obj_name(X) for X in refined],
               "section": out.to_json(),
               "unpicked": out.unpicked, "flagged": out.flagged})
        return EXIT_PASS
    if args.action == "extend":
        seed, out = sections.extend_with_marks(w, S)
        _emit({"schema": 1, "seed": [_obj_name(X) for X in seed],
               "section": out.to_json()})
        return EXIT_PASS
    print(f"unknown section action {args.action}", file=sys.stderr)
    return EXIT_USAGE


def cmd_threads(args):
    tq = _load_tq(args.file)
    w = _window_for(tq, args.radius)
    S = (_load_section(w, args.section, tq) if args.section
         else _default_section(w, tq))
    _emit(threads.threads_report(w, S))
    return EXIT_PASS


def cmd_rewrite(args):
    tq = _load_tq(args.file)
    if args.action == "contract":
        out = quivers.contract_threads(quivers.underlying_quiver(tq),
                                       args.max_thread)
        sys.stdout.write(quivers.serialize(out))
        return EXIT_PASS
    if args.action == "zigzag":
        if not args.base or not args.tail:
            print("zigzag needs --base and --tail", file=sys.stderr)
            return EXIT_USAGE
        out = quivers.zigzag_to_thread(tq, args.base, args.tail.split(","))
        sys.stdout.write(quivers.serialize(out))
        return EXIT_PASS
    if args.action == "expand":
        if not args.thread:
            print("expand needs --thread", file=sys.stderr)
            return EXIT_USAGE
        ex = quivers.expand_thread(tq, args.thread, args.depth)
        record = {"schema": 1,
                  "quiver": quivers.serialize(
                      quivers.ThreadQuiver(ex.quiver.vertices,
                                           ex.quiver.arrows)).strip(),
                  "elided": sorted(ex.elided),
                  "elements": {v: orders.serialize_address(a)
                               for v, a in sorted(ex.element_map.items())}}
        _emit(record)
        return EXIT_PASS
    print(f"unknown rewrite action {args.action}", file=sys.stderr)
    return EXIT_USAGE


def cmd_export(args):
    tq = _load_tq(args.file)
    if args.window:
        w = _window_for(tq, args.radius)
        highlight = set()
        if args.section:
            S = _load_section(w, args.section, tq)
            highlight = {f"{o}@{l}" for o, l in S.picks.items()}
        wq = quivers.ThreadQuiver(
            tuple(f"{o}@{l}" for o, l in w.positions()),
            tuple(quivers.Arrow(f"{a[0]}@{a[1]}", f"{b[0]}@{b[1]}", f"m{k}")
                  for k, (a, b) in enumerate(w.mesh_arrows)))
        sys.stdout.write(quivers.to_dot(wq, highlight=highlight))
        return EXIT_PASS
    highlight = set()
    if args.section:
        w = _window_for(tq, args.radius)
        S = _load_section(w, args.section, tq)
        highlight = {o for o, l in S.picks.items() if l == 0}
    sys.stdout.write(quivers.to_dot(tq, highlight=highlight))
    return EXIT_PASS


def build_parser():
    top = argparse.ArgumentParser(prog="tq", description=__doc__)
    top.add_argument("--json-errors", action="store_true",
                     help="report errors as JSON on stderr")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, section_positional=False):
        p.add_argument("--radius", type=int, default=4)
        p.add_argument("--strict", action="store_true")
        p.add_argument("--json", action="store_true", default=True)

    p = sub.add_parser("parse")
    p.add_argument("file")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("window")
    p.add_argument("file")
    p.add_argument("--full", action="store_true")
    common(p)
    p.set_defaults(func=cmd_window)

    p = sub.add_parser("distance")
    p.add_argument("file")
    p.add_argument("source")
    p.add_argument("target")
    common(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("interval")
    p.add_argument("file")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--section")
    common(p)
    p.set_defaults(func=cmd_interval)

    p = sub.add_parser("section")
    p.add_argument("action", choices=["verify", "tilt", "heart", "star",
                                      "extend", "dualizing"])
    p.add_argument("file")
    p.add_argument("section", nargs="?")
    p.add_argument("--seeds")
    common(p)
    p.set_defaults(func=cmd_section)

    p = sub.add_parser("threads")
    p.add_argument("action", choices=["report"])
    p.add_argument("file")
    p.add_argument("section", nargs="?")
    common(p)
    p.set_defaults(func=cmd_threads)

    p = sub.add_parser("rewrite")
    p.add_argument("action", choices=["contract", "zigzag", "expand"])
    p.add_argument("file")
    p.add_argument("--base")
    p.add_argument("--tail")
    p.add_argument("--thread")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--max-thread", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_rewrite)

    p = sub.add_parser("export")
    p.add_argument("file")
    p.add_argument("section", nargs="?")
    p.add_argument("--window", action="store_true")
    common(p)
    p.set_defaults(func=cmd_export)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except QuiverSyntaxError as exc:
        _report_error(args, "syntax", str(exc))
        return EXIT_USAGE
    except (WindowTooSmall, InconclusiveAtWindow) as exc:
        _report_error(args, "window", str(exc))
        return EXIT_WINDOW if getattr(args, "strict", False) else EXIT_FAIL
    except FileNotFoundError as exc:
        _report_error(args, "io", str(exc))
        return EXIT_USAGE
    except ThreadQuiverError as exc:
        _report_error(args, type(exc).__name__, str(exc))
        return EXIT_FAIL


def _report_error(args, kind, message):
    if getattr(args, "json_errors", False):
        print(json.dumps({"schema": 1, "error": kind, "message": message},
                         sort_keys=True), file=sys.stderr)
    else:
        print(f"tq: {kind}: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())

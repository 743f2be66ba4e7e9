"""Command line: ``orliczlab run | list | norm``.

Exit status of ``run``: 0 when every asserted check passes, 1 on a failed
check or numeric failure, 2 when the config does not follow the schema.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import experiments as ex
from .report import _plain


def _cmd_run(args):
    try:
        passed, doc = ex.run(args.config, args.out, seed=args.seed, threads=args.threads)
    except (ex.SchemaError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    for e in doc["experiments"]:
        if "error" in e:
            print(f"{e['experiment']:20s} ERROR {e['error']}", file=sys.stderr)
            continue
        bad = [k for k, v in e["checks"].items() if not v]
        status = "pass" if not bad else "FAIL " + ",".join(bad)
        if not e.get("asserted", True):
            status += " (not asserted)"
        print(f"{e['experiment']:20s} {status}")
    return 0 if passed else 1


def _cmd_list(args):
    print(ex.list_experiments())
    return 0


def _cmd_norm(args):
    try:
        item = ex.parse_function(args.function)
        space = ex.parse_space(json.loads(args.space) if args.space.startswith("{")
                               else args.space)
        label, handle = ex.parse_norm(args.norm)
    except ex.SchemaError as exc:
        print(f"argument error: {exc}", file=sys.stderr)
        return 2
    out = handle(item.sample(space))
    record = {"function": item.label, "space": space.kind, "resolution": space.resolution,
              "norm": label, "value": float(getattr(out, "value", out)),
              "flags": list(getattr(out, "flags", []))}
    print(json.dumps(_plain(record), sort_keys=True))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="orliczlab",
                                 description="Orlicz and grand Lebesgue norm experiments")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run the experiments listed in a JSON config")
    r.add_argument("--config", required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--seed", type=int, default=None)
    r.add_argument("--threads", type=int, default=1)
    r.set_defaults(fn=_cmd_run)
    sub.add_parser("list", help="list experiment ids").set_defaults(fn=_cmd_list)
    n = sub.add_parser("norm", help="evaluate one norm of one catalog function")
    n.add_argument("--space", default="torus")
    n.add_argument("--function", required=True)
    n.add_argument("--norm", required=True)
    n.set_defaults(fn=_cmd_norm)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())

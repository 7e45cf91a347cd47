"""Command line entry point: explore, shortcut, crawl, serve, exec.

Exit codes: 0 success, 1 generic failure, 2 usage error, 3 link not found,
4 replay reached the wrong activity.
"""

from __future__ import annotations

import argparse
import json
import logging
import signal
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .crawler import DEFAULT_MAX_PAGES, DEFAULT_OP_BUDGET as CRAWL_OP_BUDGET, run_crawl
from .errors import DeepLinkError, MalformedUrl, NotFound, TargetMismatch, UnknownActivity
from .executor import dispatch, generate_schemas
from .explorer import DEFAULT_OP_BUDGET as EXPLORE_OP_BUDGET, build_navigation_graph, export_graph, import_graph
from .model import load_app_spec_file
from .repository import make_server, open_repository
from .shortcut import DEFAULT_MAX_LEN, compute_shortcuts, export_table, import_table

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NOT_FOUND, EXIT_TARGET_MISMATCH = 0, 1, 2, 3, 4

log = logging.getLogger("deeplinkgen")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    app: Path | None = None
    depth: int = 4
    op_budget: int = CRAWL_OP_BUDGET
    max_pages: int = DEFAULT_MAX_PAGES
    repo: Path | None = None
    addr: str = "127.0.0.1:8080"
    selected: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.depth < 0:
            raise UsageError("--depth must be >= 0")
        if self.op_budget < 1 or self.max_pages < 1:
            raise UsageError("budgets must be >= 1")


def _spec(path):
    if path is None or not Path(path).is_file():
        raise UsageError(f"app spec not found: {path}")
    return load_app_spec_file(path)


def _read(path, what):
    if not Path(path).is_file():
        raise UsageError(f"{what} not found: {path}")
    return Path(path).read_text(encoding="utf-8")


def cmd_explore(args) -> int:
    config = RunConfig(app=args.app, depth=args.depth, op_budget=args.op_budget)
    spec = _spec(config.app)
    graph = build_navigation_graph(spec, config.depth, config.op_budget)
    Path(args.out).write_text(export_graph(graph) + "\n", encoding="utf-8")
    print(f"{len(graph.vertices)} activities, {len(graph.edges)} transitions -> {args.out}")
    return EXIT_OK


def cmd_shortcut(args) -> int:
    graph = import_graph(_read(args.graph, "graph"))
    table = compute_shortcuts(graph, args.max_len)
    Path(args.out).write_text(export_table(table) + "\n", encoding="utf-8")
    print(f"{len(table)} paths, {sum(1 for p, s in table.entries.values() if s != p)} shortened -> {args.out}")
    return EXIT_OK


def cmd_crawl(args) -> int:
    config = RunConfig(app=args.app, depth=args.depth, op_budget=args.op_budget,
                       max_pages=args.max_pages, repo=args.repo)
    spec = _spec(config.app)
    if args.shortcuts:
        table = import_table(_read(args.shortcuts, "shortcut table"))
    else:
        graph = import_graph(_read(args.graph, "graph")) if args.graph else build_navigation_graph(spec, config.depth)
        table = compute_shortcuts(graph, DEFAULT_MAX_LEN)
    repo = open_repository(config.repo)
    report = run_crawl(spec, table, repo, config.max_pages, config.op_budget)
    print(json.dumps(report.to_dict()))
    return EXIT_OK


def cmd_serve(args) -> int:
    repo = open_repository(args.repo)
    if not repo.location.exists():
        raise UsageError(f"repository not found: {args.repo}")
    server = make_server(repo, args.addr)
    host, port = server.server_address[:2]
    print(f"serving http://{host}:{port}/links", flush=True)

    def stop(signum, frame):
        raise KeyboardInterrupt

    signal.signal(signal.SIGTERM, stop)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def cmd_exec(args) -> int:
    config = RunConfig(app=args.app, repo=args.repo, selected=args.select or [])
    spec = _spec(config.app)
    schemas = generate_schemas(spec, config.selected or None)
    repo = open_repository(config.repo) if config.repo else None
    activity, content = dispatch(spec, args.url, schemas, repo, args.service)
    print(f"activity: {activity}")
    for text in content.texts():
        print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deeplinkgen", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("explore", help="build the navigation graph")
    p.add_argument("--app", required=True)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--op-budget", type=int, default=EXPLORE_OP_BUDGET)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("shortcut", help="compute shortcuts for a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--max-len", type=int, default=DEFAULT_MAX_LEN)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_shortcut)

    p = sub.add_parser("crawl", help="crawl deep pages into the repository")
    p.add_argument("--app", required=True)
    p.add_argument("--graph")
    p.add_argument("--shortcuts")
    p.add_argument("--repo", required=True)
    p.add_argument("--max-pages", type=int, default=DEFAULT_MAX_PAGES)
    p.add_argument("--op-budget", type=int, default=CRAWL_OP_BUDGET)
    p.add_argument("--depth", type=int, default=4, help="exploration depth when no graph is given")
    p.set_defaults(func=cmd_crawl)

    p = sub.add_parser("serve", help="serve the repository over HTTP")
    p.add_argument("--repo", required=True)
    p.add_argument("--addr", default="127.0.0.1:8080")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("exec", help="open the page behind an App URL")
    p.add_argument("--app", required=True)
    p.add_argument("--repo")
    p.add_argument("--service", help="base URL of a running link service")
    p.add_argument("--select", nargs="*", help="activities with deep link support (default: all)")
    p.add_argument("url")
    p.set_defaults(func=cmd_exec)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, MalformedUrl, UnknownActivity) as exc:
        print(f"deeplinkgen {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotFound as exc:
        print(f"deeplinkgen {args.command}: {exc}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except TargetMismatch as exc:
        print(f"deeplinkgen {args.command}: {exc}", file=sys.stderr)
        return EXIT_TARGET_MISMATCH
    except (DeepLinkError, OSError) as exc:
        print(f"deeplinkgen {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

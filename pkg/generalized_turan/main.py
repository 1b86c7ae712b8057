"""generalized-turan command line: constructions, counting and exact values of ex(n, H, F)."""

import argparse
import logging
import os
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any

from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table

from generalized_turan.__version__ import __version__
from generalized_turan.cache_manager import ResultCache
from generalized_turan.config_manager import ToolkitConfig, create_default_config
from generalized_turan.constructions import (
    asymptotic_profile,
    best_known_construction,
    classify_forbidden,
    clique_blocks,
    construct_g0,
    optimize_multipartite,
)
from generalized_turan.counting import count_copies, count_embeddings, count_k2t
from generalized_turan.errors import (
    ConsistencyError,
    GraphFormatError,
    InfeasibleError,
    InvalidGraphError,
    NotApplicableError,
    ParameterError,
    SizeLimitError,
    StructureError,
    TrivialForbiddenError,
    TuranError,
)
from generalized_turan.furedi import build_furedi, select_q, verify_furedi
from generalized_turan.graph_core import GRAPH6_MAX_ORDER, Graph, graph6_encode
from generalized_turan.oracle import exact_ex, sweep_ex
from generalized_turan.patterns import builtin_names, format_edge_list, resolve_graph
from generalized_turan.reports import Report, ReportBuilder, SuiteItem
from generalized_turan.suite import SuiteLevel, run_suite
from generalized_turan.tree_analysis import analyze_tree

logger = logging.getLogger("generalized_turan")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ASSERTION = 3
EXIT_INFEASIBLE = 4

_EXIT_CODES: list[tuple[tuple[type[Exception], ...], int]] = [
    ((InfeasibleError, SizeLimitError), EXIT_INFEASIBLE),
    ((ConsistencyError,), EXIT_ASSERTION),
    (
        (
            GraphFormatError,
            InvalidGraphError,
            ParameterError,
            NotApplicableError,
            StructureError,
            TrivialForbiddenError,
        ),
        EXIT_USAGE,
    ),
]

stderr_console = Console(stderr=True)


def exit_code_for(error: TuranError) -> int:
    for kinds, code in _EXIT_CODES:
        if isinstance(error, kinds):
            return code
    return EXIT_ASSERTION


def setup_logging(debug: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if debug else logging.INFO,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=stderr_console, show_path=False, rich_tracebacks=debug)],
        force=True,
    )


def load_toolkit_config(args: argparse.Namespace) -> ToolkitConfig:
    """File settings (or environment defaults), then explicit flags on top."""
    path = Path(args.config)
    config = ToolkitConfig.load_from_file(path) if path.exists() else create_default_config()
    overrides = {
        name: getattr(args, name) for name in ("jobs", "seed", "timeout") if getattr(args, name, None) is not None
    }
    if getattr(args, "no_cache", False):
        overrides["use_cache"] = False
    if args.debug:
        overrides["debug"] = True
    return config.model_copy(update=overrides)


def _graph_payload(g: Graph) -> dict[str, Any]:
    if g.order <= GRAPH6_MAX_ORDER:
        return {"order": g.order, "edges": g.edge_count, "graph6": graph6_encode(g)}
    return {"order": g.order, "edges": g.edge_count, "edge_list": format_edge_list(g)}


def _write_graph(g: Graph, path: str | None) -> None:
    if path:
        Path(path).write_text(format_edge_list(g))
        logger.info("edge list written to %s", path)


# Subcommands


def cmd_furedi(args: argparse.Namespace, config: ToolkitConfig, builder: ReportBuilder) -> None:
    if args.q is None and args.n is None:
        msg = "furedi needs --q or --n"
        raise ParameterError(msg)
    q = args.q
    if q is None:
        with builder.step("select_q"):
            choice = select_q(args.n, args.t)
        builder.add("choice", choice)
        q = choice.q
    with builder.step("build"):
        fg = build_furedi(q, args.t)
    with builder.step("verify"):
        report = verify_furedi(fg, trials=config.representative_trials, seed=config.seed)
    builder.add("report", report)
    builder.add("graph", _graph_payload(fg.graph) | {"special": sorted(fg.special), "h": fg.h_code})
    _write_graph(fg.graph, args.graph_out)
    builder.add_item(SuiteItem(name=f"F({q}, {args.t}) structure", passed=report.passed))


def cmd_count(args: argparse.Namespace, config: ToolkitConfig, builder: ReportBuilder) -> None:
    host = resolve_graph(args.host)
    with builder.step("count"):
        if args.k2t is not None:
            result = count_k2t(host, args.k2t)
        else:
            pattern = resolve_graph(args.pattern)
            if args.existence:
                result = count_embeddings(pattern, host, existence_only=True, jobs=config.jobs)
            elif args.copies:
                result = count_copies(pattern, host, jobs=config.jobs)
            else:
                result = count_embeddings(pattern, host, jobs=config.jobs)
    builder.add("count", result)


def cmd_tree(args: argparse.Namespace, config: ToolkitConfig, builder: ReportBuilder) -> None:
    tree = resolve_graph(args.tree)
    with builder.step("analyze"):
        builder.add("tree", analyze_tree(tree))


def cmd_construct(args: argparse.Namespace, config: ToolkitConfig, builder: ReportBuilder) -> None:
    with builder.step("construct"):
        match args.kind:
            case "g0":
                tree = resolve_graph(args.tree)
                g0 = construct_g0(tree, args.n, args.t, seed=config.seed, samples=config.anchor_samples)
                graph = g0.graph
                builder.add("construction", g0.model_dump(mode="json", exclude={"graph"}))
            case "clique-blocks":
                graph = clique_blocks(args.n, args.m, include_leftover=not args.isolated_leftover)
            case _:
                candidate = best_known_construction(resolve_graph(args.forbid), args.n, args.t)
                graph = candidate.graph
                builder.add("construction", candidate)
    payload = _graph_payload(graph)
    if args.t is not None:
        payload["k2t"] = count_k2t(graph, args.t).value
    builder.add("graph", payload)
    _write_graph(graph, args.graph_out)


def cmd_optimize(args: argparse.Namespace, config: ToolkitConfig, builder: ReportBuilder) -> None:
    with builder.step("optimize"):
        if args.asymptotic:
            builder.add("profile", asymptotic_profile(args.k, args.t, resolution=args.resolution))
        else:
            if args.n is None:
                msg = "optimize-multipartite needs --n unless --asymptotic is given"
                raise ParameterError(msg)
            builder.add("profile", optimize_multipartite(args.n, args.k, args.t))


def cmd_classify(args: argparse.Namespace, config: ToolkitConfig, builder: ReportBuilder) -> None:
    builder.add("classification", classify_forbidden(resolve_graph(args.forbid), args.t))


def _cache(config: ToolkitConfig) -> ResultCache:
    return ResultCache(config.cache_dir, enabled=config.use_cache)


def cmd_oracle(args: argparse.Namespace, config: ToolkitConfig, builder: ReportBuilder) -> None:
    h, f = resolve_graph(args.pattern), resolve_graph(args.forbid)
    cache = _cache(config)
    with builder.step("oracle"):
        if args.sweep:
            result = sweep_ex(args.n, h, f)
        else:
            result = exact_ex(args.n, h, f, jobs=config.jobs, timeout=config.timeout, cache=cache)
    builder.add("extremal", result)
    builder.record_cache(cache.hits, cache.misses)


def cmd_verify_paper(args: argparse.Namespace, config: ToolkitConfig, builder: ReportBuilder) -> None:
    suite = run_suite(args.level, jobs=config.jobs, seed=config.seed, cache=_cache(config), timeout=config.timeout)
    builder.report = suite


COMMANDS: dict[str, Callable[[argparse.Namespace, ToolkitConfig, ReportBuilder], None]] = {
    "furedi": cmd_furedi,
    "count": cmd_count,
    "tree": cmd_tree,
    "construct": cmd_construct,
    "optimize-multipartite": cmd_optimize,
    "classify": cmd_classify,
    "oracle": cmd_oracle,
    "verify-paper": cmd_verify_paper,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=str, default=None, help="Write the JSON report to FILE instead of stdout")
    common.add_argument(
        "--config",
        type=str,
        default=os.getenv("CONFIG_FILE", "turan.json"),
        help="Configuration file path (env: CONFIG_FILE)",
    )
    common.add_argument("--jobs", type=int, default=None, help="Worker processes (env: TURAN_JOBS)")
    common.add_argument("--seed", type=int, default=None, help="Random seed (env: TURAN_SEED)")
    common.add_argument("--debug", action="store_true", help="Verbose logging")

    parser = argparse.ArgumentParser(
        prog="turan",
        description="Generalized Turán numbers ex(n, H, F): constructions, counting and exact values",
        epilog=f"builtin graphs: {', '.join(builtin_names())}; '@FILE' reads an edge list; anything else is graph6",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("furedi", parents=[common], help="Build and verify a Füredi graph F(q, t)")
    p.add_argument("--q", type=int, default=None, help="Field order; chosen from --n when omitted")
    p.add_argument("--n", type=int, default=None, help="Vertex budget used to select q")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--graph-out", type=str, default=None, help="Also write the graph as an edge list")

    p = sub.add_parser("count", parents=[common], help="Count embeddings or copies of a pattern")
    p.add_argument("--pattern", type=str, default="path_3")
    p.add_argument("--host", type=str, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--copies", action="store_true", help="Count unlabelled copies")
    mode.add_argument("--existence", action="store_true", help="Only decide whether an embedding exists")
    mode.add_argument("--k2t", type=int, default=None, metavar="T", help="Count copies of K_{2,T} directly")

    tree = sub.add_parser("tree", help="Tree partition and exponents")
    tree_sub = tree.add_subparsers(dest="tree_command", required=True)
    p = tree_sub.add_parser("analyze", parents=[common], help="A/B partition, Q', pieces and exponents")
    p.add_argument("tree", type=str)

    p = sub.add_parser("construct", parents=[common], help="Build a lower-bound graph")
    p.add_argument("kind", choices=["g0", "clique-blocks", "best"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--m", type=int, default=None, help="Block size for clique-blocks")
    p.add_argument("--tree", type=str, default=None, help="Tree for g0")
    p.add_argument("--forbid", type=str, default=None, help="Forbidden graph for best")
    p.add_argument("--isolated-leftover", action="store_true", help="Leave the n mod m leftover vertices isolated")
    p.add_argument("--graph-out", type=str, default=None, help="Also write the graph as an edge list")

    p = sub.add_parser("optimize-multipartite", parents=[common], help="Best complete k-partite graph for K_{2,t}")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--asymptotic", action="store_true", help="Optimise part fractions instead of part sizes")
    p.add_argument("--resolution", type=float, default=0.005)

    p = sub.add_parser("classify", parents=[common], help="Case of ex(n, K_{2,t}, F)")
    p.add_argument("--forbid", type=str, required=True)
    p.add_argument("--t", type=int, required=True)

    p = sub.add_parser("oracle", parents=[common], help="Exact ex(n, H, F) for n <= 9")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pattern", type=str, required=True)
    p.add_argument("--forbid", type=str, required=True)
    p.add_argument("--timeout", type=float, default=None, help="Seconds (env: TURAN_TIMEOUT)")
    p.add_argument("--no-cache", action="store_true", help="Neither read nor write the result cache")
    p.add_argument("--sweep", action="store_true", help="Check every labelled graph instead (n <= 6)")

    p = sub.add_parser("verify-paper", parents=[common], help="Run the acceptance battery")
    p.add_argument("--level", choices=[level.value for level in SuiteLevel], default=SuiteLevel.QUICK.value)
    p.add_argument("--timeout", type=float, default=None, help="Seconds per exact search (env: TURAN_TIMEOUT)")
    return parser


def _validate(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    if args.command != "construct":
        return
    needed = {"g0": ("tree", "t"), "clique-blocks": ("m",), "best": ("forbid", "t")}[args.kind]
    missing = [f"--{name}" for name in needed if getattr(args, name) is None]
    if missing:
        parser.error(f"construct {args.kind} needs {', '.join(missing)}")


def print_summary(report: Report) -> None:
    table = Table(title=f"turan {report.command}", show_lines=False)
    table.add_column("result")
    table.add_column("status")
    for record in report.results:
        status = ""
        if "passed" in record.data:
            mark = "[green]pass[/green]" if record.data["passed"] else "[red]fail[/red]"
            status = mark if record.data.get("hard", True) else f"{mark} (soft)"
        table.add_row(record.name, status)
    stderr_console.print(table)
    if report.timing:
        total = sum(report.timing.values())
        stderr_console.print(Panel(f"{total:.2f}s over {len(report.timing)} step(s)", title="timing"))


def emit(report: Report, out: str | None) -> None:
    text = report.to_json()
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def error_report(command: str, params: dict[str, Any], error: TuranError, code: int) -> Report:
    """Report for a run that stopped on ``error``; it carries no results besides the error record."""
    data: dict[str, Any] = {"error": type(error).__name__, "message": str(error), "exit_code": code}
    if isinstance(error, InfeasibleError) and error.smallest_n is not None:
        data["smallest_n"] = error.smallest_n
    builder = ReportBuilder(command, params)
    builder.add("error", data)
    return builder.build()


def main(argv: list[str] | None = None) -> int:
    """Run one subcommand and return its exit status."""
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(args, parser)
    setup_logging(args.debug)

    command = args.command if args.command != "tree" else f"tree {args.tree_command}"
    params = {k: v for k, v in vars(args).items() if k not in {"command", "tree_command", "out", "config", "debug"}}
    try:
        config = load_toolkit_config(args)
        builder = ReportBuilder(command, params, seed=config.seed)
        COMMANDS[args.command](args, config, builder)
    except TuranError as e:
        logger.error("%s: %s", type(e).__name__, e)
        code = exit_code_for(e)
        emit(error_report(command, params, e, code), args.out)
        return code

    report = builder.build()
    emit(report, args.out)
    print_summary(report)
    if failures := report.hard_failures():
        logger.error("%d hard check(s) failed", len(failures))
        return EXIT_ASSERTION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

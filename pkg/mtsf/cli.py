"""CLI entry point for mtsf: gen, sample, smooth, rank, oracle, bench, validate."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .config import RunConfig, load_config_file, merge_config
from .errors import InvalidInputError, MtsfError

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"


def _run_config(args: argparse.Namespace) -> RunConfig:
    layers = []
    if args.config:
        layers.append(load_config_file(args.config))
    layers.append(vars(args))
    cfg = merge_config(RunConfig(), *layers).checked()
    logger.debug("run config: %s", cfg.to_dict())
    return cfg


def _emit(text: str, output: Path | None, what: str) -> None:
    if output:
        output.write_text(text, encoding="utf-8")
        print(f"Wrote {what} -> {output}")
    else:
        print(text, end="")


def _cmd_gen(args: argparse.Namespace) -> int:
    from .formatter import format_edge_list, format_instance
    from .ranking import comparison_graph, generate_ero

    cfg = _run_config(args)
    instance = generate_ero(cfg.n, cfg.s, cfg.p, cfg.seed)
    _emit(format_instance(instance), args.output, f"instance with {instance.n_observed} comparisons")
    if args.edge_list:
        args.edge_list.write_text(format_edge_list(comparison_graph(instance, cfg.delta)), encoding="utf-8")
        print(f"Wrote comparison graph -> {args.edge_list}")
    return 0


def _cmd_sample(args: argparse.Namespace) -> int:
    from .formatter import format_sample_dump
    from .graph import NodeWeights
    from .parser import parse_edge_list
    from .sampler import SamplerConfig, sample_batch

    cfg = _run_config(args)
    g = parse_edge_list(args.input.read_text(encoding="utf-8"))
    q = NodeWeights.constant(g.n_nodes, cfg.q)
    samples = sample_batch(g, SamplerConfig(cfg.seed, q), cfg.m, workers=cfg.workers)
    _emit(format_sample_dump(samples), args.output, f"{len(samples)} samples")
    return 0


def _cmd_smooth(args: argparse.Namespace) -> int:
    from .estimators import SmoothingProblem, smooth
    from .formatter import format_estimate_csv, write_estimate
    from .graph import NodeWeights
    from .parser import parse_edge_list, parse_signal
    from .sampler import SamplerConfig

    cfg = _run_config(args)
    g = parse_edge_list(args.input.read_text(encoding="utf-8"))
    signal = parse_signal(args.signal.read_text(encoding="utf-8"), g.n_nodes)
    q = NodeWeights.constant(g.n_nodes, cfg.q)
    problem = SmoothingProblem(g, signal, q)
    result = smooth(problem, cfg.kind, cfg.m, SamplerConfig(cfg.seed, q), workers=cfg.workers)
    if args.output:
        meta_path = write_estimate(args.output, result, {"seed": cfg.seed, "q": cfg.q})
        print(f"Wrote {cfg.kind} estimate -> {args.output} (+ {meta_path.name})")
    else:
        print(format_estimate_csv(result), end="")
    return 0


def _cmd_rank(args: argparse.Namespace) -> int:
    from .bench import rank_scatter
    from .constants import OUTCOME_COLUMNS, SCATTER_COLUMNS
    from .formatter import write_rows
    from .linalg import PowerMethodConfig
    from .parser import parse_instance
    from .ranking import generate_ero, rank_pipeline

    cfg = _run_config(args)
    if args.input:
        instance = parse_instance(args.input.read_text(encoding="utf-8"))
    else:
        instance = generate_ero(cfg.n, cfg.s, cfg.p, cfg.seed)
    pm = PowerMethodConfig(
        k=cfg.k, q=cfg.q, mode=cfg.mode, kind=cfg.kind, m=cfg.m,
        fresh_samples=cfg.fresh_samples, seed=cfg.seed, workers=cfg.workers,
    )
    outcome = rank_pipeline(instance, pm, cfg.delta)
    print(f"tau: {outcome.kendall_tau:.4f} (flipped: {outcome.orientation_flipped})")
    if args.output:
        row = (
            instance.seed, instance.n, instance.s, instance.p, cfg.q, cfg.k, cfg.m,
            cfg.mode, outcome.kendall_tau, outcome.orientation_flipped, outcome.wall_time,
        )
        write_rows(args.output, OUTCOME_COLUMNS, [row])
        print(f"Wrote outcome -> {args.output}")
    if args.ranks_output:
        write_rows(args.ranks_output, SCATTER_COLUMNS, rank_scatter(instance, cfg))
        print(f"Wrote rank scatter -> {args.ranks_output}")
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    from .fixtures import oracle_fixtures
    from .formatter import format_catalog_csv
    from .graph import NodeWeights
    from .oracle import enumerate_mtsfs, run_oracle_checks
    from .parser import parse_edge_list, parse_signal

    if args.input:
        g = parse_edge_list(args.input.read_text(encoding="utf-8"))
        if not args.signal:
            raise InvalidInputError("--signal is required with a custom graph")
        signal = parse_signal(args.signal.read_text(encoding="utf-8"), g.n_nodes)
        q = NodeWeights.constant(g.n_nodes, _run_config(args).q)
        name = str(args.input)
    else:
        fixtures = oracle_fixtures()
        if args.fixture not in fixtures:
            raise InvalidInputError(
                f"unknown fixture {args.fixture!r}; choose from {', '.join(sorted(fixtures))}"
            )
        fixture = fixtures[args.fixture]
        g, q, signal, name = fixture.graph, fixture.q, fixture.signal, fixture.name

    checks = run_oracle_checks(g, q, signal)
    for check in checks:
        print(check)
    if args.catalog:
        args.catalog.write_text(format_catalog_csv(enumerate_mtsfs(g, q)), encoding="utf-8")
        print(f"Wrote catalog -> {args.catalog}")

    failed = sum(1 for c in checks if not c.passed)
    if failed:
        print(f"\n{failed} of {len(checks)} oracle check(s) failed on {name}", file=sys.stderr)
        return 2
    print(f"OK: all {len(checks)} oracle checks hold on {name}")
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    from . import bench
    from .formatter import format_rows
    from .linalg import MODES
    from .ranking import generate_ero

    cfg = _run_config(args)
    if args.what == "timing":
        rows = bench.timing_benchmark(cfg, args.sizes or [10, 100, 1000])
    elif args.what == "errors":
        rows = bench.error_curve(cfg, args.ms or bench.ERROR_MS, trials=args.trials)
    elif args.what == "tau":
        rows = bench.tau_sweep(cfg, args.qs or [cfg.q], args.ks or [cfg.k], args.modes or list(MODES))
    elif args.what == "scatter":
        rows = bench.rank_scatter(generate_ero(cfg.n, cfg.s, cfg.p, cfg.seed), cfg)
    else:
        rows = bench.sampler_scaling(args.sizes or [100, 1000, 10000], cfg.q, seed=cfg.seed)
    _emit(format_rows(bench.COLUMNS[args.what], rows), args.output, f"{args.what} benchmark")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    from .validator import validate_edge_list, validate_instance

    text = args.input.read_text(encoding="utf-8")
    errors = validate_instance(text) if args.format == "instance" else validate_edge_list(text)

    if not errors:
        print(f"OK: {args.input} is a valid {args.format} file")
        return 0

    for err in errors:
        print(err, file=sys.stderr)

    error_count = sum(1 for e in errors if e.severity == "error")
    warn_count = sum(1 for e in errors if e.severity == "warning")
    print(f"\n{error_count} error(s), {warn_count} warning(s)", file=sys.stderr)
    return 1 if error_count > 0 else 0


def _add_run_flags(parser: argparse.ArgumentParser, *names: str) -> None:
    """RunConfig flags; defaults stay None so the config file is not overridden."""
    specs = {
        "n": (int, "Number of items"),
        "s": (float, "Probability a pair is observed"),
        "p": (float, "Probability an observed comparison is truthful"),
        "q": (float, "Regularization weight"),
        "delta": (float, "Phase scale of the comparison graph"),
        "m": (int, "Number of sampled forests"),
        "k": (int, "Power iterations"),
        "seed": (int, "Random seed"),
        "seeds": (int, "Number of seeds in a sweep"),
        "workers": (int, "Worker processes"),
        "repeats": (int, "Timing repetitions"),
    }
    for name in names:
        kind, help_text = specs[name]
        parser.add_argument(f"--{name}", type=kind, default=None, help=help_text)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="mtsf",
        description="mtsf: random spanning forests for magnetic Laplacian smoothing and ranking",
    )
    parser.add_argument("--version", action="version", version=f"mtsf {__version__}")
    parser.add_argument(
        "--log-level", default="warning", choices=["debug", "info", "warning", "error"],
        help="Diagnostics level on stderr",
    )
    parser.add_argument("--config", type=Path, help="JSON file of run parameters")
    sub = parser.add_subparsers(dest="command")

    # gen
    gen = sub.add_parser("gen", help="Generate an ERO ranking instance")
    _add_run_flags(gen, "n", "s", "p", "delta", "seed")
    gen.add_argument("-o", "--output", type=Path, help="Output instance file")
    gen.add_argument("--edge-list", type=Path, help="Also write the comparison graph")

    # sample
    smp = sub.add_parser("sample", help="Sample rooted MTSFs of a graph")
    smp.add_argument("input", type=Path, help="Edge-list file")
    _add_run_flags(smp, "q", "m", "seed", "workers")
    smp.add_argument("-o", "--output", type=Path, help="Output sample dump")

    # smooth
    smo = sub.add_parser("smooth", help="Estimate (L + qI)^-1 q g with sampled forests")
    smo.add_argument("input", type=Path, help="Edge-list file")
    smo.add_argument("signal", type=Path, help="Signal file")
    _add_run_flags(smo, "q", "m", "seed", "workers")
    smo.add_argument("--kind", choices=["tilde", "bar", "hat"], default=None, help="Estimator")
    smo.add_argument("-o", "--output", type=Path, help="Output estimate CSV")

    # rank
    rnk = sub.add_parser("rank", help="Rank an instance by angular synchronization")
    rnk.add_argument("input", type=Path, nargs="?", help="Instance file (generated if omitted)")
    _add_run_flags(rnk, "n", "s", "p", "q", "delta", "m", "k", "seed", "workers")
    rnk.add_argument("--mode", choices=["exact", "estimator"], default=None)
    rnk.add_argument("--kind", choices=["tilde", "bar", "hat"], default=None)
    rnk.add_argument(
        "--shared-samples", dest="fresh_samples", action="store_false", default=None,
        help="Reuse one forest batch across power iterations",
    )
    rnk.add_argument("-o", "--output", type=Path, help="Output outcome CSV")
    rnk.add_argument(
        "--ranks-output", type=Path,
        help="Per-node CSV of ground-truth against recovered ranks in both modes",
    )

    # oracle
    orc = sub.add_parser("oracle", help="Check exact identities by enumeration")
    orc.add_argument("--fixture", default="triangle", help="Named fixture")
    orc.add_argument("--input", type=Path, help="Edge-list file instead of a fixture")
    orc.add_argument("--signal", type=Path, help="Signal file for --input")
    _add_run_flags(orc, "q")
    orc.add_argument("--catalog", type=Path, help="Write the forest catalog CSV")

    # bench
    bch = sub.add_parser("bench", help="Run a benchmark sweep")
    bch.add_argument(
        "--what", choices=["timing", "errors", "tau", "scaling", "scatter"], default="timing",
    )
    _add_run_flags(bch, "n", "s", "p", "q", "delta", "m", "k", "seed", "seeds", "workers", "repeats")
    bch.add_argument("--kind", choices=["tilde", "bar", "hat"], default=None)
    bch.add_argument("--sizes", type=int, nargs="+", help="Graph sizes")
    bch.add_argument("--ms", type=int, nargs="+", help="Sample counts for the error curve")
    bch.add_argument("--trials", type=int, default=5, help="Trials per error-curve cell")
    bch.add_argument("--qs", type=float, nargs="+", help="q grid for the tau sweep")
    bch.add_argument("--ks", type=int, nargs="+", help="k grid for the tau sweep")
    bch.add_argument("--modes", nargs="+", choices=["exact", "estimator"], help="Modes for the tau sweep")
    bch.add_argument("-o", "--output", type=Path, help="Output CSV")

    # validate
    val = sub.add_parser("validate", help="Validate an edge-list or instance file")
    val.add_argument("input", type=Path, help="File to validate")
    val.add_argument("--format", choices=["edges", "instance"], default="edges")

    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format=LOG_FORMAT)

    if not args.command:
        parser.print_help()
        return 1

    commands = {
        "gen": _cmd_gen,
        "sample": _cmd_sample,
        "smooth": _cmd_smooth,
        "rank": _cmd_rank,
        "oracle": _cmd_oracle,
        "bench": _cmd_bench,
        "validate": _cmd_validate,
    }

    try:
        return commands[args.command](args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (MtsfError, OSError) as exc:
        logger.debug("command %s failed", args.command, exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""``probnet`` command line: sweep, correlate, snapshot, oracle.

Durations accept a unit suffix: ``s``, ``min``, ``h``, ``d``, ``w``, ``y``
(365 days); a bare number is seconds.  Exit status is 0 on success, 1 for
unreadable or malformed input, 2 for bad options.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys

from . import analysis
from .edge_model import DAY, WEEK, YEAR, DecayParams, build_probabilistic_graph, read_probabilistic_graph, \
    write_probabilistic_graph
from .sampling import METRICS as SAMPLER_METRICS, SampleConfig, brute_force_expectation, \
    sampled_measures
from .temporal_log import LogFormatError, read_log

log = logging.getLogger("probnet")

EXIT_INPUT = 1
EXIT_CONFIG = 2

_UNITS = {"": 1, "s": 1, "min": 60, "h": 3600, "d": DAY, "w": WEEK, "y": YEAR}
_DURATION = re.compile(r"^\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*(s|min|h|d|w|y)?\s*$")


class ConfigError(ValueError):
    pass


def parse_duration(text: str) -> float:
    m = _DURATION.match(text)
    if not m:
        raise ConfigError(f"bad duration {text!r} (examples: 3600, 28d, 2y)")
    return float(m.group(1)) * _UNITS[m.group(2) or ""]


def _csv_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _timestamps(args) -> tuple[int, ...]:
    if args.at:
        try:
            return tuple(int(x) for x in _csv_list(args.at))
        except ValueError:
            raise ConfigError(f"--at expects comma-separated integers, got {args.at!r}") from None
    if args.start is None or args.stop is None or args.step is None:
        raise ConfigError("give --at, or all of --from/--to/--step")
    step = int(parse_duration(args.step))
    if step <= 0:
        raise ConfigError("--step must be positive")
    return tuple(range(args.start, args.stop + 1, step))


def _sweep_config(args, **override) -> analysis.SweepConfig:
    kw = dict(override)
    kw.setdefault("timestamps", _timestamps(args))
    if "methods" not in kw:
        kw["methods"] = tuple(_csv_list(args.methods))
    if "metrics" not in kw:
        kw["metrics"] = tuple(_csv_list(args.metrics))
    if "lam" not in kw:
        kw["lam"] = parse_duration(args.lam)
    if "beta" not in kw:
        kw["beta"] = args.beta
    kw.setdefault("delta", parse_duration(args.delta))
    kw.setdefault("samples", args.samples)
    kw.setdefault("seed", args.seed)
    try:
        return analysis.SweepConfig(**kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _add_common(p: argparse.ArgumentParser, beta_list: bool = False, lambda_list: bool = False) -> None:
    p.add_argument("--input", "-i", required=True, help="transaction log CSV (src,dst,timestamp)")
    p.add_argument("--output", "-o", default="-", help="output CSV path (default: stdout)")
    p.add_argument("--at", help="comma-separated evaluation timestamps (epoch seconds)")
    p.add_argument("--from", dest="start", type=int, help="first evaluation timestamp")
    p.add_argument("--to", dest="stop", type=int, help="last evaluation timestamp (inclusive)")
    p.add_argument("--step", help="spacing between evaluation timestamps, e.g. 14d")
    p.add_argument("--lambda", dest="lam", default="28d",
                   help="decay time scale" + (" (comma-separated for a grid)" if lambda_list else ""))
    if beta_list:
        p.add_argument("--beta", default="0.3", help="transmission prior (comma-separated for a grid)")
    else:
        p.add_argument("--beta", type=float, default=0.3, help="transmission prior in (0, 1]")
    p.add_argument("--delta", default="14d", help="slice window width")
    p.add_argument("--samples", type=int, help="Monte Carlo samples (default 10000, or 200 above 200 nodes)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1, help="parallel processes over timestamps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="probnet", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="evaluate methods and metrics over time")
    _add_common(p)
    p.add_argument("--methods", default=",".join(analysis.METHODS))
    p.add_argument("--metrics", default=",".join(analysis.METRICS))

    p = sub.add_parser("snapshot", help="all metrics at a single timestamp")
    _add_common(p)
    p.add_argument("--methods", default=",".join(analysis.METHODS))
    p.add_argument("--metrics", default=",".join(analysis.METRICS))
    p.add_argument("--graph-output", help="also write the probabilistic graph (src,dst,probability)")

    p = sub.add_parser("correlate", help="BCR rank correlation between pairs of methods over time")
    _add_common(p, beta_list=True, lambda_list=True)
    p.add_argument("--pairs", default="sampled:slice,sampled:aggregate",
                   help="comma-separated method pairs a:b")

    p = sub.add_parser("oracle", help="compare sampled estimates with exact enumeration on a tiny graph")
    p.add_argument("--graph", "-g", required=True, help="probabilistic graph CSV (src,dst,probability)")
    p.add_argument("--output", "-o", default="-")
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _open_out(path: str):
    return sys.stdout if path == "-" else open(path, "w", newline="", encoding="utf-8")


def _run_sweep(args) -> None:
    cfg = _sweep_config(args)
    data = read_log(args.input)
    series = analysis.sweep(data, cfg, workers=args.workers)
    out = _open_out(args.output)
    try:
        analysis.emit_report(series, out)
    finally:
        if out is not sys.stdout:
            out.close()


def _run_snapshot(args) -> None:
    if not args.at or len(_csv_list(args.at)) != 1:
        raise ConfigError("snapshot needs exactly one --at timestamp")
    _run_sweep(args)
    if args.graph_output:
        t = int(args.at)
        pg = build_probabilistic_graph(read_log(args.input), t, DecayParams(parse_duration(args.lam)))
        write_probabilistic_graph(pg, args.graph_output)


def _run_correlate(args) -> None:
    pairs = []
    for item in _csv_list(args.pairs):
        parts = item.split(":")
        if len(parts) != 2:
            raise ConfigError(f"bad method pair {item!r}; use a:b")
        pairs.append((parts[0], parts[1]))
    lams = [parse_duration(x) for x in _csv_list(args.lam)]
    try:
        betas = [float(x) for x in _csv_list(args.beta)]
    except ValueError:
        raise ConfigError(f"bad --beta {args.beta!r}") from None
    base = _sweep_config(args, lam=lams[0], beta=betas[0], methods=("aggregate",), metrics=("bcr",))
    data = read_log(args.input)
    rows = []
    for lam in lams:
        for beta in betas:
            for a, b in pairs:
                try:
                    cfg = analysis.SweepConfig(**{**base.__dict__, "lam": lam, "beta": beta})
                    result = analysis.correlate_methods(data, cfg, (a, b), workers=args.workers)
                except ValueError as exc:
                    raise ConfigError(str(exc)) from None
                for r in result:
                    rows.append({"lambda": lam, "beta": beta, **r._asdict()})
                log.info("lambda=%g beta=%g %s~%s mean rho=%.4f", lam, beta, a, b,
                         analysis.mean_correlation(result))
    out = _open_out(args.output)
    try:
        analysis.emit_correlations(rows, out)
    finally:
        if out is not sys.stdout:
            out.close()


def _run_oracle(args) -> None:
    if args.samples < 1:
        raise ConfigError("--samples must be >= 1")
    pg = read_probabilistic_graph(args.graph)
    if len(pg.edges) > 20:
        raise ConfigError(f"{len(pg.edges)} edges is too many to enumerate (limit 20)")
    est = sampled_measures(pg, SampleConfig(args.samples, args.seed))
    out = _open_out(args.output)
    try:
        import csv

        w = csv.writer(out, lineterminator="\n")
        w.writerow(["metric", "node", "exact", "estimate", "stderr", "z"])
        for metric in SAMPLER_METRICS:
            exact = brute_force_expectation(pg, metric)
            if metric == "avg_sp":
                items = [("", exact, est[metric])]
            else:
                items = [(v, exact[v], est[metric][v]) for v in sorted(exact)]
            for node, x, rep in items:
                z = ""
                if x is not None and rep.mean is not None and rep.stderr > 0:
                    z = f"{(rep.mean - x) / rep.stderr:.3f}"
                w.writerow([metric, node, analysis._fmt(x), analysis._fmt(rep.mean), analysis._fmt(rep.stderr), z])
    finally:
        if out is not sys.stdout:
            out.close()


_COMMANDS = {"sweep": _run_sweep, "snapshot": _run_snapshot, "correlate": _run_correlate, "oracle": _run_oracle}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"probnet: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, LogFormatError) as exc:
        print(f"probnet: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())

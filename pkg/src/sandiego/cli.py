"""Command-line front end: ``sandiego <command> [options]``.

Exit status is 0 on success, 2 when a precondition fails (theorem premise,
exhaustive cap) or the experiment is not applicable, and 1 on any other
error, including a failed verification.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from . import caps
from .entropy import entropy_report
from .errors import CapExceeded, PremiseError, SandiegoError
from .formats import kset_to_dict, load_algorithm, load_kset, load_strategy, strategy_to_dict
from .game import bits_to_str, exact_game_complexity, run_game, strategy_complexity
from .hypercube import k_halving_strategy, max_induced_degree, min_max_degree, verify_theorem1
from .query import (
    hard_distribution_sample,
    search_success_probability,
    support_report,
    theorem2_harness,
)

log = logging.getLogger("sandiego")

EXIT_OK, EXIT_ERROR, EXIT_PRECONDITION = 0, 1, 2

# list-valued report keys that become the CSV body, in priority order
CSV_TABLE_KEYS = ("rows", "support", "samples")


class NotApplicable(Exception):
    def __init__(self, report: dict, message: str):
        super().__init__(message)
        self.report = report


class VerificationFailed(Exception):
    def __init__(self, report: dict, message: str):
        super().__init__(message)
        self.report = report


def _strategy_from_args(args):
    if args.strategy and args.kset:
        raise ValueError("give either --strategy or --kset, not both")
    if args.strategy:
        strategy = load_strategy(args.strategy)
        descriptor = {"kind": strategy.kind, "n": strategy.n, "source": Path(args.strategy).name}
    elif args.kset:
        strategy = k_halving_strategy(load_kset(args.kset))
        descriptor = {"kind": "k_halving", "n": strategy.n, "k_hex": strategy.kset.hex}
    else:
        raise ValueError("a strategy is required (--strategy FILE or --kset FILE)")
    if args.n is not None and args.n != strategy.n:
        raise ValueError(f"--n {args.n} disagrees with the strategy's n={strategy.n}")
    if strategy.kind == "k_halving":
        descriptor.setdefault("k_hex", strategy.kset.hex)
    return strategy, descriptor


def cmd_complexity(args) -> dict:
    strategy, descriptor = _strategy_from_args(args)
    result = strategy_complexity(strategy, workers=args.workers)
    return {
        "n": strategy.n,
        "strategy": descriptor,
        "complexity": result.value,
        "witness": run_game(strategy, result.pi, result.z).to_dict(),
    }


def cmd_search_min(args) -> dict:
    if args.n is None:
        raise ValueError("search-min needs --n")
    result = exact_game_complexity(args.n)
    return {"n": args.n, "complexity": result.value, "strategy": strategy_to_dict(result.strategy)}


def cmd_degree(args) -> dict:
    if args.kset:
        return max_induced_degree(load_kset(args.kset)).to_dict()
    if args.n is None:
        raise ValueError("degree needs --kset FILE or --n N")
    result = min_max_degree(args.n, args.size_threshold, mode=args.mode, seed=args.seed, samples=args.samples)
    return result.to_dict()


def cmd_verify_t1(args) -> dict:
    if not args.kset:
        raise ValueError("verify-t1 needs --kset")
    report = verify_theorem1(load_kset(args.kset), workers=args.workers).to_dict()
    if not report["passed"]:
        raise VerificationFailed(report, "degree-bound verification found a counterexample")
    return report


def cmd_entropy(args) -> dict:
    strategy, descriptor = _strategy_from_args(args)
    return entropy_report(strategy, descriptor, workers=args.workers)


def cmd_reduce(args) -> dict:
    if not args.alg:
        raise ValueError("reduce needs --alg")
    alg = load_algorithm(args.alg)
    if args.strategy or args.kset:
        # search experiment for a supplied (algorithm, strategy) pair; no assertions
        strategy, descriptor = _strategy_from_args(args)
        prob = search_success_probability(alg, strategy, mode=args.mode, seed=args.seed, samples=args.samples, workers=args.workers)
        out = {"n": alg.n, "t": alg.t, "strategy": descriptor, "mode": args.mode}
        if args.mode == "exact":
            out["search_success"] = f"{prob.numerator}/{prob.denominator}"
        else:
            out.update(prob.to_dict())
        return out
    report = theorem2_harness(alg).to_dict()
    if not report["premise"]:
        raise NotApplicable(report, f"success set has {report['K_size']} <= 2^(n-1) inputs; reduction not applicable")
    if not all(report[k] for k in ("eq1_ok", "eq2_ok", "view_ok", "support_ok", "routes_agree", "bound_ok")):
        raise VerificationFailed(report, "reduction check failed")
    return report


def cmd_hard_dist(args) -> dict:
    if not args.kset:
        raise ValueError("hard-dist needs --kset")
    kset = load_kset(args.kset)
    if not kset.majority:
        raise PremiseError(f"|K| = {kset.size} is not > 2^(n-1)")
    out = {**kset_to_dict(kset), "mode": args.mode}
    if args.mode == "exact":
        rows = support_report(kset)
    else:
        out.update(seed=args.seed, count=args.count)
        rows = [{"b": bits_to_str(b)} for b in hard_distribution_sample(kset, args.seed, args.count)]
    out["all_in_K"] = all(r["b"] in kset for r in rows)
    out["support" if args.mode == "exact" else "samples"] = rows
    return out


COMMANDS = {
    "complexity": (cmd_complexity, "exact complexity of one Bob-strategy"),
    "search-min": (cmd_search_min, "exhaustive minimum complexity over all table strategies"),
    "degree": (cmd_degree, "induced degrees of a K-set, or min-max degree over large sets"),
    "verify-t1": (cmd_verify_t1, "verify the K-halving strategy's degree bound for a K-set"),
    "entropy": (cmd_entropy, "exact H(pi(n) | b) for a strategy"),
    "reduce": (cmd_reduce, "parity-to-search reduction harness for a query algorithm"),
    "hard-dist": (cmd_hard_dist, "support or samples of the hard distribution on K"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sandiego", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--n", type=int)
        p.add_argument("--strategy", help="strategy JSON file")
        p.add_argument("--kset", help="K-set JSON file")
        p.add_argument("--alg", help="algorithm or tree JSON file")
        p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
        p.add_argument("--seed", type=int, help="64-bit seed (sampled mode)")
        p.add_argument("--samples", type=int, default=1000, help="sample count for sampled mode")
        p.add_argument("--count", type=int, default=100, help="number of hard-distribution samples")
        p.add_argument("--size-threshold", type=int, help="degree --n: consider |K| > this (default 2^(n-1))")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--cap", action="append", default=[], metavar="NAME=VALUE", help="override an exhaustive cap")
        p.add_argument("--out", help="report path (default stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def to_csv(report: dict) -> str:
    """Flatten a report: its first list-valued table key becomes the rows,
    otherwise a single row of top-level fields.  Nested values are JSON."""
    buf = io.StringIO()
    for key in CSV_TABLE_KEYS:
        if isinstance(report.get(key), list):
            rows = report[key]
            break
    else:
        rows = [report]
    header = list(dict.fromkeys(k for row in rows for k in row))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([json.dumps(row[k]) if isinstance(row.get(k), (dict, list)) else row.get(k, "") for k in header])
    return buf.getvalue()


def render(report: dict, fmt: str) -> str:
    return json.dumps(report, indent=2) + "\n" if fmt == "json" else to_csv(report)


def _emit(report: dict, args) -> None:
    text = render(report, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.mode == "sampled" and args.seed is None:
            raise ValueError("--seed is required in sampled mode")
        if args.mode == "exact" and args.seed is not None:
            log.warning("--seed is ignored in exact mode")
        for path in (args.strategy, args.kset, args.alg):
            if path and not Path(path).is_file():
                raise FileNotFoundError(f"no such file: {path}")
        active = caps.get_caps().override(",".join(args.cap))
        with caps.using(active):
            report = COMMANDS[args.command][0](args)
    except NotApplicable as exc:
        _emit(exc.report, args)
        log.error("not applicable: %s", exc)
        return EXIT_PRECONDITION
    except VerificationFailed as exc:
        _emit(exc.report, args)
        log.error("verification failed: %s", exc)
        return EXIT_ERROR
    except PremiseError as exc:
        log.error("premise violated: %s", exc)
        return EXIT_PRECONDITION
    except CapExceeded as exc:
        log.error("cap exceeded: %s", exc)
        return EXIT_PRECONDITION
    except (SandiegoError, ValueError, KeyError, OSError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_ERROR
    _emit(report, args)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

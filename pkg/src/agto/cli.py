"""Command-line interface: benchmark campaigns, reports and tuning sessions.

An optional JSON config file can pre-set any flag of a subcommand
(``--config settings.json``); explicit flags override the file.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from agto import benchmarks
from agto.core import OptimizerConfig
from agto.harness import ALGORITHMS, ExperimentConfig, report, run_campaign
from agto.hpo import (
    DEFAULT_TIMEOUT,
    HyperparameterSpace,
    SubprocessEvaluator,
    SurrogateEvaluator,
    run_hpo,
)


def _parse_functions(spec: str):
    """``all``, a comma list (``F1,F9``), or an inclusive range (``F1..F7``)."""
    spec = spec.strip()
    if spec.lower() == "all":
        return benchmarks.FUNCTION_IDS
    if ".." in spec:
        start, _, end = spec.partition("..")
        ids = list(benchmarks.FUNCTION_IDS)
        if start not in ids or end not in ids:
            raise argparse.ArgumentTypeError(f"bad function range {spec!r}")
        lo, hi = ids.index(start), ids.index(end)
        if lo > hi:
            raise argparse.ArgumentTypeError(f"empty function range {spec!r}")
        return tuple(ids[lo : hi + 1])
    ids = tuple(part.strip() for part in spec.split(",") if part.strip())
    for fid in ids:
        if fid not in benchmarks.FUNCTION_IDS:
            raise argparse.ArgumentTypeError(f"unknown function id {fid!r}")
    return ids


def _parse_algorithms(spec: str):
    algos = tuple(part.strip() for part in spec.split(",") if part.strip())
    for algo in algos:
        if algo not in ALGORITHMS:
            raise argparse.ArgumentTypeError(f"unknown algorithm {spec!r}")
    return algos


def _apply_config_file(parser: argparse.ArgumentParser, argv, namespace):
    """Load ``--config`` JSON (keys = long flag names) as parser defaults."""
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config", default=None)
    known, _ = probe.parse_known_args(argv)
    if known.config:
        payload = json.loads(Path(known.config).read_text())
        if not isinstance(payload, dict):
            raise SystemExit(f"config file {known.config} must hold a JSON object")
        renamed = {key.replace("-", "_"): value for key, value in payload.items()}
        valid = {action.dest for action in parser._actions}
        unknown = set(renamed) - valid
        if unknown:
            raise SystemExit(f"config file {known.config}: unknown keys {sorted(unknown)}")
        parser.set_defaults(**renamed)
    return parser.parse_args(argv, namespace)


def _cmd_bench(argv) -> int:
    parser = argparse.ArgumentParser(prog="agto bench", description="Run a benchmark campaign")
    parser.add_argument("--config", default=None, help="JSON file with flag defaults")
    parser.add_argument("--functions", type=_parse_functions, default=benchmarks.FUNCTION_IDS,
                        help="'all', comma list, or range like F1..F7")
    parser.add_argument("--algo", type=_parse_algorithms, default=ALGORITHMS,
                        help="comma list from: " + ",".join(ALGORITHMS))
    parser.add_argument("--runs", type=int, default=30)
    parser.add_argument("--pop", type=int, default=30)
    parser.add_argument("--max-evals", type=int, default=15_000)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--out", required=True)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--no-obl", action="store_true",
                        help="disable opposition-based initialization in the agto variant")
    parser.add_argument("--no-qrg", action="store_true",
                        help="disable the rotation-gate mutation in the agto variant")
    args = _apply_config_file(parser, argv, None)

    cfg = ExperimentConfig(
        output_dir=Path(args.out),
        functions=tuple(args.functions),
        algorithms=tuple(args.algo),
        runs=args.runs,
        pop_size=args.pop,
        max_evals=args.max_evals,
        base_seed=args.seed,
        workers=args.workers,
        disable_obl=args.no_obl,
        disable_qrg=args.no_qrg,
    )
    run_campaign(cfg)
    return 0


def _cmd_report(argv) -> int:
    parser = argparse.ArgumentParser(prog="agto report", description="Summarize a campaign")
    parser.add_argument("--config", default=None, help="JSON file with flag defaults")
    parser.add_argument("--in", dest="input_dir", required=True)
    args = _apply_config_file(parser, argv, None)
    report(args.input_dir)
    return 0


def _cmd_hpo(argv) -> int:
    parser = argparse.ArgumentParser(prog="agto hpo", description="Run a tuning session")
    parser.add_argument("--config", default=None, help="JSON file with flag defaults")
    parser.add_argument("--evaluator-cmd", default=None,
                        help="external evaluator command line; omitted = built-in surrogate")
    parser.add_argument("--budget", type=int, default=2000)
    parser.add_argument("--pop", type=int, default=20)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT)
    parser.add_argument("--out", required=True)
    args = _apply_config_file(parser, argv, None)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = OptimizerConfig(pop_size=args.pop, max_evals=args.budget, seed=args.seed)
    space = HyperparameterSpace()
    if args.evaluator_cmd:
        evaluator = SubprocessEvaluator(args.evaluator_cmd, timeout=args.timeout)
    else:
        evaluator = SurrogateEvaluator()
    try:
        best, history = run_hpo(space, evaluator, cfg)
    finally:
        evaluator.close()

    lines = ["trial_id,neurons,learning_rate,batch_size,epochs,activation,fitness,wall_time"]
    for record in history:
        p = record.params
        fitness = "inf" if math.isinf(record.fitness) else repr(record.fitness)
        lines.append(
            f"{record.trial_id},{p.neurons},{p.learning_rate!r},{p.batch_size},"
            f"{p.epochs},{p.activation},{fitness},{record.wall_time:.6f}"
        )
    (out / "trials.csv").write_text("\n".join(lines) + "\n")
    best_payload = {
        "trial_id": best.trial_id,
        "neurons": best.params.neurons,
        "learning_rate": best.params.learning_rate,
        "batch_size": best.params.batch_size,
        "epochs": best.params.epochs,
        "activation": best.params.activation,
        "fitness": best.fitness,
    }
    (out / "best.json").write_text(json.dumps(best_payload, indent=2) + "\n")
    print(
        f"best trial {best.trial_id}: fitness={best.fitness!r} "
        f"neurons={best.params.neurons} learning_rate={best.params.learning_rate:.6g} "
        f"batch_size={best.params.batch_size} epochs={best.params.epochs} "
        f"activation={best.params.activation} ({len(history)} trials)"
    )
    return 0


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    commands = {"bench": _cmd_bench, "report": _cmd_report, "hpo": _cmd_hpo}
    if not argv or argv[0] in ("-h", "--help"):
        print("usage: agto {bench,report,hpo} [options]  (see 'agto <command> --help')")
        return 0 if argv else 2
    command = commands.get(argv[0])
    if command is None:
        print(f"unknown command {argv[0]!r}; expected one of {sorted(commands)}", file=sys.stderr)
        return 2
    return command(argv[1:])


if __name__ == "__main__":
    sys.exit(main())

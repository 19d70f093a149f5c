"""Command-line entry point: ``qcbm <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path


from . import runner
from ._io import atomic_write_text
from .circuit import CircuitTemplate
from .datasets import THERMAL_TEMPERATURES, read_dataset
from .entanglement import write_surface_csv
from .qbas import score_shots
from .bootstrap import bootstrap_mean_ci


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, help="base seed (overrides the config)")
    p.add_argument("--shots", type=int, help="measurements per cost evaluation")
    p.add_argument("--iterations", type=int, help="PSO iterations per restart")
    p.add_argument("--restarts", type=int, help="independent random initializations")
    p.add_argument("--out", help="output directory")


def _load_config(args) -> runner.ExperimentConfig:
    cfg = runner.ExperimentConfig.load(args.config)
    for key in ("seed", "shots", "iterations", "restarts"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    if getattr(args, "out", None):
        cfg.output_dir = args.out
    cfg.validate()
    return cfg


def _print(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def cmd_train(args) -> int:
    cfg = _load_config(args)
    if not cfg.output_dir:
        cfg.output_dir = "runs/" + cfg.hash()
    records = runner.run_ddqcl(cfg)
    best = runner.best_record(records)
    _print({
        "output_dir": cfg.output_dir,
        "config_hash": cfg.hash(),
        "best_restart": best.restart,
        "best_cost": best.best_cost,
        "final_kl_nats": [r.final_kl for r in records],
    })
    return 0


def _bench_out(bench: runner.QbasBenchmark, out) -> None:
    d = bench.to_dict()
    if out:
        atomic_write_text(Path(out) / "qbas.json", json.dumps(d, indent=2, sort_keys=True) + "\n")
    _print(d)


def cmd_qbas(args) -> int:
    src = Path(args.source)
    if src.suffix != ".json":
        return _score_file(src, args.n, args.m, args.out, args.seed or 0)
    raw = json.loads(src.read_text())
    if "records" in raw and "template" in raw:
        # a summary.json written by `train`
        rec = min(raw["records"], key=lambda r: r["best_cost"])
        template = CircuitTemplate.from_dict(raw["template"])
        bench = runner.qbas_benchmark(template, rec["best_params"], args.n, args.m, rng_seed=args.seed or 0)
        bench.restart = rec["restart"]
    else:
        cfg = _load_config(args)
        records = runner.run_ddqcl(cfg)
        bench = runner.run_qbas_benchmark(cfg, records)
    _bench_out(bench, args.out)
    return 0


def _score_file(path: Path, n: int, m: int, out, seed: int) -> int:
    shots, num_qubits, _ = read_dataset(path)
    if num_qubits != n * m:
        raise runner.ConfigError(f"{path}: {num_qubits}-bit shots do not match BAS({n},{m})")
    report = score_shots(shots, n, m)
    summary = bootstrap_mean_ci(report.scores, rng_seed=seed) if len(report.scores) >= 2 else None
    bench = {"report": report.to_dict(), "bootstrap": summary.to_dict() if summary else None}
    if out:
        atomic_write_text(Path(out) / "qbas.json", json.dumps(bench, indent=2, sort_keys=True) + "\n")
    _print(bench)
    return 0


def cmd_score_shots(args) -> int:
    return _score_file(Path(args.shots_file), args.n, args.m, args.out, args.seed or 0)


def cmd_thermal(args) -> int:
    result = runner.run_thermal_suite(
        sizes=args.sizes,
        temperatures=args.temperatures,
        depths=args.depths,
        instances=args.instances,
        iterations=args.iterations or 50,
        shots=args.shots or runner.DEFAULT_SHOTS,
        seed=args.seed or 0,
        coupling_scale=args.coupling_scale,
        output_dir=args.out or "runs/thermal",
    )
    _print({
        f"N={c.num_qubits} T={c.temperature:.4g} L={c.num_layers}": c.median_final_kl
        for c in result.cells
    })
    return 0


def cmd_ghz(args) -> int:
    report = runner.verify_ghz_recipes(args.max_qubits)
    failed = [n for n, r in report.items() if not r["passed"]]
    for n, r in report.items():
        print(f"N={n:2d} {'PASS' if r['passed'] else 'FAIL'} max_error={r['max_error']:.2e}")
    return 1 if failed else 0


def cmd_surface(args) -> int:
    path = write_surface_csv(args.out, args.grid)
    print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcbm", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train circuits from a JSON config")
    p.add_argument("config")
    _common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("qbas", help="qBAS score from a config, a train summary.json, or a shot file")
    p.add_argument("source")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    _common(p)
    p.set_defaults(func=cmd_qbas, config=None)

    p = sub.add_parser("score-shots", help="qBAS score of an external shot file")
    p.add_argument("shots_file")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    _common(p)
    p.set_defaults(func=cmd_score_shots)

    p = sub.add_parser("thermal-suite", help="depth/temperature sweep on random Ising instances")
    p.add_argument("--sizes", type=int, nargs="+", default=[5, 6])
    p.add_argument("--temperatures", type=float, nargs="+", default=list(THERMAL_TEMPERATURES))
    p.add_argument("--depths", type=int, nargs="+", default=[1, 2, 3])
    p.add_argument("--instances", type=int, default=25)
    p.add_argument("--coupling-scale", choices=["sqrt_n", "inv_sqrt_n"], default="inv_sqrt_n")
    _common(p)
    p.set_defaults(func=cmd_thermal)

    p = sub.add_parser("ghz-verify", help="check the cat-state recipes")
    p.add_argument("--max-qubits", type=int, default=12)
    p.set_defaults(func=cmd_ghz)

    p = sub.add_parser("entropy-surface", help="write the BAS(2,2) entropy surface as CSV")
    p.add_argument("--grid", type=int, default=32)
    p.add_argument("--out", default="entropy_surface.csv")
    p.set_defaults(func=cmd_surface)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "config", None) is None and args.command == "qbas":
        args.config = args.source
    try:
        return args.func(args)
    except (runner.ConfigError, ValueError, FileNotFoundError) as exc:
        print(f"qcbm {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

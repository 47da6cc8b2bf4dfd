"""Command-line entry point.

Errors are reported on stderr as a single line ``ksort: error[<code>]: <message>``
with exit status 1 (2 for usage errors).
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import __version__
from .arena import ArenaConfig, add_model, leaderboard
from .errors import ConfigError, KSortError
from .io import dump_snapshot, export_leaderboard, load_snapshot, parse_vote_log, replay
from .sim import bench as bench_mod
from .sim.harness import SimConfig, run_experiment


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse prints multi-line usage otherwise
        raise UsageError(message)


def _default_seed() -> int | None:
    raw = os.environ.get("KSORT_SEED")
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"KSORT_SEED must be an integer, got {raw!r}") from None


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise KSortError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: Path, data: bytes | str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(data, str):
        data = data.encode("utf-8")
    path.write_bytes(data)


def _arena_overrides(args, cfg: ArenaConfig) -> ArenaConfig:
    changes = {}
    for flag in ("k", "eta", "alpha"):
        val = getattr(args, flag, None)
        if val is not None:
            changes[flag] = val
    return replace(cfg, **changes) if changes else cfg


def cmd_simulate(args) -> int:
    raw = json.loads(_read_text(args.config)) if args.config else {}
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    seed = args.seed if args.seed is not None else _default_seed()
    if seed is not None:
        raw["seed"] = seed
    for flag, key in (("k", "k"), ("noise", "noise_p"), ("eta", "eta"), ("alpha", "alpha")):
        val = getattr(args, flag)
        if val is not None:
            raw[key] = val
    try:
        cfg = SimConfig(**raw)
    except TypeError as exc:
        raise ConfigError(f"invalid simulation config: {exc}") from None
    curve = run_experiment(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "curve.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["battle_index", "mse"])
        for t, v in enumerate(curve.mse_per_battle):
            w.writerow([t, repr(v)])
    summary = {
        "config": cfg.to_dict(),
        "converged_at": curve.converged_at,
        "battles_to_converge": curve.battles_to_converge,
        "battles_run": curve.battles_run,
        "pairwise_equivalent": curve.pairwise_equivalent,
    }
    if curve.tracked_position:
        summary["base_battles"] = curve.base_battles
        with open(out / "tracked_position.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["battle_index", "position"])
            for t, p in enumerate(curve.tracked_position):
                w.writerow([t, p])
    _write(out / "summary.json", json.dumps(summary, indent=2) + "\n")
    # kept out of summary.json so repeated runs stay byte-identical
    _write(out / "timing.json", json.dumps({"wall_time": curve.wall_time}) + "\n")
    return 0


def _load_state(args):
    if args.snapshot:
        return load_snapshot(_read_text(args.snapshot))
    return None


def cmd_replay(args) -> int:
    state = _load_state(args)
    cfg = _arena_overrides(args, ArenaConfig(tiebreak_seed=args.seed or _default_seed() or 0))
    if state is not None and any(getattr(args, f) is not None for f in ("k", "eta", "alpha")):
        state.cfg = _arena_overrides(args, state.cfg)
    if args.log:
        with open(args.log, encoding="utf-8") as fh:
            records = parse_vote_log(fh)
    else:
        records = []
    final = replay(records, state, cfg)
    board = export_leaderboard(leaderboard(final), args.format)
    if args.out:
        out = Path(args.out)
        _write(out / "snapshot.json", dump_snapshot(final))
        _write(out / f"leaderboard.{args.format}", board)
    else:
        sys.stdout.buffer.write(board)
    return 0


def cmd_leaderboard(args) -> int:
    state = load_snapshot(_read_text(args.snapshot))
    if args.eta is not None:
        state.cfg = replace(state.cfg, eta=args.eta)
    board = export_leaderboard(leaderboard(state), args.format)
    if args.out:
        _write(Path(args.out) / f"leaderboard.{args.format}", board)
    else:
        sys.stdout.buffer.write(board)
    return 0


def cmd_add_model(args) -> int:
    state = load_snapshot(_read_text(args.snapshot))
    text = dump_snapshot(add_model(state, args.name))
    if args.out:
        _write(Path(args.out) / "snapshot.json", text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_bench(args) -> int:
    suites = bench_mod.ALL_SUITES if args.suite == "all" else (args.suite,)
    seeds = range(args.seeds)
    start = time.perf_counter()
    report = bench_mod.bench(suites, Path(args.out), seeds=seeds, jobs=args.jobs)
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    print(f"bench finished in {time.perf_counter() - start:.1f}s", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ksort", description="K-wise rating, matchmaking and convergence experiments")
    p.add_argument("--version", action="version", version=f"ksort {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="run one synthetic experiment")
    s.add_argument("--config", help="JSON file with SimConfig fields")
    s.add_argument("--seed", type=int)
    s.add_argument("--out", default="sim-out")
    s.add_argument("--k", type=int)
    s.add_argument("--noise", type=float)
    s.add_argument("--eta", type=float)
    s.add_argument("--alpha", type=float)
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("replay", help="apply a JSONL vote log to a snapshot or fresh arena")
    r.add_argument("--log")
    r.add_argument("--snapshot")
    r.add_argument("--out")
    r.add_argument("--format", choices=("csv", "json"), default="csv")
    r.add_argument("--seed", type=int, help="tie-break seed for a fresh arena")
    r.add_argument("--k", type=int)
    r.add_argument("--eta", type=float)
    r.add_argument("--alpha", type=float)
    r.set_defaults(func=cmd_replay)

    lb = sub.add_parser("leaderboard", help="export the leaderboard of a snapshot")
    lb.add_argument("--snapshot", required=True)
    lb.add_argument("--format", choices=("csv", "json"), default="csv")
    lb.add_argument("--out")
    lb.add_argument("--eta", type=float)
    lb.set_defaults(func=cmd_leaderboard)

    a = sub.add_parser("add-model", help="register a new model in a snapshot")
    a.add_argument("--snapshot", required=True)
    a.add_argument("--name", required=True)
    a.add_argument("--out")
    a.set_defaults(func=cmd_add_model)

    b = sub.add_parser("bench", help="run the experiment matrix")
    b.add_argument("--suite", choices=(*bench_mod.ALL_SUITES, "all"), default="all")
    b.add_argument("--out", default="bench-out")
    b.add_argument("--seeds", type=int, default=10)
    b.add_argument("--jobs", type=int, default=1)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"ksort: error[usage]: {exc}", file=sys.stderr)
        return 2
    except KSortError as exc:
        msg = str(exc).replace("\n", " ")
        print(f"ksort: error[{exc.code}]: {msg}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"ksort: error[io]: {str(exc).replace(chr(10), ' ')}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``ap3 {gen,solve,sample,verify,bench}``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bench
from .core import ParseError, evaluate, format_instance, format_solution, random_instance, \
    read_instance, read_solution
from .muscle import DEFAULT_SAMPLES, format_muscle, generate_am, muscle_stats
from .oracle import OracleSizeError, brute_force
from .pipeline import DEFAULT_WIDTH, TIMING_KEYS, solve_ambs, solve_pure_bs, solve_sampling_only

SEED_ENV = "AP3_SEED"


class UsageError(ValueError):
    pass


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return value


def _load(path: str):
    with open(path, "rb") as fh:
        return read_instance(fh)


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_gen(args) -> int:
    if args.lo > args.hi:
        raise UsageError(f"empty cost range: --lo {args.lo} > --hi {args.hi}")
    inst = random_instance(args.n, args.lo, args.hi, args.seed)
    _emit(format_instance(inst), args.out)
    return 0


def solve_record(result, n: int) -> dict:
    meta = result.metadata
    record = {
        "algorithm": meta.get("algorithm", ""),
        "n": n,
        "cost": result.cost,
        "p": result.assignment.p.tolist(),
        "q": result.assignment.q.tolist(),
        "parameters": {key: int(meta[key]) for key in ("k", "width", "seed") if key in meta},
        "seconds": {key: float(meta[key]) for key in TIMING_KEYS if key in meta},
    }
    if "muscle_total" in meta:
        record["muscle"] = {
            "total": int(meta["muscle_total"]),
            "ratio": float(meta["muscle_ratio"]),
            "per_layer": [int(x) for x in meta["muscle_per_layer"].split()],
        }
        record["sample_cost"] = int(meta["sample_cost"])
    if "beam_outcome" in meta:
        record["beam_outcome"] = meta["beam_outcome"]
    if not record["seconds"]:
        record["seconds"] = {"total_seconds": round(result.elapsed, 3)}
    return record


def cmd_solve(args) -> int:
    inst = _load(args.instance)
    if args.algo == "ambs":
        res = solve_ambs(inst, args.k, args.width, args.seed, args.workers)
    elif args.algo == "beam":
        res = solve_pure_bs(inst, args.width, args.seed, k=args.k, workers=args.workers)
    elif args.algo == "sample":
        res = solve_sampling_only(inst, args.k, args.seed, args.workers)
    else:
        res = brute_force(inst)
    record = solve_record(res, inst.n)
    if args.format == "json":
        text = json.dumps(record, indent=2) + "\n"
    else:
        lines = [format_solution(res).rstrip("\n"), f"# algorithm: {record['algorithm']}"]
        for key, val in record["parameters"].items():
            lines.append(f"# {key}: {val}")
        for key, val in record["seconds"].items():
            lines.append(f"# {key}: {val:.3f}")
        if "muscle" in record:
            lines.append(f"# sample_cost: {record['sample_cost']}")
            lines.append(f"# muscle_total: {record['muscle']['total']}")
            lines.append(f"# muscle_ratio: {record['muscle']['ratio']:.6f}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def cmd_sample(args) -> int:
    inst = _load(args.instance)
    m = generate_am(inst, args.k, args.seed, args.workers)
    _emit(format_muscle(m), args.out)
    stats = muscle_stats(m)
    print(f"best sampled cost {m.upper.cost}; {stats.total} triples "
          f"({stats.ratio:.4%} of n^3)", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    inst = _load(args.instance)
    res = brute_force(inst)
    if args.solution is None:
        _emit(format_solution(res), None)
        return 0
    with open(args.solution, "rb") as fh:
        a, claimed = read_solution(fh)
    actual = evaluate(inst, a)
    ok = actual == claimed == res.cost
    print(f"claimed {claimed}, evaluated {actual}, optimum {res.cost}: "
          f"{'optimal' if ok else 'NOT optimal'}")
    return 0 if ok else 1


def cmd_bench(args) -> int:
    suite = bench.load_suite(args.suite)
    if args.out in (None, "-"):
        ok = bench.run_suite(suite, args.reps, args.seed, sys.stdout, jobs=args.jobs)
    else:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            ok = bench.run_suite(suite, args.reps, args.seed, fh, jobs=args.jobs)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ap3", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def seed_arg(p):
        p.add_argument("--seed", type=int, default=_default_seed(),
                       help=f"master seed (default ${SEED_ENV} or 0)")

    def workers_arg(p):
        p.add_argument("--workers", type=_positive, default=None,
                       help="processes for the sampling phase")

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("-n", type=_positive, required=True)
    p.add_argument("--lo", type=int, default=0)
    p.add_argument("--hi", type=int, default=100)
    seed_arg(p)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("instance")
    p.add_argument("--algo", choices=bench.ALGORITHMS, default="ambs")
    p.add_argument("-k", "--k", type=_positive, default=DEFAULT_SAMPLES)
    p.add_argument("--width", type=_positive, default=DEFAULT_WIDTH)
    seed_arg(p)
    workers_arg(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sample", help="dump the approximate muscle")
    p.add_argument("instance")
    p.add_argument("-k", "--k", type=_positive, default=DEFAULT_SAMPLES)
    seed_arg(p)
    workers_arg(p)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="exact optimum by enumeration (n <= 7)")
    p.add_argument("instance")
    p.add_argument("--solution", help="solution file to check for optimality")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="run a benchmark suite into a CSV table")
    p.add_argument("suite")
    p.add_argument("--reps", type=_positive, default=10)
    seed_arg(p)
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except OracleSizeError as exc:
        print(f"ap3: {exc}", file=sys.stderr)
        return 3
    except (OSError, ParseError, bench.SuiteError) as exc:
        print(f"ap3: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Benchmark harness: run solvers over a suite and aggregate into a CSV table.

Suite files hold one directive per line (``#`` starts a comment)::

    instance data/foo.dat
    generate n=4 lo=0 hi=100 seed=1 count=5
    algorithm ambs k=1000 width=300
    algorithm sample k=1000
"""
from __future__ import annotations

import csv
import shlex
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Callable

import numpy as np

from .core import Ap3Instance, random_instance, read_instance
from .muscle import DEFAULT_SAMPLES
from .oracle import brute_force
from .pipeline import DEFAULT_WIDTH, solve_ambs, solve_pure_bs, solve_sampling_only

ALGORITHMS = ("ambs", "beam", "sample", "oracle")
CSV_COLUMNS = ["instance", "n", "algorithm", "k", "width", "reps",
               "mean_cost", "best_cost", "mean_seconds"]


class SuiteError(ValueError):
    pass


@dataclass
class AlgoSpec:
    name: str
    k: int = DEFAULT_SAMPLES
    width: int = DEFAULT_WIDTH


@dataclass
class InstanceSpec:
    name: str
    path: Path | None = None
    gen: tuple[int, int, int, int] | None = None  # n, lo, hi, seed

    def load(self) -> Ap3Instance:
        if self.path is not None:
            with open(self.path, "rb") as fh:
                return read_instance(fh)
        return random_instance(*self.gen)


@dataclass
class Suite:
    instances: list[InstanceSpec] = field(default_factory=list)
    algorithms: list[AlgoSpec] = field(default_factory=list)


def _kv(tokens: list[str], lineno: int) -> dict[str, int]:
    out = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep:
            raise SuiteError(f"line {lineno}: expected key=value, got {tok!r}")
        try:
            out[key] = int(val)
        except ValueError:
            raise SuiteError(f"line {lineno}: {key} must be an integer") from None
    return out


def parse_suite(text: str, base: Path | None = None) -> Suite:
    suite = Suite()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = shlex.split(line)
        if head == "instance":
            if len(rest) != 1:
                raise SuiteError(f"line {lineno}: instance takes one path")
            path = Path(rest[0])
            if base is not None and not path.is_absolute():
                path = base / path
            suite.instances.append(InstanceSpec(path.stem, path=path))
        elif head == "generate":
            kv = _kv(rest, lineno)
            try:
                n, lo, hi, seed = kv["n"], kv.get("lo", 0), kv.get("hi", 100), kv["seed"]
            except KeyError as exc:
                raise SuiteError(f"line {lineno}: generate needs {exc.args[0]}=") from None
            for c in range(kv.get("count", 1)):
                suite.instances.append(
                    InstanceSpec(f"gen_n{n}_s{seed + c}", gen=(n, lo, hi, seed + c)))
        elif head == "algorithm":
            if not rest or rest[0] not in ALGORITHMS:
                raise SuiteError(f"line {lineno}: unknown algorithm {rest[:1]}")
            kv = _kv(rest[1:], lineno)
            suite.algorithms.append(AlgoSpec(rest[0], kv.get("k", DEFAULT_SAMPLES),
                                             kv.get("width", DEFAULT_WIDTH)))
        else:
            raise SuiteError(f"line {lineno}: unknown directive {head!r}")
    return suite


def load_suite(path: str | Path) -> Suite:
    path = Path(path)
    return parse_suite(path.read_text(encoding="utf-8"), base=path.parent)


def rep_seed(master: int, instance_index: int, rep: int) -> int:
    return int(np.random.SeedSequence([master, instance_index, rep]).generate_state(1)[0])


def run_one(instance: Ap3Instance, algo: AlgoSpec, seed: int):
    if algo.name == "ambs":
        return solve_ambs(instance, algo.k, algo.width, seed)
    if algo.name == "beam":
        return solve_pure_bs(instance, algo.width, seed, k=algo.k)
    if algo.name == "sample":
        return solve_sampling_only(instance, algo.k, seed)
    if algo.name == "oracle":
        return brute_force(instance)
    raise SuiteError(f"unknown algorithm {algo.name!r}")


def _task(name: str, index: int, instance: Ap3Instance, algo: AlgoSpec,
          reps: int, master: int) -> dict:
    costs, secs = [], []
    for r in range(reps):
        res = run_one(instance, algo, rep_seed(master, index, r))
        costs.append(res.cost)
        secs.append(res.elapsed)
    return {
        "instance": name,
        "n": instance.n,
        "algorithm": algo.name,
        "k": algo.k if algo.name != "oracle" else "",
        "width": algo.width if algo.name in ("ambs", "beam") else "",
        "reps": reps,
        "mean_cost": f"{sum(costs) / reps:.4f}",
        "best_cost": min(costs),
        "mean_seconds": f"{sum(secs) / reps:.3f}",
    }


def run_suite(suite: Suite, reps: int, master_seed: int, sink: IO,
              jobs: int = 1, on_row: Callable[[dict], None] | None = None) -> bool:
    """Write the CSV table to ``sink``; returns False if an instance failed.

    Rows are written in suite order. On the first instance that cannot be
    loaded, rows already computed are flushed and an error row ends the table.
    """
    if reps < 1:
        raise ValueError("reps must be at least 1")
    writer = csv.DictWriter(sink, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()

    tasks, error = [], None
    for idx, spec in enumerate(suite.instances):
        try:
            inst = spec.load()
        except (OSError, ValueError) as exc:
            error = {"instance": spec.name, "algorithm": f"error: {exc}"}
            break
        for algo in suite.algorithms:
            tasks.append((spec.name, idx, inst, algo, reps, master_seed))

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = pool.map(_task, *zip(*tasks))
            for row in rows:
                writer.writerow(row)
                if on_row:
                    on_row(row)
    else:
        for t in tasks:
            row = _task(*t)
            writer.writerow(row)
            sink.flush()
            if on_row:
                on_row(row)
    if error is not None:
        writer.writerow(error)
        sink.flush()
        return False
    return True

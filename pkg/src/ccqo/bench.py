"""Benchmark runs: one record per (instance, algorithm), CSV output and reports."""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

from . import instances, metrics
from .bb import solve_bb
from .config import SolverConfig
from .errors import ZeroBest
from .ibb import solve
from .oracle import MAX_SUPPORTS, brute_force_oracle
from .sfs import run_sfs

ALGOS = ("ibb", "bb", "sfs", "oracle")
CSV_COLUMNS = ("label", "algo", "value", "gap_pct", "elapsed_s", "lb_calls", "nodes",
               "stop_reason", "seed")


@dataclass
class RunRecord:
    label: str
    algo: str
    value: float
    elapsed: float
    lb_calls: int
    nodes_created: int
    stop_reason: str
    seed: int
    gap_pct: Optional[float] = None
    support: tuple = ()

    def to_json(self) -> str:
        d = asdict(self)
        d["support"] = list(self.support)
        return json.dumps(d)

    def csv_row(self) -> dict:
        gap = "NA" if self.gap_pct is None else repr(self.gap_pct)
        return {"label": self.label, "algo": self.algo, "value": repr(self.value),
                "gap_pct": gap, "elapsed_s": repr(self.elapsed), "lb_calls": self.lb_calls,
                "nodes": self.nodes_created, "stop_reason": self.stop_reason, "seed": self.seed}

    @classmethod
    def from_csv_row(cls, row: dict) -> "RunRecord":
        gap = None if row["gap_pct"] in ("", "NA") else float(row["gap_pct"])
        return cls(row["label"], row["algo"], float(row["value"]), float(row["elapsed_s"]),
                   int(row["lb_calls"]), int(row["nodes"]), row["stop_reason"],
                   int(row["seed"]), gap)


def run_algorithm(inst: instances.RegressionInstance, algo: str, k: int,
                  cfg: SolverConfig = SolverConfig(), label: Optional[str] = None) -> RunRecord:
    """Run one algorithm on one instance; the clock covers the solve call only."""
    obj, box = inst.objective(), inst.box()
    label = label or f"{inst.label}/k{k}"
    t0 = time.perf_counter()
    if algo == "ibb":
        res = solve(obj, box, k, cfg)
        return RunRecord(label, algo, res.value, res.elapsed, res.lb_calls, res.nodes_created,
                         res.stop_reason.value, inst.seed, support=res.support)
    if algo == "bb":
        res = solve_bb(obj, box, k, cfg)
        return RunRecord(label, algo, res.value, res.elapsed, res.lb_calls, res.nodes_created,
                         res.stop_reason.value, inst.seed, support=res.support)
    if algo == "sfs":
        res = run_sfs(obj, box, k, tol=cfg.qp_tol)
        return RunRecord(label, algo, res.value, time.perf_counter() - t0, res.qp_calls, 0,
                         "Converged", inst.seed, support=res.support)
    if algo == "oracle":
        res = brute_force_oracle(obj, box, k, cfg.qp_tol)
        return RunRecord(label, algo, res.value, time.perf_counter() - t0, res.n_supports, 0,
                         "Exhausted", inst.seed, support=res.support)
    raise ValueError(f"unknown algorithm {algo!r}; choose from {ALGOS}")


def fill_gaps(records: List[RunRecord]) -> None:
    """Set ``gap_pct`` against the best value per label (NA when that best is 0)."""
    best: Dict[str, float] = {}
    for r in records:
        best[r.label] = min(best.get(r.label, math.inf), r.value)
    for r in records:
        try:
            r.gap_pct = metrics.relative_gap_percent(r.value, best[r.label])
        except ZeroBest:
            r.gap_pct = None


@dataclass(frozen=True)
class BenchTask:
    shape: str
    case: str
    example_id: int
    snr: float
    seed: int
    k0: int
    ks: tuple
    algos: tuple
    cfg: SolverConfig
    oracle_max: int


def _run_task(task: BenchTask) -> List[RunRecord]:
    inst = instances.generate(task.shape, task.case, task.example_id, task.snr, task.seed,
                              k0=task.k0)
    out = []
    for k in task.ks:
        if not 1 <= k < inst.p:
            continue
        for algo in task.algos:
            out.append(run_algorithm(inst, algo, k, task.cfg))
        if "oracle" not in task.algos and math.comb(inst.p, k) <= min(task.oracle_max, MAX_SUPPORTS):
            out.append(run_algorithm(inst, "oracle", k, task.cfg))
    return out


def run_bench(tasks: Sequence[BenchTask], workers: int = 1) -> List[RunRecord]:
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(_run_task, tasks))
    else:
        batches = [_run_task(t) for t in tasks]
    records = [r for batch in batches for r in batch]
    records.sort(key=lambda r: (r.label, r.algo))
    fill_gaps(records)
    return records


def write_runs(records: Iterable[RunRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        w.writeheader()
        for r in records:
            w.writerow(r.csv_row())


def read_runs(path) -> List[RunRecord]:
    path = Path(path)
    if path.is_dir():
        path = path / "runs.csv"
    with open(path, newline="") as fh:
        return [RunRecord.from_csv_row(row) for row in csv.DictReader(fh)]


def report(records: Sequence[RunRecord], metric: str, include_oracle: bool = False):
    """Performance profile and per-algorithm box plots for ``metric`` ('gap' or 'time').

    The profile for 'gap' uses the objective values themselves as the measure
    (ratio to the best value on each problem); box plots use the gap in percent.
    """
    if metric not in ("gap", "time"):
        raise ValueError("metric must be 'gap' or 'time'")
    recs = [r for r in records if include_oracle or r.algo != "oracle"]
    table: Dict[str, Dict[str, float]] = {}
    samples: Dict[str, List[float]] = {}
    for r in recs:
        t = r.value if metric == "gap" else r.elapsed
        table.setdefault(r.label, {})[r.algo] = t
        s = r.gap_pct if metric == "gap" else r.elapsed
        if s is not None:
            samples.setdefault(r.algo, []).append(s)
    profile = metrics.performance_profile(table)
    boxes = {a: metrics.boxplot_stats(v) for a, v in sorted(samples.items())}
    return profile, boxes


def write_profile(profile, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["solver", "tau", "fraction"])
        for solver, points in profile.items():
            for pt in points:
                w.writerow([solver, repr(pt.tau), repr(pt.fraction)])


def write_boxplot(boxes, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["solver", "q25", "median", "q75", "lower_extreme", "upper_extreme",
                    "n_outliers", "outliers"])
        for solver, b in boxes.items():
            w.writerow([solver, b.q25, b.median, b.q75, b.lower_extreme, b.upper_extreme,
                        len(b.outliers), ";".join(repr(v) for v in b.outliers)])

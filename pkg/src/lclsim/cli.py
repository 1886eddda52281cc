"""Command-line experiment runner.

Every subcommand reads an optional YAML config, applies flag overrides,
writes CSV data and a JSON summary into ``--out-dir`` and exits with 0 (ok),
1 (a correctness claim was falsified) or 2 (error).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import algorithms as alg
from .bridge import BridgeInfeasible, simulate_borel
from .config import ConfigError, ExperimentConfig, split_named
from .engine import (
    LocalAlgorithm,
    RandomPayload,
    assign_ids,
    log_star,
    random_id_length,
    run,
    wilson_interval,
)
from .graph import Graph, GraphError, make_graph, save_graph
from .lcl import LclProblem, check, problem_from_name
from .rotation import (
    NearRationalError,
    check_rotation,
    falsification_sweep,
    grid_conflicts,
    quadratic_irrationals,
    rotation_coloring,
)
from .shift import (
    THREE_COLORING,
    AperiodicityError,
    RadiusCapError,
    certify_batch,
    check_window_rule,
    sample_many,
    window_rule_from_algorithm,
)

OK, FALSIFIED, ERROR = 0, 1, 2

TAGS = {
    "linial": "deterministic (d+1)-coloring in O(log* n) rounds",
    "luby": "randomized MIS within the 1/n failure budget",
    "color-priority-mis": "deterministic MIS from a (d+1)-coloring",
    "adversary": "no o(n)-round 2-coloring of paths (identifier swap)",
    "bridge": "fast deterministic algorithm gives a Borel solution (pseudo-identifiers)",
    "shift": "o(log n)-round algorithm on Z gives a continuous solution on the shift graph",
    "rotation": "three-label interval coloring of the irrational rotation graph",
    "run": "LOCAL execution of a view function",
}

RUN_FIELDS = ["graph", "param", "value", "n", "algorithm", "n_nominal", "T", "trial", "seed", "violations", "rounds", "id_collision"]


def _write_csv(path: Path, header: list[str], rows: list[dict[str, Any]]) -> None:
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=header, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow(row)


def _write_json(path: Path, data: dict[str, Any]) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True, default=_jsonable) + "\n")


def _jsonable(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (tuple, set)):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _graph(cfg: ExperimentConfig, override: dict[str, Any] | None = None) -> tuple[str, Graph]:
    name, params = split_named({**cfg.graph, **(override or {})})
    return name, make_graph(name, **params)


def _algorithm(cfg: ExperimentConfig) -> LocalAlgorithm:
    name, params = split_named(cfg.algorithm)
    return alg.algorithm_from_name(name, **params)


def _problem(cfg: ExperimentConfig) -> LclProblem:
    name, params = split_named(cfg.problem)
    return problem_from_name(name, **params)


def _tag(cfg: ExperimentConfig) -> str:
    if cfg.kind in ("run", "sweep"):
        return TAGS.get(cfg.algorithm["name"], TAGS["run"])
    return TAGS[cfg.kind]


# run / sweep


def _one_trial(args) -> dict[str, Any]:
    G, A, problem, n_nominal, seed, trial, id_source = args
    collision = ""
    rounds = A.radius(n_nominal)
    if isinstance(A, alg.LubyMIS):
        try:
            labels, rounds = alg.luby_mis(G, seed, trial)
        except alg.LubyCapError:
            return {"trial": trial, "violations": G.n, "rounds": rounds, "id_collision": ""}
    elif A.mode == "randomized":
        labels = run(G, A, RandomPayload(seed, trial, G.n), n_nominal).labels
    elif not A.uses_ids:
        labels = run(G, A, None, n_nominal).labels
    else:
        ids = assign_ids(G, n_nominal, id_source, seed, trial)
        if id_source == "random":
            collision = int(ids.has_collision())
        labels = run(G, A, ids, n_nominal).labels
    return {"trial": trial, "violations": len(check(problem, G, labels)), "rounds": rounds, "id_collision": collision}


def _trials(G, A, problem, n_nominal, cfg: ExperimentConfig) -> list[dict[str, Any]]:
    repeat = A.mode == "randomized" or cfg.id_source == "random"
    count = cfg.trials if repeat else 1
    args = [(G, A, problem, n_nominal, cfg.seed, t, cfg.id_source) for t in range(count)]
    if cfg.jobs > 1 and count > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            return list(pool.map(_one_trial, args, chunksize=max(1, count // (4 * cfg.jobs))))
    return [_one_trial(a) for a in args]


def cmd_run(cfg: ExperimentConfig, out: Path) -> int:
    A = _algorithm(cfg)
    problem = _problem(cfg)
    if cfg.id_source == "random" and hasattr(A, "id_bits"):
        A.id_bits = random_id_length
    if cfg.kind == "sweep":
        param = cfg.sweep.get("param", "n")
        points = [(param, v) for v in cfg.sweep.get("values") or []]
    else:
        points = [("", None)]
    rows: list[dict[str, Any]] = []
    summary_points = []
    falsified = False
    for param, value in points:
        name, G = _graph(cfg, {param: value} if param else None)
        n_nominal = cfg.n_nominal or G.n
        T = A.radius(n_nominal)
        results = _trials(G, A, problem, n_nominal, cfg)
        for res in results:
            rows.append(
                {"graph": name, "param": param, "value": "" if value is None else value, "n": G.n,
                 "algorithm": A.name, "n_nominal": n_nominal, "T": T, "seed": cfg.seed, **res}
            )
        failures = sum(1 for r in results if r["violations"])
        collisions = sum(1 for r in results if r["id_collision"] == 1)
        lo, hi = wilson_interval(failures, len(results))
        point = {
            "n": G.n, "n_nominal": n_nominal, "T": T, "log_star": log_star(n_nominal),
            "trials": len(results), "failures": failures, "rate": failures / len(results),
            "wilson": [lo, hi], "id_collisions": collisions,
            "median_rounds": float(np.median([r["rounds"] for r in results])),
        }
        summary_points.append(point)
        if A.mode == "deterministic" and cfg.id_source == "sequential":
            falsified |= failures > 0
        else:
            falsified |= lo > 1 / n_nominal
    _write_csv(out / f"{cfg.kind}.csv", RUN_FIELDS, rows)
    summary = {
        "kind": cfg.kind, "tag": _tag(cfg), "algorithm": A.describe(), "problem": problem.name,
        "seed": cfg.seed, "points": summary_points, "verdict": "falsified" if falsified else "ok",
    }
    if cfg.kind == "sweep":
        summary["sweep"] = cfg.sweep
    _write_json(out / f"{cfg.kind}.json", summary)
    return FALSIFIED if falsified else OK


# other experiment kinds


def cmd_gen(cfg: ExperimentConfig, out: Path) -> int:
    name, G = _graph(cfg)
    save_graph(G, out / "graph.txt")
    _write_json(out / "graph.json", {"kind": "gen", "family": name, "params": cfg.graph, "n": G.n,
                                     "d": G.d, "edges": G.num_edges()})
    return OK


def cmd_adversary(cfg: ExperimentConfig, out: Path) -> int:
    A = _algorithm(cfg)
    n = int(cfg.graph.get("n", cfg.n_nominal or 0))
    summary: dict[str, Any] = {"kind": "adversary", "tag": _tag(cfg), "algorithm": A.name, "n": n}
    try:
        cert = alg.two_color_adversary(A, n)
    except alg.ConstructionInapplicable as exc:
        summary.update(status="inapplicable", reason=str(exc), verdict="ok")
        _write_json(out / "adversary.json", summary)
        return OK
    verified = alg.verify_certificate(A, cert)
    summary.update(status="certificate", verified=verified, certificate=cert.to_json(),
                   verdict="falsified" if verified else "unverified")
    _write_json(out / "adversary.json", summary)
    _write_json(out / "certificate.json", cert.to_json(with_ids=True))
    return FALSIFIED if verified else ERROR


def cmd_bridge(cfg: ExperimentConfig, out: Path) -> int:
    A = _algorithm(cfg)
    problem = _problem(cfg)
    _, G = _graph(cfg)
    n_nominal = cfg.n_nominal or G.n
    r = cfg.bridge.get("r")
    res = simulate_borel(G, A, problem, n_nominal, r)
    summary = {"kind": "bridge", "tag": _tag(cfg), "algorithm": A.name, "problem": problem.name,
               "plan": res.plan.to_json(), "violations": len(res.violations),
               "verdict": "falsified" if res.falsified else "ok"}
    _write_json(out / "bridge.json", summary)
    _write_csv(out / "bridge_violations.csv", ["vertex", "reason"],
               [{"vertex": v.vertex, "reason": v.reason} for v in res.violations])
    return FALSIFIED if res.falsified else OK


def cmd_shift(cfg: ExperimentConfig, out: Path) -> int:
    sc = cfg.shift
    W, p_max, count, span = int(sc["W"]), int(sc["p_max"]), int(sc["samples"]), int(sc["span"])
    problem = _problem(cfg)
    if sc["rule"] == "three-coloring":
        rule = THREE_COLORING
    else:
        rule = window_rule_from_algorithm(_algorithm(cfg), int(cfg.n_nominal or 1024))
    seqs = sample_many(count, W, p_max, cfg.seed)
    report = check_window_rule(rule, problem, seqs, span)
    rows = []
    radii: list[np.ndarray] = []
    cert_failures = 0
    for seq, row in zip(seqs, report.samples):
        res = rule.evaluate_all(seq)
        a, b = -span - seq.lo, span - seq.lo + 1
        radii.append(res.radius[a:b][res.valid[a:b]])
        every = int(sc.get("certify_every", 1))
        positions = [p for p in range(-span, span + 1, every) if res.valid[p - seq.lo]]
        cert = certify_batch(rule, seq, positions, res, seed=cfg.seed) if sc.get("certify", True) else None
        cert_failures += cert.failures if cert else 0
        rows.append({"sample": row.sample, "attempt": seq.provenance.get("attempt"), "positions": row.positions,
                     "violations": row.violations, "cap_errors": row.cap_errors,
                     "certificate_failures": cert.failures if cert else "",
                     "max_radius": row.max_radius, "median_radius": row.median_radius})
    _write_csv(out / "shift.csv", list(rows[0]) if rows else ["sample"], rows)
    allr = np.concatenate(radii) if radii else np.zeros(0, dtype=np.int64)
    values, counts = np.unique(allr, return_counts=True)
    _write_csv(out / "shift_radii.csv", ["radius", "count"],
               [{"radius": int(v), "count": int(c)} for v, c in zip(values, counts)])
    summary = {"kind": "shift", "tag": _tag(cfg), "rule": rule.describe(), "seed": cfg.seed, "W": W,
               "p_max": p_max, **report.to_json(), "certificate_failures": cert_failures}
    falsified = report.violations > 0 or cert_failures > 0
    summary["verdict"] = "falsified" if falsified else ("cap-errors" if report.cap_errors else "ok")
    _write_json(out / "shift.json", summary)
    if falsified:
        return FALSIFIED
    return ERROR if report.cap_errors else OK


def cmd_rotation(cfg: ExperimentConfig, out: Path) -> int:
    rc = cfg.rotation
    alphas = [float(a) for a in rc.get("alphas") or []] or quadratic_irrationals(int(rc.get("count", 10)))
    rows = []
    bad = False
    for a in alphas:
        rule = rotation_coloring(a)
        v = check_rotation(rule, a, float(rc["x0"]), int(rc["length"]))
        sweep = falsification_sweep(a, int(rc["candidates"]), cfg.seed, float(rc["x0"]))
        g = grid_conflicts(rule, a, int(rc.get("grid", 10**6)))
        rows.append({"alpha": repr(a), "pieces": len(rule.cuts), "orbit_violations": len(v), "grid_conflicts": g,
                     "candidates": sweep.candidates, "candidates_failed": sweep.failed})
        bad |= bool(v) or g > 0 or not sweep.all_fail
    _write_csv(out / "rotation.csv", ["alpha", "pieces", "orbit_violations", "grid_conflicts", "candidates",
                                      "candidates_failed"], rows)
    rules = {repr(a): rotation_coloring(a).to_json() for a in alphas}
    _write_json(out / "rotation.json", {"kind": "rotation", "tag": _tag(cfg), "seed": cfg.seed, "rows": rows,
                                        "rules": rules, "verdict": "falsified" if bad else "ok"})
    return FALSIFIED if bad else OK


def cmd_report(cfg: ExperimentConfig, out: Path) -> int:
    from .report import write_report

    write_report(out)
    return OK


COMMANDS: dict[str, tuple[str | None, Callable[[ExperimentConfig, Path], int]]] = {
    "gen": (None, cmd_gen),
    "run": (None, cmd_run),
    "adversary": ("adversary", cmd_adversary),
    "bridge": ("bridge", cmd_bridge),
    "shift": ("shift", cmd_shift),
    "rotation": ("rotation", cmd_rotation),
    "report": (None, cmd_report),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lclsim", description="LOCAL-model and LCL experiment runner")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", type=Path, help="YAML experiment config")
        s.add_argument("--seed", type=int)
        s.add_argument("--out-dir", type=Path)
        s.add_argument("--trials", type=int)
        s.add_argument("--jobs", type=int)
    return p


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    kind = COMMANDS[args.command][0]
    if kind is not None:
        cfg.kind = kind
    elif args.command == "run" and cfg.kind not in ("run", "sweep"):
        raise ConfigError(f"`run` handles kinds run and sweep, config says {cfg.kind!r}")
    for flag, attr in (("seed", "seed"), ("trials", "trials"), ("jobs", "jobs")):
        value = getattr(args, flag)
        if value is not None:
            setattr(cfg, attr, value)
    if args.out_dir is not None:
        cfg.out_dir = str(args.out_dir)
    return cfg.validate()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        if args.command != "report":
            (out / f"{args.command}.config.yaml").write_text(cfg.dumps())
        return COMMANDS[args.command][1](cfg, out)
    except (ConfigError, GraphError, BridgeInfeasible, AperiodicityError, RadiusCapError, NearRationalError,
            FileNotFoundError, ValueError, KeyError) as exc:
        print(f"lclsim {args.command}: error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())

"""Markdown summary of an output directory, with figures."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any

from . import plotting


def _table(header: list[str], rows: list[list[Any]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return "\n".join(lines)


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def _run_section(data: dict[str, Any], out: Path, figures: list[str]) -> str:
    pts = data["points"]
    rows = [
        [p["n"], p["n_nominal"], p["T"], p["log_star"], p["trials"], p["failures"], _fmt(p["rate"]),
         f"[{_fmt(p['wilson'][0])}, {_fmt(p['wilson'][1])}]", p["median_rounds"]]
        for p in pts
    ]
    text = _table(["n", "n_nominal", "rounds", "log* n", "trials", "failures", "rate", "Wilson 95%", "median rounds"], rows)
    if data["kind"] == "sweep" and pts:
        name = f"{data['kind']}_rounds.png"
        plotting.rounds_vs_n([p["n_nominal"] for p in pts], [p["T"] for p in pts], [p["log_star"] for p in pts], out / name)
        figures.append(name)
        text += f"\n\n![rounds]({name})"
    c = data["algorithm"]
    if "c2" in c:
        text += f"\n\nConstants: rounds <= {c['c1']} * log*(2^L) + {c['c2']}."
    return text


def _bridge_section(data: dict[str, Any], out: Path, figures: list[str]) -> str:
    plan = data["plan"]
    return _table(["field", "value"], [[k, plan[k]] for k in plan] + [["violations", data["violations"]]])


def _adversary_section(data: dict[str, Any], out: Path, figures: list[str]) -> str:
    if data["status"] == "inapplicable":
        return f"Construction inapplicable: {data['reason']}"
    cert = data["certificate"]
    keys = ["T", "x", "y", "z", "kind", "base_colors", "swapped_colors", "violated_pair", "violated_colors"]
    return _table(["field", "value"], [[k, cert[k]] for k in keys] + [["verified", data["verified"]]])


def _shift_section(data: dict[str, Any], out: Path, figures: list[str]) -> str:
    keys = ["samples", "span", "W", "p_max", "violations", "cap_errors", "certificate_failures"]
    text = _table(["field", "value"], [[k, data[k]] for k in keys])
    hist = out / "shift_radii.csv"
    if hist.exists():
        with hist.open() as fh:
            rows = list(csv.DictReader(fh))
        if rows:
            name = "shift_radii.png"
            plotting.radius_histogram([int(r["radius"]) for r in rows], [int(r["count"]) for r in rows], out / name)
            figures.append(name)
            text += f"\n\n![radii]({name})"
    return text


def _rotation_section(data: dict[str, Any], out: Path, figures: list[str]) -> str:
    rows = [[r["alpha"], r["pieces"], r["orbit_violations"], r["grid_conflicts"], f"{r['candidates_failed']}/{r['candidates']}"]
            for r in data["rows"]]
    text = _table(["alpha", "pieces", "orbit violations", "grid conflicts", "2-label rules failing"], rows)
    if data["rules"]:
        name = "rotation_rules.png"
        plotting.interval_rules({k: v["intervals"] for k, v in data["rules"].items()}, out / name)
        figures.append(name)
        text += f"\n\n![rules]({name})"
    return text


SECTIONS = {
    "run": _run_section,
    "sweep": _run_section,
    "bridge": _bridge_section,
    "adversary": _adversary_section,
    "shift": _shift_section,
    "rotation": _rotation_section,
}


def write_report(out: Path) -> Path:
    """Render ``report.md`` (and PNG figures) from the JSON summaries in ``out``."""
    out = Path(out)
    if not out.is_dir():
        raise FileNotFoundError(f"output directory {out} does not exist")
    found = []
    for path in sorted(out.glob("*.json")):
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError:
            continue
        if isinstance(data, dict) and data.get("kind") in SECTIONS:
            found.append(data)
    if not found:
        raise FileNotFoundError(f"no experiment summaries in {out}")
    parts = ["# Experiment report"]
    figures: list[str] = []
    for data in found:
        parts.append(f"## {data['kind']}: {data['tag']}\n\nVerdict: **{data['verdict']}**")
        parts.append(SECTIONS[data["kind"]](data, out, figures))
    path = out / "report.md"
    path.write_text("\n\n".join(parts) + "\n")
    return path

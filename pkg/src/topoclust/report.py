"""JSON and plot-data serialization of clustering and scoring results."""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .clustering import ClusteringResult
from .diagram import PersistenceDiagram
from .selection import CRITERIA, ScoreReport

SCHEMA_VERSION = 1
TIMING_KEYS = frozenset({"elapsed"})


def diagram_to_json(d: PersistenceDiagram) -> dict:
    return {
        "family": d.family,
        "births": d.births.tolist(),
        "deaths": d.deaths.tolist(),
        "birth_locations": d.birth_locations.tolist(),
        "death_locations": d.death_locations.tolist(),
        "pair_classes": list(d.pair_classes),
    }


def diagram_from_json(obj: dict) -> PersistenceDiagram:
    n = len(obj["births"])
    return PersistenceDiagram(
        obj["births"],
        obj["deaths"],
        np.array(obj["birth_locations"], dtype=np.float64).reshape(n, 3),
        np.array(obj["death_locations"], dtype=np.float64).reshape(n, 3),
        obj["pair_classes"],
        obj["family"],
        obj.get("source_name", ""),
    )


def result_to_json(r: ClusteringResult, embed_centroids: bool = True) -> dict:
    out = {
        "k": r.k,
        "n": r.n,
        "inertia": r.inertia,
        "converged": r.converged,
        "iterations": r.iterations,
        "elapsed": r.elapsed,
        "assignment": r.assignment.tolist(),
        "distances": r.distances.tolist(),
    }
    if embed_centroids:
        out["centroids"] = [diagram_to_json(c) for c in r.centroids]
    return out


def result_from_json(obj: dict) -> ClusteringResult:
    return ClusteringResult(
        k=int(obj["k"]),
        centroids=[diagram_from_json(c) for c in obj.get("centroids", [])],
        assignment=np.array(obj["assignment"], dtype=np.intp),
        distances=np.array(obj["distances"], dtype=np.float64),
        inertia=float(obj["inertia"]),
        iterations=int(obj.get("iterations", 0)),
        converged=bool(obj.get("converged", False)),
        elapsed=float(obj.get("elapsed", 0.0)),
    )


def score_report_to_json(rep: ScoreReport) -> dict:
    return {
        "dim": rep.dim,
        "n": rep.n,
        "selected_k": {"aic": rep.selected_k_aic, "bic": rep.selected_k_bic},
        "per_k": [
            {
                "k": s.k,
                "log_likelihood": s.log_likelihood,
                "sigma2": s.sigma2,
                "aic": s.aic,
                "bic": s.bic,
                "aic_normalized": s.aic_normalized,
                "bic_normalized": s.bic_normalized,
            }
            for _, s in sorted(rep.per_k.items())
        ],
    }


def write_plot_data(rep: ScoreReport, family: str, directory) -> dict[str, str]:
    """Two-column ``k value`` files, normalized to k=1 when k=1 was scored."""
    directory = Path(directory)
    names = {}
    normalized = 1 in rep.per_k
    for crit in CRITERIA:
        name = f"scores_{family}_{crit}.dat"
        label = f"{crit}_normalized" if normalized else crit
        lines = [f"# k {label}"]
        for k, v in rep.curve(crit, normalized=normalized):
            lines.append(f"{k} {'nan' if v is None else repr(float(v))}")
        (directory / name).write_text("\n".join(lines) + "\n")
        names[crit] = name
    return names


def read_plot_data(path) -> list[tuple[int, float]]:
    out = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#") or not line.strip():
            continue
        k, v = line.split()
        out.append((int(k), float(v)))
    return out


def strip_timing(obj):
    """Copy of a JSON object without wall-clock fields."""
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def load_schema() -> dict:
    text = resources.files("topoclust").joinpath("report_schema.json").read_text()
    return json.loads(text)

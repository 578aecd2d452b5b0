"""End-to-end run: ensemble -> diagrams -> k sweep -> scores -> report files."""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .budget import TimeBudget
from .clustering import sweep
from .diagram import FAMILIES, PersistenceDiagram, prune_by_persistence
from .errors import InvalidK, InvalidParameter, TopoClustError
from .fields import Ensemble
from .fileio import load_ensemble, save_diagram
from .metric import LiftingParams
from .persistence import compute_diagram
from .report import dumps, result_to_json, score_report_to_json, write_plot_data
from .selection import resolve_dimension, select_k
from .synthetic import generate_gaussians_ensemble

log = logging.getLogger(__name__)

AUTO = "auto"
DEFAULT_AUTO_FRACTION = 0.01


@dataclass
class RunConfig:
    input: str | None = None
    synth: str | None = None
    family: str = "maxima"
    k_min: int = 1
    k_max: int = 10
    t_max: float | None = 10.0
    total_budget: float | None = None
    alpha: float = 0.0
    persistence_threshold: str | float = AUTO
    dim: str | float = AUTO
    include_global_pair: bool = True
    seed: int = 0
    threads: int | None = None
    output: str = "topoclust_out"

    def validate(self) -> None:
        if (self.input is None) == (self.synth is None):
            raise InvalidParameter("give exactly one of input or synth")
        if self.family not in FAMILIES + ("both",):
            raise InvalidParameter(f"unknown family {self.family!r}")
        if not 1 <= self.k_min <= self.k_max:
            raise InvalidK(f"need 1 <= k_min <= k_max, got {self.k_min}..{self.k_max}")
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidParameter("alpha must lie in [0, 1]")
        if self.seed < 0:
            raise InvalidParameter("seed must be non-negative")
        parse_threshold(self.persistence_threshold)
        if self.t_max is not None and self.t_max <= 0:
            raise InvalidParameter("t_max must be positive")
        if self.total_budget is not None and self.total_budget <= 0:
            raise InvalidParameter("total budget must be positive")

    def families(self) -> tuple[str, ...]:
        return FAMILIES if self.family == "both" else (self.family,)

    def budget_per_k(self) -> TimeBudget:
        if self.total_budget is not None:
            return TimeBudget(self.total_budget / (self.k_max - self.k_min + 1))
        return TimeBudget(self.t_max)

    def to_json(self) -> dict:
        # threads and output location do not affect results
        out = asdict(self)
        del out["threads"], out["output"]
        return out


def parse_threshold(value) -> tuple[str, float]:
    """``"auto"``, ``"auto:<fraction>"`` or an absolute non-negative number."""
    if isinstance(value, str):
        v = value.strip().lower()
        if v == AUTO:
            return AUTO, DEFAULT_AUTO_FRACTION
        if v.startswith(AUTO + ":"):
            frac = float(v[len(AUTO) + 1 :])
            if frac < 0:
                raise InvalidParameter("threshold fraction must be non-negative")
            return AUTO, frac
        try:
            value = float(v)
        except ValueError:
            raise InvalidParameter(f"bad persistence threshold {value!r}") from None
    if not value >= 0:
        raise InvalidParameter("persistence threshold must be non-negative")
    return "absolute", float(value)


def parse_synth(spec: str, default_seed: int = 0) -> Ensemble:
    """Build an ensemble from ``gaussians:n=30,patterns=3,grid=64x64,noise=0.05,seed=1``."""
    kind, _, rest = spec.partition(":")
    if kind.strip() != "gaussians":
        raise InvalidParameter(f"unknown generator {kind!r}")
    opts = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, sep, val = item.partition("=")
        if not sep:
            raise InvalidParameter(f"expected key=value in generator string, got {item!r}")
        opts[key.strip()] = val.strip()
    known = {"n", "patterns", "grid", "noise", "seed"}
    if set(opts) - known:
        raise InvalidParameter(f"unknown synth options {sorted(set(opts) - known)}")
    try:
        grid = tuple(int(g) for g in opts.get("grid", "64x64").split("x"))
        return generate_gaussians_ensemble(
            int(opts.get("n", 30)),
            int(opts.get("patterns", 3)),
            grid,
            float(opts.get("noise", 0.05)),
            int(opts.get("seed", default_seed)),
        )
    except ValueError as e:
        if isinstance(e, TopoClustError):
            raise
        raise InvalidParameter(f"bad generator string {spec!r}: {e}") from None


def load_input(config: RunConfig) -> Ensemble:
    if config.synth is not None:
        return parse_synth(config.synth, config.seed)
    return load_ensemble(config.input)


def ensemble_diagrams(
    ensemble: Ensemble,
    family: str,
    threshold=AUTO,
    include_global_pair: bool = True,
) -> list[PersistenceDiagram]:
    """Pruned diagrams of every member for one family."""
    mode, value = parse_threshold(threshold)
    out = []
    for field in ensemble:
        d = compute_diagram(field, family)
        if not include_global_pair:
            d = d.without_global()
        cut = value * float(np.ptp(field.values)) if mode == AUTO else value
        out.append(prune_by_persistence(d, cut))
    return out


def _family_block(results, report, dim):
    per_k = []
    for r in results:
        entry = result_to_json(r, embed_centroids=False)
        if report is not None:
            s = report.per_k[r.k]
            entry.update(
                log_likelihood=s.log_likelihood,
                sigma2=s.sigma2,
                aic=s.aic,
                bic=s.bic,
                aic_normalized=s.aic_normalized,
                bic_normalized=s.bic_normalized,
            )
        per_k.append(entry)
    block = {"dim": dim, "per_k": per_k}
    if report is not None:
        block["selected_k"] = {"aic": report.selected_k_aic, "bic": report.selected_k_bic}
    return block


def run_pipeline(config: RunConfig) -> dict:
    """Run the full pipeline and write ``report.json`` under ``config.output``.

    On an error after clustering has produced results, a report with
    ``"status": "error"`` is written before the exception propagates.
    """
    config.validate()
    out_dir = Path(config.output)
    ensemble = load_input(config)
    n = len(ensemble)
    if config.k_max > n:
        raise InvalidK(f"k_max = {config.k_max} exceeds the ensemble size {n}")
    lifting = LiftingParams(alpha=config.alpha)
    budget = config.budget_per_k()

    report = {
        "schema_version": 1,
        "status": "ok",
        "config": config.to_json(),
        "n": n,
        "members": [m.name for m in ensemble],
        "families": {},
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        for family in config.families():
            diagrams = ensemble_diagrams(
                ensemble, family, config.persistence_threshold, config.include_global_pair
            )
            log.info("%s: %d diagrams, mean size %.1f", family, n, np.mean([len(d) for d in diagrams]))
            results = sweep(
                diagrams, config.k_min, config.k_max, lifting, budget, config.seed, config.threads
            )
            dim = resolve_dimension(config.dim, diagrams)
            # keep what we have if scoring fails
            report["families"][family] = _family_block(results, None, dim)
            _write_centroids(results, family, out_dir, report["families"][family])
            scores = select_k(results, dim)
            block = _family_block(results, scores, dim)
            _write_centroids(results, family, out_dir, block)
            block["plot_data"] = write_plot_data(scores, family, out_dir)
            report["families"][family] = block
    except TopoClustError as e:
        report["status"] = "error"
        report["error"] = f"{type(e).__name__}: {e}"
        (out_dir / "report.json").write_text(dumps(report))
        raise
    (out_dir / "report.json").write_text(dumps(report))
    return report


def _write_centroids(results, family, out_dir, block):
    cdir = out_dir / "centroids"
    cdir.mkdir(exist_ok=True)
    for r, entry in zip(results, block["per_k"]):
        paths = []
        for j, c in enumerate(r.centroids):
            name = f"{family}_k{r.k:02d}_c{j:02d}.pdiag"
            save_diagram(c, cdir / name)
            paths.append(f"centroids/{name}")
        entry["centroids"] = paths

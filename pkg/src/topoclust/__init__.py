"""Clustering of scalar-field ensembles by persistence diagrams."""
from .barycenter import BarycenterResult, barycenter, frechet_energy
from .budget import UNBOUNDED, TimeBudget
from .clustering import ClusteringResult, cluster, sweep
from .diagram import DiagramPoint, PersistenceDiagram, prune_by_persistence
from .errors import TopoClustError
from .fields import Ensemble, ScalarField
from .fileio import load_diagram, load_ensemble, read_field, save_diagram, save_ensemble, write_field
from .metric import NO_LIFTING, DiagramAssignment, LiftingParams, wasserstein, wasserstein_distance
from .persistence import compute_diagram
from .pipeline import RunConfig, run_pipeline
from .selection import ScoreReport, log_likelihood, score, select_k
from .synthetic import generate_gaussians_ensemble

__version__ = "0.1.0"

__all__ = [
    "BarycenterResult",
    "ClusteringResult",
    "DiagramAssignment",
    "DiagramPoint",
    "Ensemble",
    "LiftingParams",
    "NO_LIFTING",
    "PersistenceDiagram",
    "RunConfig",
    "ScalarField",
    "ScoreReport",
    "TimeBudget",
    "TopoClustError",
    "UNBOUNDED",
    "barycenter",
    "cluster",
    "compute_diagram",
    "frechet_energy",
    "generate_gaussians_ensemble",
    "load_diagram",
    "load_ensemble",
    "log_likelihood",
    "prune_by_persistence",
    "read_field",
    "run_pipeline",
    "save_diagram",
    "save_ensemble",
    "score",
    "select_k",
    "sweep",
    "wasserstein",
    "wasserstein_distance",
    "write_field",
]

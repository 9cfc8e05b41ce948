"""latentgraph: recover latent node coordinates of a geometric graph from its
unweighted directed structure, and evaluate the recovery."""

from .calibration import KappaModel, fit_kappa_curve, fit_kappa_transductive
from .engine import LayerProgram, run_layers
from .experiments import (ExperimentReport, GeneratorSpec, LogisticParams, RunRecord,
                          logistic_eval, per_class_split, run_inductive, run_transductive,
                          uniform_split)
from .graphs import DirectedGraph, build_graph, is_weakly_connected, transpose
from .numerics import SymEigResult, classical_mds, svd_small, sym_eig
from .pipeline import RecoveryConfig, reconstruction_score, recover_features
from .procrustes import AlignmentResult, d_g, procrustes_align, scaled_procrustes
from .programs import (DistanceTable, ScaleParams, bellman_ford_program, edge_length_readout,
                       final_readout, landmark_matrix_program, stationary_program)
from .synthetic import (LandmarkSet, build_knn_graph, build_threshold_graph, default_knn_k,
                        knn_radii, make_node_features, sample_hidden, select_landmarks)

__version__ = "0.1.0"

__all__ = [
    "DirectedGraph", "build_graph", "transpose", "is_weakly_connected",
    "LandmarkSet", "sample_hidden", "default_knn_k", "build_knn_graph",
    "build_threshold_graph", "knn_radii", "select_landmarks", "make_node_features",
    "LayerProgram", "run_layers",
    "ScaleParams", "DistanceTable", "stationary_program", "edge_length_readout",
    "bellman_ford_program", "landmark_matrix_program", "final_readout",
    "SymEigResult", "sym_eig", "svd_small", "classical_mds",
    "AlignmentResult", "procrustes_align", "d_g", "scaled_procrustes",
    "KappaModel", "fit_kappa_transductive", "fit_kappa_curve",
    "RecoveryConfig", "recover_features", "reconstruction_score",
    "GeneratorSpec", "RunRecord", "ExperimentReport", "LogisticParams",
    "uniform_split", "per_class_split", "logistic_eval",
    "run_transductive", "run_inductive",
    "__version__",
]

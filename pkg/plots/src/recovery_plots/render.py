"""Figure rendering from latentgraph CLI output files.

This package reads only the documented on-disk formats (dataset JSON,
coordinate CSV with header node_id,c0,..., evaluation / experiment report
JSON); it has no knowledge of the recovery library's internals. The output
image path is the only filesystem write.
"""

from __future__ import annotations

import csv
import json

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

COLOR_MODES = ("x-rank", "label")


def read_coordinates(path: str) -> np.ndarray:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "node_id":
            raise ValueError(f"{path}: expected header node_id,c0,...")
        rows = [(int(r[0]), [float(x) for x in r[1:]]) for r in reader if r]
    rows.sort()
    return np.array([c for _, c in rows], dtype=float)


def read_json(path: str) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: expected a JSON object")
    return doc


def node_colors(truth: np.ndarray, labels, mode: str) -> np.ndarray:
    """Per-node color values: rank of the true x-coordinate, or the class label."""
    if mode not in COLOR_MODES:
        raise ValueError(f"color mode must be one of {COLOR_MODES}, got {mode!r}")
    if mode == "label":
        if labels is None:
            raise ValueError("dataset has no labels; use --color-by x-rank")
        return np.asarray(labels, dtype=float)
    return np.argsort(np.argsort(truth[:, 0])).astype(float)


def render_panels(dataset_path: str, recovered_path: str, eval_path: str, out_path: str,
                  color_by: str = "x-rank", dpi: int = 150) -> str:
    """Side-by-side scatter of true vs recovered coordinates, one shared node
    coloring, annotated with the discrepancy value from the evaluation report."""
    dataset = read_json(dataset_path)
    if dataset.get("z") is None:
        raise ValueError(f"{dataset_path}: dataset has no hidden coordinates (z)")
    truth = np.asarray(dataset["z"], dtype=float)
    recovered = read_coordinates(recovered_path)
    if recovered.shape[0] != truth.shape[0]:
        raise ValueError("recovered row count does not match the dataset")
    evaluation = read_json(eval_path)
    d_g_value = evaluation.get("d_g_all")

    colors = node_colors(truth, dataset.get("labels"), color_by)
    fig, axes = plt.subplots(1, 2, figsize=(10, 4.6))
    for ax, pts, title in ((axes[0], truth, "hidden coordinates"),
                           (axes[1], recovered, "recovered coordinates")):
        ax.scatter(pts[:, 0], pts[:, 1], c=colors, cmap="viridis", s=8, linewidths=0)
        ax.set_title(title)
        ax.set_aspect("equal", adjustable="datalim")
    if d_g_value is not None:
        axes[1].set_xlabel(f"d_g = {d_g_value:.4g}")
    fig.tight_layout()
    fig.savefig(out_path, dpi=dpi)
    plt.close(fig)
    return out_path


def _curve_points(doc: dict, source: str):
    """(n, d_g) pairs from an evaluation report or an experiment report."""
    if "runs" in doc:
        for run in doc["runs"]:
            value = run.get("d_g_all")
            value = run.get("d_g_test") if value is None else value
            if value is not None:
                yield int(run["n"]), float(value), source
        return
    value = doc.get("d_g_all")
    value = doc.get("d_g_test") if value is None else value
    if value is None:
        raise ValueError(f"{source}: no d_g value found")
    yield int(doc["n"]), float(value), source


def render_curve(report_paths, out_path: str, dpi: int = 150) -> str:
    """Discrepancy-versus-size line chart across evaluation/experiment reports."""
    points = []
    for path in report_paths:
        points.extend(_curve_points(read_json(path), path))
    if not points:
        raise ValueError("no plottable values in the given reports")
    points.sort()
    ns = [p[0] for p in points]
    values = [p[1] for p in points]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, values, marker="o")
    ax.set_xlabel("number of nodes")
    ax.set_ylabel("d_g")
    ax.set_title("recovery discrepancy vs graph size")
    fig.tight_layout()
    fig.savefig(out_path, dpi=dpi)
    plt.close(fig)
    return out_path

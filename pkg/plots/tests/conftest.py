"""Fixtures fabricating files in the documented CLI formats (no dependency on
the recovery library for unit tests)."""

import json

import numpy as np
import pytest


def write_csv(path, coords):
    lines = ["node_id," + ",".join(f"c{i}" for i in range(coords.shape[1]))]
    for v, row in enumerate(coords):
        lines.append(",".join([str(v)] + [format(x, ".17g") for x in row]))
    path.write_text("\n".join(lines) + "\n")


@pytest.fixture
def small_outputs(tmp_path):
    """A dataset JSON / recovered CSV / eval JSON triple for 40 nodes."""
    rng = np.random.default_rng(5)
    z = rng.standard_normal((40, 2))
    labels = (z[:, 0] > 0).astype(int)
    dataset = tmp_path / "d.json"
    dataset.write_text(json.dumps({
        "schema_version": 1, "n": 40, "d": 2,
        "arcs": [[i, (i + 1) % 40] for i in range(40)],
        "z": z.tolist(), "labels": labels.tolist(),
        "provenance": {"generator": "test", "seed": 5, "k": 1, "noise": 0.0},
    }))
    recovered = tmp_path / "r.csv"
    write_csv(recovered, z)
    evaluation = tmp_path / "e.json"
    evaluation.write_text(json.dumps({
        "schema_version": 1, "config": {}, "n": 40,
        "d_g_all": 0.0, "d_g_train": 0.0, "d_g_test": 0.0,
        "reconstruction_score": 1.0,
        "accuracy_recovered": 1.0, "accuracy_baseline": 0.5,
    }))
    return dataset, recovered, evaluation

"""Command-line surface and the stable on-disk formats.

Formats:
  dataset   JSON {schema_version, n, d, arcs, z?, labels?, provenance}
  recovered CSV with header node_id,c0,...,c{D-1} (floats printed with 17
            significant digits) plus a <name>.meta.json sidecar holding the
            resolved configuration
  reports   JSON validating against the schema files shipped in
            latentgraph/schemas/

All data goes to --out (or stdout); errors go to stderr. Exit status is 0 on
success, 2 on usage errors, 1 on runtime errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace

import numpy as np

from .calibration import KappaModel, fit_kappa_transductive
from .experiments import (GeneratorSpec, TRAIN_FRACTION, align_on, logistic_eval,
                          run_inductive, run_transductive, uniform_split)
from .graphs import build_graph
from .pipeline import RecoveryConfig, reconstruction_score, recover_features
from .synthetic import LandmarkSet, make_node_features, sample_hidden, default_knn_k

SCHEMA_VERSION = 1


# ---------------------------------------------------------------- serialization

def _jsonify(obj):
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def write_json(path: str, obj) -> None:
    text = json.dumps(_jsonify(obj), indent=2, sort_keys=True)
    with open(path, "w") as fh:
        fh.write(text + "\n")


def write_dataset(path, n, d, arcs, z=None, labels=None, provenance=None) -> None:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "n": int(n),
        "d": None if d is None else int(d),
        "arcs": [[int(t), int(h)] for t, h in arcs],
        "provenance": provenance or {"generator": "unknown"},
    }
    if z is not None:
        doc["z"] = [[float(v) for v in row] for row in z]
    if labels is not None:
        doc["labels"] = [int(v) for v in labels]
    write_json(path, doc)


def read_dataset(path: str) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"{path}: not a schema_version={SCHEMA_VERSION} dataset file")
    for key in ("n", "arcs"):
        if key not in doc:
            raise ValueError(f"{path}: missing required key {key!r}")
    n = int(doc["n"])
    z = doc.get("z")
    if z is not None and len(z) != n:
        raise ValueError(f"{path}: z has {len(z)} rows, expected n={n}")
    labels = doc.get("labels")
    if labels is not None and len(labels) != n:
        raise ValueError(f"{path}: labels has {len(labels)} entries, expected n={n}")
    doc["graph"] = build_graph(n, doc["arcs"])
    return doc


def write_coordinates(path: str, coords: np.ndarray) -> None:
    coords = np.asarray(coords, dtype=float)
    d = coords.shape[1]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node_id"] + [f"c{i}" for i in range(d)])
        for v, row in enumerate(coords):
            writer.writerow([v] + [format(x, ".17g") for x in row])


def read_coordinates(path: str) -> np.ndarray:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "node_id":
            raise ValueError(f"{path}: expected header node_id,c0,...")
        rows = [(int(r[0]), [float(x) for x in r[1:]]) for r in reader if r]
    rows.sort()
    if [v for v, _ in rows] != list(range(len(rows))):
        raise ValueError(f"{path}: node ids must cover 0..n-1 exactly once")
    return np.array([c for _, c in rows], dtype=float)


# ---------------------------------------------------------------- subcommands

def _cmd_generate(args) -> int:
    d = 2 if args.kind == "two-moon" else args.d
    Z, labels = sample_hidden(args.kind, args.n, d, args.noise, args.seed)
    k = default_knn_k(args.n) if args.paper_k else args.k
    if k is None:
        raise ValueError("pass --k K or --paper-k")
    from .synthetic import build_knn_graph
    g = build_knn_graph(Z, k)
    write_dataset(args.out, args.n, d, g.arcs(), z=Z, labels=labels,
                  provenance={"generator": args.kind, "seed": args.seed,
                              "k": int(k), "noise": args.noise})
    return 0


def _recover_config(args, n: int) -> RecoveryConfig:
    kappa_model = KappaModel.fixed(1.0)
    if args.kappa is not None:
        if args.kappa <= 0:
            raise ValueError("kappa must be positive")
        kappa_model = KappaModel.fixed(args.kappa)
    return RecoveryConfig(dim=args.dim, m=args.m, kappa_model=kappa_model,
                          seed=args.seed, engine=args.engine)


def _cmd_recover(args) -> int:
    if args.kappa is not None and args.kappa_auto:
        raise ValueError("--kappa and --kappa-auto are mutually exclusive")
    doc = read_dataset(args.infile)
    g = doc["graph"]
    cfg = _recover_config(args, g.n)
    meta = {"command": "recover", "in": args.infile, "m": args.m, "dim": args.dim,
            "engine": args.engine, "seed": args.seed,
            "kappa": args.kappa, "kappa_auto": bool(args.kappa_auto),
            "train_fraction": TRAIN_FRACTION if args.kappa_auto else None}
    if args.kappa_auto:
        if doc.get("z") is None:
            raise ValueError("--kappa-auto requires hidden coordinates (z) in the dataset")
        Z = np.asarray(doc["z"], dtype=float)
        unit, _, _ = recover_features(g, replace(cfg, kappa_model=KappaModel.fixed(1.0)))
        train, _ = uniform_split(g.n, TRAIN_FRACTION, args.seed)
        kappa = fit_kappa_transductive(unit, Z[train], train)
        coords = align_on(Z, kappa * unit, train)
        meta["kappa"] = kappa
    else:
        coords, _, _ = recover_features(g, cfg)
    write_coordinates(args.out, coords)
    write_json(args.out + ".meta.json", {"schema_version": SCHEMA_VERSION, "config": meta})
    return 0


def _cmd_eval(args) -> int:
    doc = read_dataset(args.infile)
    g = doc["graph"]
    coords = read_coordinates(args.recovered)
    if coords.shape[0] != g.n:
        raise ValueError(f"recovered file has {coords.shape[0]} rows, dataset has n={g.n}")
    k = doc.get("provenance", {}).get("k")
    if k is None:
        k = max(1, int(round(float(g.out_degree.mean()))))
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": {"command": "eval", "in": args.infile, "recovered": args.recovered,
                   "seed": args.seed, "train_fraction": TRAIN_FRACTION, "k": int(k)},
        "n": g.n,
        "d_g_all": None, "d_g_train": None, "d_g_test": None,
        "reconstruction_score": reconstruction_score(coords, g, int(k)),
        "accuracy_recovered": None, "accuracy_baseline": None,
    }
    train, test = uniform_split(g.n, TRAIN_FRACTION, args.seed)
    if doc.get("z") is not None:
        Z = np.asarray(doc["z"], dtype=float)
        if Z.shape[1] != coords.shape[1]:
            raise ValueError("recovered dimensionality differs from the dataset's z")
        aligned = align_on(Z, coords, train)
        report["d_g_all"] = float(np.mean(np.sum((aligned - Z) ** 2, axis=1)))
        report["d_g_train"] = float(np.mean(np.sum((aligned[train] - Z[train]) ** 2, axis=1)))
        report["d_g_test"] = float(np.mean(np.sum((aligned[test] - Z[test]) ** 2, axis=1)))
    if doc.get("labels") is not None:
        labels = np.asarray(doc["labels"], dtype=np.int64)
        report["accuracy_recovered"] = logistic_eval(coords, labels, train, test)
        baseline = make_node_features(g, LandmarkSet(np.empty(0, dtype=np.int64)))
        report["accuracy_baseline"] = logistic_eval(baseline, labels, train, test)
    write_json(args.out, report)
    return 0


def _cmd_experiment(args) -> int:
    cfg = RecoveryConfig(dim=args.dim, m=args.m, seed=args.seed, engine=args.engine)
    if args.setting == "transductive":
        k = None if args.paper_k or args.k is None else args.k
        spec = GeneratorSpec(kind=args.kind, n=args.n, d=2 if args.kind == "two-moon" else args.d,
                             noise=args.noise, seed=args.seed, k=k)
        report = run_transductive(spec, cfg, split_seed=args.seed)
    else:
        sizes = [int(s) for s in args.train_sizes.split(",")]
        k = None if args.paper_k or args.k is None else args.k
        spec = GeneratorSpec(kind=args.kind, n=sizes[0],
                             d=2 if args.kind == "two-moon" else args.d,
                             noise=args.noise, seed=args.seed, k=k)
        report = run_inductive(sizes, args.test_size, spec, cfg, seed=args.seed)
    write_json(args.out, report.to_dict())
    return 0


def _read_tsv_rows(path: str, width: int):
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != width:
                raise ValueError(f"{path}:{lineno}: expected {width} tab-separated fields")
            rows.append([int(p) for p in parts])
    return rows


def _cmd_import_edgelist(args) -> int:
    edges = _read_tsv_rows(args.edges, 2)
    if not edges:
        raise ValueError(f"{args.edges}: no edges found")
    n = max(max(t, h) for t, h in edges) + 1
    labels = None
    if args.labels:
        pairs = _read_tsv_rows(args.labels, 2)
        n = max(n, max(v for v, _ in pairs) + 1)
        labels = [0] * n
        for v, lab in pairs:
            labels[v] = lab
    g = build_graph(n, edges)
    write_dataset(args.out, n, None, g.arcs(), labels=labels,
                  provenance={"generator": "import-edgelist", "seed": None,
                              "k": None, "noise": None})
    return 0


# ---------------------------------------------------------------- parser

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latentgraph",
                                     description="Recover latent node coordinates from "
                                                 "unweighted directed graph structure.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample hidden features and emit a kNN dataset file")
    p.add_argument("--kind", required=True,
                   choices=["two-moon", "uniform-square", "gaussian-blobs"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=2, help="latent dimension (two-moon forces 2)")
    p.add_argument("--k", type=int, default=None, help="kNN degree for graph construction")
    p.add_argument("--paper-k", action="store_true",
                   help="use the size-based default k = floor(sqrt(n) ln(n) / 10)")
    p.add_argument("--noise", type=float, default=0.2)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("recover", help="recover coordinates from a dataset file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--m", type=int, default=None, help="landmark count (default min(500, n/2))")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--kappa", type=float, default=None, help="fixed global scale")
    p.add_argument("--kappa-auto", action="store_true",
                   help="fit the scale (and alignment) on a 70/30 split; needs z")
    p.add_argument("--engine", choices=["direct", "mp"], default="direct")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="coordinates CSV; a .meta.json sidecar is added")
    p.set_defaults(func=_cmd_recover)

    p = sub.add_parser("eval", help="score recovered coordinates against a dataset file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--recovered", required=True)
    p.add_argument("--seed", type=int, default=0, help="seed of the 70/30 evaluation split")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("experiment", help="run a full experiment and write its report")
    p.add_argument("setting", choices=["transductive", "inductive"])
    p.add_argument("--kind", default="two-moon",
                   choices=["two-moon", "uniform-square", "gaussian-blobs"])
    p.add_argument("--n", type=int, default=3000, help="graph size (transductive)")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--noise", type=float, default=0.2)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--paper-k", action="store_true")
    p.add_argument("--train-sizes", default="1000,2000,3000", help="inductive training sizes")
    p.add_argument("--test-size", type=int, default=6000)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--engine", choices=["direct", "mp"], default="direct")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("import-edgelist", help="build a dataset file from a TSV edge list")
    p.add_argument("--edges", required=True, help="TSV rows: tail<TAB>head, 0-based ids")
    p.add_argument("--labels", default=None, help="optional TSV rows: node_id<TAB>label")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_import_edgelist)

    return parser


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses exit(2) for usage errors
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError, json.JSONDecodeError) as exc:
        print(f"latentgraph: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()

"""Command-line entry point: ingestion -> analysis -> export.

Exit codes: 0 success, 1 data/numerical error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import (
    NUMERICAL_FLOOR,
    FirstLayerWeights,
    PerLayerWeights,
    PropagationConfig,
    classify_regime,
    energy_ratio_trace,
    fit_decay,
    propagate,
)
from .energy import (
    DEFAULT_AXIOM_TOL,
    DEFAULT_SEED,
    axiom1_check,
    axiom2_check,
    descriptor_for,
    normalize_conjugation,
)
from .errors import (
    DomainError,
    GraphFormatError,
    InsufficientDataError,
    NumericalError,
)
from .graph_core import (
    Graph,
    largest_connected_component,
    load_cora,
    load_edge_list,
    load_tu_dataset,
    stats,
)
from .io_formats import (
    RunManifest,
    export_axiom_report_json,
    export_matrix_csv,
    export_ratio_csv,
    export_report_json,
    export_spectra_csv,
    export_superposition_csv,
    export_trace_csv,
    find_cora_files,
    find_tu_files,
)
from .operators import OperatorKind, build, commutator, is_commuting_pair
from .spectral import eigendecompose, superposition

DATA_DIR_ENV = "OVERSMOOTH_DATA_DIR"

OPERATOR_ALIASES = {
    "delta": OperatorKind.UNNORMALIZED_LAPLACIAN,
    "delta-norm": OperatorKind.NORMALIZED_LAPLACIAN,
    "delta-tilde-norm": OperatorKind.RENORMALIZED_LAPLACIAN,
    "anorm": OperatorKind.NORMALIZED_ADJACENCY,
    "anorm-tilde": OperatorKind.RENORMALIZED_ADJACENCY,
}

_DATA_ERRORS = (
    DomainError,
    GraphFormatError,
    NumericalError,
    InsufficientDataError,
    FileNotFoundError,
    OSError,
    ValueError,
)


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


def _resolve_data_dir(arg: str | None) -> str | None:
    return arg if arg is not None else os.environ.get(DATA_DIR_ENV)


def resolve_graph(
    selector: str, data_dir: str | None
) -> tuple[Graph, np.ndarray | None, str]:
    """Turn a --graph selector into (graph, optional features, dataset id).

    Selectors: 'enzymes:<idx>' (0-based TU file order), 'cora-lcc', or a path
    to an edge-list file.
    """
    if selector.startswith("enzymes:"):
        if data_dir is None:
            raise FileNotFoundError(
                f"selector {selector!r} needs --data-dir or ${DATA_DIR_ENV}"
            )
        idx = int(selector.split(":", 1)[1])
        files = find_tu_files(data_dir, "ENZYMES")
        attr_text = (
            files["attributes"].read_text() if "attributes" in files else None
        )
        graphs = load_tu_dataset(
            files["adjacency"].read_text(), files["indicator"].read_text(), attr_text
        )
        if not (0 <= idx < len(graphs)):
            raise DomainError(f"dataset has {len(graphs)} graphs, index {idx} out of range")
        g, x = graphs[idx]
        return g, x, "ENZYMES"
    if selector == "cora-lcc":
        if data_dir is None:
            raise FileNotFoundError(
                f"selector {selector!r} needs --data-dir or ${DATA_DIR_ENV}"
            )
        files = find_cora_files(data_dir)
        g, x = load_cora(files["content"].read_text(), files["cites"].read_text())
        g, x = largest_connected_component(g, x)
        return g, x, "cora"
    path = Path(selector)
    if not path.is_file():
        raise FileNotFoundError(f"no such edge-list file: {selector}")
    return load_edge_list(path.read_text()), None, path.name


def _initial_signal(
    g: Graph, features: np.ndarray | None, seed: int, width: int
) -> np.ndarray:
    if features is not None and features.size:
        return np.asarray(features, dtype=float)
    rng = np.random.default_rng(seed)
    return rng.standard_normal((g.n_nodes, width))


def _manifest(dataset_id: str, selector: str, config: dict, seed: int) -> RunManifest:
    return RunManifest(
        dataset_id=dataset_id,
        graph_selector=selector,
        config_echo=config,
        seed=seed,
        tool_version=__version__,
        timestamp=_now_iso(),
    )


def _parse_weights(spec: str, layers: int, in_width: int, seed: int):
    if spec == "none":
        return None
    if spec.startswith("first:"):
        return FirstLayerWeights(out_dim=int(spec.split(":", 1)[1]), seed=seed)
    if spec == "per-layer":
        return PerLayerWeights(dims=(in_width,) * layers, seed=seed)
    if spec.startswith("per-layer:"):
        w = int(spec.split(":", 1)[1])
        return PerLayerWeights(dims=(w,) * layers, seed=seed)
    raise DomainError(f"unknown weights spec {spec!r}")


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _operator_kind(label: str) -> OperatorKind:
    try:
        return OPERATOR_ALIASES[label]
    except KeyError:
        raise DomainError(f"unknown operator {label!r}") from None


# ---------------------------------------------------------------- commands


def cmd_analyze(args) -> int:
    g, _, dataset_id = resolve_graph(args.graph, _resolve_data_dir(args.data_dir))
    st = stats(g)
    doc = {
        "dataset_id": dataset_id,
        "n_nodes": g.n_nodes,
        "n_edges": g.n_edges,
        "connected": st.connected,
        "regular": st.regular,
        "bipartite": st.bipartite,
        "avg_degree": st.avg_degree,
        "degree_variance": st.degree_variance,
    }
    if st.connected:
        p = build(g, OperatorKind.NORMALIZED_LAPLACIAN)
        q = build(g, OperatorKind.UNNORMALIZED_LAPLACIAN)
        doc["laplacians_commute"] = is_commuting_pair(p, q)
        doc["commutator_frobenius_norm"] = float(np.linalg.norm(commutator(p, q)))
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


def _run_simulation(g, features, args, selector: str, dataset_id: str):
    x0 = _initial_signal(g, features, args.seed, args.features)
    weight_mode = _parse_weights(args.weights, args.layers, x0.shape[1], args.seed)
    cfg = PropagationConfig(
        layers=args.layers,
        operator_kind=_operator_kind(args.operator),
        weight_mode=weight_mode,
        track_volume_constant=args.volume_constant,
    )
    _, trace = propagate(g, x0, cfg)
    config_echo = {
        "layers": args.layers,
        "operator": args.operator,
        "weights": args.weights,
        "features": x0.shape[1],
        "volume_constant": args.volume_constant,
    }
    manifest = _manifest(dataset_id, selector, config_echo, args.seed)
    return trace, manifest


def _simulation_outputs(trace, manifest, out_dir: Path) -> dict:
    verdict = classify_regime(trace)
    fits = {}
    for metric in ("e_delta", "e_delta_norm", "e_delta_tilde_norm"):
        series = [(rec.k, getattr(rec, metric)) for rec in trace.records]
        try:
            fits[metric] = fit_decay(series, NUMERICAL_FLOOR)
        except (InsufficientDataError, DomainError):
            pass
    _write(out_dir / "trace.csv", export_trace_csv(trace, manifest))
    _write(out_dir / "report.json", export_report_json(verdict, fits, manifest))
    return {
        "over_smoothing": verdict.over_smoothing,
        "over_shrinking": verdict.over_shrinking,
        "notes": verdict.notes,
    }


def cmd_simulate(args) -> int:
    g, features, dataset_id = resolve_graph(args.graph, _resolve_data_dir(args.data_dir))
    trace, manifest = _run_simulation(g, features, args, args.graph, dataset_id)
    summary = _simulation_outputs(trace, manifest, Path(args.out))
    print(
        f"over_smoothing={summary['over_smoothing']} "
        f"over_shrinking={summary['over_shrinking']}"
    )
    print(summary["notes"])
    print(f"wrote {args.out}/trace.csv and {args.out}/report.json")
    return 0


def cmd_axioms(args) -> int:
    g, _, dataset_id = resolve_graph(args.graph, _resolve_data_dir(args.data_dir))
    label = args.operator
    if label.startswith("conjugate:"):
        base = _operator_kind(label.split(":", 1)[1])
        desc = normalize_conjugation(descriptor_for(g, base, take_sqrt=True), g)
    else:
        desc = descriptor_for(g, _operator_kind(label), take_sqrt=True)
    a1 = axiom1_check(desc, g, trials=args.trials, tol=args.tol, seed=args.seed)
    a2 = axiom2_check(desc, trials=args.trials, seed=args.seed)
    manifest = _manifest(
        dataset_id, args.graph, {"operator": label, "trials": args.trials}, args.seed
    )
    report = export_axiom_report_json(
        label, a1, a2, args.seed,
        {"axiom1_tol": args.tol, "axiom2_tol": 1e-9},
        manifest,
    )
    if args.out:
        _write(Path(args.out), report)

    def verdict_str(v):
        return "N/A" if v is None else ("PASS" if v else "FAIL")

    print(f"axiom1: {verdict_str(a1.holds)}")
    if a1.holds is False:
        print(f"  witness: {a1.note}")
    print(f"axiom2: {verdict_str(a2)}")
    return 0


def cmd_ratio(args) -> int:
    g, features, dataset_id = resolve_graph(args.graph, _resolve_data_dir(args.data_dir))
    x0 = _initial_signal(g, features, args.seed, args.features)
    cfg = PropagationConfig(
        layers=args.layers,
        operator_kind=OperatorKind.NORMALIZED_ADJACENCY,
        weight_mode=PerLayerWeights(dims=(x0.shape[1],) * args.layers, seed=args.seed),
    )
    _, trace = propagate(g, x0, cfg)
    ratio = energy_ratio_trace(trace)
    manifest = _manifest(
        dataset_id, args.graph,
        {"layers": args.layers, "weights": "per-layer", "features": x0.shape[1]},
        args.seed,
    )
    if args.out:
        _write(Path(args.out), export_ratio_csv(ratio, manifest))
    if not ratio.points:
        print("no well-conditioned ratio layers")
        return 0
    values = [r for _, r in ratio.points]
    st = stats(g)
    if st.regular:
        d = g.degrees[0]
        dev = max(abs(v - d) for v in values)
        print(f"regular graph, degree {d}: max |ratio - {d}| = {dev:.3e} "
              f"over {len(values)} pre-floor layers")
    else:
        print(f"non-regular graph: ratio in [{min(values):.6g}, {max(values):.6g}] "
              f"over {len(values)} pre-floor layers")
    if ratio.cut_layer is not None:
        print(f"ratio ill-conditioned from layer {ratio.cut_layer}")
    return 0


def cmd_spectra(args) -> int:
    g, _, dataset_id = resolve_graph(args.graph, _resolve_data_dir(args.data_dir))
    kind = _operator_kind(args.operator)
    dec = eigendecompose(build(g, kind))
    manifest = _manifest(dataset_id, args.graph, {"operator": args.operator}, args.seed)
    text = export_spectra_csv(dec, manifest)
    if args.out:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    if args.superpose:
        other = eigendecompose(build(g, _operator_kind(args.superpose)))
        sup = superposition(dec, other)
        sup_text = export_superposition_csv(sup, manifest)
        if args.superpose_out:
            _write(Path(args.superpose_out), sup_text)
        else:
            sys.stdout.write(sup_text)
    return 0


def cmd_export_operator(args) -> int:
    g, _, dataset_id = resolve_graph(args.graph, _resolve_data_dir(args.data_dir))
    op = build(g, _operator_kind(args.operator))
    manifest = _manifest(dataset_id, args.graph, {"operator": args.operator}, args.seed)
    text = export_matrix_csv(op.matrix, manifest)
    if args.out:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_repro(args) -> int:
    data_dir = _resolve_data_dir(args.data_dir)
    if data_dir is None:
        raise FileNotFoundError(f"repro needs --data-dir or ${DATA_DIR_ENV}")
    out_dir = Path(args.out) / args.experiment
    recipes = {
        "fig1": ("enzymes:0", "simulate", "none"),
        "fig2": ("enzymes:10", "simulate", "none"),
        "fig3": ("cora-lcc", "simulate", "first:16"),
        "fig4a": ("enzymes:0", "ratio", "per-layer"),
        "fig4b": ("enzymes:10", "ratio", "per-layer"),
        "fig4c": ("enzymes:18", "ratio", "per-layer"),
    }
    selector, mode, weights = recipes[args.experiment]
    g, features, dataset_id = resolve_graph(selector, data_dir)

    sim_args = argparse.Namespace(
        layers=50, operator="anorm", weights=weights, seed=args.seed,
        features=args.features, volume_constant=True,
    )
    if mode == "simulate":
        trace, manifest = _run_simulation(g, features, sim_args, selector, dataset_id)
        summary = _simulation_outputs(trace, manifest, out_dir)
        print(f"{args.experiment}: over_smoothing={summary['over_smoothing']} "
              f"over_shrinking={summary['over_shrinking']}")
    else:
        x0 = _initial_signal(g, features, args.seed, args.features)
        cfg = PropagationConfig(
            layers=50,
            operator_kind=OperatorKind.NORMALIZED_ADJACENCY,
            weight_mode=PerLayerWeights(dims=(x0.shape[1],) * 50, seed=args.seed),
            track_volume_constant=True,
        )
        _, trace = propagate(g, x0, cfg)
        ratio = energy_ratio_trace(trace)
        manifest = _manifest(
            dataset_id, selector, {"layers": 50, "weights": "per-layer"}, args.seed
        )
        _write(out_dir / "trace.csv", export_trace_csv(trace, manifest))
        _write(out_dir / "ratio.csv", export_ratio_csv(ratio, manifest))
        print(f"{args.experiment}: {len(ratio.points)} well-conditioned ratio layers")
    print(f"wrote outputs under {out_dir}")
    return 0


# ---------------------------------------------------------------- parser


def _add_common(p: argparse.ArgumentParser, graph: bool = True):
    if graph:
        p.add_argument("--graph", required=True,
                       help="edge-list path, 'enzymes:<idx>', or 'cora-lcc'")
    p.add_argument("--data-dir", default=None,
                   help=f"dataset directory (default ${DATA_DIR_ENV})")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--features", type=int, default=8,
                   help="random-input width when the graph carries no attributes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oversmooth",
        description="Spectral diagnostics for over-smoothing in linear GCN dynamics",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="structural stats and commutation check")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="deep linear propagation with metric trace")
    _add_common(p)
    p.add_argument("--layers", type=int, default=50)
    p.add_argument("--operator", choices=["anorm", "anorm-tilde"], default="anorm")
    p.add_argument("--weights", default="none",
                   help="none | first:<width> | per-layer[:<width>]")
    p.add_argument("--volume-constant", action="store_true",
                   help="track energies with the 1/|V| constant")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("axioms", help="node-similarity axiom checks for an operator")
    _add_common(p)
    p.add_argument("--operator", default="delta-norm",
                   help="delta | delta-norm | delta-tilde-norm | conjugate:<base>")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--tol", type=float, default=DEFAULT_AXIOM_TOL)
    p.add_argument("--out", default=None, help="axiom report JSON path")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("ratio", help="per-layer energy-ratio trace (per-layer weights)")
    _add_common(p)
    p.add_argument("--layers", type=int, default=50)
    p.add_argument("--out", default=None, help="ratio CSV path")
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("spectra", help="export eigenvalues (and optional superposition)")
    _add_common(p)
    p.add_argument("--operator", default="delta-norm",
                   choices=sorted(OPERATOR_ALIASES))
    p.add_argument("--superpose", default=None, choices=sorted(OPERATOR_ALIASES),
                   help="also export the superposition with this operator's basis")
    p.add_argument("--out", default=None)
    p.add_argument("--superpose-out", default=None)
    p.set_defaults(func=cmd_spectra)

    p = sub.add_parser("export-operator", help="dump an operator matrix as CSV")
    _add_common(p)
    p.add_argument("--operator", default="delta", choices=sorted(OPERATOR_ALIASES))
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_export_operator)

    p = sub.add_parser("repro", help="run a named experiment recipe")
    _add_common(p, graph=False)
    p.add_argument("--experiment", required=True,
                   choices=["fig1", "fig2", "fig3", "fig4a", "fig4b", "fig4c"])
    p.add_argument("--out", default="repro-out", help="output root directory")
    p.set_defaults(func=cmd_repro)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

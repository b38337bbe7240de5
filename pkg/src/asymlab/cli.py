"""Command-line entry point: `asymlab run/verify/dicke/kink/product/su2/clustering`.

Every experiment writes three artifacts into the output directory:
results.csv (17-significant-digit values, one config-hash column for
provenance, byte-identical across reruns of the same config), report.json
(machine-readable summary including pass/fail of every inequality), and
plot.gp (a gnuplot script rendering the linearized asymmetry).

Exit codes: 0 success, 2 configuration error, 3 resource limit, 4 failed
invariant or bound.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import closedforms, clustering, lattice, su2, suite, u1
from .config import (
    ExperimentConfig,
    build_state,
    circuit_depth_range,
    load_config,
    validate_config,
)
from .errors import (
    AsymlabError,
    ConfigError,
    PreconditionError,
    ResourceError,
    ValidationError,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RESOURCE = 3
EXIT_INVARIANT = 4

LN2 = math.log(2.0)


# ---------------- value formatting and artifact writers ----------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def _scale(value, log_base: str):
    """Convert an entropic quantity from nats to the requested output base."""
    if value is None:
        return None
    return value / LN2 if log_base == "2" else value


def _write_csv(path: Path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(row.get(col)) for col in header))
    path.write_text("\n".join(lines) + "\n")


def _write_report(path: Path, payload: dict):
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_plot(path: Path, cfg_hash: str, title: str, xlabel: str, ylabel: str,
                xcol: int, ycol: int, logx: bool):
    lines = [
        f"# gnuplot script (config {cfg_hash})",
        'set datafile separator ","',
        f'set title "{title}"',
        f'set xlabel "{xlabel}"',
        f'set ylabel "{ylabel}"',
        "set key left top",
    ]
    if logx:
        lines.append("set logscale xy")
    lines.append(
        f'plot "results.csv" every ::1 using {xcol}:{ycol} '
        f'with linespoints pointtype 7 title "{ylabel}"'
    )
    path.write_text("\n".join(lines) + "\n")


def _outdir(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------- sweep experiments ----------------


def _sweep_distribution(cfg: ExperimentConfig, n: int) -> u1.ChargeDistribution:
    spec = cfg.state_spec
    if cfg.experiment == "kink-sweep":
        return closedforms.kink_distribution(n)
    if cfg.experiment == "product-sweep":
        x = spec.get("x", 0.5)
        vec = np.full(n, float(x)) if isinstance(x, (int, float)) else np.asarray(x)
        if vec.size != n:
            vec = np.full(n, float(np.asarray(x).ravel()[0]))
        return closedforms.poisson_binomial(vec)
    if "k" in spec:
        return closedforms.dicke_x_distribution(n, int(spec["k"]))
    ratio = float(spec.get("ratio", 0.5))
    if ratio == 0.5:
        return closedforms.dicke_half_distribution(n // 2)
    return closedforms.dicke_x_distribution(n, int(round(ratio * n)))


def _run_sweep(cfg: ExperimentConfig) -> int:
    out = _outdir(cfg)
    ns = sorted(set(cfg.sweep))

    def compute(n: int) -> dict:
        rep = u1.report_from_distribution(_sweep_distribution(cfg, n), n)
        margins = rep.margins()
        return {
            "n": n,
            "delta_s_nats": rep.delta_s,
            "variance": rep.variance,
            "bound_log_n_plus_1": rep.bound_log_n_plus_1,
            "bound_massey": rep.bound_massey,
            "margin_log_n_plus_1": margins["log_n_plus_1"],
            "margin_massey": margins["massey"],
            "linearized": math.exp(rep.delta_s),
        }

    with ThreadPoolExecutor(max_workers=min(8, len(ns))) as pool:
        rows = list(pool.map(compute, ns))

    points = [(row["n"], row["delta_s_nats"]) for row in rows]
    fit = closedforms.asymptotic_fit(points) if len(points) >= 3 else None
    corrected = None
    if cfg.experiment == "dicke-sweep" and len(points) >= 4:
        corrected = closedforms.asymptotic_fit(points, correction_power=0.5)

    for row in rows:
        row["delta_s"] = _scale(row.pop("delta_s_nats"), cfg.log_base)
        for key in ("bound_log_n_plus_1", "bound_massey",
                    "margin_log_n_plus_1", "margin_massey"):
            row[key] = _scale(row[key], cfg.log_base)
        row["fit_slope"] = fit.slope if fit else None
        row["fit_intercept"] = fit.intercept if fit else None
        row["fit_max_residual"] = fit.max_residual if fit else None
        row["config_hash"] = cfg.hash

    header = [
        "n", "delta_s", "variance", "bound_log_n_plus_1", "bound_massey",
        "margin_log_n_plus_1", "margin_massey", "linearized",
        "fit_slope", "fit_intercept", "fit_max_residual", "config_hash",
    ]
    _write_csv(out / "results.csv", header, rows)

    def fit_block(f):
        if f is None:
            return None
        block = {
            "slope": f.slope,
            "intercept": f.intercept,
            "max_residual": f.max_residual,
            "n_points": f.n_points,
            "units": "nats",
        }
        if f.correction is not None:
            block["correction_coefficient"] = f.correction
        return block

    bounds_ok = all(
        row["margin_log_n_plus_1"] >= -1e-9
        and (row["margin_massey"] is None or row["margin_massey"] > 0.0)
        for row in rows
    )
    payload = {
        "experiment": cfg.experiment,
        "config_hash": cfg.hash,
        "log_base": cfg.log_base,
        "fit": fit_block(fit),
        "all_bounds_hold": bounds_ok,
        "rows": [{k: row[k] for k in header if k != "config_hash"} for row in rows],
    }
    if cfg.experiment == "dicke-sweep":
        payload["fit_sqrt_corrected"] = fit_block(corrected)
        reference = corrected if corrected is not None else fit
        payload["intercept_reference"] = {
            "fitted_intercept_nats": reference.intercept if reference else None,
            "quarter_pi": math.pi / 4.0,
            "log_quarter_pi": math.log(math.pi / 4.0),
            "note": (
                "reported for comparison only; no reference value is asserted"
            ),
        }
    _write_report(out / "report.json", payload)
    _write_plot(
        out / "plot.gp", cfg.hash, f"{cfg.experiment}: linearized asymmetry",
        "N", "exp(delta S)", 1, 8, logx=True,
    )
    return EXIT_OK if bounds_ok else EXIT_INVARIANT


# ---------------- single-state experiments ----------------


def _run_u1(cfg: ExperimentConfig) -> int:
    out = _outdir(cfg)
    n = cfg.geometry.n_sites
    state, circuit = build_state(cfg.state_spec, n, cfg.seed, cfg.geometry)
    crange = cfg.clustering_range
    if crange is None and circuit is not None:
        crange = circuit_depth_range(circuit)
    rep = u1.u1_asymmetry(state, cfg.geometry, clustering_range=crange)
    margins = rep.margins()
    row = {
        "n": n,
        "delta_s": _scale(rep.delta_s, cfg.log_base),
        "shannon": _scale(rep.shannon, cfg.log_base),
        "variance": rep.variance,
        "bound_log_n_plus_1": _scale(rep.bound_log_n_plus_1, cfg.log_base),
        "bound_massey": _scale(rep.bound_massey, cfg.log_base),
        "bound_clustering": _scale(rep.bound_clustering, cfg.log_base),
        "margin_log_n_plus_1": _scale(margins["log_n_plus_1"], cfg.log_base),
        "margin_massey": _scale(margins["massey"], cfg.log_base),
        "margin_clustering": _scale(margins["clustering"], cfg.log_base),
        "linearized": math.exp(rep.delta_s),
        "config_hash": cfg.hash,
    }
    header = list(row.keys())
    _write_csv(out / "results.csv", header, [row])

    ok = all(v is None or v >= -1e-9 for v in margins.values())
    payload = {
        "experiment": cfg.experiment,
        "config_hash": cfg.hash,
        "log_base": cfg.log_base,
        "clustering_range": crange,
        "report": _scale_report_dict(rep.to_dict(), cfg.log_base),
        "all_bounds_hold": ok,
    }
    _write_report(out / "report.json", payload)
    _write_plot(out / "plot.gp", cfg.hash, "charge asymmetry", "N",
                "exp(delta S)", 1, 11, logx=False)
    return EXIT_OK if ok else EXIT_INVARIANT


def _scale_report_dict(data: dict, log_base: str) -> dict:
    if log_base != "2":
        return data
    out = json.loads(json.dumps(data))
    for key in ("delta_s", "shannon", "bound_sector_entropy", "bound_support_dim"):
        if out.get(key) is not None:
            out[key] = out[key] / LN2
    for section in ("bounds", "margins"):
        if isinstance(out.get(section), dict):
            out[section] = {
                k: (None if v is None else v / LN2) for k, v in out[section].items()
            }
    return out


def _run_su2(cfg: ExperimentConfig) -> int:
    out = _outdir(cfg)
    n = cfg.geometry.n_sites
    state, circuit = build_state(cfg.state_spec, n, cfg.seed, cfg.geometry)
    basis = su2.build_schur_basis(n)
    rep = su2.su2_asymmetry(state, basis)
    margins = rep.margins()

    crange = cfg.clustering_range
    if crange is None and circuit is not None:
        crange = circuit_depth_range(circuit)
    casimir = None
    if crange is not None:
        gauged, _ = su2.zero_transverse_rotation(state)
        casimir = su2.casimir_constraint_check(gauged, cfg.geometry, crange)

    row = {
        "n": n,
        "delta_s": _scale(rep.delta_s, cfg.log_base),
        "bound_sector_entropy": _scale(rep.bound_sector_entropy, cfg.log_base),
        "bound_support_dim": _scale(rep.bound_support_dim, cfg.log_base),
        "margin_sector_entropy": _scale(margins["sector_entropy"], cfg.log_base),
        "margin_support_dim": _scale(margins["support_dim"], cfg.log_base),
        "casimir_bound": casimir.bound if casimir else None,
        "casimir_lhs": casimir.lhs if casimir else None,
        "casimir_precursor_lhs": casimir.precursor_lhs if casimir else None,
        "linearized": math.exp(rep.delta_s),
        "config_hash": cfg.hash,
    }
    header = list(row.keys())
    _write_csv(out / "results.csv", header, [row])

    ok = all(v >= -1e-9 for v in margins.values())
    if casimir is not None:
        ok = ok and casimir.passed
    payload = {
        "experiment": cfg.experiment,
        "config_hash": cfg.hash,
        "log_base": cfg.log_base,
        "report": _scale_report_dict(rep.to_dict(), cfg.log_base),
        "casimir": casimir.to_dict() if casimir else None,
        "all_bounds_hold": ok,
    }
    _write_report(out / "report.json", payload)
    _write_plot(out / "plot.gp", cfg.hash, "rotation asymmetry", "N",
                "exp(delta S)", 1, 10, logx=False)
    return EXIT_OK if ok else EXIT_INVARIANT


def _run_clustering(cfg: ExperimentConfig) -> int:
    out = _outdir(cfg)
    n = cfg.geometry.n_sites
    state, circuit = build_state(cfg.state_spec, n, cfg.seed, cfg.geometry)
    circuit.assert_nearest_neighbor(cfg.geometry)
    claimed = cfg.clustering_range
    if claimed is None:
        claimed = circuit_depth_range(circuit)
    report = clustering.verify_cluster_property(
        state, cfg.geometry, claimed, tol=cfg.tolerance
    )
    spread = None
    spread_note = None
    try:
        spread = clustering.operator_spreading_range(circuit, cfg.geometry)
    except ResourceError as exc:
        spread_note = str(exc)
    var = clustering.variance_bound_check(state, cfg.geometry, claimed)

    rows = [
        {"distance": d, "max_abs_correlator": v, "config_hash": cfg.hash}
        for d, v in report.distance_profile
    ]
    _write_csv(out / "results.csv",
               ["distance", "max_abs_correlator", "config_hash"], rows)

    lightcone_ok = (
        spread is None or spread <= lattice.lightcone_range(circuit.depth)
    )
    ok = report.passed and var.passed and lightcone_ok
    payload = {
        "experiment": cfg.experiment,
        "config_hash": cfg.hash,
        "claimed_range": claimed,
        "cluster_report": report.to_dict(),
        "operator_spread": spread,
        "operator_spread_note": spread_note,
        "lightcone_range": lattice.lightcone_range(circuit.depth),
        "variance_check": var.to_dict(),
        "all_checks_hold": ok,
    }
    _write_report(out / "report.json", payload)
    _write_plot(out / "plot.gp", cfg.hash, "connected correlators by distance",
                "distance", "max |correlator|", 1, 2, logx=False)
    return EXIT_OK if ok else EXIT_INVARIANT


# ---------------- verification suites ----------------


def _run_suite(cfg: ExperimentConfig, which: str = "bound-suite",
               quiet: bool = False, write: bool = True) -> int:
    results = (
        suite.bound_suite(cfg.seed, cfg.samples)
        if which == "bound-suite"
        else suite.oracle_suite(cfg.seed)
    )
    if not quiet:
        for res in results:
            print(res.line())
    ok = suite.all_passed(results)
    if not quiet:
        print(f"{'all checks passed' if ok else 'FAILED checks present'} "
              f"({sum(r.passed for r in results)}/{len(results)})")
    if write:
        out = _outdir(cfg)
        rows = [
            {"check": r.name, "passed": r.passed, "margin": r.margin,
             "config_hash": cfg.hash}
            for r in results
        ]
        _write_csv(out / "results.csv",
                   ["check", "passed", "margin", "config_hash"], rows)
        payload = {
            "experiment": which,
            "config_hash": cfg.hash,
            "seed": cfg.seed,
            "samples": cfg.samples,
            "all_passed": ok,
            "checks": [
                {"name": r.name, "passed": r.passed, "margin": r.margin,
                 "detail": r.detail}
                for r in results
            ],
        }
        _write_report(out / "report.json", payload)
        _write_plot(out / "plot.gp", cfg.hash, "verification margins",
                    "check index", "margin", 0, 3, logx=False)
    return EXIT_OK if ok else EXIT_INVARIANT


# ---------------- dispatch ----------------


def run_experiment(cfg: ExperimentConfig) -> int:
    if cfg.experiment in ("dicke-sweep", "kink-sweep", "product-sweep"):
        return _run_sweep(cfg)
    if cfg.experiment == "u1-asymmetry":
        return _run_u1(cfg)
    if cfg.experiment == "su2-asymmetry":
        return _run_su2(cfg)
    if cfg.experiment == "circuit-clustering":
        return _run_clustering(cfg)
    if cfg.experiment == "bound-suite":
        return _run_suite(cfg, "bound-suite", quiet=True)
    raise ConfigError(f"unknown experiment {cfg.experiment!r}")


# ---------------- argument parsing ----------------


def _log_spaced(n_min: int, n_max: int, points: int, even: bool) -> list[int]:
    if n_min > n_max:
        raise ConfigError(f"--n-min {n_min} exceeds --n-max {n_max}")
    raw = np.unique(
        np.round(np.logspace(math.log10(n_min), math.log10(n_max), points))
    ).astype(int)
    if even:
        raw = np.unique(np.maximum(2, (raw // 2) * 2))
    return [int(v) for v in raw]


_NAMED_STATES = {
    "zero": {"kind": "bernoulli", "x": 1.0},
    "plus": {"kind": "bernoulli", "x": 0.5},
    "ghz": {"kind": "ghz"},
    "dicke": {"kind": "dicke", "ratio": 0.5},
    "kink": {"kind": "kink"},
    "random": {"kind": "random"},
}


def _state_spec_from_arg(arg: str) -> dict:
    if arg in _NAMED_STATES:
        return dict(_NAMED_STATES[arg])
    if arg.startswith("random:"):
        return {"kind": "random", "seed": int(arg.split(":", 1)[1])}
    return {"kind": "vector", "path": arg}


def _input_spec_from_arg(arg: str | None):
    if arg is None or arg == "zero":
        return None
    if arg == "plus":
        return {"kind": "bernoulli", "x": 0.5}
    if arg == "random":
        return {"kind": "random"}
    if arg.startswith("random:"):
        return {"kind": "random", "seed": int(arg.split(":", 1)[1])}
    try:
        with open(arg) as handle:
            return json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read input spec {arg}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"input spec {arg} is not valid JSON: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asymlab",
        description="exact workbench for symmetry asymmetry bounds on qubit lattices",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a JSON config")
    p_run.add_argument("config", help="path to the experiment config")

    p_verify = sub.add_parser("verify", help="run a verification battery")
    p_verify.add_argument("battery", choices=["bound-suite", "oracle-suite"])
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--samples", type=float, default=1.0,
                          help="scale factor on every random draw count")
    p_verify.add_argument("--output", default=None,
                          help="also write results.csv/report.json/plot.gp here")

    for name, even in (("dicke", True), ("kink", False), ("product", False)):
        p = sub.add_parser(name, help=f"{name} closed-form sweep")
        p.add_argument("--n-min", type=int, default=100)
        p.add_argument("--n-max", type=int, default=100000 if even else 10000)
        p.add_argument("--points", type=int, default=4)
        p.add_argument("--output", default=f"{name}-sweep-out")
        p.add_argument("--log-base", choices=["e", "2"], default="e")
        p.add_argument("--seed", type=int, default=0)
        if name == "dicke":
            p.add_argument("--ratio", type=float, default=0.5)
        if name == "product":
            p.add_argument("--x", type=float, default=0.5)

    p_su2 = sub.add_parser("su2", help="rotation-group asymmetry of one state")
    p_su2.add_argument("--state", required=True,
                       help="statevector file (.npy or .json) or a named state: "
                            + ", ".join(sorted(_NAMED_STATES)))
    p_su2.add_argument("--n", type=int, required=True, help="number of sites (even)")
    p_su2.add_argument("--dimension", type=int, default=1)
    p_su2.add_argument("--clustering-range", type=int, default=None)
    p_su2.add_argument("--output", default="su2-out")
    p_su2.add_argument("--log-base", choices=["e", "2"], default="e")
    p_su2.add_argument("--seed", type=int, default=0)

    p_cl = sub.add_parser("clustering", help="certify clustering of a circuit state")
    p_cl.add_argument("--circuit", required=True, help="circuit JSON file")
    p_cl.add_argument("--input", default="zero",
                      help="zero | plus | random[:seed] | state-spec JSON file")
    p_cl.add_argument("--dimension", type=int, default=1)
    p_cl.add_argument("--linear-size", type=int, required=True)
    p_cl.add_argument("--claimed-range", type=int, default=None,
                      help="override the default claim of twice the depth")
    p_cl.add_argument("--tolerance", type=float, default=1e-10)
    p_cl.add_argument("--output", default="clustering-out")
    p_cl.add_argument("--seed", type=int, default=0)
    return parser


def _config_from_args(args) -> ExperimentConfig:
    if args.command == "run":
        return load_config(args.config)
    if args.command == "verify":
        data = {"experiment": "bound-suite", "seed": args.seed,
                "samples": args.samples}
        if args.output:
            data["output"] = args.output
        return validate_config(data)
    if args.command in ("dicke", "kink", "product"):
        experiment = f"{args.command}-sweep"
        even = args.command == "dicke" and abs(args.ratio - 0.5) < 1e-12
        sweep = _log_spaced(args.n_min, args.n_max, args.points, even)
        data = {
            "experiment": experiment,
            "sweep": sweep,
            "output": args.output,
            "log_base": args.log_base,
            "seed": args.seed,
        }
        if args.command == "dicke":
            data["state_spec"] = {"kind": "dicke", "ratio": args.ratio}
        if args.command == "product":
            data["state_spec"] = {"kind": "bernoulli", "x": args.x}
        return validate_config(data)
    if args.command == "su2":
        linear = round(args.n ** (1.0 / args.dimension))
        if linear**args.dimension != args.n:
            raise ConfigError(
                f"--n {args.n} is not a {args.dimension}-dimensional torus size"
            )
        data = {
            "experiment": "su2-asymmetry",
            "geometry": {"dimension": args.dimension, "linear_size": linear},
            "state_spec": _state_spec_from_arg(args.state),
            "output": args.output,
            "log_base": args.log_base,
            "seed": args.seed,
        }
        if args.clustering_range is not None:
            data["clustering_range"] = args.clustering_range
        return validate_config(data)
    if args.command == "clustering":
        spec = {"kind": "circuit", "path": args.circuit}
        inner = _input_spec_from_arg(args.input)
        if inner is not None:
            spec["input"] = inner
        data = {
            "experiment": "circuit-clustering",
            "geometry": {"dimension": args.dimension,
                         "linear_size": args.linear_size},
            "state_spec": spec,
            "output": args.output,
            "tolerance": args.tolerance,
            "seed": args.seed,
        }
        if args.claimed_range is not None:
            data["clustering_range"] = args.claimed_range
        return validate_config(data)
    raise ConfigError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        if args.command == "verify":
            return _run_suite(cfg, args.battery, quiet=False,
                              write=args.output is not None)
        return run_experiment(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValidationError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AsymlabError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())

"""Experiment runner: JSON config in, CSV/JSON reports out.

Subcommands: envelope, oracle, compare, homotopy, cesaro, emit-plot.
Exit codes: 0 success, 1 tolerance failure, 2 validation error,
3 infeasible envelope.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
import time

import numpy as np

from . import config as cfgmod
from .cesaro_demo import cesaro_convergence
from .envelope import EnvelopeRequest, minimize_envelope
from .errors import ConfigurationError, DiscenvError
from .expressions import compile_expression
from .functionals import QuadratureGrid
from .hartogs import homotopy_trace, vertical_disc
from .oracles import GridConfig, grid_obstacle_solver, kiselman_psi


def _atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _point_label(point):
    return " ".join(repr(complex(c)) for c in point)


def _results_csv_text(rows):
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["point", "envelope", "oracle", "gap", "feasible",
                     "max_violation"])
    for row in rows:
        writer.writerow([
            row["point"],
            repr(row["envelope"]) if row["envelope"] is not None else "",
            repr(row["oracle"]) if row["oracle"] is not None else "",
            repr(row["gap"]) if row["gap"] is not None else "",
            int(row["feasible"]),
            repr(row["max_violation"]),
        ])
    return buf.getvalue()


def _write_outputs(outdir, cfg, rows, passed, extras=None):
    report = {
        "experiment": cfg["experiment"],
        "effective_config": cfg,
        "rows": rows,
        "metadata": {"seed": cfg["seed"], "quadrature_m": cfg["quadrature_m"],
                     "defaults_version": 1},
        "pass": bool(passed),
    }
    if extras:
        report.update(extras)
    _atomic_write(os.path.join(outdir, "report.json"),
                  json.dumps(report, indent=2, sort_keys=True) + "\n")
    _atomic_write(os.path.join(outdir, "results.csv"),
                  _results_csv_text(rows))


def _oracle_value(cfg, point, w, x_spec, phi, hartogs):
    oracle = cfg.get("oracle")
    if oracle is None:
        return None, None
    kind = oracle["kind"]
    if kind == "closed_form":
        fn = compile_expression(oracle["expr"], x_spec.n)
        return float(fn(point[None, :])[0]), None
    if kind == "kiselman":
        if hartogs is None:
            raise ConfigurationError(
                "config.oracle: kiselman oracle needs a hartogs pair")
        return float(kiselman_psi(hartogs, phi, point[:-1])), None
    # grid oracle: planar; solve once and interpolate (cached per run)
    return None, "grid"


def _grid_oracle(cfg, points, w, x_spec, phi):
    oracle = cfg["oracle"]
    bounds = tuple(oracle.get("bounds", (-2.0625, 2.0625, -2.0625, 2.0625)))
    spacing = float(oracle.get("spacing", 1.0 / 128))
    probes = [complex(p[0]) for p in points]
    gcfg = GridConfig(bounds=bounds, spacing=spacing, probes=tuple(probes))
    caps = oracle.get("caps")
    if caps is None:
        sample = phi(np.asarray(probes, dtype=complex)[:, None])
        m = float(np.max(sample)) + 1.0
        caps = [m + 1, m + 2, m + 4, m + 8]
    field = grid_obstacle_solver((w, x_spec), phi, caps, gcfg)
    return field


def run_envelope(cfg, outdir, compare=False, quiet=False):
    w, x_spec, builtin_phi, hartogs = cfgmod.build_pair(cfg)
    phi = builtin_phi if cfg.get("obstacle") is None and builtin_phi \
        else cfgmod.build_obstacle(cfg, x_spec.n)
    points = [cfgmod.parse_point(p, x_spec.n) for p in cfg["points"]]
    grid = QuadratureGrid(cfg["quadrature_m"])

    grid_field = None
    if compare and cfg.get("oracle", {}) and cfg["oracle"]["kind"] == "grid":
        grid_field = _grid_oracle(cfg, points, w, x_spec, phi)
        grid_field.to_csv(os.path.join(outdir, "grid_field.csv"))

    rows = []
    any_infeasible = False
    for point in points:
        fams = cfgmod.build_families(cfg, point, hartogs)
        req = EnvelopeRequest(pair=(w, x_spec), phi=phi, x=point,
                              families=fams,
                              penalty_weight=cfg["penalty_weight"],
                              starts=cfg["starts"], budget=cfg["budget"],
                              seed=cfg["seed"], grid=grid)
        t0 = time.perf_counter()
        res = minimize_envelope(req)
        runtime = time.perf_counter() - t0
        oracle_val = None
        if compare and cfg.get("oracle") is not None:
            if grid_field is not None:
                oracle_val = float(
                    grid_field.interpolate(np.asarray([complex(point[0])]))[0])
            else:
                oracle_val, _ = _oracle_value(cfg, point, w, x_spec, phi,
                                              hartogs)
        gap = None if oracle_val is None else res.value - oracle_val
        any_infeasible |= not res.feasible
        rows.append({
            "point": _point_label(point),
            "envelope": res.value,
            "oracle": oracle_val,
            "gap": gap,
            "feasible": bool(res.feasible),
            "max_violation": res.max_violation,
            "runtime_s": runtime,
            "family": res.family,
            "start_index": res.start_index,
            "trace": [float(v) for v in res.trace],
        })
        if not quiet:
            print(f"{_point_label(point)}: envelope={res.value:.6f} "
                  f"oracle={oracle_val} feasible={res.feasible}")

    gap_tol = cfg.get("tolerances", {}).get("gap")
    tol_fail = False
    if compare and gap_tol is not None:
        tol_fail = any(r["gap"] is not None and abs(r["gap"]) > gap_tol
                       for r in rows)
    passed = not tol_fail and not any_infeasible
    _write_outputs(outdir, cfg, rows, passed)
    if any_infeasible:
        return 3
    return 1 if tol_fail else 0


def run_oracle(cfg, outdir, quiet=False):
    w, x_spec, builtin_phi, hartogs = cfgmod.build_pair(cfg)
    phi = builtin_phi if cfg.get("obstacle") is None and builtin_phi \
        else cfgmod.build_obstacle(cfg, x_spec.n)
    points = [cfgmod.parse_point(p, x_spec.n) for p in cfg["points"]]
    oracle = cfg.get("oracle")
    if oracle is None:
        raise ConfigurationError("config.oracle: required for this command")
    rows = []
    if oracle["kind"] == "grid":
        field = _grid_oracle(cfg, points, w, x_spec, phi)
        field.to_csv(os.path.join(outdir, "grid_field.csv"))
        vals = field.interpolate(np.asarray([complex(p[0]) for p in points]))
        for point, v in zip(points, vals):
            rows.append(_oracle_row(point, float(v)))
    else:
        for point in points:
            v, _ = _oracle_value(cfg, point, w, x_spec, phi, hartogs)
            rows.append(_oracle_row(point, v))
            if not quiet:
                print(f"{_point_label(point)}: oracle={v}")
    _write_outputs(outdir, cfg, rows, True)
    return 0


def _oracle_row(point, value):
    return {"point": _point_label(point), "envelope": None, "oracle": value,
            "gap": None, "feasible": True, "max_violation": 0.0,
            "runtime_s": 0.0}


def run_homotopy(cfg, outdir, quiet=False):
    _, _, _, hartogs = cfgmod.build_pair(cfg)
    if hartogs is None:
        raise ConfigurationError("config.pair: homotopy needs a hartogs pair")
    spec = cfg.get("homotopy")
    if spec is None:
        raise ConfigurationError("config.homotopy: required for this command")
    zp = cfgmod.parse_point(spec["z_prime"], hartogs.n - 1,
                            "config.homotopy.z_prime")
    disc = vertical_disc(hartogs, zp, float(spec.get("s", 0.5)),
                         k=int(spec.get("winding", 1)),
                         m=cfg["quadrature_m"])
    trace = homotopy_trace(hartogs, disc, steps=int(spec.get("steps", 32)))
    _atomic_write(os.path.join(outdir, "homotopy_trace.json"),
                  trace.to_json() + "\n")
    rows = [{"point": _point_label(zp), "envelope": None, "oracle": None,
             "gap": None, "feasible": True,
             "max_violation": float(-np.min(trace.min_margins)
                                    if np.min(trace.min_margins) < 0 else 0.0),
             "runtime_s": 0.0}]
    _write_outputs(outdir, cfg, rows, True,
                   extras={"homotopy": trace.rows()})
    return 0


def run_cesaro(cfg, outdir, quiet=False):
    spec = cfg.get("cesaro") or {}
    result = cesaro_convergence(
        m=int(spec.get("m", 64)), m_w=int(spec.get("m_w", 2048)),
        j_values=spec.get("j_values", [8, 16, 32, 64, 128, 256]),
        seed=cfg["seed"], amplitude=float(spec.get("amplitude", 0.02)))
    buf = io.StringIO()
    buf.write("# columns: j, sup_error\n")
    writer = csv.writer(buf)
    for j, err in result:
        writer.writerow([j, repr(err)])
    _atomic_write(os.path.join(outdir, "cesaro.csv"), buf.getvalue())
    rows = [{"point": "", "envelope": None, "oracle": None, "gap": None,
             "feasible": True, "max_violation": 0.0, "runtime_s": 0.0}]
    _write_outputs(outdir, cfg, rows, True,
                   extras={"cesaro": [[int(j), float(e)] for j, e in result]})
    return 0


def emit_plot_data(report_path, kind, outdir):
    try:
        with open(report_path) as fh:
            report = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"{report_path}: {exc}") from exc
    buf = io.StringIO()
    writer = csv.writer(buf)
    if kind == "profile":
        buf.write("# columns: x, envelope, oracle, gap\n")
        for row in report.get("rows", []):
            x = row["point"].split(" ")[0] if row["point"] else ""
            writer.writerow([x, row.get("envelope"), row.get("oracle"),
                             row.get("gap")])
    elif kind == "convergence":
        buf.write("# columns: point_index, iteration, best_value\n")
        for i, row in enumerate(report.get("rows", [])):
            for it, v in enumerate(row.get("trace", [])):
                writer.writerow([i, it, repr(v)])
    elif kind == "homotopy":
        buf.write("# columns: t, min_margin, winding\n")
        for row in report.get("homotopy", []):
            writer.writerow([repr(row["t"]), repr(row["min_margin"]),
                             row["winding"]])
    else:
        raise ConfigurationError(f"emit-plot: unknown kind {kind!r}")
    _atomic_write(os.path.join(outdir, f"plot_{kind}.csv"), buf.getvalue())
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(prog="discenv")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("envelope", "oracle", "compare", "homotopy", "cesaro"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out", default=".")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--quiet", action="store_true")
    p = sub.add_parser("emit-plot")
    p.add_argument("--report", required=True)
    p.add_argument("--kind", required=True)
    p.add_argument("--out", default=".")
    p.add_argument("--quiet", action="store_true")
    args = parser.parse_args(argv)

    try:
        if args.command == "emit-plot":
            return emit_plot_data(args.report, args.kind, args.out)
        cfg = cfgmod.load_config(args.config)
        if args.seed is not None:
            cfg["seed"] = args.seed
        cfg["output"] = args.out
        if args.command == "envelope":
            return run_envelope(cfg, args.out, compare=False,
                                quiet=args.quiet)
        if args.command == "compare":
            return run_envelope(cfg, args.out, compare=True, quiet=args.quiet)
        if args.command == "oracle":
            return run_oracle(cfg, args.out, quiet=args.quiet)
        if args.command == "homotopy":
            return run_homotopy(cfg, args.out, quiet=args.quiet)
        if args.command == "cesaro":
            return run_cesaro(cfg, args.out, quiet=args.quiet)
        raise ConfigurationError(f"unknown command {args.command}")
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DiscenvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
